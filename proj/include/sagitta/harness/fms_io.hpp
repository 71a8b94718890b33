#pragma once

// FMS v1: a lossless text format for finite metric spaces.
//
//   FMS v1 <N>
//   curvature <k>        (optional)
//   radius <r>           (optional)
//   <row 1: d(1,0)>
//   <row 2: d(2,0) d(2,1)>
//   ...
//
// Rows hold the strict lower triangle, entries in %.17g. Lines starting with
// '#' are comments and may appear anywhere.

#include <filesystem>
#include <iosfwd>

#include "sagitta/metric_space.hpp"

namespace sagitta {

void write_fms(std::ostream& out, const FiniteMetricSpace& x);
void write_fms_file(const std::filesystem::path& path, const FiniteMetricSpace& x);

/// Throws Format on malformed input and InvalidArgument for a zero, negative or
/// non-finite off-diagonal entry. The triangle inequality is not checked here;
/// see check_metric_axioms.
FiniteMetricSpace read_fms(std::istream& in);
FiniteMetricSpace read_fms_file(const std::filesystem::path& path);

}  // namespace sagitta
