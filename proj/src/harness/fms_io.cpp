#include "sagitta/harness/fms_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "sagitta/error.hpp"

namespace sagitta {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::Format, "line " + std::to_string(line) + ": not a number: '" + token + "'");
}

}  // namespace

void write_fms(std::ostream& out, const FiniteMetricSpace& x) {
  const std::size_t n = x.size();
  out << "FMS v1 " << n << '\n';
  if (x.claimed_curvature) out << "curvature " << format_double(*x.claimed_curvature) << '\n';
  if (x.claimed_radius) out << "radius " << format_double(*x.claimed_radius) << '\n';
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (j) out << ' ';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

void write_fms_file(const std::filesystem::path& path, const FiniteMetricSpace& x) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Format, "cannot open " + path.string() + " for writing");
  write_fms(out, x);
  if (!out) fail(ErrorKind::Format, "write to " + path.string() + " failed");
}

FiniteMetricSpace read_fms(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_line()) fail(ErrorKind::Format, "empty input");
  std::istringstream head(line);
  std::string magic, version;
  long long count = -1;
  head >> magic >> version >> count;
  if (magic != "FMS" || version != "v1" || count < 0) {
    fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": expected 'FMS v1 <N>'");
  }
  const auto n = static_cast<std::size_t>(count);

  std::optional<double> curvature, radius;
  std::vector<double> m(n * n, 0.0);
  std::size_t row = 1;
  std::vector<std::string> tokens;
  while (next_line()) {
    std::istringstream ls(line);
    tokens.clear();
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (row == 1 && (tokens[0] == "curvature" || tokens[0] == "radius")) {
      if (tokens.size() != 2) {
        fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": expected one value");
      }
      (tokens[0] == "curvature" ? curvature : radius) = parse_double(tokens[1], lineno);
      continue;
    }
    if (row >= n) fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": too many rows");
    if (tokens.size() != row) {
      fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": row " + std::to_string(row) +
                                  " needs " + std::to_string(row) + " entries, found " +
                                  std::to_string(tokens.size()));
    }
    for (std::size_t j = 0; j < row; ++j) {
      const double v = parse_double(tokens[j], lineno);
      m[row * n + j] = v;
      m[j * n + row] = v;
    }
    ++row;
  }
  if (n > 0 && row != n) {
    fail(ErrorKind::Format, "expected " + std::to_string(n - 1) + " rows, found " +
                                std::to_string(row - 1));
  }
  FiniteMetricSpace x(n, std::move(m));
  x.claimed_curvature = curvature;
  x.claimed_radius = radius;
  return x;
}

FiniteMetricSpace read_fms_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Format, "cannot open " + path.string());
  return read_fms(in);
}

}  // namespace sagitta
