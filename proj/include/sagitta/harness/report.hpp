#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sagitta/harness/config.hpp"

namespace sagitta {

inline constexpr const char* kReportSchema = "report/1";
inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct Record {
  std::string name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::optional<double> estimate;
  std::optional<double> standard_error;
  std::optional<double> oracle;
  Verdict verdict = Verdict::Pass;
  std::string note;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct Report {
  ExperimentConfig config;
  std::vector<Record> records;
  std::optional<double> wall_time;

  Verdict overall() const;
  std::size_t count(Verdict v) const;
  /// 0 when every record passes or is inconclusive, 1 on any failure.
  int exit_code() const;
};

/// Doubles are finite JSON numbers; infinities become the strings "inf" and
/// "-inf", NaN becomes "nan".
nlohmann::ordered_json number(double v);

nlohmann::ordered_json to_json(const Report& report);
void write_json(std::ostream& out, const Report& report);
/// One row per record:
/// experiment,record,verdict,estimate,stderr,oracle,inputs,note
void write_csv(std::ostream& out, const Report& report);
void write_report(std::ostream& out, const Report& report);

}  // namespace sagitta
