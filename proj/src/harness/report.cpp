#include "sagitta/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sagitta {

namespace {

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isnan(*v)) return "nan";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : nlohmann::ordered_json();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::size_t Report::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [v](const Record& r) { return r.verdict == v; }));
}

Verdict Report::overall() const {
  if (count(Verdict::Fail)) return Verdict::Fail;
  if (count(Verdict::Inconclusive)) return Verdict::Inconclusive;
  return Verdict::Pass;
}

int Report::exit_code() const { return overall() == Verdict::Fail ? 1 : 0; }

nlohmann::ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["library_version"] = kLibraryVersion;
  j["experiment"] = to_string(report.config.experiment);
  j["config"] = to_json(report.config);
  j["verdict"] = to_string(report.overall());
  j["summary"] = {{"pass", report.count(Verdict::Pass)},
                  {"fail", report.count(Verdict::Fail)},
                  {"inconclusive", report.count(Verdict::Inconclusive)}};
  if (report.wall_time) j["wall_time_seconds"] = *report.wall_time;
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["inputs"] = r.inputs;
    e["estimate"] = optional_number(r.estimate);
    e["stderr"] = optional_number(r.standard_error);
    e["oracle"] = optional_number(r.oracle);
    e["verdict"] = to_string(r.verdict);
    if (!r.note.empty()) e["note"] = r.note;
    if (!r.extra.empty()) e["extra"] = r.extra;
    records.push_back(std::move(e));
  }
  return j;
}

void write_json(std::ostream& out, const Report& report) {
  out << to_json(report).dump(2) << '\n';
}

void write_csv(std::ostream& out, const Report& report) {
  out << "experiment,record,verdict,estimate,stderr,oracle,inputs,note\n";
  const char* exp = to_string(report.config.experiment);
  for (const auto& r : report.records) {
    out << exp << ',' << csv_field(r.name) << ',' << to_string(r.verdict) << ','
        << csv_number(r.estimate) << ',' << csv_number(r.standard_error) << ','
        << csv_number(r.oracle) << ',' << csv_field(r.inputs.dump()) << ','
        << csv_field(r.note) << '\n';
  }
}

void write_report(std::ostream& out, const Report& report) {
  if (report.config.format == OutputFormat::Csv) {
    write_csv(out, report);
  } else {
    write_json(out, report);
  }
}

}  // namespace sagitta
