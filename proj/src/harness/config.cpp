#include "sagitta/harness/config.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "sagitta/error.hpp"
#include "sagitta/modelspace.hpp"

namespace sagitta {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 10> kNames{{
    {Experiment::Identities, "identities"},
    {Experiment::Thales, "thales"},
    {Experiment::RLambda, "rlambda"},
    {Experiment::Eccentricity, "eccentricity"},
    {Experiment::Sagitta, "sagitta"},
    {Experiment::LensVolume, "lens-volume"},
    {Experiment::NetInequality, "net-inequality"},
    {Experiment::VolumeBound, "volume-bound"},
    {Experiment::EqualityCase, "equality-case"},
    {Experiment::CConstant, "c-constant"},
}};

}  // namespace

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> list = [] {
    std::vector<Experiment> v;
    for (const auto& [e, name] : kNames) v.push_back(e);
    return v;
  }();
  return list;
}

const char* to_string(Experiment e) {
  for (const auto& [x, name] : kNames)
    if (x == e) return name;
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kNames)
    if (name == n) return e;
  fail(ErrorKind::Usage, "unknown experiment '" + std::string(name) + "'");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  fail(ErrorKind::Usage, "unknown format '" + std::string(name) + "' (json or csv)");
}

void validate(const ExperimentConfig& c) {
  if (c.n < 2 || c.n > 15) fail(ErrorKind::InvalidArgument, "n must lie in [2, 15]");
  if (!std::isfinite(c.k)) fail(ErrorKind::InvalidArgument, "k must be finite");
  if (c.seed == 0) fail(ErrorKind::InvalidArgument, "seed must be positive");
  if (c.tau && !(*c.tau > 0.0)) fail(ErrorKind::InvalidArgument, "tau must be positive");
  if (c.m < 1) fail(ErrorKind::InvalidArgument, "m must be at least 1");
  if (c.points == 0 || c.mc == 0) fail(ErrorKind::InvalidArgument, "counts must be positive");
  if (c.h && c.r) {
    const double half = 0.5 * space_form_diameter(Curvature(c.k));
    if (!(*c.h > 0.0) || *c.h > *c.r || *c.r > half * (1.0 + 1e-12)) {
      fail(ErrorKind::InvalidArgument, "lens parameters need 0 < h <= r <= diam/2");
    }
  }
  if (c.r && !(*c.r > 0.0)) fail(ErrorKind::InvalidArgument, "r must be positive");
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.experiment);
  j["n"] = c.n;
  j["k"] = c.k;
  j["h"] = c.h ? nlohmann::ordered_json(*c.h) : nlohmann::ordered_json();
  j["r"] = c.r ? nlohmann::ordered_json(*c.r) : nlohmann::ordered_json();
  j["points"] = c.points;
  j["mc"] = c.mc;
  j["cases"] = c.cases;
  j["seed"] = c.seed;
  j["tau"] = c.tau ? nlohmann::ordered_json(*c.tau) : nlohmann::ordered_json();
  j["instance"] = c.instance;
  j["m"] = c.m;
  j["weights"] = c.weights;
  j["format"] = to_string(c.format);
  return j;
}

void apply_json(ExperimentConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::Usage, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "experiment") c.experiment = parse_experiment(v.get<std::string>());
      else if (key == "n") c.n = v.get<int>();
      else if (key == "k") c.k = v.get<double>();
      else if (key == "h") c.h = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "r") c.r = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "points") c.points = v.get<std::size_t>();
      else if (key == "mc") c.mc = v.get<std::size_t>();
      else if (key == "cases") c.cases = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "tau") c.tau = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "instance") c.instance = v.get<std::string>();
      else if (key == "m") c.m = v.get<int>();
      else if (key == "weights") c.weights = v.get<std::vector<int>>();
      else if (key == "out") c.output = v.get<std::string>();
      else if (key == "format") c.format = parse_format(v.get<std::string>());
      else if (key == "timing") c.timing = v.get<bool>();
      else fail(ErrorKind::Usage, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Usage, std::string("bad config value: ") + e.what());
  }
}

void apply_json_file(ExperimentConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Usage, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Usage, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  apply_json(c, j);
}

}  // namespace sagitta
