#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sagitta {

enum class Experiment {
  Identities,
  Thales,
  RLambda,
  Eccentricity,
  Sagitta,
  LensVolume,
  NetInequality,
  VolumeBound,
  EqualityCase,
  CConstant,
};

const std::vector<Experiment>& all_experiments();
const char* to_string(Experiment e);
/// Throws Usage for unknown names.
Experiment parse_experiment(std::string_view name);

enum class OutputFormat { Json, Csv };
const char* to_string(OutputFormat f);
OutputFormat parse_format(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Identities;
  int n = 3;
  double k = 1.0;
  std::optional<double> h;
  std::optional<double> r;
  std::size_t points = 2000;   // N_points: sample size or points per case
  std::size_t mc = 1000000;    // N_mc: Monte Carlo samples per estimate
  std::size_t cases = 0;       // random cases; 0 picks the experiment default
  std::uint64_t seed = 1;
  std::optional<double> tau;   // absolute; default is twice the sample mesh
  std::string instance = "projective";  // volume-bound: sphere|projective|round_lens
  int m = 3;                   // quotient order, or the largest order scanned
  std::vector<int> weights;
  std::string output;          // empty means stdout
  OutputFormat format = OutputFormat::Json;
  bool timing = false;         // include wall time (makes reports run-dependent)
};

/// Throws InvalidArgument when fields are out of range.
void validate(const ExperimentConfig& c);

nlohmann::ordered_json to_json(const ExperimentConfig& c);

/// Overwrites the fields present in j. Unknown keys are a Usage error.
void apply_json(ExperimentConfig& c, const nlohmann::json& j);
void apply_json_file(ExperimentConfig& c, const std::filesystem::path& path);

}  // namespace sagitta
