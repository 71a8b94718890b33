// Command-line driver: one subcommand per experiment, plus `sample` to write
// FMS v1 instances and `analyze` to run the invariants on an FMS file.
//
// Exit codes: 0 all pass, 1 any fail, 2 usage, 3 numerical-domain error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "sagitta/eccentricity.hpp"
#include "sagitta/error.hpp"
#include "sagitta/harness/experiments.hpp"
#include "sagitta/harness/fms_io.hpp"
#include "sagitta/spaces.hpp"

namespace {

using namespace sagitta;

struct Flags {
  std::string config;
  int n = 0;
  double k = 0, h = 0, r = 0, tau = 0;
  std::size_t points = 0, mc = 0, cases = 0;
  std::uint64_t seed = 0;
  std::string instance, out, format;
  int m = 0;
  std::vector<int> weights;
  bool timing = false;
};

struct Bound {
  std::map<std::string, CLI::Option*> opts;
  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

Bound add_experiment_flags(CLI::App* sub, Flags& f) {
  Bound b;
  b.opts["config"] = sub->add_option("--config", f.config, "JSON config; flags override it");
  b.opts["n"] = sub->add_option("--n", f.n, "dimension");
  b.opts["k"] = sub->add_option("--k", f.k, "curvature bound");
  b.opts["h"] = sub->add_option("--h", f.h, "lens parameter h");
  b.opts["r"] = sub->add_option("--r", f.r, "radius parameter r");
  b.opts["points"] = sub->add_option("--points", f.points, "sample size");
  b.opts["mc"] = sub->add_option("--mc", f.mc, "Monte Carlo samples per estimate");
  b.opts["cases"] = sub->add_option("--cases", f.cases, "number of random cases");
  b.opts["seed"] = sub->add_option("--seed", f.seed, "random seed (positive)");
  b.opts["tau"] = sub->add_option("--tau", f.tau, "criticality tolerance");
  b.opts["instance"] = sub->add_option("--instance", f.instance, "sphere|projective|round_lens");
  b.opts["m"] = sub->add_option("--m", f.m, "quotient order");
  b.opts["weights"] = sub->add_option("--weights", f.weights, "rotation weights");
  b.opts["out"] = sub->add_option("--out", f.out, "output path (default stdout)");
  b.opts["format"] = sub->add_option("--format", f.format, "json|csv");
  b.opts["timing"] = sub->add_flag("--timing", f.timing, "record wall time in the report");
  return b;
}

ExperimentConfig build_config(Experiment e, const Flags& f, const Bound& b) {
  ExperimentConfig c;
  c.experiment = e;
  if (b.given("config")) {
    apply_json_file(c, f.config);
    c.experiment = e;
  }
  if (b.given("n")) c.n = f.n;
  if (b.given("k")) c.k = f.k;
  if (b.given("h")) c.h = f.h;
  if (b.given("r")) c.r = f.r;
  if (b.given("points")) c.points = f.points;
  if (b.given("mc")) c.mc = f.mc;
  if (b.given("cases")) c.cases = f.cases;
  if (b.given("seed")) c.seed = f.seed;
  if (b.given("tau")) c.tau = f.tau;
  if (b.given("instance")) c.instance = f.instance;
  if (b.given("m")) c.m = f.m;
  if (b.given("weights")) c.weights = f.weights;
  if (b.given("out")) c.output = f.out;
  if (b.given("format")) c.format = parse_format(f.format);
  if (b.given("timing")) c.timing = f.timing;
  return c;
}

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::NumericalDomain ? 3 : 2;
}

int run_and_write(const ExperimentConfig& c) {
  const Report report = run_experiment(c);
  if (c.output.empty()) {
    write_report(std::cout, report);
  } else {
    std::ofstream out(c.output);
    if (!out) fail(ErrorKind::Usage, "cannot open " + c.output);
    write_report(out, report);
  }
  std::cerr << to_string(c.experiment) << ": " << report.count(Verdict::Pass) << " pass, "
            << report.count(Verdict::Fail) << " fail, " << report.count(Verdict::Inconclusive)
            << " inconclusive\n";
  return report.exit_code();
}

QuotientKind parse_kind(const std::string& s) {
  for (QuotientKind k : {QuotientKind::Sphere, QuotientKind::Projective, QuotientKind::RoundLens,
                         QuotientKind::GluedLens, QuotientKind::Purse}) {
    if (s == to_string(k)) return k;
  }
  fail(ErrorKind::Usage, "unknown space kind '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-point invariants, lens volumes and model quotients for spaces with "
               "curvature bounded below"};
  app.require_subcommand(1);
  // --h is the lens parameter, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");

  std::map<std::string, std::pair<Flags, Bound>> experiment_flags;
  std::vector<std::pair<CLI::App*, Experiment>> subs;
  for (Experiment e : all_experiments()) {
    auto* sub = app.add_subcommand(to_string(e), std::string("run the ") + to_string(e) +
                                                     " experiment");
    auto& slot = experiment_flags[to_string(e)];
    slot.second = add_experiment_flags(sub, slot.first);
    subs.emplace_back(sub, e);
  }

  // sample: write an instance as FMS v1.
  auto* sample = app.add_subcommand("sample", "generate a finite metric space (FMS v1)");
  std::string kind = "sphere", sample_out;
  int sn = 3, sm = 1;
  double sk = 1.0, sh = 0.0, sr = 0.0, connect = 0.0;
  std::size_t spoints = 500;
  std::uint64_t sseed = 1;
  std::vector<int> sweights;
  sample->add_option("--kind", kind, "sphere|projective|round_lens|glued_lens|purse");
  sample->add_option("--n", sn);
  sample->add_option("--k", sk);
  sample->add_option("--m", sm);
  sample->add_option("--weights", sweights);
  sample->add_option("--h", sh);
  sample->add_option("--r", sr);
  sample->add_option("--points", spoints);
  sample->add_option("--seed", sseed);
  sample->add_option("--connect", connect, "graph connect radius (glued kinds)");
  sample->add_option("--out", sample_out);

  // analyze: invariants of an FMS file.
  auto* analyze = app.add_subcommand("analyze", "sagittas and radius of an FMS v1 file");
  std::string in_path;
  double ak = 0.0, ar = 0.0, atau = 0.0;
  analyze->add_option("file", in_path)->required();
  auto* ak_opt = analyze->add_option("--k", ak, "curvature (default: the file's claim)");
  auto* ar_opt = analyze->add_option("--r", ar, "r (default: radius of the space)");
  auto* atau_opt = analyze->add_option("--tau", atau, "tolerance (default: 2 mesh)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [sub, e] : subs) {
      if (!sub->parsed()) continue;
      const auto& [flags, bound] = experiment_flags[to_string(e)];
      return run_and_write(build_config(e, flags, bound));
    }
    if (sample->parsed()) {
      QuotientSpec spec;
      spec.kind = parse_kind(kind);
      spec.n = sn;
      spec.k = Curvature(sk);
      spec.m = sm;
      spec.weights = sweights;
      spec.h = sh;
      spec.r = sr;
      FiniteMetricSpace x;
      switch (spec.kind) {
        case QuotientKind::Sphere: x = sample_sphere(sn, spec.k, spoints, sseed); break;
        case QuotientKind::Projective: x = sample_projective(sn, spec.k, spoints, sseed); break;
        case QuotientKind::RoundLens: x = sample_round_lens(spec, spoints, sseed); break;
        case QuotientKind::GluedLens:
        case QuotientKind::Purse:
          x = glued_quotient_metric(spec, spoints,
                                    connect > 0.0 ? connect : suggested_connect_radius(spec, spoints),
                                    sseed);
          break;
      }
      if (sample_out.empty()) {
        write_fms(std::cout, x);
      } else {
        write_fms_file(sample_out, x);
      }
      return 0;
    }
    if (analyze->parsed()) {
      const FiniteMetricSpace x = read_fms_file(in_path);
      if (!ak_opt->count() && !x.claimed_curvature) {
        fail(ErrorKind::Usage, "the file claims no curvature; pass --k");
      }
      const Curvature k(ak_opt->count() ? ak : *x.claimed_curvature);
      const double mesh = covering_radius_estimate(x);
      const double tau = atau_opt->count() ? atau : 2.0 * mesh;
      const double r = ar_opt->count() ? ar : x.radius();
      CriticalityAnalyzer analyzer(x, k, tau);
      const auto s = analyzer.sagitta(r);
      const auto ms = analyzer.modified_sagitta(r);
      nlohmann::ordered_json j;
      j["points"] = x.size();
      j["k"] = k.value();
      j["diameter"] = x.diameter();
      j["radius"] = x.radius();
      j["mesh"] = mesh;
      j["tau"] = tau;
      j["r"] = r;
      j["sagitta"] = number(s.value);
      j["modified_sagitta"] = number(ms.value);
      j["critical_pairs"] = analyzer.critical_pair_count();
      std::cout << j.dump(2) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
