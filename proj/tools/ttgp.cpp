#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ttgp/experiment.hpp"

namespace {

std::vector<ttgp::Index> parse_counts(const std::string& s) {
  std::vector<ttgp::Index> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad probe count: " + item);
    out.push_back(static_cast<ttgp::Index>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty probe count list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-train Gaussian-process hyperparameter experiments"};
  std::string kind, config_path, probes, gradient, policy;
  ttgp::ExperimentConfig cli;
  app.add_option("kind", kind, "trig | gp-sample | probe-study | taylor-check")->required();
  app.add_option("--config", config_path, "JSON config file; flags override it");
  auto* o_n = app.add_option("--n", cli.n, "training points per dimension");
  auto* o_probes = app.add_option("--probes", probes, "comma-separated probe counts");
  auto* o_kryl = app.add_option("--kryltol", cli.kryltol);
  auto* o_amen = app.add_option("--amentol", cli.amentol);
  auto* o_trunc = app.add_option("--trunctol", cli.trunctol);
  auto* o_sigma = app.add_option("--sigma", cli.sigma, "observation noise");
  auto* o_seed = app.add_option("--seed", cli.seed);
  auto* o_out = app.add_option("--out", cli.out, "output directory");
  auto* o_maxit = app.add_option("--max-iter", cli.max_iter, "LBFGS iteration cap");
  auto* o_ftime = app.add_option("--fit-time", cli.fit_time_s, "wall-clock seconds per LBFGS run");
  auto* o_kmaxit = app.add_option("--krylov-maxit", cli.krylov_maxit);
  auto* o_grad = app.add_option("--gradient", gradient, "block | projected");
  auto* o_policy = app.add_option("--policy", policy, "frozen | resample");
  auto* o_reps = app.add_option("--repetitions", cli.repetitions, "probe-study repetitions");
  auto* o_r = app.add_option("--rank", cli.R, "kernel rank R");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "do not print the report");
  CLI11_PARSE(app, argc, argv);

  try {
    ttgp::ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::runtime_error("cannot open config " + config_path);
      cfg = nlohmann::json::parse(f).get<ttgp::ExperimentConfig>();
    }
    cfg.kind = ttgp::parse_experiment_kind(kind);
    if (o_n->count()) cfg.n = cli.n;
    if (o_probes->count()) cfg.probe_counts = parse_counts(probes);
    if (o_kryl->count()) cfg.kryltol = cli.kryltol;
    if (o_amen->count()) cfg.amentol = cli.amentol;
    if (o_trunc->count()) cfg.trunctol = cli.trunctol;
    if (o_sigma->count()) cfg.sigma = cli.sigma;
    if (o_seed->count()) cfg.seed = cli.seed;
    if (o_out->count()) cfg.out = cli.out;
    if (o_maxit->count()) cfg.max_iter = cli.max_iter;
    if (o_ftime->count()) cfg.fit_time_s = cli.fit_time_s;
    if (o_kmaxit->count()) cfg.krylov_maxit = cli.krylov_maxit;
    if (o_reps->count()) cfg.repetitions = cli.repetitions;
    if (o_r->count()) cfg.R = cli.R;
    if (o_grad->count() || o_policy->count()) {
      nlohmann::json j = cfg;
      if (o_grad->count()) j["gradient"] = gradient;
      if (o_policy->count()) j["policy"] = policy;
      cfg = j.get<ttgp::ExperimentConfig>();
    }
    cfg.validate();

    const ttgp::ExperimentReport report = ttgp::run_experiment(cfg);
    if (!cfg.out.empty()) ttgp::write_report(report, cfg.out);
    if (!quiet) std::cout << nlohmann::json(report).dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ttgp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
