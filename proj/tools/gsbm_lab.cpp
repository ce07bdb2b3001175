// gsbm_lab.cpp — command-line harness: single trials, parameter sweeps,
// threshold queries, and derived-parameter reports.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gsbm/experiment.hpp"
#include "gsbm/phase1.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/visibility.hpp"

namespace {

struct TrialArgs {
  double lambda = 2;
  double n = 10000;
  std::string a = "0.7";
  std::string b = "0.2";
  int d = 1;
  std::uint64_t seed = 1;
  double chi = -1;
  double delta = -1;
  std::string estimator = "two-phase";
  std::string dump_instance_path;
  std::string dump_phase1_path;
};

gsbm::TrialPoint make_point(const TrialArgs& t) {
  gsbm::TrialPoint point;
  point.params = gsbm::ModelParams{t.lambda, t.n, gsbm::EdgeProb::parse(t.a),
                                   gsbm::EdgeProb::parse(t.b), t.d};
  if (t.chi > 0) point.chi_override = t.chi;
  if (t.delta > 0) point.delta_override = t.delta;
  point.estimator = gsbm::parse_estimator(t.estimator);
  return point;
}

int run_trial_cmd(const TrialArgs& args) {
  gsbm::TrialPoint point = make_point(args);
  gsbm::TrialResult r = gsbm::run_trial(point, args.seed);

  if (!args.dump_instance_path.empty() || !args.dump_phase1_path.empty()) {
    gsbm::GeometricGraph g = gsbm::sample_instance(point.params, args.seed);
    if (!args.dump_instance_path.empty()) {
      std::ofstream os(args.dump_instance_path);
      if (!os) throw std::runtime_error("cannot write instance dump");
      gsbm::dump_instance(os, g, point.params, args.seed);
    }
    if (!args.dump_phase1_path.empty()) {
      auto grid = gsbm::BlockGrid::build(g.positions, point.params.n, r.chi);
      auto vg = gsbm::build_visibility_graph(grid, r.delta, point.params.n,
                                             point.params.d);
      if (gsbm::connected(vg)) gsbm::attach_bfs_order(vg);
      auto coarse = gsbm::run_phase1(g, grid, vg, point.params);
      std::ofstream os(args.dump_phase1_path);
      if (!os) throw std::runtime_error("cannot write phase-1 dump");
      gsbm::dump_phase1(os, grid, coarse);
    }
  }

  std::cout << "seed: " << r.seed << '\n'
            << "estimator: " << args.estimator << '\n'
            << "chi: " << r.chi << '\n'
            << "delta: " << r.delta << '\n'
            << "n_vertices: " << r.n_vertices << '\n'
            << "n_edges: " << r.n_edges << '\n'
            << "visibility_connected: " << r.visibility_connected << '\n'
            << "phase1_agreement: " << r.phase1_agreement << '\n'
            << "final_agreement: " << r.final_agreement << '\n'
            << "exact_success: " << r.exact_success << '\n'
            << "max_block_mistakes: " << r.max_block_mistakes << '\n'
            << "max_nbhd_mistakes: " << r.max_nbhd_mistakes << '\n'
            << "t_generate_ms: " << r.t_generate_ms << '\n'
            << "t_phase1_ms: " << r.t_phase1_ms << '\n'
            << "t_phase2_ms: " << r.t_phase2_ms << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric block-model community recovery lab"};
  app.require_subcommand(1);

  TrialArgs targs;
  auto* trial = app.add_subcommand("trial", "run one seeded trial");
  trial->add_option("--lambda", targs.lambda);
  trial->add_option("--n", targs.n);
  trial->add_option("--a", targs.a);
  trial->add_option("--b", targs.b);
  trial->add_option("--d", targs.d);
  trial->add_option("--seed", targs.seed);
  trial->add_option("--chi", targs.chi);
  trial->add_option("--delta", targs.delta);
  trial->add_option("--estimator", targs.estimator)
      ->check(CLI::IsMember({"two-phase", "genie", "phase1-only"}));
  trial->add_option("--dump-instance", targs.dump_instance_path);
  trial->add_option("--dump-phase1", targs.dump_phase1_path);

  std::vector<double> sw_lambda, sw_n;
  std::vector<std::string> sw_a, sw_b;
  std::vector<int> sw_d;
  int sw_trials = -1;
  std::uint64_t sw_seed = 0;
  bool sw_seed_set = false, sw_timings = false;
  double sw_chi = -1, sw_delta = -1;
  std::string sw_estimator, sw_out, sw_config;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep to CSV");
  sweep->add_option("--config", sw_config, "flat key = value file");
  sweep->add_option("--lambda", sw_lambda)->expected(-1);
  sweep->add_option("--n", sw_n)->expected(-1);
  sweep->add_option("--a", sw_a)->expected(-1);
  sweep->add_option("--b", sw_b)->expected(-1);
  sweep->add_option("--d", sw_d)->expected(-1);
  sweep->add_option("--trials", sw_trials);
  sweep->add_option("--seed", sw_seed)->each([&](const std::string&) {
    sw_seed_set = true;
  });
  sweep->add_option("--chi", sw_chi);
  sweep->add_option("--delta", sw_delta);
  sweep->add_option("--estimator", sw_estimator)
      ->check(CLI::IsMember({"two-phase", "genie", "phase1-only"}));
  sweep->add_option("--out", sw_out);
  sweep->add_flag("--timings", sw_timings,
                  "record wall-clock columns (breaks byte reproducibility)");

  double th_a = 0.7, th_b = 0.2;
  int th_d = 1;
  auto* threshold = app.add_subcommand("threshold",
                                       "critical intensity for (a, b, d)");
  threshold->add_option("--a", th_a);
  threshold->add_option("--b", th_b);
  threshold->add_option("--d", th_d);

  TrialArgs pargs;
  auto* params = app.add_subcommand("params", "derived parameters and regime");
  params->add_option("--lambda", pargs.lambda);
  params->add_option("--n", pargs.n);
  params->add_option("--a", pargs.a);
  params->add_option("--b", pargs.b);
  params->add_option("--d", pargs.d);
  params->add_option("--chi", pargs.chi);
  params->add_option("--delta", pargs.delta);

  try {
    app.parse(argc, argv);

    if (*trial) return run_trial_cmd(targs);

    if (*sweep) {
      gsbm::SweepConfig cfg;
      if (!sw_config.empty()) cfg = gsbm::parse_config_file(sw_config);
      if (!sw_lambda.empty()) cfg.lambda_values = sw_lambda;
      if (!sw_n.empty()) cfg.n_values = sw_n;
      if (!sw_a.empty()) {
        cfg.a_values.clear();
        for (const auto& s : sw_a)
          cfg.a_values.push_back(gsbm::EdgeProb::parse(s));
      }
      if (!sw_b.empty()) {
        cfg.b_values.clear();
        for (const auto& s : sw_b)
          cfg.b_values.push_back(gsbm::EdgeProb::parse(s));
      }
      if (!sw_d.empty()) cfg.d_values = sw_d;
      if (sw_trials > 0) cfg.trials = sw_trials;
      if (sw_seed_set) cfg.base_seed = sw_seed;
      if (sw_chi > 0) cfg.chi_override = sw_chi;
      if (sw_delta > 0) cfg.delta_override = sw_delta;
      if (!sw_estimator.empty())
        cfg.estimator = gsbm::parse_estimator(sw_estimator);
      if (!sw_out.empty()) cfg.out_path = sw_out;
      if (sw_timings) cfg.timings = true;
      if (cfg.out_path.empty())
        gsbm::run_sweep(cfg, std::cout);
      else
        gsbm::run_sweep_to_file(cfg);
      return 0;
    }

    if (*threshold) {
      auto curve = gsbm::threshold_curve(th_a, th_b, th_d);
      std::cout << "lambda_star: " << curve.lambda_star << '\n'
                << "lambda_star_effective: " << curve.lambda_star_effective
                << '\n';
      return 0;
    }

    if (*params) {
      gsbm::TrialPoint point = make_point(pargs);
      std::cout << "regime: "
                << gsbm::to_string(gsbm::classify_regime(point.params))
                << '\n';
      gsbm::DerivedParams dp = gsbm::solve_parameters(
          point.params, point.params.n, point.chi_override,
          point.delta_override);
      std::cout << "chi: " << dp.chi << '\n'
                << "chi_theoretical: " << dp.chi_theoretical << '\n'
                << "chi_practical: " << dp.chi_practical << '\n'
                << "delta: " << dp.delta << '\n'
                << "mistake_budget: " << dp.mistake_budget << '\n'
                << "error_budget: " << dp.error_budget << '\n'
                << "score_shift_rate: " << dp.score_shift_rate << '\n'
                << "neighborhood_block_bound: " << dp.neighborhood_block_bound
                << '\n'
                << "occupancy_root: " << dp.occupancy_root << '\n'
                << "core_radius_factor: " << dp.core_radius_factor << '\n'
                << "visible_blocks: " << dp.visible_blocks << '\n';
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
