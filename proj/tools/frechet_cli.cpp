#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frechet/io.hpp"

namespace fs = std::filesystem;
using namespace frechet;

namespace {

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 1;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config, "JSON config path")->required();
  sub->add_option("--seed", o.seed, "root seed (unsigned 64-bit)");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

RunManifest start_manifest(const std::string& command, const CommonOpts& o,
                           const json& config) {
  RunManifest m;
  m.command = command;
  m.config_path = o.config;
  m.hash = config_hash(config);
  m.seed = o.seed;
  m.threads = o.threads;
  m.out_dir = o.out;
  m.started_at = timestamp_utc();
  return m;
}

void finish_manifest(RunManifest& m, const fs::path& out_dir) {
  m.finished_at = timestamp_utc();
  m.outputs.push_back("manifest.json");
  write_json_file(out_dir / "manifest.json", manifest_to_json(m));
}

int run_mean(const CommonOpts& o) {
  const json config = load_json_file(o.config);
  RunManifest manifest = start_manifest("mean", o, config);
  const MeanConfig mc = parse_mean_config(config, o.config);
  const Sample sample = read_points_file(mc.points_path, mc.manifold);

  SolverOptions opts;
  opts.max_iters = mc.solver.max_iters;
  opts.grad_tol = mc.solver.grad_tol;
  opts.step_shrink = mc.solver.step_shrink;
  opts.x0 = mc.x0;
  if (mc.solver.ball_radius > 0.0) {
    opts.ball_radius = mc.solver.ball_radius;
    opts.ball_center = mc.ball_center ? *mc.ball_center : sample.points.front();
  }
  const SolveReport rep = mc.solver.algorithm == "newton" ? frechet_mean_newton(sample, opts)
                                                          : frechet_mean_gd(sample, opts);

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  json out = solve_report_to_json(rep);
  out["points_file"] = mc.points_path;
  out["sample_size"] = static_cast<long>(sample.points.size());
  out["provenance"] = json{{"config_hash", manifest.hash}, {"seed", o.seed},
                           {"library_version", kVersion}};
  write_json_file(out_dir / "mean.json", out);
  manifest.outputs.push_back("mean.json");
  finish_manifest(manifest, out_dir);
  if (!rep.converged || rep.cut_locus_aborted) {
    std::cerr << "mean: solver did not converge: " << rep.message << "\n";
    return 1;
  }
  return 0;
}

int run_diagnose(const CommonOpts& o) {
  const json config = load_json_file(o.config);
  RunManifest manifest = start_manifest("diagnose", o, config);
  const DiagnoseConfig dc = parse_diagnose_config(config);
  FamilyMoments fm(dc.family, dc.backend, dc.mc_draws, splitmix_mix(o.seed ^ seeds::kMoments));

  json rows = json::array();
  std::ostringstream csv;
  csv << "n,eps,local_natural,local_natural_se,local_halved,local_halved_se,"
         "semi_global,semi_global_se\n";
  for (std::size_t idx = 0; idx < dc.n_list.size(); ++idx) {
    const long n = dc.n_list[idx];
    const CltConditionReport rep = clt_condition_report(
        fm, n, dc.rho_list, dc.epsilon_list, dc.thresholds, dc.condition_grid,
        dc.condition_draws,
        derive_stream(o.seed ^ seeds::kConditions, static_cast<std::uint64_t>(n), 0));
    json row = condition_report_to_json(rep);
    if (rep.phi > 0.0) {
      row["max_term_ratio"] = feller_max_term_ratio(fm, n);
      row["phi_se"] = fm.phi_se(n);
      try {
        const CltPrediction pred = predict_clt(fm, n);
        row["prediction"] = json{{"v", mat_to_json(pred.v)},
                                 {"h_tilde", mat_to_json(pred.h_tilde)},
                                 {"predicted_cov", mat_to_json(pred.predicted_cov)},
                                 {"h_cond", pred.h_cond}};
      } catch (const SingularCorrection& e) {
        row["prediction_error"] = e.what();
      }
      for (std::size_t k = 0; k < dc.epsilon_list.size(); ++k) {
        const double eps = dc.epsilon_list[k];
        const Estimate nat = local_lindeberg(fm, n, eps, /*halved=*/false);
        const Estimate hal = local_lindeberg(fm, n, eps, /*halved=*/true);
        csv << n << ',' << format_short(eps) << ',' << format_sig17(nat.value) << ','
            << format_sig17(nat.se) << ',' << format_sig17(hal.value) << ','
            << format_sig17(hal.se) << ',';
        if (dc.semi_global) {
          const Estimate sg = semi_global_lindeberg(
              fm, n, eps, dc.pair_draws,
              derive_stream(o.seed ^ seeds::kSemiGlobal, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(k)));
          csv << format_sig17(sg.value) << ',' << format_sig17(sg.se);
        } else {
          csv << ',';
        }
        csv << '\n';
      }
    }
    rows.push_back(std::move(row));
  }

  json out{{"rows", rows},
           {"provenance", json{{"config_hash", manifest.hash}, {"seed", o.seed},
                               {"library_version", kVersion}}}};
  if (dc.certificate.enabled) {
    const auto cert = strict_local_min_certificate(
        fm, dc.n_list, dc.certificate.rho0, dc.certificate.rho1, dc.certificate.grid,
        dc.certificate.draws, derive_stream(o.seed ^ seeds::kCertificate, 0, 0));
    json jc = json::array();
    for (const auto& c : cert)
      jc.push_back(json{{"n", c.n},
                        {"kappa_hat", c.kappa_hat},
                        {"se", c.se},
                        {"phi_center", c.phi_center},
                        {"grid", c.grid},
                        {"draws", c.draws}});
    out["certificate"] = jc;
  }

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  write_json_file(out_dir / "diagnostics.json", out);
  write_text_file(out_dir / "lindeberg.csv", csv.str());
  manifest.outputs.push_back("diagnostics.json");
  manifest.outputs.push_back("lindeberg.csv");
  finish_manifest(manifest, out_dir);
  return 0;
}

int run_experiment(const CommonOpts& o) {
  const json config = load_json_file(o.config);
  RunManifest manifest = start_manifest("experiment", o, config);
  const ExperimentConfig cfg = parse_experiment_config(config, o.seed, o.threads);
  const ExperimentResult result = run_experiment(cfg);

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  write_text_file(out_dir / "result.csv", experiment_csv(result));
  write_json_file(out_dir / "result.json", experiment_to_json(result, manifest.hash, o.seed));
  manifest.outputs.push_back("result.csv");
  manifest.outputs.push_back("result.json");
  finish_manifest(manifest, out_dir);
  if (result.any_aborted) {
    std::cerr << "experiment: at least one schedule row aborted (see result.csv)\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical Fréchet means, central-limit diagnostics, and Monte Carlo "
               "experiments on model manifolds"};
  app.require_subcommand(1);
  CommonOpts mean_opts, diag_opts, exp_opts;
  CLI::App* mean_cmd = app.add_subcommand("mean", "solve an empirical Fréchet mean");
  add_common(mean_cmd, mean_opts);
  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "central-limit condition report and Lindeberg curves");
  add_common(diag_cmd, diag_opts);
  CLI::App* exp_cmd = app.add_subcommand("experiment", "run a Monte Carlo experiment schedule");
  add_common(exp_cmd, exp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
  }

  try {
    if (mean_cmd->parsed()) return run_mean(mean_opts);
    if (diag_cmd->parsed()) return run_diagnose(diag_opts);
    if (exp_cmd->parsed()) return run_experiment(exp_opts);
    std::cerr << "no command given\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
