#pragma once

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/certify.hpp"
#include "frechet/experiments.hpp"
#include "frechet/version.hpp"

namespace frechet {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing. One JSON document per run; each command reads the sections
// it needs. All validation failures throw ConfigError naming the offending
// key (or file line for points files).
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace detail {

inline const json& require_key(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(where) + ": missing required key \"" + key + "\"");
  return j.at(key);
}

template <class T>
T as(const json& j, const char* key, const char* where) {
  try {
    return require_key(j, key, where).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + ": key \"" + key + "\" has the wrong type");
  }
}

template <class T>
T as_or(const json& j, const char* key, T fallback, const char* where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as<T>(j, key, where);
}

inline Vec as_vec(const json& j, const char* where) {
  if (!j.is_array()) throw ConfigError(std::string(where) + ": expected an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(where) + ": expected numbers");
    v[static_cast<long>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace detail

inline Manifold parse_manifold(const json& root) {
  const json& j = detail::require_key(root, "manifold", "config");
  const std::string family = detail::as<std::string>(j, "family", "manifold");
  const int dim = detail::as<int>(j, "dim", "manifold");
  if (family == "euclidean") return Manifold::euclidean(dim);
  if (family == "sphere")
    return Manifold::sphere(dim, detail::as_or<double>(j, "kappa", 1.0, "manifold"));
  if (family == "hyperbolic")
    return Manifold::hyperbolic(dim, detail::as_or<double>(j, "kappa", -1.0, "manifold"));
  if (family == "complex_projective") {
    if (dim % 2 != 0)
      throw ConfigError("manifold: complex projective dim must be even (real dimension 2n)");
    return Manifold::complex_projective(dim / 2,
                                        detail::as_or<double>(j, "kappa", 4.0, "manifold"));
  }
  throw ConfigError("manifold: unknown family \"" + family + "\"");
}

inline Vec default_center(const Manifold& m) {
  const int amb = ambient_size(m);
  Vec c = Vec::Zero(amb);
  switch (m.family) {
    case Family::Euclidean: break;
    case Family::Sphere: c[amb - 1] = 1.0; break;
    case Family::Hyperbolic: c[0] = 1.0 / std::sqrt(-m.kappa); break;
    case Family::ComplexProjective: c[0] = 1.0; break;
  }
  return c;
}

inline Vec parse_center(const json& root, const Manifold& m) {
  if (!root.contains("center")) return default_center(m);
  Vec c = detail::as_vec(root.at("center"), "center");
  if (c.size() != ambient_size(m))
    throw ConfigError("center: expected " + std::to_string(ambient_size(m)) +
                      " ambient coordinates");
  check_point(m, c);
  return c;
}

inline ScaleSchedule parse_scale(const json& j) {
  ScaleSchedule s;
  const std::string kind = detail::as_or<std::string>(j, "kind", "constant", "family.scale");
  std::vector<double> values;
  if (j.contains("values"))
    values = detail::as<std::vector<double>>(j, "values", "family.scale");
  else if (j.contains("value"))
    values = {detail::as<double>(j, "value", "family.scale")};
  if (kind == "constant") {
    s.kind = ScaleSchedule::Kind::Constant;
    if (values.size() != 1) throw ConfigError("family.scale: constant needs exactly one value");
  } else if (kind == "alternating") {
    s.kind = ScaleSchedule::Kind::Alternating;
    if (values.empty()) throw ConfigError("family.scale: alternating needs values");
  } else if (kind == "geometric") {
    s.kind = ScaleSchedule::Kind::Geometric;
    if (values.size() != 1) throw ConfigError("family.scale: geometric needs exactly one value");
    s.ratio = detail::as<double>(j, "ratio", "family.scale");
  } else {
    throw ConfigError("family.scale: unknown kind \"" + kind + "\"");
  }
  s.values = values;
  return s;
}

inline ShapeSchedule parse_shape(const json& j) {
  ShapeSchedule s;
  const std::string kind = detail::as_or<std::string>(j, "kind", "isotropic", "family.shape");
  if (kind == "isotropic") {
    s.kind = ShapeSchedule::Kind::Isotropic;
  } else if (kind == "fixed_axis") {
    s.kind = ShapeSchedule::Kind::FixedAxis;
    s.axis = detail::as_or<int>(j, "axis", 0, "family.shape");
  } else if (kind == "alternating_blocks") {
    s.kind = ShapeSchedule::Kind::AlternatingBlocks;
    s.block_base = detail::as_or<long>(j, "block_base", 4, "family.shape");
    s.axis_cycle = detail::as_or<int>(j, "axis_cycle", 2, "family.shape");
  } else {
    throw ConfigError("family.shape: unknown kind \"" + kind + "\"");
  }
  return s;
}

inline DistributionFamily parse_family(const json& root, const Manifold& m, const Vec& center) {
  const json& j = detail::require_key(root, "family", "config");
  const std::string law_name = detail::as<std::string>(j, "law", "family");
  TangentLaw law;
  if (law_name == "truncated_gaussian")
    law = TangentLaw::TruncatedGaussian;
  else if (law_name == "uniform_ball")
    law = TangentLaw::UniformBall;
  else if (law_name == "two_point")
    law = TangentLaw::TwoPoint;
  else
    throw ConfigError("family: unknown law \"" + law_name + "\"");
  const double r_max = detail::as<double>(j, "r_max", "family");
  const bool symmetrize = detail::as_or<bool>(j, "symmetrize", false, "family");
  const ScaleSchedule scale =
      j.contains("scale") ? parse_scale(j.at("scale")) : ScaleSchedule{};
  const ShapeSchedule shape =
      j.contains("shape") ? parse_shape(j.at("shape")) : ShapeSchedule{};
  return make_family(m, center, law, scale, shape, r_max, symmetrize);
}

inline SolverSettings parse_solver(const json& root) {
  SolverSettings s;
  if (!root.contains("solver")) return s;
  const json& j = root.at("solver");
  s.algorithm = detail::as_or<std::string>(j, "algorithm", s.algorithm, "solver");
  if (s.algorithm != "gd" && s.algorithm != "newton")
    throw ConfigError("solver: unknown algorithm \"" + s.algorithm + "\"");
  s.max_iters = detail::as_or<int>(j, "max_iters", s.max_iters, "solver");
  s.grad_tol = detail::as_or<double>(j, "grad_tol", s.grad_tol, "solver");
  s.step_shrink = detail::as_or<double>(j, "step_shrink", s.step_shrink, "solver");
  s.ball_radius = detail::as_or<double>(j, "ball_radius", s.ball_radius, "solver");
  return s;
}

inline FamilyMoments::Backend parse_backend(const json& j, const char* where) {
  const std::string b = detail::as_or<std::string>(j, "backend", "closed_form", where);
  if (b == "closed_form") return FamilyMoments::Backend::ClosedForm;
  if (b == "monte_carlo") return FamilyMoments::Backend::MonteCarlo;
  throw ConfigError(std::string(where) + ": unknown backend \"" + b + "\"");
}

inline ExperimentConfig parse_experiment_config(const json& root, std::uint64_t seed,
                                                int threads) {
  ExperimentConfig cfg;
  const Manifold m = parse_manifold(root);
  const Vec center = parse_center(root, m);
  cfg.family = parse_family(root, m, center);
  const json& j = detail::require_key(root, "experiment", "config");
  const std::string kind = detail::as<std::string>(j, "kind", "experiment");
  if (kind == "wlln")
    cfg.kind = ExperimentKind::Wlln;
  else if (kind == "euclidean_approx")
    cfg.kind = ExperimentKind::EuclideanApprox;
  else if (kind == "manifold_clt")
    cfg.kind = ExperimentKind::ManifoldClt;
  else
    throw ConfigError("experiment: unknown kind \"" + kind + "\"");
  cfg.n_schedule = detail::as_or<std::vector<long>>(j, "n_schedule", cfg.n_schedule, "experiment");
  if (cfg.n_schedule.empty()) throw ConfigError("experiment: n_schedule must be nonempty");
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    if (cfg.n_schedule[k] < 1) throw ConfigError("experiment: n_schedule entries must be >= 1");
    if (k > 0 && cfg.n_schedule[k] <= cfg.n_schedule[k - 1])
      throw ConfigError("experiment: n_schedule must be strictly increasing");
  }
  cfg.replicates = detail::as_or<long>(j, "replicates", cfg.replicates, "experiment");
  if (cfg.replicates < 2) throw ConfigError("experiment: replicates must be >= 2");
  cfg.epsilon_list =
      detail::as_or<std::vector<double>>(j, "epsilon_list", cfg.epsilon_list, "experiment");
  if (cfg.epsilon_list.empty()) throw ConfigError("experiment: epsilon_list must be nonempty");
  for (double e : cfg.epsilon_list)
    if (!(e > 0.0)) throw ConfigError("experiment: epsilon_list entries must be positive");
  cfg.w1_reps = detail::as_or<long>(j, "w1_reps", cfg.w1_reps, "experiment");
  if (cfg.w1_reps < 1) throw ConfigError("experiment: w1_reps must be >= 1");
  cfg.assignment_cap = detail::as_or<long>(j, "assignment_cap", cfg.assignment_cap, "experiment");
  if (cfg.replicates > cfg.assignment_cap)
    throw ConfigError("experiment: replicates must not exceed the assignment cap");
  cfg.backend = parse_backend(j, "experiment");
  cfg.mc_draws = detail::as_or<long>(j, "mc_draws", cfg.mc_draws, "experiment");
  cfg.solver = parse_solver(root);
  if (j.contains("conditions")) {
    const json& c = j.at("conditions");
    cfg.conditions.check = detail::as_or<bool>(c, "check", true, "experiment.conditions");
    cfg.conditions.rho_list = detail::as_or<std::vector<double>>(
        c, "rho_list", cfg.conditions.rho_list, "experiment.conditions");
    cfg.conditions.grid = detail::as_or<long>(c, "grid", cfg.conditions.grid,
                                              "experiment.conditions");
    cfg.conditions.draws = detail::as_or<long>(c, "draws", cfg.conditions.draws,
                                               "experiment.conditions");
  } else if (cfg.kind != ExperimentKind::ManifoldClt) {
    cfg.conditions.check = false;
  }
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

struct MeanConfig {
  Manifold manifold = Manifold::euclidean(1);
  std::string points_path;
  SolverSettings solver;
  std::optional<Vec> x0;
  std::optional<Vec> ball_center;
};

inline MeanConfig parse_mean_config(const json& root, const std::string& config_path) {
  MeanConfig cfg;
  cfg.manifold = parse_manifold(root);
  const json& j = detail::require_key(root, "mean", "config");
  std::filesystem::path p = detail::as<std::string>(j, "points", "mean");
  if (p.is_relative()) p = std::filesystem::path(config_path).parent_path() / p;
  cfg.points_path = p.string();
  cfg.solver = parse_solver(root);
  if (j.contains("x0")) {
    Vec x0 = detail::as_vec(j.at("x0"), "mean.x0");
    check_point(cfg.manifold, x0);
    cfg.x0 = x0;
  }
  if (j.contains("ball_center")) {
    Vec c = detail::as_vec(j.at("ball_center"), "mean.ball_center");
    check_point(cfg.manifold, c);
    cfg.ball_center = c;
  }
  return cfg;
}

struct CertificateSettings {
  bool enabled = false;
  double rho0 = 0.0, rho1 = 0.0;
  long grid = 128;
  long draws = 2048;
};

struct DiagnoseConfig {
  DistributionFamily family;
  std::vector<long> n_list = {16, 64, 256, 1024};
  std::vector<double> epsilon_list = {0.1, 0.5};
  std::vector<double> rho_list = {0.1};
  FamilyMoments::Backend backend = FamilyMoments::Backend::ClosedForm;
  long mc_draws = 20000;
  long pair_draws = 4096;
  bool semi_global = true;
  long condition_grid = 64;
  long condition_draws = 128;
  CltConditionThresholds thresholds;
  CertificateSettings certificate;
};

inline DiagnoseConfig parse_diagnose_config(const json& root) {
  DiagnoseConfig cfg;
  const Manifold m = parse_manifold(root);
  const Vec center = parse_center(root, m);
  cfg.family = parse_family(root, m, center);
  const json& j = detail::require_key(root, "diagnose", "config");
  cfg.n_list = detail::as_or<std::vector<long>>(j, "n_list", cfg.n_list, "diagnose");
  if (cfg.n_list.empty()) throw ConfigError("diagnose: n_list must be nonempty");
  for (long n : cfg.n_list)
    if (n < 1) throw ConfigError("diagnose: n_list entries must be >= 1");
  cfg.epsilon_list =
      detail::as_or<std::vector<double>>(j, "epsilon_list", cfg.epsilon_list, "diagnose");
  for (double e : cfg.epsilon_list)
    if (!(e > 0.0)) throw ConfigError("diagnose: epsilon_list entries must be positive");
  cfg.rho_list = detail::as_or<std::vector<double>>(j, "rho_list", cfg.rho_list, "diagnose");
  cfg.backend = parse_backend(j, "diagnose");
  cfg.mc_draws = detail::as_or<long>(j, "mc_draws", cfg.mc_draws, "diagnose");
  cfg.pair_draws = detail::as_or<long>(j, "pair_draws", cfg.pair_draws, "diagnose");
  cfg.semi_global = detail::as_or<bool>(j, "semi_global", cfg.semi_global, "diagnose");
  cfg.condition_grid = detail::as_or<long>(j, "grid", cfg.condition_grid, "diagnose");
  cfg.condition_draws = detail::as_or<long>(j, "draws", cfg.condition_draws, "diagnose");
  if (j.contains("certificate")) {
    const json& c = j.at("certificate");
    cfg.certificate.enabled = true;
    cfg.certificate.rho0 = detail::as<double>(c, "rho0", "diagnose.certificate");
    cfg.certificate.rho1 = detail::as<double>(c, "rho1", "diagnose.certificate");
    cfg.certificate.grid = detail::as_or<long>(c, "grid", cfg.certificate.grid,
                                               "diagnose.certificate");
    cfg.certificate.draws = detail::as_or<long>(c, "draws", cfg.certificate.draws,
                                                "diagnose.certificate");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Points files: plain text, one point per line, whitespace-separated ambient
// coordinates; blank lines and lines starting with '#' are skipped. Errors
// name the offending line.
// ---------------------------------------------------------------------------

inline Sample read_points_file(const std::string& path, const Manifold& m) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file: " + path);
  Sample s{m, {}};
  std::string line;
  long line_no = 0;
  const int want = ambient_size(m);
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::vector<double> coords;
    double x;
    while (ss >> x) coords.push_back(x);
    if (!ss.eof())
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": not a number");
    if (coords.empty()) continue;
    if (static_cast<int>(coords.size()) != want)
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(want) + " coordinates, got " +
                        std::to_string(coords.size()));
    Vec p(want);
    for (int k = 0; k < want; ++k) p[k] = coords[k];
    try {
      check_point(m, p);
    } catch (const Error& e) {
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    s.points.push_back(std::move(p));
  }
  if (s.points.empty()) throw ConfigError(path + ": no points found");
  return s;
}

// ---------------------------------------------------------------------------
// Serialization. CSV cells are printed with 17 significant digits so re-runs
// can be compared byte for byte; JSON numbers round-trip IEEE doubles.
// ---------------------------------------------------------------------------

inline std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Hash of the canonicalized config: parse -> dump with sorted object keys.
inline std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

inline std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string hash;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
};

inline json manifest_to_json(const RunManifest& m) {
  return json{{"command", m.command},
              {"config_path", m.config_path},
              {"config_hash", m.hash},
              {"seed", m.seed},
              {"threads", m.threads},
              {"out_dir", m.out_dir},
              {"library_version", kVersion},
              {"started_at", m.started_at},
              {"finished_at", m.finished_at},
              {"outputs", m.outputs}};
}

inline const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Wlln: return "wlln";
    case ExperimentKind::EuclideanApprox: return "euclidean_approx";
    case ExperimentKind::ManifoldClt: return "manifold_clt";
  }
  return "unknown";
}

// Per-n CSV body. Rows without a transport estimate (wlln mode, aborted rows)
// leave the w1 columns empty rather than writing sentinels.
inline std::string experiment_csv(const ExperimentResult& res) {
  std::ostringstream out;
  out << "n,phi,phi_se,w1,w1_se,baseline,baseline_se,mean_error,mean_error_se,ratio,ratio_se,"
         "max_term_ratio";
  for (double e : res.epsilon_list) out << ",lindeberg_eps_" << format_short(e);
  for (double e : res.epsilon_list) out << ",lindeberg_halved_eps_" << format_short(e);
  out << ",failures_nonconverged,failures_cutlocus,replicates_used,aborted\n";
  for (const auto& r : res.rows) {
    out << r.n << ',' << format_sig17(r.phi) << ',' << format_sig17(r.phi_se) << ',';
    if (r.has_w1)
      out << format_sig17(r.w1) << ',' << format_sig17(r.w1_se) << ','
          << format_sig17(r.baseline) << ',' << format_sig17(r.baseline_se) << ',';
    else
      out << ",,,,";
    out << format_sig17(r.mean_error) << ',' << format_sig17(r.mean_error_se) << ','
        << format_sig17(r.ratio) << ',' << format_sig17(r.ratio_se) << ','
        << format_sig17(r.max_term_ratio);
    for (double v : r.lindeberg_natural) out << ',' << format_sig17(v);
    for (double v : r.lindeberg_halved) out << ',' << format_sig17(v);
    out << ',' << r.failures_nonconverged << ',' << r.failures_cutlocus << ','
        << r.replicates_used << ',' << (r.aborted ? 1 : 0) << '\n';
  }
  return out.str();
}

inline json experiment_row_json(const ExperimentRow& r, const std::vector<double>& eps_list) {
  json row{{"n", r.n},
           {"phi", r.phi},
           {"phi_se", r.phi_se},
           {"max_term_ratio", r.max_term_ratio},
           {"mean_error", r.mean_error},
           {"mean_error_se", r.mean_error_se},
           {"ratio", r.ratio},
           {"ratio_se", r.ratio_se},
           {"failures_nonconverged", r.failures_nonconverged},
           {"failures_cutlocus", r.failures_cutlocus},
           {"replicates_used", r.replicates_used},
           {"aborted", r.aborted}};
  json lind = json::array();
  for (std::size_t k = 0; k < eps_list.size(); ++k)
    lind.push_back(json{{"eps", eps_list[k]},
                        {"natural", r.lindeberg_natural[k]},
                        {"natural_se", r.lindeberg_natural_se[k]},
                        {"halved", r.lindeberg_halved[k]},
                        {"halved_se", r.lindeberg_halved_se[k]}});
  row["lindeberg"] = lind;
  if (r.has_w1) {
    row["w1"] = r.w1;
    row["w1_se"] = r.w1_se;
    row["baseline"] = r.baseline;
    row["baseline_se"] = r.baseline_se;
    row["sample_cov"] = mat_to_json(r.sample_cov);
    row["sample_cov_se"] = mat_to_json(r.sample_cov_se);
  }
  if (r.has_clt || r.has_w1) row["predicted_cov"] = mat_to_json(r.predicted_cov);
  if (r.has_clt) {
    row["h_cond"] = r.h_cond;
    if (r.hypotheses_checked) row["hypotheses_ok"] = r.hypotheses_ok;
    else row["hypotheses_ok"] = "unverified";
  }
  return row;
}

inline json feller_to_json(const FellerConverseReport& f) {
  return json{{"preconditions_hold", f.preconditions_hold},
              {"w1_vanishing", f.w1_vanishing},
              {"lindeberg_vanishing", f.lindeberg_vanishing},
              {"final_term_ratio", f.final_term_ratio},
              {"phi_growth", f.phi_growth},
              {"final_lindeberg", f.final_lindeberg},
              {"final_w1_gap", f.final_w1_gap},
              {"verdict", f.verdict}};
}

inline json experiment_to_json(const ExperimentResult& res, const std::string& hash,
                               std::uint64_t seed) {
  json rows = json::array();
  for (const auto& r : res.rows) rows.push_back(experiment_row_json(r, res.epsilon_list));
  json out{{"kind", experiment_kind_name(res.kind)},
           {"epsilon_list", res.epsilon_list},
           {"rows", rows},
           {"any_aborted", res.any_aborted},
           {"provenance",
            json{{"config_hash", hash}, {"seed", seed}, {"library_version", kVersion}}}};
  if (res.has_feller) out["feller_converse"] = feller_to_json(res.feller);
  return out;
}

inline json solve_report_to_json(const SolveReport& rep) {
  return json{{"converged", rep.converged},
              {"iters", rep.iters},
              {"energy", rep.energy},
              {"grad_norm", rep.grad_norm},
              {"point", vec_to_json(rep.x)},
              {"hit_ball_boundary", rep.hit_ball_boundary},
              {"singular_hessian_fallbacks", rep.singular_hessian_fallbacks},
              {"cut_locus_skips", rep.cut_locus_skips},
              {"cut_locus_aborted", rep.cut_locus_aborted},
              {"message", rep.message}};
}

inline json condition_report_to_json(const CltConditionReport& rep) {
  json drift = json::array();
  for (const auto& [rho, val] : rep.hessian_drift)
    drift.push_back(json{{"rho", rho}, {"value", val}});
  json lind = json::array();
  for (const auto& p : rep.lindeberg)
    lind.push_back(json{{"eps", p.eps}, {"value", p.value}, {"se", p.se}});
  return json{{"n", rep.n},
              {"phi", rep.phi},
              {"energy_per_index", rep.energy_per_index},
              {"energy_ok", rep.energy_ok},
              {"hessian_drift", drift},
              {"hessian_drift_at_min_rho", rep.hessian_drift_at_min_rho},
              {"drift_ok", rep.drift_ok},
              {"hessian_frob_avg", rep.hessian_frob_avg},
              {"frob_ok", rep.frob_ok},
              {"h_inverse_norm", rep.h_inverse_norm},
              {"h_cond", rep.h_cond},
              {"invertible_ok", rep.invertible_ok},
              {"lindeberg", lind},
              {"lindeberg_ok", rep.lindeberg_ok},
              {"all_ok", rep.all_ok}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + path.string());
  out << body;
  if (!out) throw Error("failed writing output file: " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace frechet
