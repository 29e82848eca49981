#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gspec/bounds.hpp"
#include "gspec/csv.hpp"
#include "gspec/error.hpp"
#include "gspec/experiments.hpp"
#include "gspec/graphon.hpp"
#include "gspec/graphon_json.hpp"
#include "gspec/parallel.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"

namespace gspec::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Fully resolved run configuration (JSON config merged with flags).
struct RunConfig {
  std::string subcommand;
  std::optional<CatalogSpec> graphon;
  std::vector<std::size_t> n_list;
  double nu = 0.05;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  LatentMode mode = LatentMode::stochastic;
  std::filesystem::path output_dir = "gspec_out";
  double eigentol = kDefaultEigenTol;
  std::optional<double> eta;
  std::optional<double> ell;
  std::optional<UnitInterval> j1;
  std::optional<UnitInterval> j2;
  double alpha = 2.0;
  std::optional<std::string> f;
  std::size_t x_grid_points = 401;
  double quad_abs_tol = kDefaultQuadTol;
  std::optional<double> eta_w;
  std::size_t grid_points = 201;
  std::size_t threads = default_threads();
  bool output_dir_given = false;

  McConfig mc() const {
    McConfig c;
    c.graphon = *graphon;
    c.n_list = n_list;
    c.nu = nu;
    c.trials = trials;
    c.master_seed = master_seed;
    c.mode = mode;
    c.eigentol = eigentol;
    c.threads = threads;
    return c;
  }

  nlohmann::json echo() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    if (graphon) j["graphon"] = to_json(*graphon);
    j["n_list"] = n_list;
    j["nu"] = nu;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["mode"] = to_string(mode);
    j["eigentol"] = eigentol;
    if (eta) j["eta"] = *eta;
    if (ell) j["ell"] = *ell;
    if (j1) j["j1"] = {j1->lo, j1->hi};
    if (j2) j["j2"] = {j2->lo, j2->hi};
    j["alpha"] = alpha;
    if (f) j["f"] = *f;
    j["x_grid_points"] = x_grid_points;
    j["quad_abs_tol"] = quad_abs_tol;
    if (eta_w) j["eta_w"] = *eta_w;
    j["grid_points"] = grid_points;
    return j;
  }
};

/// Flag values as parsed; unset flags leave the config value alone.
struct Flags {
  std::string config_path;
  std::string graphon_json;
  std::vector<std::size_t> n_list;
  std::optional<double> nu;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out;
  std::optional<double> eigentol;
  std::optional<double> eta;
  std::optional<double> ell;
  std::vector<double> j1;
  std::vector<double> j2;
  std::optional<double> alpha;
  std::string f;
  std::optional<std::size_t> x_grid;
  std::optional<double> quad_tol;
  std::optional<double> eta_w;
  std::optional<std::size_t> grid_points;
  std::optional<std::size_t> threads;
};

namespace detail {

inline LatentMode parse_mode(const std::string& s) {
  if (s == "stochastic") return LatentMode::stochastic;
  if (s == "deterministic") return LatentMode::deterministic;
  throw ValidationError("mode must be 'stochastic' or 'deterministic', got '" + s + "'");
}

inline UnitInterval parse_interval(const std::vector<double>& v, const char* what) {
  if (v.size() != 2) throw ValidationError(std::string(what) + " needs exactly two numbers");
  return {v[0], v[1]};
}

template <class T>
T json_get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

inline void apply_json(RunConfig& rc, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> allowed{
      "graphon", "n_list", "nu",  "trials", "master_seed", "mode",     "output_dir",
      "eigentol", "eta",   "ell", "j1",     "j2",          "alpha",    "f",
      "x_grid_points", "quad_abs_tol", "eta_w", "grid_points"};
  gspec::detail::reject_unknown_keys(j, allowed, "config");
  if (j.contains("graphon")) rc.graphon = catalog_spec_from_json(j["graphon"]);
  if (j.contains("n_list")) rc.n_list = json_get<std::vector<std::size_t>>(j, "n_list");
  if (j.contains("nu")) rc.nu = json_get<double>(j, "nu");
  if (j.contains("trials")) rc.trials = json_get<std::size_t>(j, "trials");
  if (j.contains("master_seed")) rc.master_seed = json_get<std::uint64_t>(j, "master_seed");
  if (j.contains("mode")) rc.mode = parse_mode(json_get<std::string>(j, "mode"));
  if (j.contains("output_dir")) {
    rc.output_dir = json_get<std::string>(j, "output_dir");
    rc.output_dir_given = true;
  }
  if (j.contains("eigentol")) rc.eigentol = json_get<double>(j, "eigentol");
  if (j.contains("eta")) rc.eta = json_get<double>(j, "eta");
  if (j.contains("ell")) rc.ell = json_get<double>(j, "ell");
  if (j.contains("j1")) rc.j1 = parse_interval(json_get<std::vector<double>>(j, "j1"), "j1");
  if (j.contains("j2")) rc.j2 = parse_interval(json_get<std::vector<double>>(j, "j2"), "j2");
  if (j.contains("alpha")) rc.alpha = json_get<double>(j, "alpha");
  if (j.contains("f")) rc.f = json_get<std::string>(j, "f");
  if (j.contains("x_grid_points")) rc.x_grid_points = json_get<std::size_t>(j, "x_grid_points");
  if (j.contains("quad_abs_tol")) rc.quad_abs_tol = json_get<double>(j, "quad_abs_tol");
  if (j.contains("eta_w")) rc.eta_w = json_get<double>(j, "eta_w");
  if (j.contains("grid_points")) rc.grid_points = json_get<std::size_t>(j, "grid_points");
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(where + ": malformed JSON: " + e.what());
  }
}

inline RunConfig resolve(const std::string& sub, const Flags& fl) {
  RunConfig rc;
  rc.subcommand = sub;
  if (!fl.config_path.empty()) {
    std::ifstream in(fl.config_path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + fl.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_json(rc, parse_json_text(ss.str(), fl.config_path));
  }
  if (!fl.graphon_json.empty())
    rc.graphon = catalog_spec_from_json(parse_json_text(fl.graphon_json, "--graphon"));
  if (!fl.n_list.empty()) rc.n_list = fl.n_list;
  if (fl.nu) rc.nu = *fl.nu;
  if (fl.trials) rc.trials = *fl.trials;
  if (fl.seed) rc.master_seed = *fl.seed;
  if (!fl.mode.empty()) rc.mode = parse_mode(fl.mode);
  if (!fl.out.empty()) {
    rc.output_dir = fl.out;
    rc.output_dir_given = true;
  }
  if (fl.eigentol) rc.eigentol = *fl.eigentol;
  if (fl.eta) rc.eta = *fl.eta;
  if (fl.ell) rc.ell = *fl.ell;
  if (!fl.j1.empty()) rc.j1 = parse_interval(fl.j1, "--j1");
  if (!fl.j2.empty()) rc.j2 = parse_interval(fl.j2, "--j2");
  if (fl.alpha) rc.alpha = *fl.alpha;
  if (!fl.f.empty()) rc.f = fl.f;
  if (fl.x_grid) rc.x_grid_points = *fl.x_grid;
  if (fl.quad_tol) rc.quad_abs_tol = *fl.quad_tol;
  if (fl.eta_w) rc.eta_w = *fl.eta_w;
  if (fl.grid_points) rc.grid_points = *fl.grid_points;
  if (fl.threads) rc.threads = std::max<std::size_t>(1, *fl.threads);

  // Validation shared by every subcommand; each handler adds its own.
  gspec::detail::require(!rc.n_list.empty(), "no graph sizes given (use --n or n_list)");
  for (std::size_t k = 0; k < rc.n_list.size(); ++k) {
    gspec::detail::require(rc.n_list[k] >= 1, "graph sizes must be at least 1");
    gspec::detail::require(k == 0 || rc.n_list[k] > rc.n_list[k - 1],
                           "graph sizes must be strictly ascending");
  }
  gspec::detail::require(rc.nu > 0.0 && rc.nu < 1.0, "nu must lie in (0,1)");
  gspec::detail::require(rc.trials >= 1, "trials must be at least 1");
  gspec::detail::require(rc.eigentol > 0.0, "eigentol must be positive");
  gspec::detail::require(rc.quad_abs_tol > 0.0, "quad_abs_tol must be positive");
  if (sub != "bounds") {
    if (!rc.graphon) throw ValidationError("no graphon given (use --graphon or config)");
    make_catalog_graphon(*rc.graphon);  // validates
  }
  return rc;
}

class OutputSink {
 public:
  explicit OutputSink(const RunConfig& rc) : rc_(rc) {}

  void add(const std::string& kind, csv::Table table) {
    files_.push_back({kind + "_" + rc_.subcommand + ".csv", table.str()});
  }

  void commit() const {
    std::filesystem::create_directories(rc_.output_dir);
    for (const auto& [name, body] : files_) write(rc_.output_dir / name, body);
    nlohmann::json meta;
    meta["config"] = rc_.echo();
    meta["prng"] = std::string(kPrngAlgorithm);
    meta["version"] = kVersion;
    write(rc_.output_dir / "run_meta.json", meta.dump(2) + "\n");
  }

 private:
  static void write(const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
  }

  const RunConfig& rc_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// Subcommand handlers. Each returns the process exit code.

inline int run_bounds(const RunConfig& rc, std::ostream& out) {
  csv::Table t({"n", "nu", "gamma", "phi", "b_n", "deg_threshold", "gamma_old", "phi_old"});
  for (std::size_t n : rc.n_list) {
    const BoundSet b = compute_bounds(n, rc.nu, rc.eta_w);
    out << std::fixed << std::setprecision(6);
    out << "n             = " << b.n << "\n"
        << "nu            = " << b.nu << "\n"
        << "gamma         = " << b.gamma << "\n"
        << "phi           = " << b.phi << "\n"
        << "b_n           = " << b.b_n << "\n"
        << "deg_threshold = " << b.deg_threshold << "\n";
    out << "gamma_old     = ";
    if (b.gamma_old) out << *b.gamma_old << "\n"; else out << "n/a\n";
    out << "phi_old       = ";
    if (b.phi_old) out << *b.phi_old << "\n"; else out << "n/a\n";
    out << "\n";
    out.unsetf(std::ios::floatfield);
    t.add_row({csv::fmt(b.n), csv::fmt(b.nu), csv::fmt(b.gamma), csv::fmt(b.phi),
               csv::fmt(b.b_n), csv::fmt(b.deg_threshold),
               b.gamma_old ? csv::fmt(*b.gamma_old) : "", b.phi_old ? csv::fmt(*b.phi_old) : ""});
  }
  out << t.str();
  if (rc.output_dir_given) {
    OutputSink sink(rc);
    sink.add("aggregate", t);
    sink.commit();
  }
  return 0;
}

inline int run_large_enough_n(const RunConfig& rc, std::ostream& out) {
  const Graphon g = make_catalog_graphon(*rc.graphon);
  const DegreeFunction deg = degree_function(g, rc.grid_points, rc.quad_abs_tol);
  csv::Table t({"n", "nu", "b_n", "min_cell_width", "interior_breakpoints", "lipschitz",
                "max_degree_function", "lhs_ii", "cond_i", "cond_ii", "nu_in_range"});
  for (std::size_t n : rc.n_list) {
    const auto r = large_enough_n(g, n, rc.nu, deg);
    t.add(n, rc.nu, r.b_n, g.min_cell_width(), g.interior_breakpoints(), g.lipschitz(),
          deg.max_value, r.lhs_ii, r.cond_i, r.cond_ii, r.nu_in_range);
  }
  out << t.str();
  if (rc.output_dir_given) {
    OutputSink sink(rc);
    sink.add("aggregate", t);
    sink.commit();
  }
  return 0;
}

inline int run_sample(const RunConfig& rc, std::ostream&) {
  const Graphon g = make_catalog_graphon(*rc.graphon);
  csv::Table nodes({"n", "trial", "seed", "node", "latent", "degree", "expected_degree"});
  csv::Table summary({"n", "trial", "seed", "edges", "edge_density", "expected_density",
                      "d_bar_max"});
  for (std::size_t n : rc.n_list) {
    for (std::size_t t = 0; t < rc.trials; ++t) {
      const std::uint64_t seed = trial_seed(rc.master_seed, n, t);
      const GraphPair pair = sample_graph_pair(g, n, rc.mode, seed);
      const auto deg = pair.a_random.row_sums();
      const auto deg_bar = pair.a_expected.row_sums();
      double edges = 0.0, expected = 0.0, dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nodes.add(n, t, seed, i, pair.latent.values[i], deg[i], deg_bar[i]);
        edges += deg[i];
        expected += deg_bar[i];
        dmax = std::max(dmax, deg_bar[i]);
      }
      const double pairs = n >= 2 ? static_cast<double>(n) * static_cast<double>(n - 1) : 1.0;
      summary.add(n, t, seed, edges / 2.0, edges / pairs, expected / pairs, dmax);
    }
  }
  OutputSink sink(rc);
  sink.add("trials", std::move(nodes));
  sink.add("aggregate", std::move(summary));
  sink.commit();
  return 0;
}

inline int run_spectrum(const RunConfig& rc, std::ostream&) {
  const Graphon g = make_catalog_graphon(*rc.graphon);
  csv::Table spectra({"n", "trial", "seed", "index", "delta", "delta_bar", "mu", "mu_bar"});
  csv::Table summary({"n", "trial", "seed", "d_bar_max", "diff_norm_adj", "diff_norm_lap",
                      "diff_norm_deg", "max_deg_gap", "max_mu_gap", "deg_assumption"});
  for (std::size_t n : rc.n_list) {
    std::vector<SpectralSummary> results(rc.trials);
    parallel_for(rc.trials, rc.threads, [&](std::size_t t) {
      results[t] = summarize(sample_graph_pair(g, n, rc.mode, trial_seed(rc.master_seed, n, t)),
                             rc.eigentol);
    });
    for (std::size_t t = 0; t < rc.trials; ++t) {
      const auto& s = results[t];
      const std::uint64_t seed = trial_seed(rc.master_seed, n, t);
      for (std::size_t i = 0; i < n; ++i)
        spectra.add(n, t, seed, i, s.deg_sorted[i], s.deg_bar_sorted[i], s.mu[i], s.mu_bar[i]);
      summary.add(n, t, seed, s.d_bar_max, s.diff_norm_adj, s.diff_norm_lap, s.diff_norm_deg,
                  max_abs_gap(s.deg_sorted, s.deg_bar_sorted), max_abs_gap(s.mu, s.mu_bar),
                  deg_assumption_holds(s, n, rc.nu));
    }
  }
  OutputSink sink(rc);
  sink.add("trials", std::move(spectra));
  sink.add("aggregate", std::move(summary));
  sink.commit();
  return 0;
}

inline int run_verify_lemma3(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto rep = verify_lemma3(rc.mc());
  OutputSink sink(rc);
  sink.add("trials", lemma3_trials_table(rep));
  sink.add("aggregate", lemma3_aggregate_table(rep));
  sink.commit();
  for (const auto& a : rep.per_n)
    out << "n=" << a.n << " freq_a=" << csv::fmt(a.freq_a) << " freq_b=" << csv::fmt(a.freq_b)
        << " freq_c=" << csv::fmt(a.freq_c) << " freq_e=" << csv::fmt(a.freq_e)
        << " weyl_failures=" << a.weyl_failures << "\n";
  if (rep.total_weyl_failures() > 0) {
    err << "error: Weyl chain violated in " << rep.total_weyl_failures() << " trial(s)\n";
    return 1;
  }
  return 0;
}

inline int run_verify_degree_bound(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (!rc.eta || !rc.ell) throw ValidationError("verify-degree-bound needs --eta and --ell");
  const UnitInterval j1 = rc.j1.value_or(UnitInterval{0.0, *rc.ell});
  const UnitInterval j2 = rc.j2.value_or(j1);
  const auto rep = verify_degree_lower_bound(rc.mc(), *rc.eta, *rc.ell, j1, j2);
  OutputSink sink(rc);
  sink.add("trials", degree_bound_trials_table(rep));
  sink.add("aggregate", degree_bound_aggregate_table(rep));
  sink.commit();
  for (const auto& a : rep.per_n)
    out << "n=" << a.n << " success_freq=" << csv::fmt(a.success_freq)
        << " prob_lb=" << csv::fmt(a.prob_lb) << " pass=" << (a.pass ? 1 : 0) << "\n";
  if (rc.mode == LatentMode::deterministic && !rep.all_pass()) {
    err << "error: deterministic degree lower bound violated\n";
    return 1;
  }
  return 0;
}

inline int run_rate_fit(const RunConfig& rc, std::ostream& out) {
  const auto rep = rate_fit(rc.mc(), rc.alpha);
  OutputSink sink(rc);
  sink.add("trials", rate_fit_trials_table(rep));
  sink.add("aggregate", rate_fit_aggregate_table(rep));
  sink.commit();
  out << "slope=" << csv::fmt(rep.slope) << " stderr=" << csv::fmt(rep.slope_stderr)
      << " intercept=" << csv::fmt(rep.intercept) << "\n";
  return 0;
}

inline int run_uniform_convergence(const RunConfig& rc, std::ostream& out) {
  const Graphon g = make_catalog_graphon(*rc.graphon);
  std::optional<TestFunction> f;
  if (rc.f) f = test_function_from_name(*rc.f);
  const auto rep = uniform_convergence_sweep(g, rc.n_list, rc.x_grid_points, f, rc.quad_abs_tol);
  OutputSink sink(rc);
  sink.add("trials", convergence_trials_table(rep));
  sink.add("aggregate", convergence_aggregate_table(rep));
  sink.commit();
  for (const auto& p : rep.points)
    out << "n=" << p.n << " sup_error=" << csv::fmt(p.sup_error) << " bound=" << csv::fmt(p.bound)
        << "\n";
  return 0;
}

inline void add_common(CLI::App* sub, Flags& fl, bool mc) {
  sub->add_option("--config", fl.config_path, "JSON config file (flags override it)");
  sub->add_option("--graphon", fl.graphon_json,
                  "Graphon spec as JSON, e.g. {\"type\":\"constant\",\"p\":0.5}");
  sub->add_option("--n", fl.n_list, "Graph sizes, comma separated, ascending")->delimiter(',');
  sub->add_option("--nu", fl.nu, "Confidence parameter nu in (0,1)");
  sub->add_option("--out", fl.out, "Output directory");
  if (!mc) return;
  sub->add_option("--trials", fl.trials, "Trials per graph size");
  sub->add_option("--seed", fl.seed, "Master seed");
  sub->add_option("--mode", fl.mode, "Latent variables: stochastic | deterministic");
  sub->add_option("--eigentol", fl.eigentol, "Relative eigensolver tolerance");
  sub->add_option("--threads", fl.threads, "Worker threads (1 = reference mode)");
}

}  // namespace detail

/// Entry point: parses argv, dispatches, writes reports. Exit codes: 0 ok,
/// 2 validation error, 1 internal failure (e.g. a violated hard invariant).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Graphon sampling, Laplacian spectra and concentration-bound verification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags fl;

  auto* bounds = app.add_subcommand("bounds", "Print gamma, phi, b_N and related bound values");
  detail::add_common(bounds, fl, false);
  bounds->add_option("--eta-w", fl.eta_w, "Graphon infimum, enables the old bounds");

  auto* large = app.add_subcommand("large-enough-n", "Evaluate conditions (i) and (ii)");
  detail::add_common(large, fl, false);
  large->add_option("--grid-points", fl.grid_points, "Degree-function grid size");
  large->add_option("--quad-tol", fl.quad_tol, "Absolute quadrature tolerance");

  auto* sample = app.add_subcommand("sample", "Sample graphs and write degrees");
  detail::add_common(sample, fl, true);

  auto* spectrum = app.add_subcommand("spectrum", "Sample graphs and write Laplacian spectra");
  detail::add_common(spectrum, fl, true);

  auto* lemma3 = app.add_subcommand("verify-lemma3", "Monte Carlo check of degree/eigenvalue bounds");
  detail::add_common(lemma3, fl, true);

  auto* degree = app.add_subcommand("verify-degree-bound", "Check the max expected degree lower bound");
  detail::add_common(degree, fl, true);
  degree->add_option("--eta", fl.eta, "Kernel lower bound on J1 x J2");
  degree->add_option("--ell", fl.ell, "Interval length");
  degree->add_option("--j1", fl.j1, "Interval J1 as lo,hi")->delimiter(',');
  degree->add_option("--j2", fl.j2, "Interval J2 as lo,hi")->delimiter(',');

  auto* rate = app.add_subcommand("rate-fit", "Fit the decay rate of the eigenvalue gap");
  detail::add_common(rate, fl, true);
  rate->add_option("--alpha", fl.alpha, "nu = N^-alpha, alpha > 1");

  auto* conv = app.add_subcommand("uniform-convergence", "Sup error of deterministic degree sums");
  detail::add_common(conv, fl, false);
  conv->add_option("--f", fl.f, "Test function: identity | cos_pi | one");
  conv->add_option("--x-grid", fl.x_grid, "Points in the x grid");
  conv->add_option("--quad-tol", fl.quad_tol, "Absolute quadrature tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const RunConfig rc = detail::resolve(sub, fl);
    if (sub == "bounds") return detail::run_bounds(rc, out);
    if (sub == "large-enough-n") return detail::run_large_enough_n(rc, out);
    if (sub == "sample") return detail::run_sample(rc, out);
    if (sub == "spectrum") return detail::run_spectrum(rc, out);
    if (sub == "verify-lemma3") return detail::run_verify_lemma3(rc, out, err);
    if (sub == "verify-degree-bound") return detail::run_verify_degree_bound(rc, out, err);
    if (sub == "rate-fit") return detail::run_rate_fit(rc, out);
    if (sub == "uniform-convergence") return detail::run_uniform_convergence(rc, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gspec::cli
