// specnoise: spectral analysis of reversible continuous-time Markov chains.
//
// Subcommands: analyze, sweep, bottleneck, stability, localize, simulate,
// export. Reports go to stdout (or --out files); errors are machine-readable
// JSON {code, message, context} on stderr. Exit codes: 0 ok, 2 bad input or
// failed validation, 3 Monte Carlo z-score tripwire.

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specnoise/bottleneck.hpp"
#include "specnoise/chain.hpp"
#include "specnoise/errors.hpp"
#include "specnoise/io.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/simulate.hpp"
#include "specnoise/spectral.hpp"
#include "specnoise/stability.hpp"

namespace {

using nlohmann::json;
using namespace specnoise;

void emit_error(const std::string& code, const std::string& message,
                const std::string& context = {}) {
  json err = {{"code", code}, {"message", message}, {"context", context}};
  std::cerr << err.dump() << "\n";
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail("InvalidParams", flag + " expects a comma-separated number list",
           item);
    }
  }
  if (out.empty())
    fail("InvalidParams", flag + " expects a comma-separated number list");
  return out;
}

std::vector<double> alpha_grid_from_flag(const std::string& alphas_flag) {
  if (alphas_flag.empty()) return default_alpha_grid();
  auto grid = parse_double_list(alphas_flag, "--alphas");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0.0)
      fail("InvalidParams", "--alphas entries must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      fail("InvalidParams", "--alphas must be strictly ascending");
  }
  return grid;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::vector<std::string> subset_labels(const Chain& chain,
                                       const std::vector<int>& subset) {
  std::vector<std::string> labels;
  labels.reserve(subset.size());
  for (int i : subset) labels.push_back(chain.states[i]);
  return labels;
}

json bands_to_json(const std::vector<Band>& bands) {
  json arr = json::array();
  for (const Band& b : bands)
    arr.push_back({{"begin", b.begin},
                   {"end", b.end},
                   {"value", b.value},
                   {"dim", b.dim()}});
  return arr;
}

json chain_summary_json(const Chain& chain, const SpectralDecomposition& dec) {
  json summary = {{"states", chain.size()},
                  {"lambda_1", dec.spectral_gap},
                  {"relaxation_time", dec.relaxation_time},
                  {"eigenvalues", vector_to_json(dec.eigenvalues)},
                  {"bands", bands_to_json(dec.bands)},
                  {"transitive", chain.transitive}};
  if (chain.family) {
    summary["family"] = family_name(chain.family->family);
    summary["family_n"] = chain.family->n;
    if (chain.family->family == Family::slice_exclusion)
      summary["family_k"] = chain.family->k;
  }
  return summary;
}

json cut_report_to_json(const Chain& chain, const CutReport& report) {
  json out = {{"subset", report.subset},
              {"subset_labels", subset_labels(chain, report.subset)},
              {"pi_mass", report.pi_mass},
              {"boundary_flow", report.boundary_flow},
              {"phi", report.phi},
              {"exact_minimum", report.exact_minimum},
              {"method", search_method_name(report.method)}};
  if (report.phi_star) out["phi_star"] = *report.phi_star;
  if (report.gap_to_star) out["gap_to_star"] = *report.gap_to_star;
  return out;
}

// Curve CSV schema, fixed: alpha, covariance, flip_probability. The flip
// column is nan for non-Boolean observables.
std::string curves_csv(const SpectralProfile& profile,
                       const std::vector<double>& alphas) {
  auto cov = covariance_curve(profile, alphas);
  std::vector<std::pair<double, double>> flip;
  if (profile.boolean) flip = flip_curve(profile, alphas);
  std::string csv = "alpha,covariance,flip_probability\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    csv += format_double(alphas[i]);
    csv += ',';
    csv += format_double(cov[i].second);
    csv += ',';
    csv += profile.boolean ? format_double(flip[i].second) : "nan";
    csv += '\n';
  }
  return csv;
}

json function_report_json(const SpectralProfile& profile,
                          const std::vector<double>& alphas,
                          const std::vector<double>& ks,
                          const std::string& source) {
  json report = {{"source", source},
                 {"mean", profile.mean},
                 {"variance", profile.variance},
                 {"boolean", profile.boolean},
                 {"mean_lambda", profile.mean_lambda},
                 {"band_masses", profile.band_masses},
                 {"coefficients", vector_to_json(profile.coefficients)}};
  json masses = json::array();
  for (double k : ks)
    masses.push_back({{"k", k},
                      {"sensitivity_band_mass", sensitivity_band_mass(profile, k)},
                      {"stability_tail_mass", stability_tail_mass(profile, k)}});
  report["band_masses_by_k"] = std::move(masses);

  auto cov = covariance_curve(profile, alphas);
  json curves = json::array();
  std::vector<std::pair<double, double>> flip;
  if (profile.boolean) flip = flip_curve(profile, alphas);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    json row = {{"alpha", alphas[i]}, {"covariance", cov[i].second}};
    if (profile.boolean) row["flip_probability"] = flip[i].second;
    curves.push_back(std::move(row));
  }
  report["curves"] = std::move(curves);
  return report;
}

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

struct CommonOpts {
  std::string chain_path;
  std::vector<std::string> function_paths;
  std::string alphas_flag;
  std::vector<double> ks{1.5, 2.0, 4.0, 8.0};
  std::string out;
  std::string format = "json";
  bool format_set = false;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void apply_threads(int threads) {
  if (threads < 0) fail("InvalidParams", "--threads must be positive");
  if (threads > 0) omp_set_num_threads(threads);
}

constexpr int kEnumerationCap = 24;

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const CommonOpts& opts) {
  apply_threads(opts.threads);
  Chain chain = load_chain(opts.chain_path);
  SpectralDecomposition dec = decompose(chain);
  std::vector<double> alphas = alpha_grid_from_flag(opts.alphas_flag);

  json report;
  report["chain"] = chain_summary_json(chain, dec);
  report["sensitive_existence_gap"] = sensitive_existence_gap(dec);
  if (chain.size() <= kEnumerationCap) {
    CutReport cut = exact_bottleneck(chain);
    report["bottleneck"] = cut_report_to_json(chain, cut);
    CheegerReport cheeger = cheeger_check(chain, dec);
    report["cheeger"] = {{"phi_star", cheeger.phi_star},
                         {"lambda_1", cheeger.lambda_1},
                         {"lower_ok", cheeger.lower_ok},
                         {"upper_ok", cheeger.upper_ok}};
  }

  json functions = json::array();
  std::vector<std::string> csvs;
  for (const std::string& path : opts.function_paths) {
    Observable f = function_from_json(load_json_file(path), chain, &dec);
    SpectralProfile profile = fourier_profile(dec, f);
    functions.push_back(function_report_json(profile, alphas, opts.ks, path));
    csvs.push_back(curves_csv(profile, alphas));
  }
  report["functions"] = std::move(functions);

  if (!opts.out.empty()) {
    write_text_file(opts.out + ".json", report.dump(2) + "\n");
    for (std::size_t i = 0; i < csvs.size(); ++i)
      write_text_file(opts.out + ".f" + std::to_string(i) + ".curves.csv",
                      csvs[i]);
  }
  if (opts.format == "csv") {
    if (csvs.size() != 1)
      fail("InvalidParams", "--format csv needs exactly one --function");
    if (opts.out.empty()) std::cout << csvs[0];
  } else if (opts.out.empty()) {
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string family;
  int n_min = 0;
  int n_max = 0;
  int k_param = 2;
};

int cmd_sweep(const CommonOpts& opts_in, const SweepOpts& sweep) {
  CommonOpts opts = opts_in;
  if (!opts.format_set) opts.format = "csv";  // the sweep table is CSV-first
  apply_threads(opts.threads);
  if (sweep.n_min < 1 || sweep.n_max < sweep.n_min)
    fail("InvalidParams", "--n-min/--n-max must satisfy 1 <= min <= max");
  Family family = family_from_name(sweep.family);

  std::string csv = "n,states,lambda_1,t_rel,phi_star,phi_method,"
                    "sensitive_existence_gap";
  for (std::size_t fi = 0; fi < opts.function_paths.size(); ++fi)
    for (double k : opts.ks)
      csv += ",f" + std::to_string(fi) + "_sensitivity_mass_k" +
             format_double(k);
  csv += '\n';
  json rows = json::array();

  for (int n = sweep.n_min; n <= sweep.n_max; ++n) {
    FamilySpec spec{family, n, sweep.k_param};
    Chain chain = make_family(spec);
    SpectralDecomposition dec = decompose(chain);

    CutReport cut = chain.size() <= kEnumerationCap
                        ? exact_bottleneck(chain)
                        : sweep_cut(chain, dec);
    double gap_stat = sensitive_existence_gap(dec);

    json row = {{"n", n},
                {"states", chain.size()},
                {"lambda_1", dec.spectral_gap},
                {"t_rel", dec.relaxation_time},
                {"phi_star", cut.phi},
                {"phi_method", search_method_name(cut.method)},
                {"sensitive_existence_gap", gap_stat}};
    csv += std::to_string(n) + ',' + std::to_string(chain.size()) + ',' +
           format_double(dec.spectral_gap) + ',' +
           format_double(dec.relaxation_time) + ',' +
           format_double(cut.phi) + ',' + search_method_name(cut.method) +
           ',' + format_double(gap_stat);

    json masses = json::array();
    for (std::size_t fi = 0; fi < opts.function_paths.size(); ++fi) {
      Observable f = function_from_json(
          load_json_file(opts.function_paths[fi]), chain, &dec);
      SpectralProfile profile = fourier_profile(dec, f);
      for (double k : opts.ks) {
        double mass = sensitivity_band_mass(profile, k);
        csv += ',' + format_double(mass);
        masses.push_back({{"function", fi}, {"k", k}, {"mass", mass}});
      }
    }
    csv += '\n';
    if (!masses.empty()) row["sensitivity_masses"] = std::move(masses);
    rows.push_back(std::move(row));
  }

  if (opts.format == "json")
    write_or_print(opts.out, rows.dump(2) + "\n");
  else
    write_or_print(opts.out, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// bottleneck

struct BottleneckOpts {
  bool exact = false;
  bool sweep = false;
  bool restricted = false;
  std::string family;
  int n_min = 0;
  int n_max = 0;
  int k_param = 2;
};

int cmd_bottleneck(const CommonOpts& opts_in, const BottleneckOpts& bopts) {
  CommonOpts opts = opts_in;
  if (!bopts.family.empty() && !opts.format_set) opts.format = "csv";
  apply_threads(opts.threads);
  if (static_cast<int>(bopts.exact) + static_cast<int>(bopts.sweep) +
          static_cast<int>(bopts.restricted) >
      1)
    fail("InvalidParams", "--exact, --sweep, --restricted are exclusive");

  if (!bopts.family.empty()) {
    // Family sweep table: n, phi_star, lambda1, ratio_phi_lambda,
    // restricted_min (ratio is phi_star / lambda_1).
    if (bopts.n_min < 1 || bopts.n_max < bopts.n_min)
      fail("InvalidParams", "--n-min/--n-max must satisfy 1 <= min <= max");
    Family family = family_from_name(bopts.family);
    std::string csv = "n,phi_star,lambda1,ratio_phi_lambda,restricted_min\n";
    json rows = json::array();
    for (int n = bopts.n_min; n <= bopts.n_max; ++n) {
      Chain chain = make_family({family, n, bopts.k_param});
      SpectralDecomposition dec = decompose(chain);
      CutReport star = exact_bottleneck(chain);
      CutReport restricted = nondegenerate_minimizer(chain);
      double ratio = star.phi / dec.spectral_gap;
      csv += std::to_string(n) + ',' + format_double(star.phi) + ',' +
             format_double(dec.spectral_gap) + ',' + format_double(ratio) +
             ',' + format_double(restricted.phi) + '\n';
      rows.push_back({{"n", n},
                      {"phi_star", star.phi},
                      {"lambda1", dec.spectral_gap},
                      {"ratio_phi_lambda", ratio},
                      {"restricted_min", restricted.phi}});
    }
    if (opts.format == "json")
      write_or_print(opts.out, rows.dump(2) + "\n");
    else
      write_or_print(opts.out, csv);
    return 0;
  }

  if (opts.chain_path.empty())
    fail("InvalidParams", "bottleneck needs --chain or --family");
  Chain chain = load_chain(opts.chain_path);
  CutReport report;
  if (bopts.sweep) {
    SpectralDecomposition dec = decompose(chain);
    report = sweep_cut(chain, dec);
  } else if (bopts.restricted) {
    report = nondegenerate_minimizer(chain);
  } else {
    report = exact_bottleneck(chain);
  }
  write_or_print(opts.out, cut_report_to_json(chain, report).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// stability

struct StabilityOpts {
  double band_k = 2.0;
  double delta = 0.1;
  double g_exponent = 0.25;
  double eps = 0.1;
  int budget = 200;
};

int cmd_stability(const CommonOpts& opts, const StabilityOpts& sopts) {
  apply_threads(opts.threads);
  if (!opts.seed_set)
    fail("InvalidParams", "--seed is required for stability (probe restarts)");
  Chain chain = load_chain(opts.chain_path);
  SpectralDecomposition dec = decompose(chain);
  std::vector<double> alphas = alpha_grid_from_flag(opts.alphas_flag);

  ThresholdSweepReport sweep =
      threshold_sweep(dec, sopts.band_k, sopts.delta, sopts.g_exponent, alphas);
  json candidates = json::array();
  for (const ThresholdCandidate& c : sweep.candidates)
    candidates.push_back({{"c", c.c},
                          {"p_above", c.p_above},
                          {"p_below", c.p_below},
                          {"interval_stat", c.interval_stat},
                          {"admissible", c.admissible},
                          {"flip_at_alpha_min", c.flip_at_alpha_min}});
  json best = {{"c", sweep.best.c},
               {"band_k", sweep.best.band_k},
               {"subspace", sweep.best.subspace},
               {"coefficients", vector_to_json(sweep.best.coefficients)},
               {"indicator_states",
                subset_labels(chain, [&] {
                  std::vector<int> s;
                  for (int i = 0; i < chain.size(); ++i)
                    if (sweep.best.indicator.values(i) == 1.0) s.push_back(i);
                  return s;
                }())}};

  ConditionBProbe probe =
      condition_b_probe(dec, sopts.band_k, sopts.eps, sopts.budget, opts.seed);

  json report = {
      {"chain", chain_summary_json(chain, dec)},
      {"threshold_sweep",
       {{"delta", sweep.delta},
        {"g_exponent", sweep.g_exponent},
        {"best_index", sweep.best_index},
        {"best", std::move(best)},
        {"candidates", std::move(candidates)}}},
      {"condition_b",
       {{"band_k", probe.band_k},
        {"epsilon", probe.epsilon},
        {"dim", probe.dim},
        {"method", probe.method},
        {"best_probability", probe.best_probability},
        {"best_coefficients", vector_to_json(probe.best_coefficients)}}},
      {"seed", opts.seed}};
  write_or_print(opts.out, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// localize

struct LocalizeOpts {
  int band = 1;
  int eigen_index = -1;
  std::vector<double> deltas{0.2, 0.1, 0.05};
  std::string norm = "pi";
};

int cmd_localize(const CommonOpts& opts, const LocalizeOpts& lopts) {
  apply_threads(opts.threads);
  Chain chain = load_chain(opts.chain_path);
  SpectralDecomposition dec = decompose(chain);
  NormMode mode = norm_mode_from_name(lopts.norm);

  LocalizationReport report;
  json subject;
  if (lopts.eigen_index >= 0) {
    if (lopts.eigen_index >= dec.size())
      fail("InvalidParams", "--eigen index out of range");
    report = localization_report(dec.eigenvectors.col(lopts.eigen_index),
                                 dec.pi, mode, lopts.deltas);
    subject = {{"eigen_index", lopts.eigen_index},
               {"lambda", dec.eigenvalues(lopts.eigen_index)}};
  } else {
    report = localization_report_band(dec, lopts.band, mode, lopts.deltas);
    subject = {{"band", lopts.band},
               {"band_value", dec.bands.at(lopts.band).value},
               {"band_dim", dec.bands.at(lopts.band).dim()}};
  }

  json entries = json::array();
  for (const LocalizationEntry& e : report.entries)
    entries.push_back({{"delta", e.delta},
                       {"min_l", e.min_l},
                       {"achieving_set", subset_labels(chain, e.achieving_set)}});
  json out = {{"chain", chain_summary_json(chain, dec)},
              {"subject", std::move(subject)},
              {"norm", norm_mode_name(report.mode)},
              {"amplitude", vector_to_json(report.amplitude)},
              {"total_mass", report.total_mass},
              {"entries", std::move(entries)}};
  write_or_print(opts.out, out.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::string quantity = "auto";
  std::string times_flag;
  std::int64_t trials = 10000;
};

int cmd_simulate(const CommonOpts& opts, const SimulateOpts& sopts) {
  apply_threads(opts.threads);
  if (!opts.seed_set)
    fail("InvalidParams", "--seed is required for simulate");
  if (sopts.trials < 1) fail("InvalidParams", "--trials must be >= 1");
  Chain chain = load_chain(opts.chain_path);
  SpectralDecomposition dec = decompose(chain);

  bool want_cov = false;
  bool want_return = false;
  if (sopts.quantity == "covariance") {
    want_cov = true;
  } else if (sopts.quantity == "return_probability") {
    want_return = true;
  } else if (sopts.quantity == "both") {
    want_cov = want_return = true;
  } else if (sopts.quantity == "auto") {
    want_return = true;
    want_cov = !opts.function_paths.empty();
  } else {
    fail("InvalidParams",
         "--quantity must be covariance, return_probability, or both");
  }

  std::optional<Observable> f;
  std::optional<SpectralProfile> profile;
  if (want_cov) {
    if (opts.function_paths.size() != 1)
      fail("InvalidParams", "covariance estimation needs exactly one --function");
    f = function_from_json(load_json_file(opts.function_paths[0]), chain, &dec);
    profile = fourier_profile(dec, *f);
  }

  std::vector<double> times;
  if (sopts.times_flag.empty()) {
    times.push_back(dec.relaxation_time);
  } else {
    times = parse_double_list(sopts.times_flag, "--t");
    for (double t : times)
      if (t < 0.0) fail("InvalidParams", "--t entries must be nonnegative");
  }

  // Spectral references: Cov(t) over the raw profile (t in absolute time),
  // return probability from the kernel diagonal.
  auto spectral_cov = [&](double t) {
    double cov = 0.0;
    for (int i = 1; i < dec.size(); ++i)
      cov += std::exp(-dec.eigenvalues(i) * t) *
             profile->coefficients(i) * profile->coefficients(i);
    return cov;
  };
  auto spectral_return = [&](double t) {
    Eigen::MatrixXd kernel = transition_kernel(dec, t);
    double p = 0.0;
    for (int w = 0; w < dec.size(); ++w) p += dec.pi(w) * kernel(w, w);
    return p;
  };

  std::string csv = "quantity,t,estimate,std_error,trials,seed\n";
  json table = json::array();
  bool tripped = false;
  double worst_z = 0.0;

  auto add_row = [&](const TrajectoryEstimate& est, double exact) {
    double diff = est.estimate - exact;
    double z = est.std_error > 0.0 ? diff / est.std_error
                                   : (diff == 0.0 ? 0.0
                                                  : std::numeric_limits<double>::infinity());
    if (std::abs(z) > 5.0) tripped = true;
    if (std::abs(z) > std::abs(worst_z)) worst_z = z;
    csv += est.quantity + ',' + format_double(est.t) + ',' +
           format_double(est.estimate) + ',' + format_double(est.std_error) +
           ',' + std::to_string(est.trials) + ',' + std::to_string(est.seed) +
           '\n';
    table.push_back({{"quantity", est.quantity},
                     {"t", est.t},
                     {"spectral_value", exact},
                     {"estimate", est.estimate},
                     {"std_error", est.std_error},
                     {"z", z},
                     {"trials", est.trials},
                     {"seed", est.seed}});
  };

  for (double t : times) {
    if (want_cov)
      add_row(estimate_cov(chain, *f, t, sopts.trials, opts.seed),
              spectral_cov(t));
    if (want_return)
      add_row(estimate_return_prob(chain, t, sopts.trials, opts.seed),
              spectral_return(t));
  }

  json report = {{"chain", chain_summary_json(chain, dec)},
                 {"estimates", std::move(table)},
                 {"worst_z", worst_z},
                 {"tripwire", tripped}};
  if (!opts.out.empty()) {
    write_text_file(opts.out + ".json", report.dump(2) + "\n");
    write_text_file(opts.out + ".csv", csv);
  } else if (opts.format == "csv") {
    std::cout << csv;
  } else {
    std::cout << report.dump(2) << "\n";
  }

  if (tripped) {
    emit_error("ZScoreTripwire",
               "Monte Carlo estimate disagrees with the spectral value",
               "worst z = " + format_double(worst_z));
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const CommonOpts& opts) {
  Chain chain = load_chain(opts.chain_path);
  std::string text = chain_to_json(chain).dump(2) + "\n";
  write_or_print(opts.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral noise sensitivity toolkit for reversible "
               "continuous-time Markov chains"};
  app.require_subcommand(1);

  CommonOpts opts;
  SweepOpts sweep_opts;
  BottleneckOpts bottleneck_opts;
  StabilityOpts stability_opts;
  LocalizeOpts localize_opts;
  SimulateOpts simulate_opts;

  auto add_common = [&](CLI::App* cmd, bool chain_required) {
    auto* chain_opt =
        cmd->add_option("--chain", opts.chain_path, "Chain spec JSON file");
    if (chain_required) chain_opt->required();
    cmd->add_option("--out", opts.out, "Output path (or prefix)");
    cmd->add_option("--format", opts.format, "Stdout format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->each([&](const std::string&) { opts.format_set = true; });
    cmd->add_option("--threads", opts.threads, "OpenMP thread count");
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opts.seed, "RNG seed (required)")
        ->each([&](const std::string&) { opts.seed_set = true; });
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Spectral report, curves, band masses for a chain");
  add_common(analyze, true);
  analyze->add_option("--function", opts.function_paths,
                      "Function spec JSON file (repeatable)");
  analyze->add_option("--alphas", opts.alphas_flag,
                      "Comma-separated ascending alpha grid");
  analyze->add_option("--k", opts.ks, "Band-mass multipliers");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Per-n diagnostics CSV across a family size range");
  add_common(sweep, false);
  sweep->add_option("--family", sweep_opts.family, "Family name")->required();
  sweep->add_option("--n-min", sweep_opts.n_min, "Smallest n")->required();
  sweep->add_option("--n-max", sweep_opts.n_max, "Largest n")->required();
  sweep->add_option("--k-param", sweep_opts.k_param,
                    "Family k parameter (slice_exclusion)");
  sweep->add_option("--function", opts.function_paths,
                    "Function spec applied at every n (repeatable)");
  sweep->add_option("--k", opts.ks, "Band-mass multipliers");

  CLI::App* bottleneck = app.add_subcommand(
      "bottleneck", "Minimal-conductance cut report or family table");
  add_common(bottleneck, false);
  bottleneck->add_flag("--exact", bottleneck_opts.exact,
                       "Exact enumeration (default)");
  bottleneck->add_flag("--sweep", bottleneck_opts.sweep,
                       "Eigenvector sweep cut upper bound");
  bottleneck->add_flag("--restricted", bottleneck_opts.restricted,
                       "Restricted minimizer over pi(A) in (1/4, 1/2]");
  bottleneck->add_option("--family", bottleneck_opts.family,
                         "Family sweep table instead of a single chain");
  bottleneck->add_option("--n-min", bottleneck_opts.n_min, "Smallest n");
  bottleneck->add_option("--n-max", bottleneck_opts.n_max, "Largest n");
  bottleneck->add_option("--k-param", bottleneck_opts.k_param,
                         "Family k parameter (slice_exclusion)");

  CLI::App* stability = app.add_subcommand(
      "stability", "Threshold sweep and band concentration probe");
  add_common(stability, true);
  add_seed(stability);
  stability->add_option("--k", stability_opts.band_k,
                        "Band edge multiplier k (subspace up to k*lambda_1)");
  stability->add_option("--delta", stability_opts.delta,
                        "Admissibility level delta");
  stability->add_option("--g-exponent", stability_opts.g_exponent,
                        "Interval statistic exponent g");
  stability->add_option("--eps", stability_opts.eps,
                        "Concentration probe threshold epsilon");
  stability->add_option("--budget", stability_opts.budget,
                        "Probe restarts / grid points");
  stability->add_option("--alphas", opts.alphas_flag,
                        "Comma-separated ascending alpha grid");

  CLI::App* localize = app.add_subcommand(
      "localize", "Eigenvector / band mass localization report");
  add_common(localize, true);
  localize->add_option("--band", localize_opts.band, "Band index (default 1)");
  localize->add_option("--eigen", localize_opts.eigen_index,
                       "Single eigenvector index instead of a band");
  localize->add_option("--delta", localize_opts.deltas,
                       "Mass fractions 1-delta to cover (repeatable)");
  localize->add_option("--norm", localize_opts.norm, "Amplitude weighting")
      ->check(CLI::IsMember({"pi", "counting"}));

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo estimates vs spectral values");
  add_common(simulate, true);
  add_seed(simulate);
  simulate->add_option("--function", opts.function_paths,
                       "Function spec for covariance estimation");
  simulate->add_option("--quantity", simulate_opts.quantity,
                       "covariance | return_probability | both");
  simulate->add_option("--t", simulate_opts.times_flag,
                       "Comma-separated times (default: relaxation time)");
  simulate->add_option("--trials", simulate_opts.trials, "Trials per estimate");

  CLI::App* exporter = app.add_subcommand(
      "export", "Write the canonical explicit chain JSON");
  add_common(exporter, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    emit_error("InvalidParams", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(opts);
    if (app.got_subcommand(sweep)) return cmd_sweep(opts, sweep_opts);
    if (app.got_subcommand(bottleneck))
      return cmd_bottleneck(opts, bottleneck_opts);
    if (app.got_subcommand(stability)) return cmd_stability(opts, stability_opts);
    if (app.got_subcommand(localize)) return cmd_localize(opts, localize_opts);
    if (app.got_subcommand(simulate)) return cmd_simulate(opts, simulate_opts);
    if (app.got_subcommand(exporter)) return cmd_export(opts);
  } catch (const specnoise::Error& e) {
    emit_error(e.code(), e.what(), e.context());
    return 2;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return 2;
  }
  return 0;
}
