// kacsim command-line runner. Parses a JSON scenario file, drives the shared
// library through its C API, and writes CSV/JSON outputs plus a run manifest.
//
// Exit codes: 0 ok, 2 config error, 3 hypothesis-validation failure,
// 4 numeric/convergence failure.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kacsim.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitNumeric = 4;

struct CliError {
  int exit_code;
  std::string message;
};

int status_exit_code(ks_status status) {
  switch (status) {
    case KS_OK:
      return kExitOk;
    case KS_ERR_CONFIG:
    case KS_ERR_UNSUPPORTED:
    case KS_ERR_IO:
      return kExitConfig;
    case KS_ERR_HYPOTHESIS:
      return kExitHypothesis;
    default:
      return kExitNumeric;
  }
}

void check(ks_status status, const std::string& context) {
  if (status != KS_OK)
    throw CliError{status_exit_code(status), context + ": " + ks_last_error()};
}

// RAII wrappers over the opaque handles.
using KernelPtr = std::unique_ptr<ks_kernel, decltype(&ks_kernel_free)>;
using LawPtr = std::unique_ptr<ks_law, decltype(&ks_law_free)>;
using ProfilePtr = std::unique_ptr<ks_profile, decltype(&ks_profile_free)>;
using BatchPtr = std::unique_ptr<ks_batch, decltype(&ks_batch_free)>;
using MixingPtr = std::unique_ptr<ks_mixing, decltype(&ks_mixing_free)>;

struct Scenario {
  json raw;
  std::string canonical;
  KernelPtr kernel{nullptr, ks_kernel_free};
  LawPtr initial{nullptr, ks_law_free};
  double gamma = 1.0;
  std::vector<double> times;
  std::vector<std::int64_t> counts;
  std::optional<double> delta;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  std::int64_t pop_size = 100000;
  int max_sweeps = 200;
  double mixing_tol = 1e-3;
  int workers = 0;
  int wild_truncation = 12;
  std::vector<double> xi_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  double degenerate_threshold = 3.0;
  std::int64_t tree_size = 100;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitConfig, "cannot open config file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override,
                       std::optional<std::int64_t> count_override,
                       std::optional<std::string> outdir_override) {
  Scenario sc;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw CliError{kExitConfig, std::string("invalid scenario JSON: ") + e.what()};
  }
  if (!j.contains("kernel")) throw CliError{kExitConfig, "scenario: missing 'kernel'"};

  ks_kernel* kernel = nullptr;
  check(ks_kernel_from_json(j["kernel"].dump().c_str(), &kernel), "kernel");
  sc.kernel.reset(kernel);

  if (j.contains("initial")) {
    ks_law* law = nullptr;
    check(ks_law_from_json(j["initial"].dump().c_str(), &law), "initial law");
    sc.initial.reset(law);
  }

  sc.gamma = j.value("gamma", 1.0);
  sc.times = j.value("times", std::vector<double>{});
  for (std::size_t i = 1; i < sc.times.size(); ++i)
    if (!(sc.times[i] > sc.times[i - 1]))
      throw CliError{kExitConfig, "scenario: times must be strictly increasing"};
  if (j.contains("counts"))
    sc.counts = j["counts"].get<std::vector<std::int64_t>>();
  else
    sc.counts.assign(std::max<std::size_t>(sc.times.size(), 1),
                     j.value("count", std::int64_t{10000}));
  if (!sc.times.empty() && sc.counts.size() != sc.times.size()) {
    if (sc.counts.size() == 1)
      sc.counts.assign(sc.times.size(), sc.counts.front());
    else
      throw CliError{kExitConfig, "scenario: counts length must match times"};
  }
  for (std::int64_t c : sc.counts)
    if (c < 1) throw CliError{kExitConfig, "scenario: counts must be >= 1"};
  if (j.contains("delta")) sc.delta = j["delta"].get<double>();
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.output_dir = j.value("output_dir", std::string{"."});
  sc.pop_size = j.value("pop_size", std::int64_t{100000});
  sc.max_sweeps = j.value("max_sweeps", 200);
  sc.mixing_tol = j.value("mixing_tol", 1e-3);
  sc.workers = j.value("workers", 0);
  sc.wild_truncation = j.value("wild_truncation", 12);
  if (j.contains("xi_grid")) sc.xi_grid = j["xi_grid"].get<std::vector<double>>();
  sc.degenerate_threshold = j.value("degenerate_threshold", 3.0);
  sc.tree_size = j.value("tree_size", std::int64_t{100});

  if (seed_override) {
    sc.seed = *seed_override;
    j["seed"] = sc.seed;
  }
  if (count_override) {
    sc.counts.assign(std::max<std::size_t>(sc.times.size(), 1), *count_override);
    j["counts"] = sc.counts;
  }
  if (outdir_override) {
    sc.output_dir = *outdir_override;
    j["output_dir"] = sc.output_dir;
  }
  sc.raw = j;
  sc.canonical = j.dump(2);
  return sc;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class OutputSink {
 public:
  OutputSink(const Scenario& sc, const std::string& command)
      : dir_(sc.output_dir), command_(command), seed_(sc.seed), hash_(fnv1a(sc.canonical)) {
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) {
    outputs_.push_back(name);
    return (fs::path(dir_) / name).string();
  }

  // Batch/mixing writers drop a metadata sidecar next to the CSV.
  std::string path_with_sidecar(const std::string& name) {
    outputs_.push_back(name);
    outputs_.push_back(name + ".meta.json");
    return (fs::path(dir_) / name).string();
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream out(path(name), std::ios::binary);
    out << j.dump(2) << "\n";
  }

  void finish() {
    json m;
    m["command"] = command_;
    m["seed"] = seed_;
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash_);
    m["config_hash"] = buf;
    m["version"] = ks_version();
    m["outputs"] = outputs_;
    std::ofstream out((fs::path(dir_) / (command_ + ".manifest.json")).string(),
                      std::ios::binary);
    out << m.dump(2) << "\n";
  }

 private:
  std::string dir_;
  std::string command_;
  std::uint64_t seed_;
  std::uint64_t hash_;
  std::vector<std::string> outputs_;
};

const ks_law* require_initial(const Scenario& sc) {
  if (!sc.initial) throw CliError{kExitConfig, "scenario: missing 'initial' law"};
  return sc.initial.get();
}

std::vector<double> batch_vector(const ks_batch* batch) {
  const double* data = nullptr;
  int64_t n = 0;
  check(ks_batch_values(batch, &data, &n), "batch values");
  return std::vector<double>(data, data + n);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const Scenario& sc) {
  OutputSink sink(sc, "validate");
  int passed = 0;
  char* report = nullptr;
  check(ks_kernel_validate(sc.kernel.get(), &passed, &report), "validate");
  std::string report_text = report ? report : "{}";
  ks_string_free(report);
  {
    std::ofstream out(sink.path("validate.report.json"), std::ios::binary);
    out << report_text << "\n";
  }
  sink.finish();
  std::puts(report_text.c_str());
  if (!passed) {
    std::fprintf(stderr, "kernel fails the standing hypotheses\n");
    return kExitHypothesis;
  }
  return kExitOk;
}

int cmd_spectral(const Scenario& sc) {
  OutputSink sink(sc, "spectral");
  std::ostringstream csv;
  csv << "s,S,mu\n";
  const double s_max = 8.0;
  for (int i = 1; i <= 160; ++i) {
    const double s = s_max * i / 160.0;
    double S = 0.0, mu = 0.0;
    check(ks_kernel_spectral(sc.kernel.get(), s, &S, &mu), "spectral");
    csv << s << "," << S << "," << mu << "\n";
  }
  {
    std::ofstream out(sink.path("spectral.csv"), std::ios::binary);
    out << csv.str();
  }
  double q_star = 0.0;
  check(ks_kernel_conjugate_exponent(sc.kernel.get(), sc.gamma, 64.0, &q_star), "q*");
  double S_gamma = 0.0, mu_gamma = 0.0;
  check(ks_kernel_spectral(sc.kernel.get(), sc.gamma, &S_gamma, &mu_gamma), "spectral");
  json summary;
  summary["gamma"] = sc.gamma;
  summary["S_gamma"] = S_gamma;
  summary["mu_gamma"] = mu_gamma;
  summary["q_star"] = std::isfinite(q_star) ? json(q_star) : json("inf");
  sink.write_json("spectral.summary.json", summary);
  sink.finish();
  std::printf("S(%g) = %.12g, mu(%g) = %.12g, q* = %g\n", sc.gamma, S_gamma, sc.gamma, mu_gamma,
              q_star);
  return kExitOk;
}

int cmd_simulate(const Scenario& sc) {
  if (sc.times.empty()) throw CliError{kExitConfig, "simulate: scenario needs 'times'"};
  OutputSink sink(sc, "simulate");
  const ks_law* law = require_initial(sc);
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    ks_batch* batch = nullptr;
    check(ks_sample_batch(sc.seed, sc.kernel.get(), law, sc.times[i], sc.counts[i], sc.gamma,
                          sc.workers, &batch),
          "simulate");
    BatchPtr guard(batch, ks_batch_free);
    char name[64];
    std::snprintf(name, sizeof(name), "simulate.t%zu.csv", i);
    check(ks_batch_write_csv(batch, sink.path_with_sidecar(name).c_str()), "write batch");
    std::printf("t=%g: wrote %s (%" PRId64 " draws)\n", sc.times[i], name, sc.counts[i]);
  }
  sink.finish();
  return kExitOk;
}

MixingPtr solve_scenario_mixing(const Scenario& sc, int form = 0) {
  ks_mixing* mixing = nullptr;
  check(ks_solve_mixing(sc.seed, sc.kernel.get(), sc.gamma, sc.pop_size, sc.max_sweeps,
                        sc.mixing_tol, sc.workers, form, &mixing),
        "solve mixing");
  return MixingPtr(mixing, ks_mixing_free);
}

int cmd_selfsimilar(const Scenario& sc) {
  OutputSink sink(sc, "selfsimilar");
  const ks_law* law = require_initial(sc);

  int exists = 0;
  check(ks_kernel_exists_delta_above(sc.kernel.get(), sc.gamma, &exists), "existence check");
  if (!exists)
    throw CliError{kExitNumeric,
                   "selfsimilar: no delta > gamma with mu(delta) < mu(gamma); "
                   "the nondegenerate limit regime does not apply"};

  ks_profile* profile_raw = nullptr;
  check(ks_law_classify(law, sc.gamma, &profile_raw), "classify");
  ProfilePtr profile(profile_raw, ks_profile_free);

  MixingPtr mixing = solve_scenario_mixing(sc);
  check(ks_mixing_write_csv(mixing.get(), sink.path_with_sidecar("selfsimilar.mixing.csv").c_str()),
        "write mixing");

  const std::int64_t count = sc.counts.front();
  ks_batch* vinf_raw = nullptr;
  check(ks_sample_limit_batch(sc.seed + 1, mixing.get(), profile.get(), count, sc.workers,
                              &vinf_raw),
        "limit batch");
  BatchPtr vinf(vinf_raw, ks_batch_free);
  check(ks_batch_write_csv(vinf.get(), sink.path_with_sidecar("selfsimilar.vinf.csv").c_str()),
        "write limit batch");

  json per_time = json::array();
  std::ostringstream cf_csv;
  cf_csv << "t,xi,re_emp,im_emp,re_limit,im_limit,abs_diff\n";
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    const double t = sc.times[i];
    ks_batch* vt_raw = nullptr;
    check(ks_sample_batch(sc.seed + 2 + i, sc.kernel.get(), law, t, sc.counts[i], sc.gamma,
                          sc.workers, &vt_raw),
          "simulate");
    BatchPtr vt(vt_raw, ks_batch_free);

    double ks_stat = 0.0;
    check(ks_ks_distance_two_sample(vt.get(), vinf.get(), &ks_stat), "two-sample KS");

    for (double xi : sc.xi_grid) {
      double re_emp = 0.0, im_emp = 0.0, re_lim = 0.0, im_lim = 0.0;
      check(ks_empirical_cf(vt.get(), &xi, 1, &re_emp, &im_emp), "empirical cf");
      check(ks_limit_cf(mixing.get(), profile.get(), xi, &re_lim, &im_lim), "limit cf");
      cf_csv << t << "," << xi << "," << re_emp << "," << im_emp << "," << re_lim << ","
             << im_lim << "," << std::hypot(re_emp - re_lim, im_emp - im_lim) << "\n";
    }
    per_time.push_back({{"t", t}, {"ks_vs_vinf", ks_stat}});
    std::printf("t=%g: two-sample KS vs V_inf = %.5f\n", t, ks_stat);
  }
  {
    std::ofstream out(sink.path("selfsimilar.cf.csv"), std::ios::binary);
    out << cf_csv.str();
  }
  int converged = 0, sweeps = 0;
  double final_distance = 0.0;
  check(ks_mixing_info(mixing.get(), &converged, &sweeps, &final_distance), "mixing info");
  json summary;
  summary["mixing_converged"] = converged != 0;
  summary["mixing_sweeps"] = sweeps;
  summary["mixing_final_distance"] = final_distance;
  summary["per_time"] = per_time;
  sink.write_json("selfsimilar.summary.json", summary);
  sink.finish();
  if (!converged) {
    std::fprintf(stderr, "mixing population did not converge\n");
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_degenerate(const Scenario& sc) {
  OutputSink sink(sc, "degenerate");
  const ks_law* law = require_initial(sc);
  json rows = json::array();
  std::ostringstream csv;
  csv << "t,fraction_over_threshold,threshold\n";
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    const double t = sc.times[i];
    ks_batch* raw = nullptr;
    check(ks_sample_batch(sc.seed + i, sc.kernel.get(), law, t, sc.counts[i], sc.gamma,
                          sc.workers, &raw),
          "simulate");
    BatchPtr batch(raw, ks_batch_free);
    const std::vector<double> values = batch_vector(batch.get());
    std::int64_t over = 0;
    for (double v : values)
      if (std::fabs(v) > sc.degenerate_threshold) ++over;
    const double fraction = static_cast<double>(over) / static_cast<double>(values.size());
    csv << t << "," << fraction << "," << sc.degenerate_threshold << "\n";
    rows.push_back({{"t", t}, {"fraction", fraction}});
    std::printf("t=%g: fraction(|V| > %g) = %.4f\n", t, sc.degenerate_threshold, fraction);
  }
  {
    std::ofstream out(sink.path("degenerate.csv"), std::ios::binary);
    out << csv.str();
  }
  sink.write_json("degenerate.summary.json",
                  {{"threshold", sc.degenerate_threshold}, {"rows", rows}});
  sink.finish();
  return kExitOk;
}

int cmd_wild_compare(const Scenario& sc) {
  OutputSink sink(sc, "wild-compare");
  const ks_law* law = require_initial(sc);
  const double t = sc.times.empty() ? 1.0 : sc.times.front();
  const std::int64_t count = sc.counts.front();

  ks_batch* raw = nullptr;
  check(ks_sample_batch(sc.seed, sc.kernel.get(), law, t, count, -1.0, sc.workers, &raw),
        "simulate");
  BatchPtr batch(raw, ks_batch_free);

  std::ostringstream csv;
  csv << "xi,re_wild,im_wild,tail_bound,re_mc,im_mc,abs_diff,bound\n";
  std::ostringstream wild_csv;
  wild_csv << "xi,re,im,tail_bound\n";
  bool all_within = true;
  for (double xi : sc.xi_grid) {
    double re_w = 0.0, im_w = 0.0, tail = 0.0;
    check(ks_wild_solution(sc.kernel.get(), law, t, xi, sc.wild_truncation, &re_w, &im_w, &tail),
          "wild");
    double re_mc = 0.0, im_mc = 0.0;
    check(ks_empirical_cf(batch.get(), &xi, 1, &re_mc, &im_mc), "empirical cf");
    const double diff = std::hypot(re_w - re_mc, im_w - im_mc);
    const double bound = tail + 5.0 / std::sqrt(static_cast<double>(count));
    all_within = all_within && diff <= bound;
    csv << xi << "," << re_w << "," << im_w << "," << tail << "," << re_mc << "," << im_mc << ","
        << diff << "," << bound << "\n";
    wild_csv << xi << "," << re_w << "," << im_w << "," << tail << "\n";
    std::printf("xi=%g: |wild - mc| = %.5f (tail + 5/sqrt(n) = %.5f)\n", xi, diff, bound);
  }
  {
    std::ofstream out(sink.path("wild_compare.csv"), std::ios::binary);
    out << csv.str();
  }
  {
    std::ofstream out(sink.path("wild.csv"), std::ios::binary);
    out << wild_csv.str();
  }
  sink.finish();
  if (!all_within) {
    std::fprintf(stderr, "wild series and Monte Carlo disagree beyond the rigorous bound\n");
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_rate(const Scenario& sc) {
  if (!sc.delta) throw CliError{kExitConfig, "rate: scenario needs 'delta'"};
  if (sc.times.size() < 3) throw CliError{kExitConfig, "rate: need at least 3 times"};
  OutputSink sink(sc, "rate");
  const ks_law* law = require_initial(sc);
  const double delta = *sc.delta;

  ks_profile* profile_raw = nullptr;
  check(ks_law_classify(law, sc.gamma, &profile_raw), "classify");
  ProfilePtr profile(profile_raw, ks_profile_free);

  MixingPtr mixing = solve_scenario_mixing(sc);
  const std::int64_t count = sc.counts.front();

  ks_batch* vinf_raw = nullptr;
  check(ks_sample_limit_batch(sc.seed + 1, mixing.get(), profile.get(), count, sc.workers,
                              &vinf_raw),
        "limit batch");
  BatchPtr vinf(vinf_raw, ks_batch_free);

  // Resolution floor: 3x the same-law coupling cost between two independent
  // V_inf batches.
  ks_batch* vinf2_raw = nullptr;
  check(ks_sample_limit_batch(sc.seed + 2, mixing.get(), profile.get(), count, sc.workers,
                              &vinf2_raw),
        "limit batch");
  BatchPtr vinf2(vinf2_raw, ks_batch_free);
  double floor_cost = 0.0;
  check(ks_wasserstein(vinf.get(), vinf2.get(), delta, nullptr, &floor_cost, nullptr),
        "wasserstein");
  const double resolution_floor = 3.0 * floor_cost;

  std::vector<double> ts, costs;
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    ks_batch* vt_raw = nullptr;
    check(ks_sample_batch(sc.seed + 3 + i, sc.kernel.get(), law, sc.times[i], sc.counts[i],
                          sc.gamma, sc.workers, &vt_raw),
          "simulate");
    BatchPtr vt(vt_raw, ks_batch_free);
    double cost = 0.0;
    check(ks_wasserstein(vt.get(), vinf.get(), delta, nullptr, &cost, nullptr), "wasserstein");
    ts.push_back(sc.times[i]);
    costs.push_back(cost);
    std::printf("t=%g: W_%g^max(delta,1) = %.6g\n", sc.times[i], delta, cost);
  }

  double slope = 0.0, r2 = 0.0, predicted = 0.0;
  int used = 0;
  check(ks_fit_decay_rate(ts.data(), costs.data(), static_cast<int>(ts.size()), sc.kernel.get(),
                          sc.gamma, delta, resolution_floor, &slope, &r2, &predicted, &used),
        "rate fit");

  std::ostringstream csv;
  csv << "t,distance\n";
  for (std::size_t i = 0; i < ts.size(); ++i) csv << ts[i] << "," << costs[i] << "\n";
  {
    std::ofstream out(sink.path("rate.csv"), std::ios::binary);
    out << csv.str();
  }
  json points = json::array();
  for (std::size_t i = 0; i < ts.size(); ++i)
    points.push_back({{"t", ts[i]}, {"distance", costs[i]}});
  json summary;
  summary["points"] = points;
  summary["slope"] = slope;
  summary["predicted_slope"] = predicted;
  summary["r_squared"] = r2;
  summary["resolution_floor"] = resolution_floor;
  summary["used_points"] = used;
  summary["delta"] = delta;
  summary["wasserstein_exact"] = delta >= 1.0;
  sink.write_json("rate.fit.json", summary);
  sink.finish();
  std::printf("fitted slope %.4f (predicted upper-bound exponent %.4f), R^2 = %.4f\n", slope,
              predicted, r2);
  return kExitOk;
}

int cmd_tree_stats(const Scenario& sc) {
  OutputSink sink(sc, "tree-stats");

  // p_k table for the kernel's N, k <= 4.
  char* kjson = nullptr;
  check(ks_kernel_to_json(sc.kernel.get(), &kjson), "kernel json");
  const json kernel_json = json::parse(kjson);
  ks_string_free(kjson);
  const int n_children = kernel_json.value("n_children", 2);

  std::ostringstream csv;
  csv << "k,sizes,p\n";
  for (int k = 1; k <= 4; ++k) {
    // Enumerate compositions of k-1 into n_children parts.
    std::vector<std::int64_t> comp(n_children, 0);
    std::function<void(int, std::int64_t)> rec = [&](int idx, std::int64_t remaining) {
      if (idx == n_children - 1) {
        comp[idx] = remaining;
        double p = 0.0;
        check(ks_tree_shape_probability(n_children, comp.data(), n_children, &p), "shape p");
        csv << k << ",\"";
        for (int j = 0; j < n_children; ++j) csv << (j ? " " : "") << comp[j];
        csv << "\"," << p << "\n";
        return;
      }
      for (std::int64_t v = 0; v <= remaining; ++v) {
        comp[idx] = v;
        rec(idx + 1, remaining - v);
      }
    };
    rec(0, k - 1);
  }
  {
    std::ofstream out(sink.path("tree_shape_probabilities.csv"), std::ios::binary);
    out << csv.str();
  }

  const std::int64_t size = sc.tree_size;
  const std::int64_t count = sc.counts.front();
  double mean_M_tilde = 0.0;
  check(ks_tree_stats_csv(sc.kernel.get(), sc.gamma, size, count, sc.seed, sc.workers,
                          sink.path("tree_stats.csv").c_str(), &mean_M_tilde),
        "tree stats");

  double ks_fraction = 0.0;
  check(ks_tree_subtree_fraction_ks(sc.seed, n_children, std::max<std::int64_t>(size, 2), count,
                                    sc.workers, &ks_fraction),
        "subtree fractions");

  double m_n = 0.0, m_n_asym = 0.0;
  check(ks_tree_weight_norm(sc.kernel.get(), sc.gamma, size, &m_n, &m_n_asym), "weight norm");

  json summary;
  summary["tree_size"] = size;
  summary["count"] = count;
  summary["mean_M_tilde"] = mean_M_tilde;
  summary["m_n"] = m_n;
  summary["m_n_asymptotic"] = m_n_asym;
  summary["subtree_fraction_ks_vs_beta"] = ks_fraction;
  sink.write_json("tree_stats.summary.json", summary);
  sink.finish();
  std::printf("mean M_tilde = %.5f (expect ~1), subtree-fraction KS = %.5f\n", mean_M_tilde,
              ks_fraction);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kacsim: sampling and verification for Kac-type kinetic equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> count_override;
  std::optional<std::string> outdir_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario JSON file")->required();
    cmd->add_option("--seed", seed_override, "override the scenario seed");
    cmd->add_option("--count", count_override, "override all sample counts");
    cmd->add_option("--out", outdir_override, "override the output directory");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the standing kernel hypotheses");
  CLI::App* spectral = app.add_subcommand("spectral", "S/mu grid and conjugate exponent");
  CLI::App* simulate = app.add_subcommand("simulate", "sample rescaled V_t batches");
  CLI::App* selfsimilar =
      app.add_subcommand("selfsimilar", "mixing law, V_inf sampling, KS/CF comparisons");
  CLI::App* degenerate = app.add_subcommand("degenerate", "shrinkage check under e^{-mu t}");
  CLI::App* wild = app.add_subcommand("wild-compare", "Monte Carlo vs truncated Wild series");
  CLI::App* rate = app.add_subcommand("rate", "Wasserstein decay-rate fit");
  CLI::App* tree_stats = app.add_subcommand("tree-stats", "shape law and weight statistics");
  for (CLI::App* cmd : {validate, spectral, simulate, selfsimilar, degenerate, wild, rate,
                        tree_stats})
    add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Scenario sc =
        load_scenario(config_path, seed_override, count_override, outdir_override);
    if (validate->parsed()) return cmd_validate(sc);
    if (spectral->parsed()) return cmd_spectral(sc);
    if (simulate->parsed()) return cmd_simulate(sc);
    if (selfsimilar->parsed()) return cmd_selfsimilar(sc);
    if (degenerate->parsed()) return cmd_degenerate(sc);
    if (wild->parsed()) return cmd_wild_compare(sc);
    if (rate->parsed()) return cmd_rate(sc);
    if (tree_stats->parsed()) return cmd_tree_stats(sc);
    std::fprintf(stderr, "unknown command\n");
    return kExitConfig;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}
