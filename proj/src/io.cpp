#include "kacsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kacsim/errors.hpp"

namespace kacsim {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config key '") + key + "': " + e.what());
  }
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config key '") + key + "': " + e.what());
  }
}

KernelSpec kernel_from_json_obj(const json& j) {
  if (j.contains("preset")) return KernelSpec::preset(j.at("preset").get<std::string>());
  const std::string law = require<std::string>(j, "law");
  const std::string label = value_or<std::string>(j, "label", "");
  if (law == "deterministic") {
    auto spec = KernelSpec::deterministic(require<std::vector<double>>(j, "atoms"), label);
    if (j.contains("n_children") && require<int>(j, "n_children") != spec.n_children)
      throw ConfigError("kernel: n_children does not match atoms length");
    return spec;
  }
  if (law == "discrete_mixture") {
    std::vector<MixtureAtom> atoms;
    for (const json& a : require<json>(j, "mixture")) {
      MixtureAtom atom;
      atom.probability = require<double>(a, "p");
      atom.weights = require<std::vector<double>>(a, "atom");
      atoms.push_back(std::move(atom));
    }
    return KernelSpec::discrete_mixture(std::move(atoms), label);
  }
  if (law == "independent") {
    std::vector<MarginalSpec> marginals;
    for (const json& m : require<json>(j, "marginals")) {
      MarginalSpec spec;
      const std::string kind = require<std::string>(m, "kind");
      if (kind == "constant") {
        spec.kind = MarginalKind::Constant;
        spec.a = require<double>(m, "c");
      } else if (kind == "uniform_pow") {
        spec.kind = MarginalKind::Uniform01Power;
        spec.a = require<double>(m, "p");
      } else if (kind == "complement_uniform_pow") {
        spec.kind = MarginalKind::ComplementUniformPower;
        spec.a = require<double>(m, "p");
        spec.partner = require<int>(m, "partner");
      } else if (kind == "beta") {
        spec.kind = MarginalKind::Beta;
        spec.a = require<double>(m, "a");
        spec.b = require<double>(m, "b");
      } else {
        throw ConfigError("kernel: unknown marginal kind " + kind);
      }
      marginals.push_back(spec);
    }
    return KernelSpec::independent(std::move(marginals), label);
  }
  throw ConfigError("kernel: unknown law " + law);
}

json kernel_to_json_obj(const KernelSpec& spec) {
  json j;
  j["n_children"] = spec.n_children;
  j["label"] = spec.label;
  switch (spec.law) {
    case KernelLaw::Deterministic:
      j["law"] = "deterministic";
      j["atoms"] = spec.atom;
      break;
    case KernelLaw::DiscreteMixture: {
      j["law"] = "discrete_mixture";
      json atoms = json::array();
      for (const MixtureAtom& a : spec.mixture)
        atoms.push_back({{"p", a.probability}, {"atom", a.weights}});
      j["mixture"] = atoms;
      break;
    }
    case KernelLaw::IndependentComponents: {
      j["law"] = "independent";
      json ms = json::array();
      for (const MarginalSpec& m : spec.marginals) {
        switch (m.kind) {
          case MarginalKind::Constant:
            ms.push_back({{"kind", "constant"}, {"c", m.a}});
            break;
          case MarginalKind::Uniform01Power:
            ms.push_back({{"kind", "uniform_pow"}, {"p", m.a}});
            break;
          case MarginalKind::ComplementUniformPower:
            ms.push_back({{"kind", "complement_uniform_pow"}, {"p", m.a}, {"partner", m.partner}});
            break;
          case MarginalKind::Beta:
            ms.push_back({{"kind", "beta"}, {"a", m.a}, {"b", m.b}});
            break;
        }
      }
      j["marginals"] = ms;
      break;
    }
  }
  return j;
}

InitialLaw law_from_json_obj(const json& j) {
  const std::string family = require<std::string>(j, "family");
  if (family == "gaussian") return InitialLaw::gaussian(value_or<double>(j, "sigma0", 1.0));
  if (family == "point_mass") return InitialLaw::point_mass(require<double>(j, "m0"));
  if (family == "rademacher") return InitialLaw::rademacher();
  if (family == "symmetric_pareto")
    return InitialLaw::symmetric_pareto(require<double>(j, "gamma"), require<double>(j, "c0"));
  if (family == "skew_pareto")
    return InitialLaw::skew_pareto(require<double>(j, "gamma"), require<double>(j, "c0_plus"),
                                   require<double>(j, "c0_minus"));
  throw ConfigError("initial law: unknown family " + family);
}

json law_to_json_obj(const InitialLaw& law) {
  switch (law.family) {
    case LawFamily::Gaussian:
      return {{"family", "gaussian"}, {"sigma0", law.sigma0}};
    case LawFamily::PointMass:
      return {{"family", "point_mass"}, {"m0", law.m0}};
    case LawFamily::Rademacher:
      return {{"family", "rademacher"}};
    case LawFamily::SymmetricPareto:
      return {{"family", "symmetric_pareto"}, {"gamma", law.gamma}, {"c0", law.c0_plus}};
    case LawFamily::SkewPareto:
      return {{"family", "skew_pareto"},
              {"gamma", law.gamma},
              {"c0_plus", law.c0_plus},
              {"c0_minus", law.c0_minus}};
  }
  throw ConfigError("initial law: unknown family");
}

}  // namespace

KernelSpec kernel_from_json(const std::string& text) { return kernel_from_json_obj(parse(text)); }
std::string kernel_to_json(const KernelSpec& spec) { return kernel_to_json_obj(spec).dump(); }

InitialLaw law_from_json(const std::string& text) { return law_from_json_obj(parse(text)); }
std::string law_to_json(const InitialLaw& law) { return law_to_json_obj(law).dump(); }

std::string validation_report_to_json(const ValidationReport& report) {
  json j;
  j["passed"] = report.passed;
  j["method"] = report.method;
  json conds = json::array();
  for (const ConditionResult& c : report.conditions)
    conds.push_back({{"condition", c.name}, {"passed", c.passed}, {"value", c.value}});
  j["conditions"] = conds;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_batch_csv(const std::string& path, const SampleBatch& batch) {
  std::ostringstream ss;
  ss << "value\n";
  for (double v : batch.values) ss << format_double(v) << "\n";
  write_text(path, ss.str());

  json meta;
  meta["t"] = batch.t;
  meta["t_is_infinity"] = batch.t_is_infinity;
  if (batch.rescale_gamma) meta["rescale_gamma"] = *batch.rescale_gamma;
  meta["seed"] = batch.seed;
  meta["kernel_label"] = batch.kernel_label;
  meta["law_label"] = batch.law_label;
  meta["count"] = batch.values.size();
  write_text(path + ".meta.json", meta.dump(2) + "\n");
}

SampleBatch read_batch_csv(const std::string& path) {
  SampleBatch batch;
  std::istringstream in(read_text(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    batch.values.push_back(std::stod(line));
  }
  std::ifstream meta(path + ".meta.json");
  if (meta) {
    json m = json::parse(meta, nullptr, false);
    if (!m.is_discarded()) {
      batch.t = m.value("t", 0.0);
      batch.t_is_infinity = m.value("t_is_infinity", false);
      if (m.contains("rescale_gamma")) batch.rescale_gamma = m["rescale_gamma"].get<double>();
      batch.seed = m.value("seed", std::uint64_t{0});
      batch.kernel_label = m.value("kernel_label", "");
      batch.law_label = m.value("law_label", "");
    }
  }
  return batch;
}

void write_mixing_csv(const std::string& path, const MixingLaw& mixing) {
  std::ostringstream ss;
  ss << "y\n";
  for (double v : mixing.population) ss << format_double(v) << "\n";
  write_text(path, ss.str());

  json meta;
  meta["gamma"] = mixing.gamma;
  meta["kernel_label"] = mixing.kernel_label;
  meta["sweeps_run"] = mixing.sweeps_run;
  meta["converged"] = mixing.converged;
  meta["final_update_distance"] = mixing.final_update_distance;
  write_text(path + ".meta.json", meta.dump(2) + "\n");
}

MixingLaw read_mixing_csv(const std::string& path) {
  MixingLaw mixing;
  std::istringstream in(read_text(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    mixing.population.push_back(std::stod(line));
  }
  std::ifstream meta(path + ".meta.json");
  if (meta) {
    json m = json::parse(meta, nullptr, false);
    if (!m.is_discarded()) {
      mixing.gamma = m.value("gamma", 0.0);
      mixing.kernel_label = m.value("kernel_label", "");
      mixing.sweeps_run = m.value("sweeps_run", 0);
      mixing.converged = m.value("converged", false);
      mixing.final_update_distance = m.value("final_update_distance", 0.0);
    }
  }
  return mixing;
}

void write_tree_stats_csv(const std::string& path, const std::vector<TreeStatsRow>& rows,
                          int n_children) {
  std::ostringstream ss;
  ss << "size,M,M_tilde,beta_max";
  for (int j = 1; j <= n_children; ++j) ss << ",i_" << j;
  ss << "\n";
  for (const TreeStatsRow& row : rows) {
    ss << row.size << "," << format_double(row.M) << "," << format_double(row.M_tilde) << ","
       << format_double(row.beta_max);
    for (std::int64_t s : row.subtree_sizes) ss << "," << s;
    ss << "\n";
  }
  write_text(path, ss.str());
}

const char* library_version() { return "0.1.0"; }

}  // namespace kacsim
