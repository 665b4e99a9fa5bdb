#include "hwsnkey/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hwsnkey/attack.hpp"
#include "hwsnkey/connectivity.hpp"
#include "hwsnkey/error.hpp"
#include "hwsnkey/prf.hpp"

namespace hwsnkey {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError(field(key) + ": unknown field");
      }
    }
  }

  bool has(std::string_view key) const { return obj_.contains(key); }
  const json& raw(std::string_view key) const { return obj_.at(std::string(key)); }
  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  template <std::unsigned_integral T>
  void read(std::string_view key, T& out) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(field(key) + ": expected a non-negative integer");
    }
    out = v.get<T>();
  }
  void read(std::string_view key, double& out) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    out = v.get<double>();
  }
  void read(std::string_view key, std::string& out) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    out = v.get<std::string>();
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
};

DeploymentConfig read_deployment(const Reader& r) {
  r.allow({"field_side", "groups_per_side", "sensors_per_group", "radio_range_sensor",
           "radio_range_head", "head_placement_jitter", "base_station", "seed"});
  DeploymentConfig d;
  r.read("field_side", d.field_side);
  r.read("groups_per_side", d.groups_per_side);
  r.read("sensors_per_group", d.sensors_per_group);
  r.read("radio_range_sensor", d.radio_range_sensor);
  r.read("radio_range_head", d.radio_range_head);
  r.read("head_placement_jitter", d.head_placement_jitter);
  std::string bs = "corner";
  r.read("base_station", bs);
  if (bs == "corner") {
    d.base_station = BaseStationPlacement::Corner;
  } else if (bs == "center") {
    d.base_station = BaseStationPlacement::Center;
  } else {
    throw ConfigError(r.field("base_station") + ": expected \"corner\" or \"center\"");
  }
  if (r.has("seed")) throw ConfigError(r.field("seed") + ": set the top-level seed instead");
  return d;
}

FieldParams read_field(const Reader& r) {
  std::uint64_t q = kMersenne61;
  if (r.has("q")) {
    const auto& v = r.raw("q");
    if (!v.is_number_unsigned()) throw ConfigError(r.field("q") + ": expected a prime integer");
    q = v.get<std::uint64_t>();
  }
  try {
    return FieldParams(q);
  } catch (const ConfigError& e) {
    throw ConfigError(r.field("q") + ": " + e.what());
  }
}

SchemeParams read_scheme(const Reader& r) {
  r.allow({"m", "m_prime", "t", "q"});
  SchemeParams s;
  r.read("m", s.m);
  r.read("m_prime", s.m_prime);
  r.read("t", s.t);
  s.field = read_field(r);
  return s;
}

BaselineParams read_baseline(const Reader& r, BaselineScheme scheme) {
  r.allow({"pool_size", "m", "q_threshold", "t", "p", "q"});
  BaselineParams b;
  b.scheme = scheme;
  r.read("pool_size", b.pool_size);
  r.read("m", b.m);
  r.read("q_threshold", b.q_threshold);
  r.read("t", b.t);
  r.read("p", b.p);
  b.field = read_field(r);
  return b;
}

Sweep read_sweep(const Reader& r) {
  r.allow({"parameter", "values"});
  Sweep s;
  if (!r.has("parameter")) throw ConfigError(r.field("parameter") + ": required");
  r.read("parameter", s.parameter);
  if (!r.has("values") || !r.raw("values").is_array()) {
    throw ConfigError(r.field("values") + ": expected an array of numbers");
  }
  std::size_t i = 0;
  for (const auto& v : r.raw("values")) {
    if (!v.is_number()) {
      throw ConfigError(r.field("values") + "[" + std::to_string(i) + "]: expected a number");
    }
    s.values.push_back(v.get<double>());
    ++i;
  }
  return s;
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  if (name == "connectivity") return ExperimentKind::Connectivity;
  if (name == "resilience") return ExperimentKind::Resilience;
  if (name == "head_capture") return ExperimentKind::HeadCapture;
  return std::nullopt;
}

json field_json(const FieldParams& f) { return f.modulus(); }

json sweep_json(const Sweep& s) { return {{"parameter", s.parameter}, {"values", s.values}}; }

json config_json(const ExperimentConfig& cfg) {
  const auto& d = cfg.deployment;
  json j;
  j["name"] = cfg.name;
  j["experiment"] = std::string(to_string(cfg.kind));
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["output_dir"] = cfg.output_dir;
  j["misdeploy_fraction"] = cfg.misdeploy_fraction;
  j["deployment"] = {
      {"field_side", d.field_side},
      {"groups_per_side", d.groups_per_side},
      {"sensors_per_group", d.sensors_per_group},
      {"radio_range_sensor", d.radio_range_sensor},
      {"radio_range_head", d.radio_range_head},
      {"head_placement_jitter", d.head_placement_jitter},
      {"base_station", d.base_station == BaseStationPlacement::Corner ? "corner" : "center"}};
  j["scheme"] = {{"m", cfg.scheme.m},
                 {"m_prime", cfg.scheme.m_prime},
                 {"t", cfg.scheme.t},
                 {"q", field_json(cfg.scheme.field)}};
  j["schemes"] = cfg.schemes;
  json baselines = json::object();
  for (const auto& b : cfg.baselines) {
    baselines[std::string(to_string(b.scheme))] = {{"pool_size", b.pool_size},
                                                   {"m", b.m},
                                                   {"q_threshold", b.q_threshold},
                                                   {"t", b.t},
                                                   {"p", b.p},
                                                   {"q", field_json(b.field)}};
  }
  j["baselines"] = baselines;
  j["sweep"] = sweep_json(cfg.sweep);
  if (cfg.series) j["series"] = sweep_json(*cfg.series);
  return j;
}

bool is_integral(double v) { return std::isfinite(v) && v >= 0.0 && std::floor(v) == v; }

struct SweepPoint {
  DeploymentConfig deployment;
  SchemeParams scheme;
};

void apply(SweepPoint& p, std::string_view parameter, double value) {
  const auto n = static_cast<std::size_t>(value);
  if (parameter == "n_i") {
    p.deployment.sensors_per_group = n;
  } else if (parameter == "m") {
    p.scheme.m = n;
  } else if (parameter == "m_prime") {
    p.scheme.m_prime = n;
  }
}

std::string describe(const SweepPoint& p, std::string_view skip) {
  std::ostringstream os;
  bool first = true;
  auto put = [&](std::string_view k, std::size_t v) {
    if (k == skip) return;
    if (!first) os << ';';
    os << k << '=' << v;
    first = false;
  };
  put("n_i", p.deployment.sensors_per_group);
  put("m", p.scheme.m);
  put("m_prime", p.scheme.m_prime);
  put("groups", p.deployment.group_count());
  return os.str();
}

class Accumulator {
 public:
  void add(double v, double within_stderr = kNaN) {
    values_.push_back(v);
    within_ = within_stderr;
  }
  std::size_t count() const { return values_.size(); }
  double mean() const {
    if (values_.empty()) return kNaN;
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }
  double std_error() const {
    const auto n = values_.size();
    if (n == 0) return kNaN;
    if (n == 1) return within_;
    const double mu = mean();
    double ss = 0.0;
    for (double v : values_) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }

 private:
  std::vector<double> values_;
  double within_ = kNaN;
};

DeploymentConfig trial_deployment(const ExperimentConfig& cfg, const DeploymentConfig& base,
                                  std::size_t trial) {
  DeploymentConfig d = base;
  d.seed = derive_seed(cfg.seed, "experiment.deployment", trial);
  return d;
}

void connectivity_rows(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  std::vector<std::optional<double>> outer{std::nullopt};
  if (cfg.series) outer.assign(cfg.series->values.begin(), cfg.series->values.end());

  static constexpr std::string_view kMetrics[] = {
      "p1", "p2", "p_sensor_sensor", "p_grouphead_sensor", "p_grouphead_grouphead",
      "p_overall", "p_overall_raw", "mean_degree", "mean_head_degree"};

  for (const auto& s : outer) {
    for (double x : cfg.sweep.values) {
      SweepPoint p{cfg.deployment, cfg.scheme};
      if (s) apply(p, cfg.series->parameter, *s);
      apply(p, cfg.sweep.parameter, x);

      std::map<std::string_view, Accumulator> acc;
      auto add = [&](std::string_view metric, const std::optional<Estimate>& e) {
        if (e) acc[metric].add(e->mean, e->std_error);
      };
      for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Deployment dep = deploy(trial_deployment(cfg, p.deployment, trial),
                                      cfg.misdeploy_fraction);
        const AdjacencyGraph graph = discover_neighbors(dep);
        Rng rng(cfg.seed, "experiment.keys", trial);
        NetworkState state = predistribute(dep, p.scheme, rng, false);
        run_establishment(state, dep, graph, rng);
        const auto rep = connectivity_simulate(state, dep, graph);
        add("p1", rep.sim_p1);
        add("p2", rep.sim_p2);
        add("p_sensor_sensor", rep.sim_sensor_sensor);
        add("p_grouphead_sensor", rep.sim_grouphead_sensor);
        add("p_grouphead_grouphead", rep.sim_grouphead_grouphead);
        add("p_overall", rep.sim_overall);
        add("p_overall_raw", rep.sim_overall);
        acc["mean_degree"].add(rep.mean_degree);
        acc["mean_head_degree"].add(rep.mean_head_degree);
      }

      const auto cf = connectivity_closed_form(p.deployment.sensors_per_group, p.scheme.m,
                                               p.scheme.m_prime);
      const std::map<std::string_view, double> analytical{
          {"p1", cf.p1},
          {"p2", cf.p2},
          {"p_sensor_sensor", cf.p_sensor_sensor},
          {"p_grouphead_sensor", cf.p_grouphead_sensor},
          {"p_grouphead_grouphead", cf.p_grouphead_grouphead},
          {"p_overall", cf.p_overall},
          {"p_overall_raw", cf.p_overall_raw},
          {"mean_degree", kNaN},
          {"mean_head_degree", kNaN}};
      const std::string params = describe(p, cfg.sweep.parameter);
      for (auto metric : kMetrics) {
        const auto& a = acc[metric];
        rows.push_back({"proposed", std::string(metric), cfg.sweep.parameter, x, params,
                        analytical.at(metric), a.mean(), a.std_error(), a.count()});
      }
    }
  }
}

double resilience_analytical(std::string_view scheme, const ExperimentConfig& cfg,
                             std::size_t c) {
  if (scheme == "proposed" || scheme == "lekm" || scheme == "ikdm") return 0.0;
  const auto b = parse_baseline_scheme(scheme);
  switch (*b) {
    case BaselineScheme::EG: {
      const auto bp = cfg.baseline(*b);
      return eg_compromise_oracle(bp.m, bp.pool_size, c);
    }
    case BaselineScheme::Blundo:
      return c > cfg.baseline(*b).t ? 1.0 : 0.0;
    case BaselineScheme::RandomPairwise:
      return 0.0;
    case BaselineScheme::QComposite:
      break;
  }
  return kNaN;
}

std::string baseline_params(const BaselineParams& b, std::size_t groups, std::size_t n_i) {
  std::ostringstream os;
  os << "n_i=" << n_i << ";groups=" << groups;
  switch (b.scheme) {
    case BaselineScheme::EG:
      os << ";m=" << b.m << ";M=" << b.pool_size;
      break;
    case BaselineScheme::QComposite:
      os << ";m=" << b.m << ";M=" << b.pool_size << ";q=" << b.q_threshold;
      break;
    case BaselineScheme::Blundo:
      os << ";t=" << b.t;
      break;
    case BaselineScheme::RandomPairwise:
      os << ";m=" << b.m << ";p=" << format_number(b.p);
      break;
  }
  return os.str();
}

void resilience_rows(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  // acc[scheme][sweep index]
  std::map<std::string, std::vector<Accumulator>> acc;
  const auto& cs = cfg.sweep.values;
  const bool simulate_any = std::any_of(cfg.schemes.begin(), cfg.schemes.end(), [](auto& s) {
    return s != "lekm" && s != "ikdm";
  });

  for (std::size_t trial = 0; simulate_any && trial < cfg.trials; ++trial) {
    const Deployment dep = deploy(trial_deployment(cfg, cfg.deployment, trial),
                                  cfg.misdeploy_fraction);
    const AdjacencyGraph graph = discover_neighbors(dep);
    const std::uint64_t attack_seed = derive_seed(cfg.seed, "experiment.attack", trial);
    for (const auto& name : cfg.schemes) {
      auto& slots = acc[name];
      slots.resize(cs.size());
      auto measure = [&](auto&& network) {
        for (std::size_t i = 0; i < cs.size(); ++i) {
          AttackSpec spec;
          spec.target = CaptureTarget::RegularSensors;
          spec.captured = static_cast<std::size_t>(cs[i]);
          spec.trials = 1;
          spec.seed = attack_seed;
          const auto rep = capture_and_measure(network, dep, spec);
          slots[i].add(rep.per_trial.front());
        }
      };
      if (name == "proposed") {
        Rng rng(cfg.seed, "experiment.keys", trial);
        NetworkState state = predistribute(dep, cfg.scheme, rng, false);
        run_establishment(state, dep, graph, rng);
        measure(state);
      } else if (const auto b = parse_baseline_scheme(name)) {
        Rng rng(cfg.seed, "experiment.baseline." + name, trial);
        measure(baseline_predistribute(cfg.baseline(*b), dep, graph, rng));
      }
    }
  }

  const std::string proposed_params =
      describe(SweepPoint{cfg.deployment, cfg.scheme}, cfg.sweep.parameter);
  for (const auto& name : cfg.schemes) {
    std::string params = proposed_params;
    if (const auto b = parse_baseline_scheme(name)) {
      params = baseline_params(cfg.baseline(*b), cfg.deployment.group_count(),
                               cfg.deployment.sensors_per_group);
    } else if (name == "lekm" || name == "ikdm") {
      params = "clusters=100;sensors_per_cluster=100";
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto c = static_cast<std::size_t>(cs[i]);
      ResultRow row{name, "fraction_compromised", cfg.sweep.parameter, cs[i], params,
                    resilience_analytical(name, cfg, c), kNaN, kNaN, 0};
      if (auto it = acc.find(name); it != acc.end()) {
        row.simulated = it->second[i].mean();
        row.std_error = it->second[i].std_error();
        row.trials = it->second[i].count();
      }
      rows.push_back(std::move(row));
    }
  }
}

void head_capture_rows(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  const auto& cs = cfg.sweep.values;
  std::vector<Accumulator> sensor_keys(cs.size()), head_keys(cs.size()), fraction(cs.size());
  const bool proposed =
      std::find(cfg.schemes.begin(), cfg.schemes.end(), "proposed") != cfg.schemes.end();

  for (std::size_t trial = 0; proposed && trial < cfg.trials; ++trial) {
    const Deployment dep = deploy(trial_deployment(cfg, cfg.deployment, trial),
                                  cfg.misdeploy_fraction);
    Rng rng(cfg.seed, "experiment.keys", trial);
    const NetworkState state = predistribute(dep, cfg.scheme, rng, false);
    const std::uint64_t attack_seed = derive_seed(cfg.seed, "experiment.attack", trial);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto rep = head_capture_initialization(state, dep, static_cast<std::size_t>(cs[i]),
                                                   1, attack_seed);
      sensor_keys[i].add(*rep.sensor_keys_exposed);
      head_keys[i].add(*rep.head_incident_keys_exposed);
      fraction[i].add(rep.per_trial.front());
    }
  }

  const std::string params = describe(SweepPoint{cfg.deployment, cfg.scheme}, "");
  for (const auto& name : cfg.schemes) {
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto c = static_cast<std::size_t>(cs[i]);
      if (name == "proposed") {
        rows.push_back({name, "sensor_keys_exposed", cfg.sweep.parameter, cs[i], params, 0.0,
                        sensor_keys[i].mean(), sensor_keys[i].std_error(),
                        sensor_keys[i].count()});
        rows.push_back({name, "head_incident_keys_exposed", cfg.sweep.parameter, cs[i], params,
                        kNaN, head_keys[i].mean(), head_keys[i].std_error(),
                        head_keys[i].count()});
        rows.push_back({name, "fraction_compromised", cfg.sweep.parameter, cs[i], params, 0.0,
                        fraction[i].mean(), fraction[i].std_error(), fraction[i].count()});
      } else {
        const double exposed =
            name == "lekm" ? lekm_exposed_sensor_keys(c) : ikdm_exposed_sensor_keys(c);
        rows.push_back({name, "sensor_keys_exposed", cfg.sweep.parameter, cs[i],
                        "clusters=100;sensors_per_cluster=100", exposed, kNaN, kNaN, 0});
      }
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char ch : text) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    out.push_back(keep ? ch : (ch == '=' ? '-' : '_'));
  }
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Connectivity:
      return "connectivity";
    case ExperimentKind::Resilience:
      return "resilience";
    case ExperimentKind::HeadCapture:
      return "head_capture";
  }
  return "unknown";
}

BaselineParams ExperimentConfig::baseline(BaselineScheme scheme) const {
  for (const auto& b : baselines) {
    if (b.scheme == scheme) return b;
  }
  BaselineParams b;
  b.scheme = scheme;
  return b;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (name.empty()) throw ConfigError("name: must not be empty");
  if (!(misdeploy_fraction >= 0.0 && misdeploy_fraction <= 1.0)) {
    throw ConfigError("misdeploy_fraction: must lie in [0, 1]");
  }
  deployment.validate();
  if (schemes.empty()) throw ConfigError("schemes: must list at least one scheme");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const auto& s = schemes[i];
    const std::string where = "schemes[" + std::to_string(i) + "]";
    if (!seen.insert(s).second) throw ConfigError(where + ": duplicate scheme \"" + s + "\"");
    const bool stub = s == "lekm" || s == "ikdm";
    const bool base = parse_baseline_scheme(s).has_value();
    if (s != "proposed" && !stub && !base) {
      throw ConfigError(where + ": unknown scheme \"" + s + "\"");
    }
    if (kind == ExperimentKind::Connectivity && s != "proposed") {
      throw ConfigError(where + ": connectivity experiments run the proposed scheme only");
    }
    if (kind == ExperimentKind::HeadCapture && base) {
      throw ConfigError(where + ": head-capture experiments support proposed, lekm and ikdm");
    }
  }
  for (const auto& b : baselines) {
    try {
      b.validate();
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      if (msg.rfind("scheme.", 0) == 0) msg.erase(0, 7);
      throw ConfigError("baselines." + std::string(to_string(b.scheme)) + "." + msg);
    }
  }

  auto check_sweep = [&](const Sweep& s, const std::string& where) {
    const bool ok = kind == ExperimentKind::Connectivity
                        ? (s.parameter == "n_i" || s.parameter == "m" || s.parameter == "m_prime")
                        : s.parameter == "c";
    if (!ok) {
      throw ConfigError(where + ".parameter: \"" + s.parameter + "\" cannot be swept in a " +
                        std::string(to_string(kind)) + " experiment");
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!is_integral(s.values[i]) || s.values[i] > 1e9) {
        throw ConfigError(where + ".values[" + std::to_string(i) +
                          "]: expected a non-negative integer");
      }
    }
  };
  check_sweep(sweep, "sweep");
  if (series) {
    if (kind != ExperimentKind::Connectivity) {
      throw ConfigError("series: only connectivity experiments take a series");
    }
    check_sweep(*series, "series");
    if (series->parameter == sweep.parameter) {
      throw ConfigError("series.parameter: must differ from sweep.parameter");
    }
  }

  // Every combination of sweep and series values has to make a valid point.
  std::vector<std::optional<double>> outer{std::nullopt};
  if (series) outer.assign(series->values.begin(), series->values.end());
  for (const auto& s : outer) {
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
      SweepPoint p{deployment, scheme};
      if (s) apply(p, series->parameter, *s);
      apply(p, sweep.parameter, sweep.values[i]);
      const std::string where = "sweep.values[" + std::to_string(i) + "]";
      try {
        p.deployment.validate();
        if (std::find(schemes.begin(), schemes.end(), "proposed") != schemes.end()) {
          p.scheme.validate(p.deployment.group_count());
        }
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      if (sweep.parameter == "c") {
        const auto c = static_cast<std::size_t>(sweep.values[i]);
        const std::size_t population = kind == ExperimentKind::HeadCapture
                                           ? deployment.group_count()
                                           : deployment.group_count() *
                                                 deployment.sensors_per_group;
        if (c > population) {
          throw ConfigError(where + ": capturing " + std::to_string(c) + " exceeds the " +
                            std::to_string(population) + " available targets");
        }
      }
    }
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("config_sha256")) {
    doc = doc.at("config");
  }
  const Reader r(doc, "");
  r.allow({"name", "experiment", "seed", "trials", "output_dir", "misdeploy_fraction",
           "deployment", "scheme", "schemes", "baselines", "sweep", "series"});

  ExperimentConfig cfg;
  r.read("name", cfg.name);
  if (!r.has("experiment")) throw ConfigError("experiment: required");
  std::string kind;
  r.read("experiment", kind);
  const auto k = parse_kind(kind);
  if (!k) {
    throw ConfigError("experiment: \"" + kind +
                      "\" is not one of connectivity, resilience, head_capture");
  }
  cfg.kind = *k;
  r.read("seed", cfg.seed);
  r.read("trials", cfg.trials);
  r.read("output_dir", cfg.output_dir);
  r.read("misdeploy_fraction", cfg.misdeploy_fraction);
  if (r.has("deployment")) cfg.deployment = read_deployment(Reader(r.raw("deployment"), "deployment"));
  if (r.has("scheme")) cfg.scheme = read_scheme(Reader(r.raw("scheme"), "scheme"));
  if (r.has("schemes")) {
    const auto& arr = r.raw("schemes");
    if (!arr.is_array()) throw ConfigError("schemes: expected an array of names");
    cfg.schemes.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        throw ConfigError("schemes[" + std::to_string(i) + "]: expected a string");
      }
      cfg.schemes.push_back(arr[i].get<std::string>());
    }
  }
  if (r.has("baselines")) {
    const Reader b(r.raw("baselines"), "baselines");
    for (const auto& [name, value] : r.raw("baselines").items()) {
      const auto scheme = parse_baseline_scheme(name);
      if (!scheme) throw ConfigError(b.field(name) + ": unknown baseline scheme");
      cfg.baselines.push_back(read_baseline(Reader(value, b.field(name)), *scheme));
    }
  }
  if (!r.has("sweep")) throw ConfigError("sweep: required");
  cfg.sweep = read_sweep(Reader(r.raw("sweep"), "sweep"));
  if (r.has("series")) cfg.series = read_sweep(Reader(r.raw("series"), "series"));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

ExperimentConfig preset_config(std::string_view name, bool full_scale) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  cfg.output_dir = "results/" + cfg.name;
  cfg.seed = 20240601;
  cfg.deployment.field_side = full_scale ? 1000.0 : 300.0;
  cfg.deployment.groups_per_side = full_scale ? 10 : 3;
  cfg.deployment.sensors_per_group = 200;
  cfg.scheme.m = 200;
  cfg.scheme.m_prime = 200;
  cfg.scheme.t = 250;

  auto range = [](double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi; x += step) v.push_back(x);
    return v;
  };

  if (name == "fig2" || name == "fig4" || name == "fig5") {
    cfg.kind = ExperimentKind::Connectivity;
    cfg.sweep = {"n_i", range(100, 1000, 100)};
    cfg.scheme.m_prime = name == "fig5" ? 300 : 200;
    cfg.trials = full_scale ? 1 : 3;
  } else if (name == "fig3") {
    cfg.kind = ExperimentKind::Connectivity;
    cfg.sweep = {"m_prime", range(200, 1000, 100)};
    cfg.series = Sweep{"n_i", {500, 1000}};
    cfg.trials = full_scale ? 1 : 2;
  } else if (name == "fig6" || name == "fig7") {
    cfg.kind = ExperimentKind::Resilience;
    const double total =
        static_cast<double>(cfg.deployment.group_count() * cfg.deployment.sensors_per_group);
    cfg.sweep = {"c", range(0, std::min(500.0, total), 25)};
    cfg.trials = full_scale ? 2 : 5;
    if (name == "fig6") {
      cfg.schemes = {"proposed", "eg", "q-composite", "lekm"};
      BaselineParams eg;
      eg.scheme = BaselineScheme::EG;
      eg.m = 200;
      eg.pool_size = 100000;
      BaselineParams qc;
      qc.scheme = BaselineScheme::QComposite;
      qc.m = 200;
      qc.pool_size = 20000;
      qc.q_threshold = 2;
      cfg.baselines = {eg, qc};
    } else {
      cfg.schemes = {"proposed", "blundo", "ikdm"};
      BaselineParams blundo;
      blundo.scheme = BaselineScheme::Blundo;
      blundo.t = 199;  // 200 stored coefficients, matching a 200-key ring
      cfg.baselines = {blundo};
    }
  } else if (name == "fig8") {
    cfg.kind = ExperimentKind::HeadCapture;
    cfg.deployment.sensors_per_group = 220;
    cfg.schemes = {"proposed", "lekm", "ikdm"};
    cfg.sweep = full_scale ? Sweep{"c", range(0, 100, 10)} : Sweep{"c", range(0, 9, 1)};
    cfg.trials = full_scale ? 1 : 3;
  } else {
    throw ConfigError("preset: unknown name \"" + std::string(name) + "\"");
  }
  cfg.validate();
  return cfg;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kResultCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.scheme + ',' + r.metric + ',' + r.x_name + ',' + format_number(r.x) + ',' +
           r.params + ',' + format_number(r.analytical) + ',' + format_number(r.simulated) +
           ',' + format_number(r.std_error) + ',' + std::to_string(r.trials) + '\n';
  }
  return out;
}

std::vector<ResultRow> compute_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  switch (cfg.kind) {
    case ExperimentKind::Connectivity:
      connectivity_rows(cfg, rows);
      break;
    case ExperimentKind::Resilience:
      resilience_rows(cfg, rows);
      break;
    case ExperimentKind::HeadCapture:
      head_capture_rows(cfg, rows);
      break;
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.rows = compute_experiment(cfg);
  const std::string csv = rows_to_csv(result.rows);

  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir / "plot", ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                   ec.message());

  result.csv_path = dir / (cfg.name + ".csv");
  write_file(result.csv_path, csv);

  for (const auto& series : emit_plotdata(csv)) {
    std::string stem = cfg.name;
    if (!series.scheme.empty()) stem += "_" + sanitize(series.scheme);
    if (!series.metric.empty()) stem += "_" + sanitize(series.metric);
    if (!series.params.empty()) stem += "_" + sanitize(series.params);
    const auto path = dir / "plot" / (stem + ".dat");
    write_file(path, series.text);
    result.plot_paths.push_back(path);
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string canonical = to_json(cfg);
  const auto digest = sha256(std::span(reinterpret_cast<const std::uint8_t*>(canonical.data()),
                                       canonical.size()));
  std::string hex;
  for (auto b : digest) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", b);
    hex += buf;
  }
  json manifest;
  manifest["name"] = cfg.name;
  manifest["seed"] = cfg.seed;
  manifest["config_sha256"] = hex;
  manifest["wall_seconds"] = result.wall_seconds;
  manifest["csv"] = result.csv_path.filename().string();
  manifest["rows"] = result.rows.size();
  manifest["config"] = config_json(cfg);
  result.manifest_path = dir / "manifest.json";
  write_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

}  // namespace hwsnkey
