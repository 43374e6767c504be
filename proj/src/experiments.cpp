#include "mlfc/experiments.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace mlfc {
namespace {

using nlohmann::json;

constexpr double kLn2 = 0.6931471805599453;

struct SchemeEntry {
  Scheme scheme;
  const char* name;
  bool baseline;
};

constexpr SchemeEntry kSchemes[] = {
    {Scheme::fpc_ata, "fpc_ata", false},
    {Scheme::fpc_ota, "fpc_ota", false},
    {Scheme::apc_ata, "apc_ata", false},
    {Scheme::apc_ota, "apc_ota", false},
    {Scheme::rf_comac_fpc, "rf_comac_fpc", true},
    {Scheme::time_sharing, "time_sharing", true},
    {Scheme::rf_comac_apc, "rf_comac_apc", true},
    {Scheme::improved_time_sharing, "improved_time_sharing", true},
};

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string bottleneck_tag(const SchemeResult& result) {
  if (!result.has_bottleneck) return "-";
  std::ostringstream os;
  os << result.bottleneck.layer << ":" << result.bottleneck.group << ":"
     << result.bottleneck.subgroup;
  return os.str();
}

// Delta-method error of one APC term p*C+(1/K + eps/p) induced by the
// Monte Carlo ratio estimate sitting in eps.
double apc_term_std_error(const SubgroupParams& sp, double p,
                          const Estimate& ratio) {
  if (p <= 0.0 || ratio.std_error <= 0.0) return 0.0;
  const double arg = 1.0 / static_cast<double>(sp.size) + sp.apc_gain / p;
  if (arg <= 1.0) return 0.0;
  return sp.apc_gain / (2.0 * kLn2 * arg * ratio.value) * ratio.std_error;
}

int count_real(const std::vector<NodeId>& layer, const HierarchicalNetwork& net) {
  int count = 0;
  for (NodeId v : layer)
    if (!net.is_virtual(v)) ++count;
  return count;
}

// --- config parsing -------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback = INT_MIN) {
  if (obj.find(key) == obj.end()) {
    if (fallback != INT_MIN) return fallback;
    fail(path + "." + key, "missing");
  }
  const json& v = *obj.find(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

double get_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

PartitionStrategy parse_strategy(const json& j, const std::string& path) {
  const std::string kind = member(j, path, "kind").get<std::string>();
  if (kind == "single") return PartitionStrategy::single();
  if (kind == "singletons") return PartitionStrategy::singletons();
  if (kind == "balanced")
    return PartitionStrategy::balanced(get_int(j, path, "count"));
  if (kind == "explicit") {
    std::vector<std::vector<NodeId>> sets;
    for (const auto& sub : member(j, path, "sets"))
      sets.push_back(sub.get<std::vector<NodeId>>());
    return PartitionStrategy::explicit_list(std::move(sets));
  }
  fail(path + ".kind", "unknown strategy '" + kind + "'");
}

TopologyConfig parse_topology(const json& j, const std::string& path) {
  TopologyConfig topo;
  const std::string kind = member(j, path, "kind").get<std::string>();

  if (kind == "layered") {
    topo.kind = TopologyConfig::Kind::layered;
    topo.k1 = get_int(j, path, "k1");
    topo.k2 = get_int(j, path, "k2", 1);
    topo.num_layers = get_int(j, path, "layers", 2);
    topo.subgroups = get_int(j, path, "subgroups", 1);
    return topo;
  }

  if (kind == "explicit") {
    topo.kind = TopologyConfig::Kind::explicit_net;
    std::vector<std::vector<NodeId>> layers;
    for (const auto& layer : member(j, path, "layers"))
      layers.push_back(layer.get<std::vector<NodeId>>());
    std::vector<std::vector<GroupSpec>> groups;
    for (const auto& layer_groups : member(j, path, "groups")) {
      std::vector<GroupSpec> parsed;
      for (const auto& g : layer_groups) {
        GroupSpec spec;
        spec.members = member(g, path + ".groups", "members").get<std::vector<NodeId>>();
        for (const auto& sub : member(g, path + ".groups", "subgroups"))
          spec.subgroups.push_back(sub.get<std::vector<NodeId>>());
        parsed.push_back(std::move(spec));
      }
      groups.push_back(std::move(parsed));
    }
    std::unordered_set<NodeId> virtuals;
    if (j.find("virtual_nodes") != j.end())
      for (const auto& v : j["virtual_nodes"]) virtuals.insert(v.get<NodeId>());
    try {
      topo.explicit_net =
          build_hierarchical(std::move(layers), std::move(groups), std::move(virtuals));
    } catch (const Error& e) {
      fail(path, e.what());
    }
    return topo;
  }

  if (kind == "disorganized") {
    topo.kind = TopologyConfig::Kind::disorganized;
    topo.dnet.fusion_center = member(j, path, "fusion").get<NodeId>();
    std::set<NodeId> nodes{topo.dnet.fusion_center};
    for (const auto& [from, to] : member(j, path, "destinations").items()) {
      const NodeId src = std::stoll(from);
      const NodeId dst = to.get<NodeId>();
      topo.dnet.destination[src] = dst;
      nodes.insert(src);
      nodes.insert(dst);
    }
    topo.dnet.nodes.assign(nodes.begin(), nodes.end());
    topo.strategy = j.find("strategy") != j.end()
                        ? parse_strategy(j["strategy"], path + ".strategy")
                        : PartitionStrategy::single();
    return topo;
  }

  fail(path + ".kind", "unknown topology kind '" + kind + "'");
}

FadingModel parse_fading(const json& j, const std::string& path) {
  const std::string family = member(j, path, "family").get<std::string>();
  if (family == "rayleigh_unit") return FadingModel::rayleigh();
  if (family == "exponential")
    return FadingModel::exponential(get_double(member(j, path, "mean"), path + ".mean"));
  if (family == "constant")
    return FadingModel::constant(get_double(member(j, path, "gain"), path + ".gain"));
  fail(path + ".family", "unknown fading family '" + family + "'");
}

// --- sweep materialization -------------------------------------------------

struct SweepPoint {
  double value = 0.0;
  double power_db = 0.0;
  TopologyConfig topology;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
  const std::string& var = config.sweep.variable;
  std::vector<SweepPoint> points;

  if (var == "p_db") {
    for (double db : config.snr_db)
      points.push_back({db, db, config.topology});
    return points;
  }

  if (config.topology.kind != TopologyConfig::Kind::layered)
    throw ConfigError("sweep.variable: '" + var +
                      "' requires the layered topology generator");
  if (config.snr_db.size() != 1)
    throw ConfigError("snr_db: topology sweeps need exactly one SNR point");
  if (config.sweep.values.empty())
    throw ConfigError("sweep.values: missing for variable '" + var + "'");

  for (double value : config.sweep.values) {
    SweepPoint point{value, config.snr_db.front(), config.topology};
    const int iv = static_cast<int>(std::llround(value));
    if (static_cast<double>(iv) != value)
      throw ConfigError("sweep.values: '" + var + "' needs integral values");
    if (var == "k1")
      point.topology.k1 = iv;
    else if (var == "k2")
      point.topology.k2 = iv;
    else if (var == "layers")
      point.topology.num_layers = iv;
    else if (var == "subgroups")
      point.topology.subgroups = iv;
    else
      throw ConfigError("sweep.variable: unknown variable '" + var + "'");
    points.push_back(std::move(point));
  }
  return points;
}

HierarchicalNetwork materialize(const TopologyConfig& topo) {
  switch (topo.kind) {
    case TopologyConfig::Kind::layered:
      return layered_network(topo.k1, topo.k2, topo.num_layers, topo.subgroups);
    case TopologyConfig::Kind::explicit_net:
      return topo.explicit_net;
    case TopologyConfig::Kind::disorganized:
      return reorganize(topo.dnet, topo.strategy);
  }
  throw ConfigError("topology.kind: invalid");
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  for (const auto& entry : kSchemes)
    if (entry.scheme == scheme) return entry.name;
  throw Error("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  for (const auto& entry : kSchemes)
    if (name == entry.name) return entry.scheme;
  throw ConfigError("schemes: unknown scheme '" + name + "'");
}

bool scheme_is_baseline(Scheme scheme) {
  for (const auto& entry : kSchemes)
    if (entry.scheme == scheme) return entry.baseline;
  throw Error("unknown scheme");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

HierarchicalNetwork layered_network(int k1, int k2, int num_layers,
                                    int subgroups) {
  if (num_layers < 2) throw BadShape("layered network needs >= 2 layers");
  if (k1 < 1 || k2 < 1) throw BadShape("layer sizes must be positive");
  if (num_layers == 2 && k2 != 1)
    throw BadShape("two-layer networks have a single destination");
  if (k2 > k1) throw BadShape("more first-hop groups than sources");
  if (subgroups < 1 || static_cast<std::int64_t>(subgroups) * k2 > k1)
    throw BadShape("subgroup count incompatible with group sizes");

  std::vector<std::vector<NodeId>> layers;
  NodeId next = 1;
  layers.emplace_back();
  for (int i = 0; i < k1; ++i) layers.back().push_back(next++);
  layers.emplace_back();
  for (int i = 0; i < k2; ++i) layers.back().push_back(next++);
  for (int l = 2; l < num_layers; ++l) layers.push_back({next++});

  std::vector<std::vector<GroupSpec>> groups;
  // Sources into k2 balanced groups, each split into `subgroups` parts.
  {
    std::vector<GroupSpec> first;
    const auto source_groups =
        partition_group(layers[0], PartitionStrategy::balanced(k2));
    for (const auto& members : source_groups) {
      GroupSpec g;
      g.members = members;
      g.subgroups = partition_group(
          members, PartitionStrategy::balanced(
                       std::min<int>(subgroups, static_cast<int>(members.size()))));
      first.push_back(std::move(g));
    }
    groups.push_back(std::move(first));
  }
  for (int l = 1; l + 1 < num_layers; ++l) {
    GroupSpec g;
    g.members = layers[static_cast<std::size_t>(l)];
    g.subgroups = {g.members};
    groups.push_back({std::move(g)});
  }
  return build_hierarchical(std::move(layers), std::move(groups));
}

std::vector<SubgroupParams> subgroup_params(const HierarchicalNetwork& net,
                                            const FadingModel& model,
                                            double power, const McConfig& mc) {
  std::vector<SubgroupParams> params;
  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    for (std::size_t k = 0; k < net.groups[j].size(); ++k) {
      if (net.is_virtual(net.layers[j + 1][k])) continue;
      const GroupSpec& group = net.groups[j][k];
      for (std::size_t c = 0; c < group.subgroups.size(); ++c) {
        SubgroupParams sp;
        sp.path = {static_cast<int>(j) + 2, static_cast<int>(k) + 1,
                   static_cast<int>(c) + 1};
        sp.size = static_cast<int>(group.subgroups[c].size());
        const double min_gain = model.analytic_min_gain(sp.size);
        sp.fixed_rate =
            clipped_rate(1.0 / static_cast<double>(sp.size) + min_gain * power);
        const Estimate ratio = expected_min_over_self_ratio(model, sp.size, mc);
        sp.apc_gain = min_gain * power / ratio.value;
        params.push_back(std::move(sp));
      }
    }
  }
  return params;
}

SchemeResult evaluate_scheme(const HierarchicalNetwork& net, Scheme scheme,
                             const FadingModel& model, double power,
                             const McConfig& mc) {
  SchemeResult result;

  if (scheme_is_baseline(scheme)) {
    const int k1 = count_real(net.layers.front(), net);
    BaselineVariant variant;
    switch (scheme) {
      case Scheme::rf_comac_fpc: variant = BaselineVariant::rf_comac_fpc; break;
      case Scheme::time_sharing: variant = BaselineVariant::time_sharing; break;
      case Scheme::rf_comac_apc: variant = BaselineVariant::rf_comac_apc; break;
      default: variant = BaselineVariant::improved_time_sharing; break;
    }
    const Estimate e = baseline_rate(variant, k1, power, model, mc);
    result.rate = e.value;
    result.std_err = e.std_error;
    return result;
  }

  if (scheme == Scheme::fpc_ata) {
    const Allocation alloc = Allocation::uniform(net);
    const SubgroupEstimates rates = subgroup_rates_fixed_power(
        net, model, power, RateMode::jensen_bound, mc);
    const RateReport report = network_rate(net, alloc, rates);
    result.rate = report.network_rate;
    result.std_err = report.std_error;
    result.bottleneck = report.bottleneck;
    result.has_bottleneck = true;
    return result;
  }

  const std::vector<SubgroupParams> params = subgroup_params(net, model, power, mc);

  if (scheme == Scheme::fpc_ota) {
    const AllocationSolution sol = solve_fixed_power(params);
    result.rate = sol.t;
    result.std_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < params.size(); ++i)
      if (sol.p[i] * params[i].fixed_rate <
          sol.p[worst] * params[worst].fixed_rate)
        worst = i;
    result.bottleneck = params[worst].path;
    result.has_bottleneck = true;
    return result;
  }

  // Adaptive power: uniform shares or the solver's shares.
  std::vector<double> p(params.size(), 0.0);
  double t = 0.0;
  if (scheme == Scheme::apc_ata) {
    const Allocation alloc = Allocation::uniform(net);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& path = params[i].path;
      p[i] = alloc.alpha[static_cast<std::size_t>(path.layer - 2)]
                        [static_cast<std::size_t>(path.group - 1)] *
             alloc.beta[static_cast<std::size_t>(path.layer - 2)]
                       [static_cast<std::size_t>(path.group - 1)]
                       [static_cast<std::size_t>(path.subgroup - 1)];
    }
    t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < params.size(); ++i)
      t = std::min(t, apc_objective(params[i].apc_gain, params[i].size, p[i]));
  } else {
    const AllocationSolution sol = solve_apc(params);
    p = sol.p;
    t = sol.t;
  }

  std::size_t worst = 0;
  double worst_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double value = apc_objective(params[i].apc_gain, params[i].size, p[i]);
    if (value < worst_value) {
      worst_value = value;
      worst = i;
    }
  }
  const Estimate ratio =
      expected_min_over_self_ratio(model, params[worst].size, mc);
  result.rate = t;
  result.std_err = apc_term_std_error(params[worst], p[worst], ratio);
  result.bottleneck = params[worst].path;
  result.has_bottleneck = true;
  return result;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  ExperimentConfig config;
  config.topology = parse_topology(member(j, "config", "topology"), "topology");
  config.fading = parse_fading(member(j, "config", "fading"), "fading");

  const json& snr = member(j, "config", "snr_db");
  if (!snr.is_array() || snr.empty()) fail("snr_db", "expected a nonempty array");
  for (const auto& v : snr) config.snr_db.push_back(get_double(v, "snr_db[]"));

  const json& mc = member(j, "config", "mc");
  config.mc.samples = get_int(mc, "mc", "samples");
  if (config.mc.samples < 1) fail("mc.samples", "must be >= 1");
  if (mc.find("seed") == mc.end()) fail("mc.seed", "missing");
  config.mc.seed = mc["seed"].get<std::uint64_t>();

  const json& schemes = member(j, "config", "schemes");
  if (!schemes.is_array() || schemes.empty())
    fail("schemes", "expected a nonempty array");
  for (const auto& s : schemes)
    config.schemes.push_back(scheme_from_name(s.get<std::string>()));

  if (j.find("sweep") != j.end()) {
    const json& sweep = j["sweep"];
    config.sweep.variable = member(sweep, "sweep", "variable").get<std::string>();
    if (sweep.find("values") != sweep.end())
      for (const auto& v : sweep["values"])
        config.sweep.values.push_back(get_double(v, "sweep.values[]"));
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& config) {
  for (const SweepPoint& point : sweep_points(config)) materialize(point.topology);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  std::vector<SweepPoint> points = sweep_points(config);
  std::stable_sort(points.begin(), points.end(),
                   [](const SweepPoint& a, const SweepPoint& b) {
                     return a.value < b.value;
                   });

  for (const SweepPoint& point : points) {
    const HierarchicalNetwork net = materialize(point.topology);
    const double power = db_to_linear(point.power_db);
    for (Scheme scheme : config.schemes) {
      const SchemeResult r =
          evaluate_scheme(net, scheme, config.fading, power, config.mc);
      ResultRow row;
      row.sweep_var = config.sweep.variable;
      row.sweep_value = point.value;
      row.scheme = scheme_name(scheme);
      row.num_layers = net.num_layers();
      row.k1 = count_real(net.layers.front(), net);
      row.k2 = count_real(net.layers[1], net);
      row.subgroups = static_cast<int>(net.groups[0][0].subgroups.size());
      row.p_db = point.power_db;
      row.rate = r.rate;
      row.std_err = r.std_err;
      row.bottleneck = bottleneck_tag(r);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  if (rows.empty()) throw IoError("no rows to emit");
  out << "sweep_var,sweep_value,scheme,L,K1,K2,C,P_db,rate_bits,std_err,bottleneck\n";
  for (const ResultRow& row : rows) {
    out << row.sweep_var << ',' << fmt12(row.sweep_value) << ',' << row.scheme
        << ',' << row.num_layers << ',' << row.k1 << ',' << row.k2 << ','
        << row.subgroups << ',' << fmt12(row.p_db) << ',' << fmt12(row.rate)
        << ',' << fmt12(row.std_err) << ',' << row.bottleneck << '\n';
  }
}

void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(rows, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace mlfc
