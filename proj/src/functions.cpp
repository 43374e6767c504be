#include "mlfc/functions.hpp"

#include <cmath>
#include <unordered_map>

namespace mlfc {
namespace {

double weight_of(const FunctionSpec& spec, NodeId source) {
  auto it = spec.weights.find(source);
  if (it == spec.weights.end())
    throw ShapeMismatch("no weight for source " + std::to_string(source));
  return it->second;
}

int checked_symbol(const FunctionSpec& spec, NodeId source, double raw) {
  const double rounded = std::nearbyint(raw);
  if (raw != rounded || raw < 0.0 || raw > static_cast<double>(spec.alphabet_max))
    throw AlphabetViolation("source " + std::to_string(source) + " holds " +
                            std::to_string(raw) + " outside [0:" +
                            std::to_string(spec.alphabet_max) + "]");
  return static_cast<int>(rounded);
}

// A source's contribution: weighted sample or a one-count histogram.
FunctionValue lift(const FunctionSpec& spec, NodeId source, double sample) {
  if (spec.family == FunctionFamily::arithmetic_sum)
    return weight_of(spec, source) * sample;
  Histogram h(static_cast<std::size_t>(spec.alphabet_max) + 1, 0);
  h[static_cast<std::size_t>(checked_symbol(spec, source, sample))] = 1;
  return h;
}

void add_into(FunctionValue& acc, const FunctionValue& v) {
  if (std::holds_alternative<double>(acc)) {
    std::get<double>(acc) += std::get<double>(v);
    return;
  }
  auto& ha = std::get<Histogram>(acc);
  const auto& hv = std::get<Histogram>(v);
  if (ha.size() != hv.size()) throw ShapeMismatch("histogram sizes differ");
  for (std::size_t i = 0; i < ha.size(); ++i) ha[i] += hv[i];
}

FunctionValue zero_value(const FunctionSpec& spec) {
  if (spec.family == FunctionFamily::arithmetic_sum) return 0.0;
  return Histogram(static_cast<std::size_t>(spec.alphabet_max) + 1, 0);
}

double sample_at(const DataAssignment& data, NodeId source, int j) {
  auto it = data.samples.find(source);
  if (it == data.samples.end())
    throw ShapeMismatch("no data for source " + std::to_string(source));
  if (j < 0 || j >= static_cast<int>(it->second.size()))
    throw ShapeMismatch("round " + std::to_string(j) + " out of range");
  return it->second[static_cast<std::size_t>(j)];
}

}  // namespace

FunctionSpec FunctionSpec::arithmetic_sum(std::map<NodeId, double> weights) {
  FunctionSpec spec;
  spec.family = FunctionFamily::arithmetic_sum;
  spec.weights = std::move(weights);
  return spec;
}

FunctionSpec FunctionSpec::mean(const std::vector<NodeId>& sources) {
  std::map<NodeId, double> w;
  for (NodeId v : sources) w[v] = 1.0 / static_cast<double>(sources.size());
  return arithmetic_sum(std::move(w));
}

FunctionSpec FunctionSpec::type_function(int alphabet_max) {
  if (alphabet_max < 0) throw AlphabetViolation("alphabet_max must be >= 0");
  FunctionSpec spec;
  spec.family = FunctionFamily::type_function;
  spec.alphabet_max = alphabet_max;
  return spec;
}

int DataAssignment::num_rounds() const {
  if (samples.empty()) return 0;
  return static_cast<int>(samples.begin()->second.size());
}

FunctionValue eval_desired(const FunctionSpec& spec, const DataAssignment& data,
                           int j) {
  FunctionValue acc = zero_value(spec);
  for (const auto& [source, series] : data.samples) {
    (void)series;
    add_into(acc, lift(spec, source, sample_at(data, source, j)));
  }
  return acc;
}

FunctionValue run_aggregation(const HierarchicalNetwork& net,
                              const FunctionSpec& spec,
                              const DataAssignment& data, int j) {
  std::unordered_map<NodeId, FunctionValue> values;
  for (NodeId source : net.sources())
    values.emplace(source, lift(spec, source, sample_at(data, source, j)));

  for (std::size_t lj = 0; lj + 1 < net.layers.size(); ++lj) {
    const auto& parents = net.layers[lj + 1];
    for (std::size_t k = 0; k < parents.size(); ++k) {
      const GroupSpec& group = net.groups[lj][k];
      FunctionValue group_value = zero_value(spec);
      for (const auto& subgroup : group.subgroups) {
        FunctionValue partial = zero_value(spec);
        for (NodeId member : subgroup) add_into(partial, values.at(member));
        add_into(group_value, partial);
      }
      values.emplace(parents[k], std::move(group_value));
    }
  }
  return values.at(net.fusion_center());
}

bool values_close(const FunctionValue& a, const FunctionValue& b,
                  double rel_tol) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<Histogram>(a))
    return std::get<Histogram>(a) == std::get<Histogram>(b);
  const double x = std::get<double>(a);
  const double y = std::get<double>(b);
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) <= rel_tol * scale;
}

}  // namespace mlfc
