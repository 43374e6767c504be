#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "mlfc/errors.hpp"
#include "mlfc/topology.hpp"

namespace mlfc {

enum class FunctionFamily { arithmetic_sum, type_function };

// The desired-function family. Arithmetic sums carry one weight per
// source; type functions count symbol occurrences over {0..alphabet_max}.
// Both compose over the network by plain (vector) addition of partial
// values, which is what makes layer-by-layer reconstruction exact.
struct FunctionSpec {
  FunctionFamily family = FunctionFamily::arithmetic_sum;
  std::map<NodeId, double> weights;
  int alphabet_max = 1;

  static FunctionSpec arithmetic_sum(std::map<NodeId, double> weights);
  static FunctionSpec mean(const std::vector<NodeId>& sources);
  static FunctionSpec type_function(int alphabet_max);
};

using Histogram = std::vector<std::int64_t>;
using FunctionValue = std::variant<double, Histogram>;

// Per-source time series; every source holds the same number of rounds.
struct DataAssignment {
  std::map<NodeId, std::vector<double>> samples;

  int num_rounds() const;
};

// Single-shot evaluation of the desired function over all sources in the
// assignment, for round j (0-based).
FunctionValue eval_desired(const FunctionSpec& spec, const DataAssignment& data,
                           int j);

// Layer-by-layer evaluation: each subgroup combines its members' values,
// each node combines its subgroup values, and the fusion center's value is
// returned. Pass-through relays forward values unchanged.
FunctionValue run_aggregation(const HierarchicalNetwork& net,
                              const FunctionSpec& spec,
                              const DataAssignment& data, int j);

bool values_close(const FunctionValue& a, const FunctionValue& b,
                  double rel_tol = 1e-12);

}  // namespace mlfc
