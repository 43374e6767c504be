#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>
#include <vector>

#include "mlfc/errors.hpp"

namespace mlfc {

using NodeId = std::int64_t;

// A raw routed network: every node except the fusion center forwards to
// exactly one destination, and the destination graph must form an in-tree
// rooted at the fusion center.
struct DisorganizedNetwork {
  std::vector<NodeId> nodes;  // includes the fusion center
  std::map<NodeId, NodeId> destination;
  NodeId fusion_center = 0;
};

struct PartitionStrategy {
  enum class Kind { single, singletons, balanced, explicit_list };

  Kind kind = Kind::single;
  int balanced_count = 1;
  std::vector<std::vector<NodeId>> explicit_sets;

  static PartitionStrategy single() { return {}; }
  static PartitionStrategy singletons() { return {Kind::singletons, 1, {}}; }
  static PartitionStrategy balanced(int count) { return {Kind::balanced, count, {}}; }
  static PartitionStrategy explicit_list(std::vector<std::vector<NodeId>> sets) {
    return {Kind::explicit_list, 1, std::move(sets)};
  }
};

struct GroupSpec {
  std::vector<NodeId> members;                 // subset of the layer below
  std::vector<std::vector<NodeId>> subgroups;  // ordered partition of members
};

// Layered aggregation network. layers[0] holds the sources and the last
// layer the single fusion center. groups[j][k] is the group drawn from
// layers[j] and allocated to node layers[j+1][k]. Nodes in virtual_nodes
// are inserted pass-through relays: their group carries values unchanged,
// uses no channel resources, and is skipped by the rate formulas.
struct HierarchicalNetwork {
  std::vector<std::vector<NodeId>> layers;
  std::vector<std::vector<GroupSpec>> groups;
  std::unordered_set<NodeId> virtual_nodes;

  int num_layers() const { return static_cast<int>(layers.size()); }
  bool is_virtual(NodeId v) const { return virtual_nodes.count(v) > 0; }

  // Sources backing the desired function (first layer; never virtual).
  const std::vector<NodeId>& sources() const { return layers.front(); }
  NodeId fusion_center() const { return layers.back().front(); }

  // Number of groups that consume channel uses.
  int real_group_count() const;
};

// Validates shape and the partition conditions; throws BadShape or
// PartitionViolation. Returns the network unchanged on success.
HierarchicalNetwork build_hierarchical(std::vector<std::vector<NodeId>> layers,
                                       std::vector<std::vector<GroupSpec>> groups,
                                       std::unordered_set<NodeId> virtual_nodes = {});

void validate(const HierarchicalNetwork& net);

// Splits a group into subgroups according to the strategy. Deterministic
// given the node ordering of `group`.
std::vector<std::vector<NodeId>> partition_group(const std::vector<NodeId>& group,
                                                 const PartitionStrategy& strategy);

// Reorganizes a routed tree into layers. Leaves become the sources in
// layer 1 and interior nodes sit one layer above their highest child;
// whenever an edge would cross more than one layer, pass-through relays
// are inserted to bridge it. Routing destinations of the original nodes
// are preserved along the (possibly bridged) paths.
HierarchicalNetwork reorganize(const DisorganizedNetwork& dnet,
                               const PartitionStrategy& strategy);

}  // namespace mlfc
