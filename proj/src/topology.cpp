#include "mlfc/topology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mlfc {
namespace {

std::string path_tag(int layer, int k) {
  std::ostringstream os;
  os << "(l=" << layer << ",k=" << k + 1 << ")";
  return os.str();
}

}  // namespace

int HierarchicalNetwork::real_group_count() const {
  int count = 0;
  for (std::size_t j = 0; j < groups.size(); ++j)
    for (std::size_t k = 0; k < groups[j].size(); ++k)
      if (!is_virtual(layers[j + 1][k])) ++count;
  return count;
}

void validate(const HierarchicalNetwork& net) {
  const int num_layers = net.num_layers();
  if (num_layers < 2) throw BadShape("network needs at least 2 layers");
  if (net.layers.back().size() != 1)
    throw BadShape("last layer must hold exactly one node (the fusion center)");
  for (int l = 0; l < num_layers; ++l)
    if (net.layers[static_cast<std::size_t>(l)].empty())
      throw BadShape("layer " + std::to_string(l + 1) + " is empty");

  std::set<NodeId> seen;
  for (const auto& layer : net.layers)
    for (NodeId v : layer)
      if (!seen.insert(v).second)
        throw BadShape("node " + std::to_string(v) + " appears twice");

  if (static_cast<int>(net.groups.size()) != num_layers - 1)
    throw BadShape("expected one group list per layer transition");

  for (int j = 0; j + 1 < num_layers; ++j) {
    const auto& below = net.layers[static_cast<std::size_t>(j)];
    const auto& above = net.layers[static_cast<std::size_t>(j + 1)];
    const auto& groups = net.groups[static_cast<std::size_t>(j)];
    if (groups.size() != above.size())
      throw BadShape("layer " + std::to_string(j + 2) +
                     " needs one group per node");

    std::set<NodeId> covered;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const GroupSpec& g = groups[k];
      if (g.members.empty())
        throw PartitionViolation("empty group at " + path_tag(j + 2, static_cast<int>(k)));
      for (NodeId v : g.members)
        if (!covered.insert(v).second)
          throw PartitionViolation("node " + std::to_string(v) +
                                   " shared between groups at layer " +
                                   std::to_string(j + 2));
      if (g.subgroups.empty())
        throw PartitionViolation("group " + path_tag(j + 2, static_cast<int>(k)) +
                                 " has no subgroups");
      std::set<NodeId> sub_covered;
      for (std::size_t c = 0; c < g.subgroups.size(); ++c) {
        if (g.subgroups[c].empty())
          throw PartitionViolation("empty subgroup at " +
                                   path_tag(j + 2, static_cast<int>(k)) + " c=" +
                                   std::to_string(c + 1));
        for (NodeId v : g.subgroups[c])
          if (!sub_covered.insert(v).second)
            throw PartitionViolation("node " + std::to_string(v) +
                                     " shared between subgroups at " +
                                     path_tag(j + 2, static_cast<int>(k)));
      }
      std::set<NodeId> member_set(g.members.begin(), g.members.end());
      if (sub_covered != member_set)
        throw PartitionViolation("subgroups do not cover group at " +
                                 path_tag(j + 2, static_cast<int>(k)));
    }
    std::set<NodeId> below_set(below.begin(), below.end());
    if (covered != below_set)
      throw PartitionViolation("groups of layer " + std::to_string(j + 2) +
                               " do not partition layer " + std::to_string(j + 1));
  }
}

HierarchicalNetwork build_hierarchical(std::vector<std::vector<NodeId>> layers,
                                       std::vector<std::vector<GroupSpec>> groups,
                                       std::unordered_set<NodeId> virtual_nodes) {
  HierarchicalNetwork net{std::move(layers), std::move(groups),
                          std::move(virtual_nodes)};
  validate(net);
  return net;
}

std::vector<std::vector<NodeId>> partition_group(const std::vector<NodeId>& group,
                                                 const PartitionStrategy& strategy) {
  if (group.empty()) throw BadStrategy("cannot partition an empty group");
  const int n = static_cast<int>(group.size());

  switch (strategy.kind) {
    case PartitionStrategy::Kind::single:
      return {group};

    case PartitionStrategy::Kind::singletons: {
      std::vector<std::vector<NodeId>> out;
      out.reserve(group.size());
      for (NodeId v : group) out.push_back({v});
      return out;
    }

    case PartitionStrategy::Kind::balanced: {
      const int c = strategy.balanced_count;
      if (c < 1 || c > n)
        throw BadStrategy("balanced(" + std::to_string(c) +
                          ") invalid for group of size " + std::to_string(n));
      // Remainder nodes go to the earliest subgroups.
      const int base = n / c;
      const int rem = n % c;
      std::vector<std::vector<NodeId>> out;
      out.reserve(static_cast<std::size_t>(c));
      int pos = 0;
      for (int i = 0; i < c; ++i) {
        const int len = base + (i < rem ? 1 : 0);
        out.emplace_back(group.begin() + pos, group.begin() + pos + len);
        pos += len;
      }
      return out;
    }

    case PartitionStrategy::Kind::explicit_list: {
      std::set<NodeId> covered;
      for (const auto& sub : strategy.explicit_sets) {
        if (sub.empty()) throw BadStrategy("explicit subgroup is empty");
        for (NodeId v : sub)
          if (!covered.insert(v).second)
            throw BadStrategy("explicit subgroups overlap on node " +
                              std::to_string(v));
      }
      if (covered != std::set<NodeId>(group.begin(), group.end()))
        throw BadStrategy("explicit subgroups do not cover the group");
      return strategy.explicit_sets;
    }
  }
  throw BadStrategy("unknown partition strategy");
}

HierarchicalNetwork reorganize(const DisorganizedNetwork& dnet,
                               const PartitionStrategy& strategy) {
  if (dnet.nodes.size() < 2) throw BadShape("network needs at least one source");

  std::set<NodeId> node_set(dnet.nodes.begin(), dnet.nodes.end());
  if (node_set.size() != dnet.nodes.size())
    throw BadShape("duplicate node identifiers");
  if (!node_set.count(dnet.fusion_center))
    throw BadShape("fusion center is not listed among the nodes");

  for (NodeId v : dnet.nodes) {
    if (v == dnet.fusion_center) {
      if (dnet.destination.count(v))
        throw NotATree("fusion center must not have a destination");
      continue;
    }
    auto it = dnet.destination.find(v);
    if (it == dnet.destination.end())
      throw NotATree("node " + std::to_string(v) + " has no destination");
    if (!node_set.count(it->second))
      throw NotATree("node " + std::to_string(v) + " points at unknown node " +
                     std::to_string(it->second));
  }

  // Depth by walking each node's path to the root; a revisited node on the
  // current walk is a cycle.
  std::map<NodeId, int> depth;
  depth[dnet.fusion_center] = 0;
  for (NodeId start : dnet.nodes) {
    std::vector<NodeId> walk;
    std::set<NodeId> on_walk;
    NodeId v = start;
    while (!depth.count(v)) {
      if (!on_walk.insert(v).second) throw CycleDetected("cycle through node " + std::to_string(v));
      walk.push_back(v);
      v = dnet.destination.at(v);
    }
    int d = depth.at(v);
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) depth[*it] = ++d;
  }

  // Children in the order the nodes were listed.
  std::map<NodeId, std::vector<NodeId>> children;
  for (NodeId v : dnet.nodes)
    if (v != dnet.fusion_center) children[dnet.destination.at(v)].push_back(v);

  // Sources live in layer 1; an interior node sits one layer above its
  // highest child, so every edge climbs at least one layer.
  std::map<NodeId, int> layer_of;
  auto compute_layer = [&](auto&& self, NodeId v) -> int {
    auto it = layer_of.find(v);
    if (it != layer_of.end()) return it->second;
    int layer = 1;
    auto ch = children.find(v);
    if (ch != children.end())
      for (NodeId w : ch->second) layer = std::max(layer, self(self, w) + 1);
    layer_of[v] = layer;
    return layer;
  };
  const int num_layers = compute_layer(compute_layer, dnet.fusion_center);
  if (num_layers < 2) throw BadShape("network needs at least 2 layers");

  NodeId next_id = *std::max_element(dnet.nodes.begin(), dnet.nodes.end()) + 1;
  HierarchicalNetwork net;
  net.layers.assign(static_cast<std::size_t>(num_layers), {});

  // effective_child[u] lists, per destination u, the nodes (original or
  // bridging relays) that transmit to u.
  std::map<NodeId, std::vector<NodeId>> inbound;
  for (NodeId v : dnet.nodes)
    net.layers[static_cast<std::size_t>(layer_of.at(v) - 1)].push_back(v);

  for (NodeId v : dnet.nodes) {
    if (v == dnet.fusion_center) continue;
    const NodeId dest = dnet.destination.at(v);
    NodeId tail = v;
    // Bridge gaps of more than one layer with pass-through relays.
    for (int l = layer_of.at(v) + 1; l < layer_of.at(dest); ++l) {
      const NodeId relay = next_id++;
      net.virtual_nodes.insert(relay);
      net.layers[static_cast<std::size_t>(l - 1)].push_back(relay);
      inbound[relay].push_back(tail);
      tail = relay;
    }
    inbound[dest].push_back(tail);
  }

  net.groups.assign(static_cast<std::size_t>(num_layers - 1), {});
  for (int j = 0; j + 1 < num_layers; ++j) {
    for (NodeId parent : net.layers[static_cast<std::size_t>(j + 1)]) {
      GroupSpec g;
      g.members = inbound[parent];
      if (net.is_virtual(parent)) {
        g.subgroups = {g.members};
      } else {
        // balanced(C) is clamped per group: trees produce groups of
        // varying size and a count above the size is meaningless there.
        PartitionStrategy local = strategy;
        if (local.kind == PartitionStrategy::Kind::balanced)
          local.balanced_count =
              std::min(local.balanced_count, static_cast<int>(g.members.size()));
        g.subgroups = partition_group(g.members, local);
      }
      net.groups[static_cast<std::size_t>(j)].push_back(std::move(g));
    }
  }

  validate(net);
  return net;
}

}  // namespace mlfc
