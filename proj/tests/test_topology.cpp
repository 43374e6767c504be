#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "mlfc/rng.hpp"
#include "mlfc/topology.hpp"

using namespace mlfc;

namespace {

// Root path of a node in the original tree.
std::vector<NodeId> root_path(const DisorganizedNetwork& dnet, NodeId v) {
  std::vector<NodeId> path;
  while (v != dnet.fusion_center) {
    v = dnet.destination.at(v);
    path.push_back(v);
  }
  return path;
}

// Root path through the hierarchical network, skipping virtual relays.
std::vector<NodeId> aggregated_path(const HierarchicalNetwork& net, NodeId v) {
  std::map<NodeId, NodeId> parent;
  for (std::size_t j = 0; j + 1 < net.layers.size(); ++j)
    for (std::size_t k = 0; k < net.groups[j].size(); ++k)
      for (NodeId m : net.groups[j][k].members)
        parent[m] = net.layers[j + 1][k];
  std::vector<NodeId> path;
  while (v != net.fusion_center()) {
    v = parent.at(v);
    if (!net.is_virtual(v)) path.push_back(v);
  }
  return path;
}

DisorganizedNetwork random_tree(Rng& rng, int num_nodes) {
  DisorganizedNetwork dnet;
  dnet.fusion_center = 1;
  dnet.nodes.push_back(1);
  for (NodeId v = 2; v <= num_nodes; ++v) {
    dnet.nodes.push_back(v);
    // Attach to any earlier node: always a tree.
    dnet.destination[v] =
        static_cast<NodeId>(rng.next_u64() % static_cast<std::uint64_t>(v - 1)) + 1;
  }
  return dnet;
}

}  // namespace

TEST_CASE("build accepts the relay-free shape") {
  const auto net = build_hierarchical({{1, 2, 3, 4}, {5}},
                                      {{{{1, 2, 3, 4}, {{1, 2, 3, 4}}}}});
  CHECK(net.num_layers() == 2);
  CHECK(net.sources().size() == 4);
  CHECK(net.fusion_center() == 5);
  CHECK(net.real_group_count() == 1);
}

TEST_CASE("build accepts a five-three-two-one layering") {
  const auto net = build_hierarchical(
      {{1, 2, 3, 4, 5}, {6, 7, 8}, {9, 10}, {11}},
      {{
           {{1, 2, 3}, {{1, 2}, {3}}},
           {{4}, {{4}}},
           {{5}, {{5}}},
       },
       {
           {{6, 7}, {{6, 7}}},
           {{8}, {{8}}},
       },
       {
           {{9, 10}, {{9, 10}}},
       }});
  CHECK(net.num_layers() == 4);
  CHECK(net.real_group_count() == 6);
}

TEST_CASE("groups sharing a node violate the partition") {
  CHECK_THROWS_AS(build_hierarchical({{1, 2, 3, 4}, {5, 6}, {7}},
                                     {{
                                          {{1, 2, 3}, {{1, 2, 3}}},
                                          {{3, 4}, {{3, 4}}},
                                      },
                                      {
                                          {{5, 6}, {{5, 6}}},
                                      }}),
                  PartitionViolation);
}

TEST_CASE("bad shapes are rejected") {
  CHECK_THROWS_AS(build_hierarchical({{1, 2}}, {}), BadShape);
  CHECK_THROWS_AS(build_hierarchical({{1, 2}, {3, 4}},
                                     {{{{1, 2}, {{1, 2}}}, {{1}, {{1}}}}}),
                  BadShape);
  CHECK_THROWS_AS(build_hierarchical({{}, {1}}, {{}}), BadShape);
}

TEST_CASE("subgroups must cover their group") {
  CHECK_THROWS_AS(
      build_hierarchical({{1, 2, 3}, {4}}, {{{{1, 2, 3}, {{1, 2}}}}}),
      PartitionViolation);
}

TEST_CASE("partition balanced spreads the remainder from the front") {
  const auto parts =
      partition_group({1, 2, 3, 4, 5}, PartitionStrategy::balanced(2));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<NodeId>{1, 2, 3});
  CHECK(parts[1] == std::vector<NodeId>{4, 5});
}

TEST_CASE("partition singletons") {
  const auto parts =
      partition_group({1, 2, 3, 4}, PartitionStrategy::singletons());
  REQUIRE(parts.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(parts[i] == std::vector<NodeId>{static_cast<NodeId>(i + 1)});
}

TEST_CASE("partition rejects invalid strategies") {
  CHECK_THROWS_AS(partition_group({1, 2, 3, 4}, PartitionStrategy::balanced(5)),
                  BadStrategy);
  CHECK_THROWS_AS(
      partition_group({1, 2}, PartitionStrategy::explicit_list({{1}})),
      BadStrategy);
}

TEST_CASE("partition output is a partition") {
  Rng rng(7, "partition-prop");
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 16);
    std::vector<NodeId> group;
    for (int i = 0; i < n; ++i) group.push_back(100 + i);
    const int c = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    const auto parts = partition_group(group, PartitionStrategy::balanced(c));
    CHECK(parts.size() == static_cast<std::size_t>(c));
    std::set<NodeId> seen;
    for (const auto& part : parts) {
      CHECK(!part.empty());
      for (NodeId v : part) CHECK(seen.insert(v).second);
    }
    CHECK(seen.size() == group.size());
  }
}

TEST_CASE("reorganize a star") {
  DisorganizedNetwork dnet;
  dnet.nodes = {1, 2, 3, 4, 5};
  dnet.fusion_center = 5;
  for (NodeId v = 1; v <= 4; ++v) dnet.destination[v] = 5;
  const auto net = reorganize(dnet, PartitionStrategy::single());
  CHECK(net.num_layers() == 2);
  CHECK(net.sources() == std::vector<NodeId>{1, 2, 3, 4});
  CHECK(net.virtual_nodes.empty());
}

TEST_CASE("reorganize bridges a shallow branch with one relay") {
  // a -> b -> c with d -> c: d is a source, so it reaches the top
  // through an inserted pass-through in the middle layer.
  DisorganizedNetwork dnet;
  dnet.nodes = {1, 2, 3, 4};  // a=1, b=2, c=3 (fusion), d=4
  dnet.fusion_center = 3;
  dnet.destination = {{1, 2}, {2, 3}, {4, 3}};
  const auto net = reorganize(dnet, PartitionStrategy::single());

  CHECK(net.num_layers() == 3);
  CHECK(net.sources() == std::vector<NodeId>{1, 4});
  REQUIRE(net.virtual_nodes.size() == 1);
  const NodeId relay = *net.virtual_nodes.begin();
  CHECK(net.layers[1] == std::vector<NodeId>{2, relay});

  // The fusion group receives both the real node and the pass-through.
  CHECK(net.groups[1][0].members == std::vector<NodeId>{2, relay});

  CHECK(aggregated_path(net, 4) == root_path(dnet, 4));
  CHECK(aggregated_path(net, 1) == root_path(dnet, 1));
}

TEST_CASE("reorganize rejects a two-cycle") {
  DisorganizedNetwork dnet;
  dnet.nodes = {1, 2, 3};
  dnet.fusion_center = 3;
  dnet.destination = {{1, 2}, {2, 1}};
  CHECK_THROWS_AS(reorganize(dnet, PartitionStrategy::single()), CycleDetected);
}

TEST_CASE("reorganize rejects a missing destination") {
  DisorganizedNetwork dnet;
  dnet.nodes = {1, 2, 3};
  dnet.fusion_center = 3;
  dnet.destination = {{1, 3}};
  CHECK_THROWS_AS(reorganize(dnet, PartitionStrategy::single()), NotATree);
}

TEST_CASE("reorganize preserves root paths on random trees") {
  Rng rng(11, "tree-prop");
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 40);
    const DisorganizedNetwork dnet = random_tree(rng, n);
    const auto net = reorganize(dnet, PartitionStrategy::singletons());
    validate(net);
    for (NodeId v : dnet.nodes) {
      if (v == dnet.fusion_center) continue;
      CHECK(aggregated_path(net, v) == root_path(dnet, v));
    }
  }
}

TEST_CASE("reorganize is deterministic") {
  Rng rng(13, "tree-det");
  const DisorganizedNetwork dnet = random_tree(rng, 25);
  const auto a = reorganize(dnet, PartitionStrategy::balanced(2));
  const auto b = reorganize(dnet, PartitionStrategy::balanced(2));
  CHECK(a.layers == b.layers);
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t j = 0; j < a.groups.size(); ++j) {
    REQUIRE(a.groups[j].size() == b.groups[j].size());
    for (std::size_t k = 0; k < a.groups[j].size(); ++k) {
      CHECK(a.groups[j][k].members == b.groups[j][k].members);
      CHECK(a.groups[j][k].subgroups == b.groups[j][k].subgroups);
    }
  }
}
