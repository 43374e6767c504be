#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mlfc/experiments.hpp"

using namespace mlfc;

namespace {

ExperimentConfig small_config() {
  return parse_config(R"({
    "topology": {"kind": "layered", "k1": 8, "k2": 2, "layers": 3, "subgroups": 2},
    "fading": {"family": "rayleigh_unit"},
    "snr_db": [0, 10],
    "mc": {"samples": 20000, "seed": 42},
    "schemes": ["fpc_ata", "fpc_ota", "apc_ata", "apc_ota"]
  })");
}

}  // namespace

TEST_CASE("config parsing surfaces the failing field") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"fading": {"family": "rayleigh_unit"}})"),
      doctest::Contains("topology"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({
        "topology": {"kind": "layered", "k1": 4},
        "fading": {"family": "nakagami"},
        "snr_db": [0], "mc": {"samples": 10, "seed": 1},
        "schemes": ["fpc_ata"]})"),
      doctest::Contains("fading.family"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({
        "topology": {"kind": "layered", "k1": 4},
        "fading": {"family": "rayleigh_unit"},
        "snr_db": [], "mc": {"samples": 10, "seed": 1},
        "schemes": ["fpc_ata"]})"),
      doctest::Contains("snr_db"), ConfigError);
}

TEST_CASE("layered generator shapes") {
  const auto net = layered_network(8, 2, 3, 2);
  CHECK(net.num_layers() == 3);
  CHECK(net.sources().size() == 8);
  CHECK(net.layers[1].size() == 2);
  CHECK(net.groups[0].size() == 2);
  CHECK(net.groups[0][0].subgroups.size() == 2);
  CHECK(net.groups[1][0].members.size() == 2);

  CHECK_THROWS_AS(layered_network(4, 2, 2, 1), BadShape);
  CHECK_THROWS_AS(layered_network(4, 8, 3, 1), BadShape);
}

TEST_CASE("relay-free single-subgroup run reproduces the baseline") {
  const auto config = parse_config(R"({
    "topology": {"kind": "layered", "k1": 16, "k2": 1, "layers": 2, "subgroups": 1},
    "fading": {"family": "rayleigh_unit"},
    "snr_db": [0, 10, 20],
    "mc": {"samples": 50000, "seed": 7},
    "schemes": ["fpc_ota", "rf_comac_fpc"]
  })");
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].scheme == "fpc_ota");
    CHECK(rows[i + 1].scheme == "rf_comac_fpc");
    CHECK(rows[i].rate == rows[i + 1].rate);
  }
}

TEST_CASE("rate is nonincreasing in the layer count") {
  const auto config = parse_config(R"({
    "topology": {"kind": "layered", "k1": 16, "k2": 1, "layers": 3, "subgroups": 2},
    "fading": {"family": "rayleigh_unit"},
    "snr_db": [10],
    "mc": {"samples": 20000, "seed": 3},
    "schemes": ["fpc_ata", "fpc_ota", "apc_ata", "apc_ota"],
    "sweep": {"variable": "layers", "values": [3, 4, 5]}
  })");
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 12);
  for (std::size_t scheme = 0; scheme < 4; ++scheme) {
    double prev = 1e300;
    for (std::size_t point = 0; point < 3; ++point) {
      const auto& row = rows[point * 4 + scheme];
      CHECK(row.rate <= prev + 3.0 * row.std_err + 1e-12);
      prev = row.rate;
    }
  }
}

TEST_CASE("scheme dominance at every sweep point") {
  const auto rows = run_experiment(small_config());
  REQUIRE(rows.size() == 8);
  for (std::size_t point = 0; point < 2; ++point) {
    const auto& fpc_ata = rows[point * 4 + 0];
    const auto& fpc_ota = rows[point * 4 + 1];
    const auto& apc_ata = rows[point * 4 + 2];
    const auto& apc_ota = rows[point * 4 + 3];
    const double tol = 1e-9;
    CHECK(fpc_ota.rate >= fpc_ata.rate - tol);
    CHECK(apc_ota.rate >= apc_ata.rate - tol);
    CHECK(apc_ota.rate >= fpc_ota.rate - tol);
  }
}

TEST_CASE("csv output is stable and well formed") {
  const auto config = small_config();
  const auto rows = run_experiment(config);
  std::ostringstream a;
  emit_csv(rows, a);
  std::ostringstream b;
  emit_csv(run_experiment(config), b);
  CHECK(a.str() == b.str());

  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "sweep_var,sweep_value,scheme,L,K1,K2,C,P_db,rate_bits,std_err,bottleneck");
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == 8);
}

TEST_CASE("empty row sets are rejected") {
  std::ostringstream out;
  CHECK_THROWS_AS(emit_csv({}, out), IoError);
}

TEST_CASE("disorganized topology configs run end to end") {
  const auto config = parse_config(R"({
    "topology": {"kind": "disorganized", "fusion": 9,
                 "destinations": {"1": 5, "2": 5, "3": 6, "4": 6,
                                   "5": 9, "6": 9, "7": 9},
                 "strategy": {"kind": "singletons"}},
    "fading": {"family": "rayleigh_unit"},
    "snr_db": [10],
    "mc": {"samples": 10000, "seed": 5},
    "schemes": ["fpc_ota"]
  })");
  validate_config(config);
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rate > 0.0);
  // Node 7 is a shallow source bridged through a virtual relay.
  CHECK(rows[0].k1 == 5);
}

TEST_CASE("explicit topology configs validate partitions") {
  CHECK_THROWS_AS(parse_config(R"({
    "topology": {"kind": "explicit",
                 "layers": [[1, 2], [3]],
                 "groups": [[{"members": [1], "subgroups": [[1]]}]]},
    "fading": {"family": "rayleigh_unit"},
    "snr_db": [0],
    "mc": {"samples": 10, "seed": 1},
    "schemes": ["fpc_ata"]})"),
    ConfigError);
}
