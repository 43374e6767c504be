#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mlfc/allocation.hpp"
#include "mlfc/channel.hpp"
#include "mlfc/rates.hpp"
#include "mlfc/topology.hpp"

namespace mlfc {

enum class Scheme {
  fpc_ata,  // fixed power, uniform time split
  fpc_ota,  // fixed power, optimal time split
  apc_ata,  // adaptive power, uniform time split
  apc_ota,  // adaptive power, optimal time split
  rf_comac_fpc,
  time_sharing,
  rf_comac_apc,
  improved_time_sharing,
};

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);
bool scheme_is_baseline(Scheme scheme);

struct TopologyConfig {
  enum class Kind { layered, explicit_net, disorganized };
  Kind kind = Kind::layered;

  // layered generator
  int k1 = 1;
  int k2 = 1;
  int num_layers = 2;
  int subgroups = 1;  // subgroup count of each first-hop group

  // explicit network
  HierarchicalNetwork explicit_net;

  // disorganized tree + strategy
  DisorganizedNetwork dnet;
  PartitionStrategy strategy;
};

struct SweepSpec {
  std::string variable = "p_db";  // or k1 | k2 | layers | subgroups
  std::vector<double> values;     // unused for p_db (snr grid applies)
};

struct ExperimentConfig {
  TopologyConfig topology;
  FadingModel fading;
  std::vector<double> snr_db;
  McConfig mc;
  std::vector<Scheme> schemes;
  SweepSpec sweep;
};

struct ResultRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  std::string scheme;
  int num_layers = 0;
  int k1 = 0;
  int k2 = 0;
  int subgroups = 0;
  double p_db = 0.0;
  double rate = 0.0;
  double std_err = 0.0;
  std::string bottleneck;
};

// Sources split into k2 balanced groups of `subgroups` subgroups each;
// every layer above the second holds a single node.
HierarchicalNetwork layered_network(int k1, int k2, int num_layers,
                                    int subgroups);

// Per-subgroup sizes, fixed-power rates and APC gain factors for every
// real subgroup of the network.
std::vector<SubgroupParams> subgroup_params(const HierarchicalNetwork& net,
                                            const FadingModel& model,
                                            double power, const McConfig& mc);

struct SchemeResult {
  double rate = 0.0;
  double std_err = 0.0;
  SubgroupPath bottleneck;
  bool has_bottleneck = false;
};
SchemeResult evaluate_scheme(const HierarchicalNetwork& net, Scheme scheme,
                             const FadingModel& model, double power,
                             const McConfig& mc);

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Materializes every sweep point (catching shape errors) without running
// any estimator.
void validate_config(const ExperimentConfig& config);

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path);

double db_to_linear(double db);

}  // namespace mlfc
