// Command-line front end: runs config-driven rate sweeps, validates
// configs, and exposes the brute-force oracles used by the test suite.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlfc/experiments.hpp"
#include "mlfc/oracles.hpp"

namespace {

void print_error(const char* type, const std::string& message) {
  std::cerr << "{\"error\":\"" << type << "\",\"message\":\"" << message
            << "\"}\n";
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int run_command(const std::string& config_path, const std::string& out_path,
                std::int64_t samples_override, std::int64_t seed_override) {
  mlfc::ExperimentConfig config = mlfc::load_config_file(config_path);
  if (samples_override > 0) config.mc.samples = samples_override;
  if (seed_override >= 0) config.mc.seed = static_cast<std::uint64_t>(seed_override);

  const std::vector<mlfc::ResultRow> rows = mlfc::run_experiment(config);
  if (out_path.empty())
    mlfc::emit_csv(rows, std::cout);
  else
    mlfc::emit_csv_file(rows, out_path);
  return 0;
}

int oracle_command(const std::string& which, const std::string& rates_csv,
                   const std::string& eps_csv, const std::string& sizes_csv,
                   double step, const std::string& ks_csv, std::int64_t samples,
                   std::int64_t seed) {
  if (which == "lp-fixed") {
    const std::vector<double> rates = parse_doubles(rates_csv);
    const mlfc::LpResult lp = mlfc::lp_max_min_fixed_power(rates);
    std::vector<mlfc::SubgroupParams> params;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      mlfc::SubgroupParams sp;
      sp.path = {2, 1, static_cast<int>(i) + 1};
      sp.fixed_rate = rates[i];
      params.push_back(sp);
    }
    const mlfc::AllocationSolution sol = mlfc::solve_fixed_power(params);
    std::cout << "lp_t," << lp.t << "\nclosed_form_t," << sol.t << "\n";
    return 0;
  }

  if (which == "apc-grid") {
    const std::vector<double> eps = parse_doubles(eps_csv);
    const std::vector<int> sizes = parse_ints(sizes_csv);
    if (eps.size() != sizes.size()) {
      print_error("BadArguments", "--eps and --sizes differ in length");
      return 1;
    }
    std::vector<mlfc::SubgroupParams> params;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      mlfc::SubgroupParams sp;
      sp.path = {2, 1, static_cast<int>(i) + 1};
      sp.size = sizes[i];
      sp.apc_gain = eps[i];
      params.push_back(sp);
    }
    const mlfc::GridSearchResult grid = mlfc::apc_grid_search(params, step);
    const mlfc::AllocationSolution sol = mlfc::solve_apc(params);
    std::cout << "grid_t," << grid.t << "\nsolver_t," << sol.t << "\ngrid_p";
    for (double p : grid.p) std::cout << ',' << p;
    std::cout << "\nsolver_p";
    for (double p : sol.p) std::cout << ',' << p;
    std::cout << "\n";
    return 0;
  }

  if (which == "ratio-pin") {
    const std::vector<int> ks = parse_ints(ks_csv);
    const auto pins = mlfc::pin_ratio_statistic(
        mlfc::FadingModel::rayleigh(), ks, samples,
        static_cast<std::uint64_t>(seed));
    std::cout.precision(17);
    std::cout << "K,value,std_error\n";
    for (const auto& pin : pins)
      std::cout << pin.k << ',' << pin.estimate.value << ','
                << pin.estimate.std_error << "\n";
    return 0;
  }

  print_error("BadArguments", "unknown oracle case '" + which + "'");
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate simulator and time/power allocation optimizer for "
               "hierarchical over-the-air aggregation networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::int64_t samples_override = 0;
  std::int64_t seed_override = -1;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file (JSON)")->required();
  run->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  run->add_option("--samples", samples_override, "override mc.samples");
  run->add_option("--seed", seed_override, "override mc.seed");

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", config_path, "config file (JSON)")->required();

  std::string oracle_case;
  std::string rates_csv = "1,2,2";
  std::string eps_csv = "1,2,4";
  std::string sizes_csv = "2,2,2";
  std::string ks_csv = "1,2,4,8,16";
  double step = 1e-3;
  std::int64_t oracle_samples = 10000000;
  std::int64_t oracle_seed = 20240911;

  CLI::App* oracle = app.add_subcommand("oracle", "run a brute-force oracle");
  oracle->add_option("case", oracle_case, "lp-fixed | apc-grid | ratio-pin")
      ->required();
  oracle->add_option("--rates", rates_csv, "subgroup rates (lp-fixed)");
  oracle->add_option("--eps", eps_csv, "APC gain factors (apc-grid)");
  oracle->add_option("--sizes", sizes_csv, "subgroup sizes (apc-grid)");
  oracle->add_option("--step", step, "simplex grid step (apc-grid)");
  oracle->add_option("--ks", ks_csv, "subgroup sizes (ratio-pin)");
  oracle->add_option("--samples", oracle_samples, "sample count (ratio-pin)");
  oracle->add_option("--seed", oracle_seed, "stream seed (ratio-pin)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(config_path, out_path, samples_override, seed_override);
    if (validate->parsed()) {
      mlfc::validate_config(mlfc::load_config_file(config_path));
      std::cout << "ok\n";
      return 0;
    }
    return oracle_command(oracle_case, rates_csv, eps_csv, sizes_csv, step,
                          ks_csv, oracle_samples, oracle_seed);
  } catch (const mlfc::ConfigError& e) {
    print_error("ConfigError", e.what());
  } catch (const mlfc::IoError& e) {
    print_error("IoError", e.what());
  } catch (const mlfc::Error& e) {
    print_error("Error", e.what());
  } catch (const std::exception& e) {
    print_error("Unexpected", e.what());
  }
  return 1;
}
