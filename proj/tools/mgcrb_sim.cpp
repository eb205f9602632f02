// Closed-loop transmitter/receiver selection simulator.
//
//   mgcrb_sim --scenario scenario1 --mc 50 --seed 7 --workers 4 --out results
//   mgcrb_sim --scenario my.yaml --policies best,mgcrbcl --dump-config

#include "mgcrb/harness.hpp"
#include "mgcrb/report.hpp"
#include "mgcrb/scenario_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

std::vector<mgcrb::PolicySpec> filter_policies(const std::vector<mgcrb::PolicySpec>& all, const std::string& csv) {
  if (csv.empty()) return all;
  std::vector<mgcrb::PolicySpec> out;
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    bool found = false;
    for (const auto& p : all) {
      if (p.name == name) {
        out.push_back(p);
        found = true;
      }
    }
    if (!found) throw mgcrb::ConfigError("policy '" + name + "' is not defined by the scenario");
  }
  if (out.empty()) throw mgcrb::ConfigError("--policies selected nothing");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop MIMO radar TX/RX selection simulator"};
  std::string scenario_arg;
  int mc = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  std::string out_dir;
  std::string policy_list;
  int debug_trials = 0;
  bool verbose = false;
  bool dump_config = false;

  app.add_option("-s,--scenario", scenario_arg, "Scenario file or bundled name (scenario1..3)")->required();
  app.add_option("--mc", mc, "Monte-Carlo trial count (default: scenario value)")->check(CLI::PositiveNumber);
  app.add_option("--horizon", horizon, "Override horizon T")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (default: scenario value)");
  app.add_option("-j,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--out", out_dir, "Output directory (default: $MGCRB_OUTPUT_DIR or scenario value)");
  app.add_option("--policies", policy_list, "Comma-separated subset of policy names");
  app.add_option("--debug-trials", debug_trials, "Write per-measurement debug CSV for the first N trials")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", verbose, "Progress messages; implies --debug-trials 1 when not given");
  app.add_flag("--dump-config", dump_config, "Print the resolved scenario as YAML and exit");
  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    const auto path = mgcrb::resolve_scenario_path(scenario_arg);
    mgcrb::Scenario sc = mgcrb::load_scenario(path);
    if (mc > 0) sc.monte_carlo = mc;
    if (seed_given) sc.seed = seed;
    if (horizon > 0) {
      sc.horizon = horizon;
      for (auto& t : sc.targets) {
        std::erase_if(t.segments, [&](const mgcrb::MotionSegment& s) { return s.start_t >= horizon; });
        for (auto& s : t.segments) s.end_t = std::min(s.end_t, horizon + 1);
      }
    }
    if (!out_dir.empty()) {
      sc.output_dir = out_dir;
    } else if (const char* env = std::getenv("MGCRB_OUTPUT_DIR")) {
      sc.output_dir = env;
    }
    sc.policies = filter_policies(sc.policies, policy_list);
    sc.validate();

    if (dump_config) {
      std::cout << mgcrb::to_yaml(sc);
      return 0;
    }
    if (verbose && debug_trials == 0) debug_trials = 1;

    if (verbose) {
      std::cerr << "scenario " << sc.name << ": M=" << sc.layout.num_tx() << " N=" << sc.layout.num_rx()
                << " K=" << sc.num_targets() << " T=" << sc.horizon << " trials=" << sc.monte_carlo
                << " workers=" << workers << '\n';
    }

    std::vector<std::vector<mgcrb::DebugRow>> debug;
    mgcrb::ExperimentOptions opts;
    opts.trials = sc.monte_carlo;
    opts.seed = sc.seed;
    opts.workers = workers;
    opts.debug_trials = debug_trials;
    opts.debug = debug_trials > 0 ? &debug : nullptr;
    const mgcrb::RunSummary summary = mgcrb::run_experiment(sc, sc.policies, opts);

    const std::filesystem::path dir(sc.output_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream csv;
    mgcrb::write_steps_csv(csv, summary);
    write_file(dir / (sc.name + "_steps.csv"), csv.str());
    write_file(dir / (sc.name + "_summary.json"), mgcrb::summary_json(summary).dump(2) + "\n");
    for (std::size_t i = 0; i < debug.size(); ++i) {
      std::ostringstream d;
      mgcrb::write_debug_csv(d, debug[i]);
      write_file(dir / (sc.name + "_trial" + std::to_string(i) + "_debug.csv"), d.str());
    }

    std::cout << "scenario " << sc.name << "  trials=" << summary.trials << "  T=" << summary.horizon
              << "  seed=" << summary.seed << '\n';
    std::cout << mgcrb::format_summary_table(summary);
    std::cout << "wall clock: " << summary.wall_clock_seconds << " s\n";
    std::cout << "outputs written to " << dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
