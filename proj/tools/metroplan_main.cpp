// Command-line front end: plan a scenario, analyze a finished run, or compare
// two runs of the same topology and seed.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metroplan/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kPlanningBlocked = 2;
constexpr int kIo = 3;

std::vector<std::string> split_kinds(const std::string& list) {
  if (list == "all") return metroplan::all_report_kinds();
  std::vector<std::string> out;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-year multi-band hierarchical optical metro network planner"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir;
  auto* plan = app.add_subcommand("plan", "run the multi-year plan for a scenario");
  plan->add_option("--scenario", scenario_file, "scenario JSON file")->required();
  plan->add_option("--out", out_dir, "results directory (overrides the scenario)");

  std::string results_dir, reports = "all";
  auto* analyze = app.add_subcommand("analyze", "emit reports from a finished run");
  analyze->add_option("--results", results_dir, "results directory of a plan run")
      ->required();
  analyze->add_option("--reports", reports,
                      "comma-separated report kinds or 'all' (link_state, fp_usage, "
                      "band_degree, bvt_license, cost, energy, latency_pdf, traffic_flow)");

  std::string dir_a, dir_b, csv_out;
  auto* compare = app.add_subcommand("compare", "relative differences between two runs");
  compare->add_option("dir_a", dir_a, "baseline results directory")->required();
  compare->add_option("dir_b", dir_b, "variant results directory")->required();
  compare->add_option("--csv", csv_out, "also write the comparison table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (plan->parsed()) {
      metroplan::Scenario sc = metroplan::load_scenario(scenario_file);
      const std::string dir = metroplan::run_plan(sc, out_dir, &std::cout);
      std::cout << "archives written to " << dir << "\n";
    } else if (analyze->parsed()) {
      auto out = metroplan::run_analyze(results_dir, split_kinds(reports));
      for (const auto& f : out.files) std::cout << f << "\n";
    } else if (compare->parsed()) {
      std::cout << metroplan::run_compare(dir_a, dir_b, csv_out);
    }
  } catch (const metroplan::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const metroplan::BlockingError& e) {
    std::cerr << "planning blocked: " << e.what() << "\n";
    return kPlanningBlocked;
  } catch (const metroplan::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
