#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "metroplan/scenario.hpp"

using namespace metroplan;
namespace fs = std::filesystem;

namespace {

const std::string kSource = METROPLAN_SOURCE_DIR;

nlohmann::json minimal_scenario_json() {
  nlohmann::json j;
  j["name"] = "mini";
  j["seed"] = 11;
  j["topology"] = {{"path", "golden12_topology.json"}, {"format", "json"}};
  j["hierarchy"] = {{"2", {{"standalone", {0, 1}}}},
                    {"3", {{"standalone", {2, 3, 4}}}},
                    {"4", {{"standalone", {5, 6, 7, 8, 9, 10, 11}}}}};
  return j;
}

}  // namespace

TEST_CASE("scenario parsing fills defaults") {
  auto sc = parse_scenario(minimal_scenario_json(), kSource + "/scenarios");
  REQUIRE(sc.seed == 11);
  REQUIRE(sc.planner.period_years == 10);
  REQUIRE(sc.planner.fp_max == 20);
  REQUIRE(sc.optical.modulation_thresholds.size() == 6);
  REQUIRE(sc.layout().total_slots == 160);
  REQUIRE(sc.layout().separation[0] == 64);
  REQUIRE(sc.layout().separation[1] == 80);
  REQUIRE(sc.candidate_powers_dbm.size() == 13);
  REQUIRE_NOTHROW(sc.validate());
}

TEST_CASE("scenario validation failures") {
  SECTION("missing seed") {
    auto j = minimal_scenario_json();
    j.erase("seed");
    auto sc = parse_scenario(j, kSource + "/scenarios");
    REQUIRE_THROWS_AS(sc.validate(), ValidationError);
  }
  SECTION("bypassing an unknown level") {
    auto j = minimal_scenario_json();
    j["mode"] = {{"type", "bypass"}, {"levels", {9}}};
    auto sc = parse_scenario(j, kSource + "/scenarios");
    REQUIRE_THROWS_AS(sc.validate(), ValidationError);
  }
  SECTION("bypassing the bottom level") {
    auto j = minimal_scenario_json();
    j["mode"] = {{"type", "bypass"}, {"levels", {4}}};
    auto sc = parse_scenario(j, kSource + "/scenarios");
    REQUIRE_THROWS_AS(sc.validate(), ValidationError);
  }
  SECTION("unknown mode or format") {
    auto j = minimal_scenario_json();
    j["mode"] = {{"type", "ring"}};
    REQUIRE_THROWS_AS(parse_scenario(j, ""), ValidationError);
    j = minimal_scenario_json();
    j["topology"]["format"] = "matfile";
    REQUIRE_THROWS_AS(parse_scenario(j, ""), ValidationError);
  }
}

TEST_CASE("bypass transform merges standalone sets downward") {
  std::map<int, LevelSpec> h;
  h[2] = {{0, 1}, std::nullopt};
  h[3] = {{2, 3}, std::nullopt};
  h[4] = {{4, 5}, std::nullopt};
  auto rh = resolve_bypass(h, {3});
  REQUIRE(rh.bypass_nodes == std::set<int>{2, 3});
  REQUIRE(rh.spec.count(3) == 0);
  REQUIRE(rh.spec.at(4).standalone == std::vector<int>{2, 3, 4, 5});

  // explicit colocated lists drop the moved nodes
  std::map<int, LevelSpec> h2 = h;
  h2[4].colocated = std::vector<int>{0, 1, 2, 3};
  auto rh2 = resolve_bypass(h2, {3});
  REQUIRE(*rh2.spec.at(4).colocated == std::vector<int>{0, 1});
}

TEST_CASE("plan, analyze and compare round trip") {
  Scenario sc = load_scenario(kSource + "/scenarios/golden12.json");
  const fs::path dir = fs::temp_directory_path() / "metroplan_scenario_rt";
  fs::remove_all(dir);
  std::ostringstream log;
  const std::string out = run_plan(sc, (dir / "full").string(), &log);
  REQUIRE(out == (dir / "full").string());
  REQUIRE(log.str().find("[HL4] year 1") != std::string::npos);
  REQUIRE(fs::exists(dir / "full" / "scenario_resolved.json"));
  REQUIRE(fs::exists(dir / "full" / "golden12_HL4_bvt_info.json"));
  REQUIRE(fs::exists(dir / "full" / "golden12_HL3_bvt_info.json"));

  SECTION("analyze produces the requested reports only") {
    auto res = run_analyze((dir / "full").string(), {"cost"});
    REQUIRE(res.files.size() == 2);  // csv + svg
    REQUIRE(fs::exists(dir / "full" / "reports" / "golden12_cost_analyse.csv"));
  }

  SECTION("comparing a run against itself is all zeros") {
    const std::string csv =
        run_compare((dir / "full").string(), (dir / "full").string());
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      REQUIRE(line.substr(line.find_last_of(',') + 1) == "0");
      ++rows;
    }
    REQUIRE(rows == 9);
  }

  SECTION("compare refuses a seed mismatch") {
    const fs::path forged = dir / "forged";
    fs::copy(dir / "full", forged, fs::copy_options::recursive);
    auto j = read_archive((forged / "scenario_resolved.json").string());
    j["seed"] = sc.seed + 1;
    write_archive((forged / "scenario_resolved.json").string(), j);
    REQUIRE_THROWS_AS(run_compare((dir / "full").string(), forged.string()),
                      ValidationError);
  }

  SECTION("a second run reuses the QoT cache and reproduces the archives") {
    const std::string again = run_plan(sc, (dir / "again").string());
    for (const char* f : {"golden12_HL4_bvt_info.json", "golden12_HL3_link_info.json",
                          "golden12_HL4_segments_latency.json"}) {
      std::ifstream a(dir / "full" / f, std::ios::binary);
      std::ifstream b(fs::path(again) / f, std::ios::binary);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      REQUIRE(sa.str() == sb.str());
    }
  }
}

TEST_CASE("analyze on a directory without archives fails cleanly") {
  const fs::path dir = fs::temp_directory_path() / "metroplan_empty_results";
  fs::remove_all(dir);
  fs::create_directories(dir);
  REQUIRE_THROWS_AS(run_analyze(dir.string(), {"cost"}), IoError);
}

TEST_CASE("initial traffic is persisted and reloaded") {
  Scenario sc = load_scenario(kSource + "/scenarios/golden12.json");
  const fs::path dir = fs::temp_directory_path() / "metroplan_traffic_cache";
  fs::remove_all(dir);
  PlanContext first = prepare_plan(sc, dir.string());

  // doctor the cached file; a second prepare must pick the stored values up
  fs::path cache;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("initial_traffic_", 0) == 0) cache = e.path();
  REQUIRE_FALSE(cache.empty());
  auto j = read_archive(cache.string());
  auto doctored = j.at("base_capacity").get<std::vector<double>>();
  doctored[0] = 123.0;
  j["base_capacity"] = doctored;
  write_archive(cache.string(), j);

  PlanContext second = prepare_plan(sc, dir.string());
  REQUIRE(second.traffic.base_capacity[0] == 123.0);
  REQUIRE(first.traffic.base_capacity[0] == 300.0);
}

TEST_CASE("golden comparison table matches hand-computed ratios") {
  Scenario full = load_scenario(kSource + "/scenarios/golden12.json");
  Scenario byp = load_scenario(kSource + "/scenarios/golden12_bypass.json");
  const fs::path dir = fs::temp_directory_path() / "metroplan_compare_golden";
  fs::remove_all(dir);
  run_plan(full, (dir / "full").string());
  run_plan(byp, (dir / "bypass").string());

  auto expected = read_archive(kSource + "/tests/golden/golden12_expected.json");
  const auto& fa = expected.at("full").at("analysis");
  const auto& ba = expected.at("bypass").at("analysis");
  auto rel = [](double a, double b) { return (b - a) / a * 100.0; };
  std::map<std::string, double> want{
      {"otco", rel(fa.at("otco").back(), ba.at("otco").back())},
      {"tco", rel(fa.at("tco").back(), ba.at("tco").back())},
      {"energy_mwh", rel(fa.at("energy_total_cum").back(),
                         ba.at("energy_total_cum").back())},
      {"mean_latency_us", rel(fa.at("mean_latency_us").get<double>(),
                              ba.at("mean_latency_us").get<double>())},
      {"bvts", rel(fa.at("bvt_cum_total").back(), ba.at("bvt_cum_total").back())},
  };

  const std::string csv = run_compare((dir / "full").string(), (dir / "bypass").string());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::map<std::string, double> got;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c3 = line.find_last_of(',');
    got[line.substr(0, c1)] = std::stod(line.substr(c3 + 1));
  }
  for (const auto& [metric, value] : want)
    REQUIRE_THAT(got.at(metric), Catch::Matchers::WithinAbs(value, 1e-6));

  // swapping the inputs flips the sign and changes the denominator
  const std::string swapped =
      run_compare((dir / "bypass").string(), (dir / "full").string());
  std::istringstream in2(swapped);
  std::getline(in2, line);
  while (std::getline(in2, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c3 = line.find_last_of(',');
    const std::string metric = line.substr(0, c1);
    const double v = std::stod(line.substr(c3 + 1));
    if (got.at(metric) != 0.0) REQUIRE(v * got.at(metric) < 0.0);
  }
}

TEST_CASE("blocking propagates as a planning error") {
  // one fiber pair and one slot per band leaves far too little spectrum
  Scenario sc = load_scenario(kSource + "/scenarios/golden12.json");
  sc.planner.fp_max = 1;
  sc.bands = {{"C", 193.0, 193.075, 0.075},
              {"SuperC", 193.075, 193.15, 0.075},
              {"L", 193.15, 193.225, 0.075}};
  sc.planner.band_layout = sc.layout();
  const fs::path dir = fs::temp_directory_path() / "metroplan_blocking";
  fs::remove_all(dir);
  REQUIRE_THROWS_AS(run_plan(sc, dir.string()), BlockingError);
}
