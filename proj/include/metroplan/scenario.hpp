#ifndef METROPLAN_SCENARIO_HPP
#define METROPLAN_SCENARIO_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metroplan/analysis.hpp"
#include "metroplan/archive.hpp"
#include "metroplan/common.hpp"
#include "metroplan/planner.hpp"
#include "metroplan/qot.hpp"
#include "metroplan/spectrum.hpp"
#include "metroplan/topology.hpp"

namespace metroplan {

/// One self-contained planning scenario: topology, hierarchy, bands, physics,
/// planner knobs, traffic model and architecture mode. Every constant has a
/// sensible default so a scenario file only states what it changes.
struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 0;
  bool seed_present = false;

  std::string topology_path;
  TopologyFormat topology_format = TopologyFormat::Json;
  std::map<int, LevelSpec> hierarchy;

  bool bypass_mode = false;
  std::vector<int> bypass_levels;

  std::vector<Band> bands = default_bands();
  OpticalParameters optical;
  double trx_snr_db = 36.0;
  double aging_margin_db = 1.0;
  FilterPenaltyTable filter_table = FilterPenaltyTable::defaults();
  double max_span_km = 80.0;
  std::vector<double> candidate_powers_dbm = default_powers();

  PlannerConfig planner;
  int k_shortest = 20;

  int mc_steps = 100;
  double min_rate_gbps = 20.0;
  double max_rate_gbps = 200.0;

  double per_level_delay_us = 200.0;
  bool latency_include_final_stage = false;
  int router_base_year = 5;

  std::string results_dir;

  static std::vector<Band> default_bands() {
    return {{"C", 191.3, 196.1, 0.075},
            {"SuperC", 196.1, 197.3, 0.075},
            {"L", 184.4, 190.4, 0.075}};
  }

  static std::vector<double> default_powers() {
    std::vector<double> p;
    for (int dbm = -6; dbm <= 6; ++dbm) p.push_back(dbm);
    return p;
  }

  /// Slot-index layout of the concatenated C, SuperC, L grids.
  BandLayout layout() const {
    const int c = bands.at(0).num_channels();
    const int sc = bands.at(1).num_channels();
    const int l = bands.at(2).num_channels();
    return BandLayout{{c, c + sc}, c + sc + l};
  }

  std::vector<double> grid_thz() const {
    std::vector<double> grid;
    for (const Band& b : bands) {
      auto g = build_grid(b);
      grid.insert(grid.end(), g.begin(), g.end());
    }
    return grid;
  }

  void validate() const {
    if (!seed_present) throw ValidationError("scenario must declare a seed");
    if (topology_path.empty()) throw ValidationError("scenario must name a topology file");
    if (hierarchy.empty()) throw ValidationError("scenario must define a hierarchy");
    if (bands.size() != 3) throw ValidationError("exactly three bands (C, SuperC, L) expected");
    if (bypass_mode) {
      if (bypass_levels.empty())
        throw ValidationError("bypass mode without levels to bypass");
      const int top = hierarchy.begin()->first;
      const int bottom = hierarchy.rbegin()->first;
      for (int b : bypass_levels) {
        if (!hierarchy.count(b))
          throw ValidationError("bypassed level " + std::to_string(b) +
                                " is not in the hierarchy");
        if (b == top || b == bottom)
          throw ValidationError("cannot bypass the top or bottom hierarchy level");
      }
    }
    if (!(min_rate_gbps < max_rate_gbps) && min_rate_gbps != max_rate_gbps)
      throw ValidationError("traffic rate range is inverted");
    if (mc_steps < 1) throw ValidationError("mc_steps must be at least 1");
    if (k_shortest < 1) throw ValidationError("k_shortest must be at least 1");
    optical.validate();
    filter_table.validate();
    PlannerConfig cfg = planner;
    cfg.band_layout = layout();
    cfg.validate();
  }
};

// ---------------------------------------------------------------------------
// scenario JSON (de)serialization

namespace detail {

inline void parse_optical(const nlohmann::json& j, Scenario& sc) {
  OpticalParameters& p = sc.optical;
  if (j.contains("h_plank")) p.h_plank = j["h_plank"];
  if (j.contains("target_ber")) p.target_ber = j["target_ber"];
  if (j.contains("beta2")) p.beta2 = j["beta2"];
  if (j.contains("beta3")) p.beta3 = j["beta3"];
  if (j.contains("gamma_nl")) p.gamma_nl = j["gamma_nl"];
  if (j.contains("cr")) p.cr = j["cr"];
  if (j.contains("alpha_db_per_km")) p.alpha_db = j["alpha_db_per_km"];
  if (j.contains("noise_figure_c_db")) p.noise_figure_c = db_to_linear(j["noise_figure_c_db"]);
  if (j.contains("noise_figure_l_db")) p.noise_figure_l = db_to_linear(j["noise_figure_l_db"]);
  if (j.contains("symbol_rate_baud")) p.symbol_rate = j["symbol_rate_baud"];
  if (j.contains("rolloff")) p.rolloff = j["rolloff"];
  if (j.contains("modulations")) {
    p.modulation_thresholds.clear();
    for (const auto& m : j["modulations"])
      p.modulation_thresholds.push_back(
          {m.at("name"), m.at("snr_db"), m.at("bitrate_gbps")});
  }
  if (j.contains("nli")) {
    const auto& n = j["nli"];
    if (n.contains("enable")) p.nli.enable_nli = n["enable"];
    if (n.contains("isrs")) p.nli.enable_isrs = n["isrs"];
    if (n.contains("epsilon")) p.nli.epsilon = n["epsilon"];
    if (n.contains("phi_mfl")) p.nli.phi_mfl = n["phi_mfl"].get<std::vector<double>>();
  }
  if (j.contains("trx_snr_db")) {
    const double v = j["trx_snr_db"];
    sc.trx_snr_db = v > 0 ? v : kAbsent;  // non-positive disables the term
  }
  if (j.contains("aging_margin_db")) sc.aging_margin_db = j["aging_margin_db"];
  if (j.contains("filter_penalty")) {
    const auto& f = j["filter_penalty"];
    sc.filter_table.min_hops = f.value("min_hops", 1);
    sc.filter_table.min_degree = f.value("min_degree", 2);
    sc.filter_table.penalty_db = f.at("table").get<std::vector<std::vector<double>>>();
  }
  if (j.contains("max_span_km")) sc.max_span_km = j["max_span_km"];
  if (j.contains("candidate_powers_dbm"))
    sc.candidate_powers_dbm = j["candidate_powers_dbm"].get<std::vector<double>>();
}

inline void parse_planner(const nlohmann::json& j, Scenario& sc) {
  PlannerConfig& c = sc.planner;
  if (j.contains("period_years")) c.period_years = j["period_years"];
  if (j.contains("bvt_bitrates")) c.bvt_bitrates = j["bvt_bitrates"].get<std::vector<double>>();
  if (j.contains("license_capacities"))
    c.license_capacities = j["license_capacities"].get<std::vector<double>>();
  if (j.contains("licenses_per_bvt")) c.licenses_per_bvt = j["licenses_per_bvt"];
  if (j.contains("fp_max")) c.fp_max = j["fp_max"];
  if (j.contains("kpair_standalone")) c.kpair_standalone = j["kpair_standalone"];
  if (j.contains("kpair_colocated")) c.kpair_colocated = j["kpair_colocated"];
  if (j.contains("cagr")) c.cagr = j["cagr"];
  if (j.contains("dual_homing_split")) c.dual_homing_split = j["dual_homing_split"];
  if (j.contains("k_shortest")) sc.k_shortest = j["k_shortest"];
  if (j.contains("land_cost_metric")) {
    const std::string m = j["land_cost_metric"];
    if (m == "fp_km_bvt_band")
      c.land_cost_metric = LandCostMetric::FpKmBvtBand;
    else if (m == "path_km")
      c.land_cost_metric = LandCostMetric::PathKm;
    else
      throw ValidationError("unknown land_cost_metric: " + m);
  }
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j, const std::string& base_dir = "") {
  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  if (j.contains("seed")) {
    sc.seed = j["seed"].get<std::uint64_t>();
    sc.seed_present = true;
  }
  if (j.contains("topology")) {
    const auto& t = j["topology"];
    sc.topology_path = t.at("path").get<std::string>();
    const std::string fmt = t.value("format", std::string("json"));
    if (fmt == "json")
      sc.topology_format = TopologyFormat::Json;
    else if (fmt == "csv" || fmt == "csv-matrix")
      sc.topology_format = TopologyFormat::CsvMatrix;
    else
      throw ValidationError("unknown topology format: " + fmt);
    if (!base_dir.empty() && !std::filesystem::path(sc.topology_path).is_absolute())
      sc.topology_path = (std::filesystem::path(base_dir) / sc.topology_path).string();
  }
  if (j.contains("hierarchy")) {
    for (const auto& [key, spec] : j["hierarchy"].items()) {
      LevelSpec ls;
      ls.standalone = spec.at("standalone").get<std::vector<int>>();
      if (spec.contains("colocated"))
        ls.colocated = spec["colocated"].get<std::vector<int>>();
      sc.hierarchy[std::stoi(key)] = std::move(ls);
    }
  }
  if (j.contains("mode")) {
    const auto& m = j["mode"];
    const std::string type = m.value("type", std::string("full_hierarchical"));
    if (type == "bypass") {
      sc.bypass_mode = true;
      sc.bypass_levels = m.at("levels").get<std::vector<int>>();
    } else if (type != "full_hierarchical") {
      throw ValidationError("unknown scenario mode: " + type);
    }
  }
  if (j.contains("bands")) {
    sc.bands.clear();
    for (const auto& b : j["bands"])
      sc.bands.push_back({b.at("name"), b.at("start_thz"), b.at("end_thz"),
                          b.value("spacing_thz", 0.075)});
  }
  if (j.contains("optical")) detail::parse_optical(j["optical"], sc);
  if (j.contains("planner")) detail::parse_planner(j["planner"], sc);
  if (j.contains("traffic")) {
    const auto& t = j["traffic"];
    sc.mc_steps = t.value("mc_steps", sc.mc_steps);
    sc.min_rate_gbps = t.value("min_rate_gbps", sc.min_rate_gbps);
    sc.max_rate_gbps = t.value("max_rate_gbps", sc.max_rate_gbps);
  }
  if (j.contains("latency")) {
    const auto& l = j["latency"];
    sc.per_level_delay_us = l.value("per_level_delay_us", sc.per_level_delay_us);
    sc.latency_include_final_stage =
        l.value("include_final_stage", sc.latency_include_final_stage);
  }
  if (j.contains("router_base_year")) sc.router_base_year = j["router_base_year"];
  if (j.contains("results_dir")) sc.results_dir = j["results_dir"].get<std::string>();
  sc.planner.band_layout = sc.layout();
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("scenario parse failure: ") + e.what());
  }
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_scenario(j, base);
}

// ---------------------------------------------------------------------------
// bypass transform and the per-scenario planning context

/// Hierarchy with bypassed levels dissolved: their standalone nodes merge
/// into the next numerically larger (lower-tier) level's routing domain and
/// stop sourcing or terminating traffic.
struct ResolvedHierarchy {
  std::map<int, LevelSpec> spec;
  std::set<int> bypass_nodes;
};

inline ResolvedHierarchy resolve_bypass(const std::map<int, LevelSpec>& hierarchy,
                                        const std::vector<int>& bypass_levels) {
  ResolvedHierarchy out;
  out.spec = hierarchy;
  for (int b : bypass_levels) {
    auto it = out.spec.find(b);
    if (it == out.spec.end())
      throw ValidationError("bypassed level " + std::to_string(b) + " not defined");
    const std::vector<int> moved = it->second.standalone;
    out.bypass_nodes.insert(moved.begin(), moved.end());
    auto lower = out.spec.upper_bound(b);  // next numerically larger level
    if (lower == out.spec.end())
      throw ValidationError("cannot bypass the lowest hierarchy level");
    lower->second.standalone.insert(lower->second.standalone.end(), moved.begin(),
                                    moved.end());
    std::sort(lower->second.standalone.begin(), lower->second.standalone.end());
    out.spec.erase(it);
    // drop the moved nodes from any explicit colocated list
    for (auto& [lvl, spec] : out.spec)
      if (spec.colocated) {
        auto& co = *spec.colocated;
        co.erase(std::remove_if(co.begin(), co.end(),
                                [&](int n) { return out.bypass_nodes.count(n) != 0; }),
                 co.end());
      }
  }
  return out;
}

struct PlanContext {
  Scenario scenario;
  Topology topology;
  HierarchyMap hierarchy;
  std::set<int> bypass_nodes;
  std::vector<int> processing_levels;  // low tier -> high tier (e.g. 4, 3, 2)
  std::vector<double> grid;
  LinkQoTProfile profile;
  QotEvaluator qot;
  TrafficProfile traffic;
};

/// Loads the topology, resolves bypassing, computes (or reloads) the QoT
/// profile and the seeded traffic profile.
inline PlanContext prepare_plan(const Scenario& scenario_in, const std::string& out_dir) {
  Scenario scenario = scenario_in;
  scenario.validate();
  if (!out_dir.empty()) scenario.results_dir = out_dir;
  if (scenario.results_dir.empty()) scenario.results_dir = "results/" + scenario.name;

  PlanContext ctx;
  ctx.scenario = scenario;
  ctx.topology =
      load_topology(scenario.topology_path, scenario.topology_format, scenario.name);

  ResolvedHierarchy rh = scenario.bypass_mode
                             ? resolve_bypass(scenario.hierarchy, scenario.bypass_levels)
                             : ResolvedHierarchy{scenario.hierarchy, {}};
  ctx.hierarchy = define_hierarchy(ctx.topology, rh.spec);
  ctx.bypass_nodes = rh.bypass_nodes;

  // every level except the top sources traffic toward the next level up
  std::vector<int> levels;
  for (const auto& [lvl, _] : rh.spec) levels.push_back(lvl);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  if (levels.size() < 2)
    throw ValidationError("hierarchy needs at least two levels to plan");
  ctx.processing_levels.assign(levels.begin(), levels.end() - 1);

  ctx.grid = scenario.grid_thz();
  std::vector<double> lengths;
  for (const Link& l : ctx.topology.links()) lengths.push_back(l.km);
  SpanPlan spans = make_span_plan(lengths, scenario.max_span_km);

  const BandLayout layout = scenario.layout();
  const std::uint64_t key =
      qot_cache_key(ctx.topology.name(), 0, ctx.grid, scenario.candidate_powers_dbm, spans,
                    scenario.optical, layout);
  std::error_code ec;
  std::filesystem::create_directories(scenario.results_dir, ec);
  char keyhex[32];
  std::snprintf(keyhex, sizeof(keyhex), "%016llx",
                static_cast<unsigned long long>(key));
  const std::string cache_path =
      scenario.results_dir + "/qot_cache_" + keyhex + ".json";
  if (auto cached = load_qot_profile(cache_path, key)) {
    ctx.profile = std::move(*cached);
  } else {
    ctx.profile = link_gsnr_profile(ctx.grid, scenario.candidate_powers_dbm, spans,
                                    scenario.optical, layout);
    ctx.profile.cache_key = key;
    save_qot_profile(ctx.profile, cache_path);
  }

  ctx.qot.profile = &ctx.profile;
  ctx.qot.params = &ctx.scenario.optical;
  ctx.qot.filter_table = scenario.filter_table;
  ctx.qot.trx_snr_db = scenario.trx_snr_db;
  ctx.qot.aging_margin_db = scenario.aging_margin_db;
  for (int n = 0; n < ctx.topology.num_nodes(); ++n)
    ctx.qot.node_degree.push_back(ctx.topology.degree(n));

  ctx.traffic.bypass_nodes = ctx.bypass_nodes;
  std::uint64_t tkey = fnv1a(std::int64_t(scenario.seed), 0xcbf29ce484222325ULL);
  tkey = fnv1a(std::int64_t(scenario.mc_steps), tkey);
  tkey = fnv1a(scenario.min_rate_gbps, tkey);
  tkey = fnv1a(scenario.max_rate_gbps, tkey);
  tkey = fnv1a(std::int64_t(ctx.topology.num_nodes()), tkey);
  for (int n : ctx.bypass_nodes) tkey = fnv1a(std::int64_t(n), tkey);
  char tkeyhex[32];
  std::snprintf(tkeyhex, sizeof(tkeyhex), "%016llx",
                static_cast<unsigned long long>(tkey));
  const std::string traffic_path =
      scenario.results_dir + "/initial_traffic_" + tkeyhex + ".json";
  bool reloaded = false;
  if (std::ifstream in(traffic_path); in) {
    nlohmann::json j;
    try {
      in >> j;
      if (j.at("key").get<std::uint64_t>() == tkey) {
        ctx.traffic.base_capacity = j.at("base_capacity").get<std::vector<double>>();
        reloaded = true;
      }
    } catch (const std::exception&) {
      reloaded = false;
    }
  }
  if (!reloaded) {
    ctx.traffic.base_capacity = generate_initial_traffic(
        ctx.topology.num_nodes(), ctx.bypass_nodes, scenario.mc_steps,
        scenario.min_rate_gbps, scenario.max_rate_gbps, scenario.seed);
    nlohmann::json j;
    j["key"] = tkey;
    j["base_capacity"] = ctx.traffic.base_capacity;
    write_archive(traffic_path, j);
  }
  ctx.traffic.annual_added = simulate_traffic_growth(
      ctx.traffic.base_capacity, scenario.planner.cagr, scenario.planner.period_years);
  return ctx;
}

/// Serializes the fully resolved scenario (defaults filled, topology embedded,
/// formula choices named) next to the archives so analyze and compare can run
/// without the original inputs.
inline nlohmann::json resolved_scenario_json(const PlanContext& ctx) {
  const Scenario& sc = ctx.scenario;
  nlohmann::json j;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["mode"] = sc.bypass_mode
                  ? nlohmann::json{{"type", "bypass"}, {"levels", sc.bypass_levels}}
                  : nlohmann::json{{"type", "full_hierarchical"}};
  nlohmann::json topo;
  topo["nodes"] = nlohmann::json::array();
  for (int n = 0; n < ctx.topology.num_nodes(); ++n) topo["nodes"].push_back(n);
  topo["links"] = nlohmann::json::array();
  std::uint64_t h = fnv1a(std::int64_t(ctx.topology.num_nodes()), 0xcbf29ce484222325ULL);
  for (const Link& l : ctx.topology.links()) {
    topo["links"].push_back({{"a", l.a}, {"b", l.b}, {"km", l.km}});
    h = fnv1a(std::int64_t(l.a), h);
    h = fnv1a(std::int64_t(l.b), h);
    h = fnv1a(l.km, h);
  }
  j["topology_embedded"] = topo;
  j["topology_hash"] = h;

  nlohmann::json hier;
  for (const auto& [lvl, sets] : ctx.hierarchy.levels()) {
    nlohmann::json e;
    e["standalone"] = std::vector<int>(sets.standalone.begin(), sets.standalone.end());
    e["colocated"] = std::vector<int>(sets.colocated.begin(), sets.colocated.end());
    hier[std::to_string(lvl)] = e;
  }
  j["hierarchy_resolved"] = hier;
  j["bypass_nodes"] = std::vector<int>(ctx.bypass_nodes.begin(), ctx.bypass_nodes.end());
  j["processing_levels"] = ctx.processing_levels;

  nlohmann::json bands = nlohmann::json::array();
  for (const Band& b : sc.bands)
    bands.push_back({{"name", b.name},
                     {"start_thz", b.start_freq_thz},
                     {"end_thz", b.end_freq_thz},
                     {"spacing_thz", b.channel_spacing_thz}});
  j["bands"] = bands;
  j["band_layout"] = {sc.layout().separation[0], sc.layout().separation[1],
                      sc.layout().total_slots};

  const OpticalParameters& p = sc.optical;
  nlohmann::json modulations = nlohmann::json::array();
  for (const auto& m : p.modulation_thresholds)
    modulations.push_back(
        {{"name", m.name}, {"snr_db", m.snr_db}, {"bitrate_gbps", m.bitrate_gbps}});
  j["optical"] = {{"h_plank", p.h_plank},
                  {"target_ber", p.target_ber},
                  {"beta2", p.beta2},
                  {"beta3", p.beta3},
                  {"gamma_nl", p.gamma_nl},
                  {"cr", p.cr},
                  {"alpha_db_per_km", p.alpha_db},
                  {"noise_figure_c_linear", p.noise_figure_c},
                  {"noise_figure_l_linear", p.noise_figure_l},
                  {"symbol_rate_baud", p.symbol_rate},
                  {"rolloff", p.rolloff},
                  {"modulations", modulations},
                  {"nli_model", "incoherent-closed-form-gn"},
                  {"nli_enable", p.nli.enable_nli},
                  {"nli_isrs", p.nli.enable_isrs},
                  {"nli_epsilon", p.nli.epsilon},
                  {"nli_phi_mfl", p.nli.phi_mfl},
                  {"trx_snr_db", std::isfinite(sc.trx_snr_db) ? sc.trx_snr_db : 0.0},
                  {"aging_margin_db", sc.aging_margin_db},
                  {"max_span_km", sc.max_span_km},
                  {"candidate_powers_dbm", sc.candidate_powers_dbm}};
  j["filter_penalty"] = {{"min_hops", sc.filter_table.min_hops},
                         {"min_degree", sc.filter_table.min_degree},
                         {"table", sc.filter_table.penalty_db}};
  j["planner"] = {{"period_years", sc.planner.period_years},
                  {"bvt_bitrates", sc.planner.bvt_bitrates},
                  {"license_capacities", sc.planner.license_capacities},
                  {"licenses_per_bvt", sc.planner.licenses_per_bvt},
                  {"fp_max", sc.planner.fp_max},
                  {"kpair_standalone", sc.planner.kpair_standalone},
                  {"kpair_colocated", sc.planner.kpair_colocated},
                  {"cagr", sc.planner.cagr},
                  {"dual_homing_split", sc.planner.dual_homing_split},
                  {"k_shortest", sc.k_shortest},
                  {"land_cost_metric",
                   sc.planner.land_cost_metric == LandCostMetric::FpKmBvtBand
                       ? "fp_km_bvt_band"
                       : "path_km"}};
  j["traffic"] = {{"mc_steps", sc.mc_steps},
                  {"min_rate_gbps", sc.min_rate_gbps},
                  {"max_rate_gbps", sc.max_rate_gbps}};
  j["latency"] = {{"per_level_delay_us", sc.per_level_delay_us},
                  {"include_final_stage", sc.latency_include_final_stage}};
  j["router_base_year"] = sc.router_base_year;
  return j;
}

/// Inputs and ledger of one level run, exposed for verification harnesses.
struct LevelArtifacts {
  int level = 0;
  std::vector<int> standalone_nodes;
  std::vector<int> colocated_nodes;
  std::vector<std::vector<double>> demand;  // [year][node] added Gbps
  PlanLedger ledger;
};

/// Runs the full multi-level plan and writes every archive group plus the
/// resolved scenario. Returns the results directory.
inline std::string run_plan(const Scenario& scenario_in, const std::string& out_dir = "",
                            std::ostream* log = nullptr,
                            std::vector<LevelArtifacts>* artifacts = nullptr) {
  PlanContext ctx = prepare_plan(scenario_in, out_dir);
  const Scenario& sc = ctx.scenario;
  const int minimum_level = ctx.processing_levels.front();

  std::vector<std::vector<double>> demand = ctx.traffic.annual_added;
  bool first_level = true;
  for (std::size_t li = 0; li < ctx.processing_levels.size(); ++li) {
    const int level = ctx.processing_levels[li];
    const int dest_level = li + 1 < ctx.processing_levels.size()
                               ? ctx.processing_levels[li + 1]
                               : ctx.hierarchy.level_list().front();

    auto sub = hierarchy_subgraph(ctx.topology, ctx.hierarchy, level, minimum_level);
    const std::set<int> dest_set = ctx.hierarchy.members(dest_level);
    const std::vector<int> dests(dest_set.begin(), dest_set.end());

    const auto& std_set = ctx.hierarchy.standalone(level);
    const auto& co_set = ctx.hierarchy.colocated(level);
    std::vector<int> std_nodes(std_set.begin(), std_set.end());
    std::vector<int> co_nodes(co_set.begin(), co_set.end());

    std::vector<CandidatePath> cand_std;
    for (int src : std_nodes)
      for (int dst : dests) {
        if (src == dst) continue;
        for (auto& p : k_shortest_paths(ctx.topology, sub.cost, src, dst, sc.k_shortest))
          cand_std.push_back(std::move(p));
      }
    std::stable_sort(cand_std.begin(), cand_std.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                       if (a.src != b.src) return a.src < b.src;
                       if (a.distance != b.distance) return a.distance < b.distance;
                       if (a.num_hops != b.num_hops) return a.num_hops < b.num_hops;
                       return a.nodes < b.nodes;
                     });
    auto pairs = land_pairs(std_nodes, cand_std, sc.planner.kpair_standalone);

    std::vector<CandidatePath> cand_co;
    for (int src : co_nodes)
      for (int dst : dests) {
        if (src == dst) continue;
        for (auto& p : k_shortest_paths(ctx.topology, sub.cost, src, dst, sc.k_shortest))
          cand_co.push_back(std::move(p));
      }
    std::stable_sort(cand_co.begin(), cand_co.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                       if (a.src != b.src) return a.src < b.src;
                       if (a.distance != b.distance) return a.distance < b.distance;
                       if (a.num_hops != b.num_hops) return a.num_hops < b.num_hops;
                       return a.nodes < b.nodes;
                     });

    LevelPlanInputs in;
    in.topology = &ctx.topology;
    in.level = level;
    in.minimum_level = minimum_level;
    in.pairs = &pairs;
    in.candidates_standalone = &cand_std;
    in.candidates_colocated = &cand_co;
    in.qot = &ctx.qot;
    PlannerConfig cfg = sc.planner;
    cfg.band_layout = sc.layout();
    in.cfg = &cfg;
    in.standalone_nodes = std_nodes;
    in.colocated_nodes = co_nodes;
    in.added_demand = &demand;
    in.subnet_links = sub.link_indices;
    in.record_source_demand = first_level;

    LevelPlanResult res = run_level_plan(in);
    save_results(res.ledger, ctx.topology.name(), sc.results_dir);
    if (artifacts)
      artifacts->push_back({level, std_nodes, co_nodes, demand, res.ledger});

    if (log) {
      for (int y = 0; y < cfg.period_years; ++y) {
        double dem = 0;
        for (int n : std_nodes) dem += demand[y][n];
        for (int n : co_nodes) dem += demand[y][n];
        *log << "[HL" << level << "] year " << (y + 1) << ": demand "
             << ledger_round(dem) << " G, +" << res.ledger.bvt_annual_total[y]
             << " BVT ends, +" << res.ledger.license_annual_total[y] << " licenses, "
             << res.ledger.effective_fp_km[y] << " FP-km\n";
      }
    }

    demand = std::move(res.aggregated);
    first_level = false;
  }

  write_archive(sc.results_dir + "/scenario_resolved.json", resolved_scenario_json(ctx));
  return sc.results_dir;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOutput {
  AnalysisBundle bundle;
  LoadedResults results;
  Topology topology;
  std::vector<std::string> files;
};

namespace detail {

struct ResolvedRun {
  nlohmann::json j;
  Topology topology;
  std::vector<int> processing_levels;
  std::set<int> bypass_nodes;
  std::string name;
};

inline ResolvedRun load_resolved(const std::string& results_dir) {
  ResolvedRun run;
  run.j = read_archive(results_dir + "/scenario_resolved.json");
  run.name = run.j.at("name").get<std::string>();
  run.topology =
      load_topology_from_json_text(run.j.at("topology_embedded").dump(), run.name);
  run.processing_levels = run.j.at("processing_levels").get<std::vector<int>>();
  const auto bn = run.j.at("bypass_nodes").get<std::vector<int>>();
  run.bypass_nodes = {bn.begin(), bn.end()};
  return run;
}

}  // namespace detail

/// Loads a finished run and computes cost, router fleet, energy and latency;
/// emits the requested report kinds under <results_dir>/reports.
inline AnalyzeOutput run_analyze(const std::string& results_dir,
                                 const std::vector<std::string>& kinds,
                                 const CostBook& book = CostBook{},
                                 const PowerBook& power = PowerBook{}) {
  auto run = detail::load_resolved(results_dir);
  AnalyzeOutput out;
  out.topology = std::move(run.topology);
  out.results = load_results(results_dir, run.processing_levels, run.name);

  out.bundle.results = &out.results;
  out.bundle.topology = &out.topology;
  out.bundle.topology_name = run.name;
  out.bundle.cost = optical_cost(out.results, out.topology, book);
  out.bundle.fleet =
      size_ip_routers(out.results.node_capacity_total(), book, run.bypass_nodes,
                      run.j.at("router_base_year").get<int>());
  attach_ip_costs(out.bundle.cost, out.bundle.fleet);
  out.bundle.energy = energy_report(out.results, out.bundle.fleet, power);
  out.bundle.e2e_latencies_us = e2e_latency_total(
      LatencyTables::from_results(out.results), run.processing_levels,
      run.j.at("latency").at("per_level_delay_us").get<double>(),
      run.j.at("latency").at("include_final_stage").get<bool>());

  const std::string report_dir = results_dir + "/reports";
  for (const auto& k : kinds) {
    auto files = emit_report(parse_report_kind(k), out.bundle, report_dir);
    out.files.insert(out.files.end(), files.begin(), files.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// compare

struct RunMetrics {
  double fp_count = 0;
  double fp_km = 0;
  double bvts = 0;
  double licenses = 0;
  double otco = 0;
  double ip_cost = 0;
  double tco = 0;
  double energy_mwh = 0;
  double mean_latency_us = 0;

  std::vector<std::pair<std::string, double>> items() const {
    return {{"fp_count", fp_count}, {"fp_km", fp_km},
            {"bvts", bvts},         {"licenses", licenses},
            {"otco", otco},         {"ip_cost", ip_cost},
            {"tco", tco},           {"energy_mwh", energy_mwh},
            {"mean_latency_us", mean_latency_us}};
  }
};

inline RunMetrics collect_metrics(const std::string& results_dir) {
  auto out = run_analyze(results_dir, {});
  RunMetrics m;
  const int last = out.results.years() - 1;
  for (const auto& [lvl, r] : out.results.levels) {
    for (int v : r.fp_num[last]) m.fp_count += v;
    m.fp_km += r.fp_km[last];
    m.bvts += r.bvt_cumulative[last];
    m.licenses += r.license_cumulative[last];
  }
  m.otco = out.bundle.cost.otco[last];
  m.ip_cost = out.bundle.cost.ip_capex_cum[last];
  m.tco = out.bundle.cost.tco[last];
  m.energy_mwh = out.bundle.energy.total_cum[last];
  const auto& lat = out.bundle.e2e_latencies_us;
  if (!lat.empty()) {
    for (double v : lat) m.mean_latency_us += v;
    m.mean_latency_us /= lat.size();
  }
  return m;
}

/// Relative differences (B - A) / A * 100 per metric; refuses runs with
/// different topologies or seeds.
inline std::string run_compare(const std::string& dir_a, const std::string& dir_b,
                               const std::string& csv_path = "") {
  auto ja = read_archive(dir_a + "/scenario_resolved.json");
  auto jb = read_archive(dir_b + "/scenario_resolved.json");
  if (ja.at("topology_hash") != jb.at("topology_hash"))
    throw ValidationError("runs use different topologies; comparison refused");
  if (ja.at("seed") != jb.at("seed"))
    throw ValidationError("runs use different seeds; comparison refused");

  const RunMetrics a = collect_metrics(dir_a);
  const RunMetrics b = collect_metrics(dir_b);
  std::ostringstream csv;
  csv << "metric,run_a,run_b,relative_difference_pct\n";
  const auto ai = a.items();
  const auto bi = b.items();
  for (std::size_t i = 0; i < ai.size(); ++i) {
    csv << ai[i].first << "," << detail::csv_num(ai[i].second) << ","
        << detail::csv_num(bi[i].second) << ",";
    if (ai[i].second == 0.0 && bi[i].second == 0.0)
      csv << "0";
    else if (ai[i].second == 0.0)
      csv << "inf";
    else
      csv << detail::csv_num((bi[i].second - ai[i].second) / ai[i].second * 100.0);
    csv << "\n";
  }
  if (!csv_path.empty()) detail::write_text_file(csv_path, csv.str());
  return csv.str();
}

}  // namespace metroplan

#endif  // METROPLAN_SCENARIO_HPP
