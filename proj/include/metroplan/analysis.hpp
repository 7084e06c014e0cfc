#ifndef METROPLAN_ANALYSIS_HPP
#define METROPLAN_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "metroplan/archive.hpp"
#include "metroplan/common.hpp"
#include "metroplan/planner.hpp"
#include "metroplan/topology.hpp"

namespace metroplan {

// ---------------------------------------------------------------------------
// result loading

struct LevelResults {
  int level = 0;
  // bvt_info
  std::vector<int> license_cumulative;
  std::vector<int> license_annual;
  std::array<std::vector<int>, 3> license_band_annual{};
  std::vector<int> bvt_cumulative;
  std::array<std::vector<int>, 3> bvt_band_cumulative{};
  std::vector<std::vector<double>> establishments;
  // link_info
  std::vector<int> link_indices;
  std::array<std::vector<std::vector<int>>, 3> band_fp_per_link{};
  std::array<std::vector<int>, 3> band_degree{};
  std::vector<double> fp_km;
  std::vector<std::vector<int>> fp_num;
  std::vector<std::vector<int>> fp_num_colocated;
  std::vector<std::vector<int>> node_degree_fp;
  std::vector<std::vector<double>> traffic_flow;
  // path_GSNR_info
  std::vector<std::vector<double>> gsnr_all;
  std::vector<std::vector<double>> gsnr_primary;
  std::vector<std::vector<double>> gsnr_secondary;
  // node_capacity_profile
  std::vector<std::vector<double>> node_capacity;
  // segments_latency
  std::vector<std::array<double, 2>> latency;
  std::vector<std::array<int, 2>> destinations;

  int years() const { return static_cast<int>(license_annual.size()); }
};

struct LoadedResults {
  std::map<int, LevelResults> levels;

  int years() const { return levels.empty() ? 0 : levels.begin()->second.years(); }
  int num_nodes() const {
    return levels.empty() ? 0
                          : static_cast<int>(levels.begin()->second.latency.size());
  }

  /// Sum of the per-level aggregation profiles: the added traffic electrically
  /// processed at each node in each year.
  std::vector<std::vector<double>> node_capacity_total() const {
    std::vector<std::vector<double>> out(years(), std::vector<double>(num_nodes(), 0.0));
    for (const auto& [lvl, r] : levels)
      for (int y = 0; y < years(); ++y)
        for (int n = 0; n < num_nodes(); ++n) out[y][n] += r.node_capacity[y][n];
    return out;
  }

  std::vector<int> bvt_cumulative_total() const {
    std::vector<int> out(years(), 0);
    for (const auto& [lvl, r] : levels)
      for (int y = 0; y < years(); ++y) out[y] += r.bvt_cumulative[y];
    return out;
  }
};

/// Loads every archive group for the requested levels; a missing file raises
/// an IoError naming the path.
inline LoadedResults load_results(const std::string& results_dir,
                                  const std::vector<int>& levels,
                                  const std::string& topology_name) {
  LoadedResults out;
  for (int lvl : levels) {
    const std::string stem =
        results_dir + "/" + topology_name + "_HL" + std::to_string(lvl) + "_";
    LevelResults r;
    r.level = lvl;
    {
      auto j = read_archive(stem + "bvt_info.json");
      r.license_cumulative = j.at("HL_All_100G_lincense").get<std::vector<int>>();
      r.license_annual = j.at("HL_annual_license").get<std::vector<int>>();
      r.license_band_annual[0] = j.at("HL_CBand_license").get<std::vector<int>>();
      r.license_band_annual[1] = j.at("HL_SuperCBand_license").get<std::vector<int>>();
      r.license_band_annual[2] = j.at("HL_LBand_license").get<std::vector<int>>();
      r.bvt_cumulative = j.at("HL_BVTNum_All").get<std::vector<int>>();
      r.bvt_band_cumulative[0] = j.at("HL_BVTNum_CBand").get<std::vector<int>>();
      r.bvt_band_cumulative[1] = j.at("HL_BVTNum_SuperCBand").get<std::vector<int>>();
      r.bvt_band_cumulative[2] = j.at("HL_BVTNum_LBand").get<std::vector<int>>();
      r.establishments =
          j.at("BVT_establishment_info").get<std::vector<std::vector<double>>>();
    }
    {
      auto j = read_archive(stem + "link_info.json");
      r.link_indices = j.at("HL_links_indices").get<std::vector<int>>();
      r.band_fp_per_link[0] =
          j.at("num_link_CBand_annual").get<std::vector<std::vector<int>>>();
      r.band_fp_per_link[1] =
          j.at("num_link_SupCBand_annual").get<std::vector<std::vector<int>>>();
      r.band_fp_per_link[2] =
          j.at("num_link_LBand_annual").get<std::vector<std::vector<int>>>();
      r.band_degree[0] = j.at("HL_CDegree_Domain").get<std::vector<int>>();
      r.band_degree[1] = j.at("HL_SuperCDegree_Domain").get<std::vector<int>>();
      r.band_degree[2] = j.at("HL_LDegree_Domain").get<std::vector<int>>();
      r.fp_km = j.at("Total_effective_FP_new_annual").get<std::vector<double>>();
      r.fp_num = j.at("HL_FPNum").get<std::vector<std::vector<int>>>();
      r.fp_num_colocated = j.at("HL_FPNumCo").get<std::vector<std::vector<int>>>();
      r.node_degree_fp = j.at("degree_number_HLs").get<std::vector<std::vector<int>>>();
      r.traffic_flow =
          j.at("traffic_flow_links_array").get<std::vector<std::vector<double>>>();
    }
    {
      auto j = read_archive(stem + "path_GSNR_info.json");
      r.gsnr_all = j.at("GSNR_all_paths").get<std::vector<std::vector<double>>>();
      r.gsnr_primary = j.at("GSNR_primary").get<std::vector<std::vector<double>>>();
      r.gsnr_secondary = j.at("GSNR_secondary").get<std::vector<std::vector<double>>>();
    }
    {
      auto j = read_archive(stem + "node_capacity_profile_array.json");
      r.node_capacity =
          j.at("node_capacity_profile_array").get<std::vector<std::vector<double>>>();
    }
    {
      auto j = read_archive(stem + "segments_latency.json");
      r.latency = j.at("latency").get<std::vector<std::array<double, 2>>>();
      r.destinations = j.at("destinations").get<std::vector<std::array<int, 2>>>();
    }
    out.levels[lvl] = std::move(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// cost model

struct CostBook {
  double c_100g_first = 1.0;   // CU, first activated license of a carrier
  double c_100g_added = 0.333; // CU, each further license
  double c_mcs = 0.7;
  double c_rob = 1.9;
  double c_iru = 0.5;  // CU per strand-km-year
  int mcs_ports = 16;
  double band_alpha_superc = 0.1;
  double band_alpha_l = 0.2;
  double depreciation_gamma = 0.1;
  std::map<double, double> ip_router_costs = {{400, 1.6},    {800, 3.2},   {1600, 6.4},
                                              {3200, 12.8},  {6400, 25.6}, {12800, 51.2},
                                              {25600, 102.4}};

  void validate() const {
    for (double v : {c_100g_first, c_100g_added, c_mcs, c_rob, c_iru})
      if (v < 0) throw ValidationError("negative cost unit");
    if (mcs_ports < 1) throw ValidationError("mcs_ports must be at least 1");
    double prev_cost = -1;
    for (const auto& [cap, cost] : ip_router_costs) {
      if (!(cost > prev_cost))
        throw ValidationError("router costs must increase with capacity");
      prev_cost = cost;
    }
    if (ip_router_costs.empty()) throw ValidationError("no router classes configured");
  }

  /// Multi-band equipment adjustment; display_year counts from 1.
  double band_factor(int display_year, int band) const {
    if (band == 0) return 1.0;
    const double alpha = band == 1 ? band_alpha_superc : band_alpha_l;
    return 1.0 + alpha * std::pow(1.0 - depreciation_gamma, display_year);
  }
};

struct PowerBook {
  double bvt_watt = 160;
  std::map<double, double> ip_router_watt = {{400, 2000},  {800, 2500},  {1600, 3100},
                                             {3200, 3900}, {6400, 4900}, {12800, 6100},
                                             {25600, 7600}};

  void validate() const {
    if (!(bvt_watt > 0)) throw ValidationError("bvt_watt must be positive");
    double prev = 0;
    for (const auto& [cap, w] : ip_router_watt) {
      if (!(w > prev)) throw ValidationError("router power must increase with capacity");
      prev = w;
    }
  }
};

struct CostReport {
  std::vector<double> opex;          // per year
  std::vector<double> capex_mcs;
  std::vector<double> capex_rob;
  std::vector<double> capex_100g;    // band-adjusted
  std::vector<double> capex_total;
  std::vector<double> otco;          // cumulative optical TCO
  std::vector<double> ip_capex;      // per year
  std::vector<double> ip_capex_cum;
  std::vector<double> tco;           // otco + cumulative ip capex
};

/// Optical cost over the planning period. OPEX bills every provisioned fiber
/// pair whole (utilization factor 1) in both directions; CAPEX covers MCS
/// ports for new transponders, new ROADM degrees from fiber-pair growth, and
/// licenses with the first/added split, SuperC and L equipment carrying the
/// band adjustment factor.
inline CostReport optical_cost(const LoadedResults& res, const Topology& topo,
                               const CostBook& book) {
  book.validate();
  const int years = res.years();
  const int nodes = res.num_nodes();
  CostReport rep;
  rep.opex.assign(years, 0.0);
  rep.capex_mcs.assign(years, 0.0);
  rep.capex_rob.assign(years, 0.0);
  rep.capex_100g.assign(years, 0.0);
  rep.capex_total.assign(years, 0.0);
  rep.otco.assign(years, 0.0);

  for (const auto& [lvl, r] : res.levels) {
    for (int y = 0; y < years; ++y) {
      for (double v : r.fp_km)
        if (v < 0) throw ValidationError("negative fiber-pair km in the ledger");
      // leased strands, both directions of the pair
      double km = 0;
      for (int l = 0; l < static_cast<int>(r.fp_num[y].size()); ++l) {
        if (r.fp_num[y][l] < 0) throw ValidationError("negative fiber-pair count");
        km += topo.links()[l].km * r.fp_num[y][l];
      }
      rep.opex[y] += 2.0 * book.c_iru * km;

      // MCS ports: one add/drop port per transponder end added this year
      std::vector<int> ports(nodes, 0);
      for (const auto& row : r.establishments) {
        if (static_cast<int>(row[0]) != y) continue;
        ports[static_cast<int>(row[1])] += 1;
        ports[static_cast<int>(row[2])] += 1;
      }
      for (int n = 0; n < nodes; ++n)
        if (ports[n] > 0)
          rep.capex_mcs[y] +=
              book.c_mcs * std::ceil(double(ports[n]) / book.mcs_ports);

      // new ROADM degrees from fiber-pair incidence growth
      for (int n = 0; n < nodes; ++n) {
        const int now = r.node_degree_fp[y][n];
        const int before = y > 0 ? r.node_degree_fp[y - 1][n] : 0;
        if (now > before) rep.capex_rob[y] += book.c_rob * (now - before);
      }

      // licenses: first one per new carrier end at c_first, the rest added
      for (int b = 0; b < 3; ++b) {
        const int cum = r.bvt_band_cumulative[b][y];
        const int prev = y > 0 ? r.bvt_band_cumulative[b][y - 1] : 0;
        const int new_ends = cum - prev;
        const int lic = r.license_band_annual[b][y];
        if (lic < new_ends)
          throw ValidationError("ledger has carriers without a first license");
        rep.capex_100g[y] += book.band_factor(y + 1, b) *
                             (new_ends * book.c_100g_first +
                              (lic - new_ends) * book.c_100g_added);
      }
    }
  }

  double running = 0;
  for (int y = 0; y < years; ++y) {
    rep.capex_total[y] = rep.capex_mcs[y] + rep.capex_rob[y] + rep.capex_100g[y];
    running += rep.capex_total[y] + rep.opex[y];
    rep.otco[y] = running;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// IP router fleet

struct RouterFleet {
  std::vector<double> classes;            // capacities, ascending
  std::vector<int> base_class;            // per node; -1 = no router
  std::vector<std::vector<int>> added;    // [year][class] routers deployed
  std::vector<std::vector<int>> node_added;  // [year][node]
  std::vector<double> annual_capex;

  std::vector<std::vector<int>> cumulative_by_class() const {
    auto out = added;
    for (std::size_t y = 1; y < out.size(); ++y)
      for (std::size_t c = 0; c < out[y].size(); ++c) out[y][c] += out[y - 1][c];
    return out;
  }
};

/// Router dimensioning: the base class per node is the smallest capacity
/// covering the cumulative demand of the base year (year 5 when available),
/// capped at the largest class. Routers of the base class are added whenever
/// cumulative demand outgrows deployed capacity. Nodes in `excluded` (the
/// aggregation-bypassed set) never receive routers.
inline RouterFleet size_ip_routers(const std::vector<std::vector<double>>& capacity_profile,
                                   const CostBook& book,
                                   const std::set<int>& excluded = {},
                                   int base_year = 5) {
  if (capacity_profile.empty()) throw ValidationError("empty node capacity profile");
  const int years = static_cast<int>(capacity_profile.size());
  const int nodes = static_cast<int>(capacity_profile[0].size());
  const int base_idx = std::min(base_year, years) - 1;

  RouterFleet fleet;
  for (const auto& [cap, cost] : book.ip_router_costs) fleet.classes.push_back(cap);
  fleet.base_class.assign(nodes, -1);
  fleet.added.assign(years, std::vector<int>(fleet.classes.size(), 0));
  fleet.node_added.assign(years, std::vector<int>(nodes, 0));
  fleet.annual_capex.assign(years, 0.0);

  std::vector<std::vector<double>> cum(years, std::vector<double>(nodes, 0.0));
  for (int y = 0; y < years; ++y)
    for (int n = 0; n < nodes; ++n)
      cum[y][n] = capacity_profile[y][n] + (y > 0 ? cum[y - 1][n] : 0.0);

  for (int n = 0; n < nodes; ++n) {
    if (excluded.count(n)) continue;
    const double base_demand = cum[base_idx][n];
    if (base_demand <= 1e-9 && cum[years - 1][n] <= 1e-9) continue;
    int cls = static_cast<int>(fleet.classes.size()) - 1;
    for (std::size_t c = 0; c < fleet.classes.size(); ++c)
      if (fleet.classes[c] >= base_demand - 1e-9) {
        cls = static_cast<int>(c);
        break;
      }
    fleet.base_class[n] = cls;
    const double unit = fleet.classes[cls];
    const double unit_cost = book.ip_router_costs.at(unit);
    double capacity = 0;
    for (int y = 0; y < years; ++y) {
      while (capacity + 1e-9 < cum[y][n]) {
        capacity += unit;
        fleet.added[y][cls] += 1;
        fleet.node_added[y][n] += 1;
        fleet.annual_capex[y] += unit_cost;
      }
    }
  }
  return fleet;
}

/// Folds the router fleet's CAPEX into the cost report: combined TCO is the
/// optical OTCO plus cumulative IP CAPEX, exactly.
inline void attach_ip_costs(CostReport& rep, const RouterFleet& fleet) {
  rep.ip_capex = fleet.annual_capex;
  rep.ip_capex_cum = fleet.annual_capex;
  for (std::size_t y = 1; y < rep.ip_capex_cum.size(); ++y)
    rep.ip_capex_cum[y] += rep.ip_capex_cum[y - 1];
  rep.tco.resize(rep.otco.size());
  for (std::size_t y = 0; y < rep.otco.size(); ++y)
    rep.tco[y] = rep.otco[y] + rep.ip_capex_cum[y];
}

// ---------------------------------------------------------------------------
// energy

struct EnergyReport {
  std::vector<double> optical_mwh;     // per year
  std::vector<double> electrical_mwh;
  std::vector<double> total_mwh;
  std::vector<double> optical_cum;
  std::vector<double> electrical_cum;
  std::vector<double> total_cum;
  std::vector<double> per_100g_mwh;    // annual total per 100G of carried traffic
};

inline EnergyReport energy_report(const LoadedResults& res, const RouterFleet& fleet,
                                  const PowerBook& power, double hours_per_year = 8760) {
  power.validate();
  const int years = res.years();
  if (static_cast<int>(fleet.added.size()) != years)
    throw ValidationError("fleet and results cover different periods");
  EnergyReport rep;
  rep.optical_mwh.assign(years, 0.0);
  rep.electrical_mwh.assign(years, 0.0);
  rep.total_mwh.assign(years, 0.0);
  rep.per_100g_mwh.assign(years, 0.0);

  const auto bvt_cum = res.bvt_cumulative_total();
  const auto routers_cum = fleet.cumulative_by_class();
  const auto profile = res.node_capacity_total();

  for (int y = 0; y < years; ++y) {
    rep.optical_mwh[y] = bvt_cum[y] * power.bvt_watt * hours_per_year / 1e6;
    double watt = 0;
    for (std::size_t c = 0; c < fleet.classes.size(); ++c)
      watt += routers_cum[y][c] * power.ip_router_watt.at(fleet.classes[c]);
    rep.electrical_mwh[y] = watt * hours_per_year / 1e6;
    rep.total_mwh[y] = rep.optical_mwh[y] + rep.electrical_mwh[y];

    double cum_traffic = 0;
    for (int yy = 0; yy <= y; ++yy)
      for (double v : profile[yy]) cum_traffic += v;
    if (cum_traffic > 0) rep.per_100g_mwh[y] = rep.total_mwh[y] / (cum_traffic / 100.0);
  }
  rep.optical_cum = rep.optical_mwh;
  rep.electrical_cum = rep.electrical_mwh;
  rep.total_cum = rep.total_mwh;
  for (int y = 1; y < years; ++y) {
    rep.optical_cum[y] += rep.optical_cum[y - 1];
    rep.electrical_cum[y] += rep.electrical_cum[y - 1];
    rep.total_cum[y] += rep.total_cum[y - 1];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// end-to-end latency

struct LatencyTables {
  // per level: per-node [primary, secondary] segment latency and destination
  std::map<int, std::vector<std::array<double, 2>>> latency;
  std::map<int, std::vector<std::array<int, 2>>> destination;

  static LatencyTables from_results(const LoadedResults& res) {
    LatencyTables t;
    for (const auto& [lvl, r] : res.levels) {
      t.latency[lvl] = r.latency;
      t.destination[lvl] = r.destinations;
    }
    return t;
  }
};

namespace detail {

inline void e2e_recurse(int node, std::size_t level_idx, const LatencyTables& tables,
                        const std::vector<int>& levels, std::vector<int>& path,
                        double acc, std::set<std::pair<int, int>>& visited,
                        std::vector<std::pair<std::vector<int>, double>>& out) {
  const int lvl = levels[level_idx];
  const auto lat_it = tables.latency.find(lvl);
  const auto dst_it = tables.destination.find(lvl);
  if (lat_it == tables.latency.end() || dst_it == tables.destination.end())
    throw ValidationError("no latency table for level " + std::to_string(lvl));
  if (node < 0 || node >= static_cast<int>(lat_it->second.size()))
    throw ValidationError("node " + std::to_string(node) + " outside the latency table");
  const auto& lat = lat_it->second[node];
  const auto& dst = dst_it->second[node];
  for (int branch = 0; branch < 2; ++branch) {
    const int d = dst[branch];
    if (d < 0)
      throw ValidationError("missing latency table row for node " + std::to_string(node) +
                            " at level " + std::to_string(lvl));
    const double total = acc + lat[branch];
    path.push_back(d);
    if (level_idx + 1 == levels.size()) {
      out.emplace_back(path, total);
    } else {
      const auto key = std::make_pair(static_cast<int>(level_idx) + 1, d);
      if (!visited.insert(key).second)
        throw ValidationError("cycle: node " + std::to_string(d) + " revisited");
      e2e_recurse(d, level_idx + 1, tables, levels, path, total, visited, out);
      visited.erase(key);
    }
    path.pop_back();
  }
}

}  // namespace detail

/// Depth-first walk over both dual-home branches of every level, starting at
/// `node` on levels.front() and ending after levels.back(); returns each
/// complete node path with its accumulated propagation latency.
inline std::vector<std::pair<std::vector<int>, double>> e2e_latency_paths(
    int node, const LatencyTables& tables, const std::vector<int>& levels) {
  if (levels.empty()) throw ValidationError("no levels to traverse");
  std::vector<std::pair<std::vector<int>, double>> out;
  std::vector<int> path{node};
  std::set<std::pair<int, int>> visited{{0, node}};
  detail::e2e_recurse(node, 0, tables, levels, path, 0.0, visited, out);
  return out;
}

/// Every end-to-end latency from every lowest-level source. Each traversed
/// level contributes one segment; aggregation delay applies per intermediate
/// electrical stage (optionally also at the final termination).
inline std::vector<double> e2e_latency_total(const LatencyTables& tables,
                                             const std::vector<int>& levels,
                                             double per_level_delay_us = 200.0,
                                             bool include_final_stage = false) {
  if (levels.empty()) throw ValidationError("no levels to traverse");
  const int first = levels.front();
  const auto it = tables.destination.find(first);
  if (it == tables.destination.end())
    throw ValidationError("no latency table for level " + std::to_string(first));
  const int stages = static_cast<int>(levels.size()) - (include_final_stage ? 0 : 1);
  std::vector<double> out;
  for (int node = 0; node < static_cast<int>(it->second.size()); ++node) {
    if (it->second[node][0] < 0 && it->second[node][1] < 0) continue;  // not a source
    for (const auto& [path, lat] : e2e_latency_paths(node, tables, levels))
      out.push_back(lat + per_level_delay_us * stages);
  }
  return out;
}

// ---------------------------------------------------------------------------
// report emission

enum class ReportKind {
  LinkState,
  FpUsage,
  BandDegree,
  BvtLicense,
  Cost,
  Energy,
  LatencyPdf,
  TrafficFlow,
};

inline ReportKind parse_report_kind(const std::string& s) {
  if (s == "link_state") return ReportKind::LinkState;
  if (s == "fp_usage") return ReportKind::FpUsage;
  if (s == "band_degree") return ReportKind::BandDegree;
  if (s == "bvt_license") return ReportKind::BvtLicense;
  if (s == "cost") return ReportKind::Cost;
  if (s == "energy") return ReportKind::Energy;
  if (s == "latency_pdf") return ReportKind::LatencyPdf;
  if (s == "traffic_flow") return ReportKind::TrafficFlow;
  throw ValidationError("unknown report kind: " + s);
}

inline std::vector<std::string> all_report_kinds() {
  return {"link_state", "fp_usage",  "band_degree", "bvt_license",
          "cost",       "energy",    "latency_pdf", "traffic_flow"};
}

/// Everything the report writers draw from, assembled once per analyze run.
struct AnalysisBundle {
  const LoadedResults* results = nullptr;
  const Topology* topology = nullptr;
  CostReport cost;
  RouterFleet fleet;
  EnergyReport energy;
  std::vector<double> e2e_latencies_us;
  std::string topology_name;
  std::string suffix;
};

namespace detail {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + path);
  out << text;
}

/// Tiny polyline chart; one series per column of `rows`.
inline std::string svg_series(const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& rows) {
  const int w = 640, h = 360, pad = 40;
  double vmax = 1e-12;
  for (const auto& r : rows)
    for (double v : r) vmax = std::max(vmax, v);
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const std::size_t n = rows.size();
  for (std::size_t s = 0; s < names.size(); ++s) {
    svg << "<polyline fill='none' stroke='" << colors[s % 8] << "' stroke-width='2' points='";
    for (std::size_t i = 0; i < n; ++i) {
      const double x = pad + (w - 2 * pad) * (n > 1 ? double(i) / (n - 1) : 0.5);
      const double y = h - pad - (h - 2 * pad) * (rows[i][s] / vmax);
      svg << x << "," << y << " ";
    }
    svg << "'/>\n<text x='" << pad << "' y='" << 16 + 14 * s << "' fill='" << colors[s % 8]
        << "' font-size='12'>" << names[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

/// Year-by-entity heatmap as shaded cells.
inline std::string svg_heatmap(const std::vector<std::vector<double>>& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  const int cw = std::max(2, 600 / std::max(1, cols));
  const int ch = std::max(6, 300 / std::max(1, rows));
  double vmax = 1e-12;
  for (const auto& r : m)
    for (double v : r) vmax = std::max(vmax, v);
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << cols * cw + 20 << "' height='"
      << rows * ch + 20 << "'>\n";
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      const int shade = 255 - static_cast<int>(215 * (m[y][x] / vmax));
      svg << "<rect x='" << 10 + x * cw << "' y='" << 10 + y * ch << "' width='" << cw
          << "' height='" << ch << "' fill='rgb(" << shade << "," << shade << ",255)'/>\n";
    }
  svg << "</svg>\n";
  return svg.str();
}

inline std::vector<std::vector<double>> overlay_per_link(
    const LoadedResults& res,
    const std::function<double(const LevelResults&, int, int)>& get, int num_links) {
  const int years = res.years();
  std::vector<std::vector<double>> m(years, std::vector<double>(num_links, 0.0));
  for (const auto& [lvl, r] : res.levels)
    for (int y = 0; y < years; ++y)
      for (int l = 0; l < num_links; ++l) m[y][l] += get(r, y, l);
  return m;
}

}  // namespace detail

/// Writes one report kind: always a CSV data table and a simple SVG rendering
/// beside it. Returns the files written.
inline std::vector<std::string> emit_report(ReportKind kind, const AnalysisBundle& bundle,
                                            const std::string& out_dir) {
  const LoadedResults& res = *bundle.results;
  const int years = res.years();
  const int num_links = bundle.topology->num_links();
  const std::string base = out_dir + "/" + bundle.topology_name + "_";
  const std::string& sfx = bundle.suffix;
  std::vector<std::string> files;

  auto emit_csv = [&](const std::string& name, const std::string& text) {
    const std::string path = base + name + sfx + ".csv";
    detail::write_text_file(path, text);
    files.push_back(path);
  };
  auto emit_svg = [&](const std::string& name, const std::string& text) {
    const std::string path = base + name + sfx + ".svg";
    detail::write_text_file(path, text);
    files.push_back(path);
  };

  switch (kind) {
    case ReportKind::LinkState: {
      auto m = detail::overlay_per_link(
          res, [](const LevelResults& r, int y, int l) { return double(r.fp_num[y][l]); },
          num_links);
      std::ostringstream csv;
      csv << "year";
      for (int l = 0; l < num_links; ++l) csv << ",link_" << l;
      csv << "\n";
      for (int y = 0; y < years; ++y) {
        csv << (y + 1);
        for (int l = 0; l < num_links; ++l) csv << "," << detail::csv_num(m[y][l]);
        csv << "\n";
      }
      emit_csv("Link_State", csv.str());
      emit_svg("Link_State", detail::svg_heatmap(m));
      break;
    }
    case ReportKind::FpUsage: {
      std::ostringstream csv;
      csv << "year,fp_count,fp_km\n";
      std::vector<std::vector<double>> series;
      for (int y = 0; y < years; ++y) {
        double count = 0, km = 0;
        for (const auto& [lvl, r] : res.levels) {
          for (int v : r.fp_num[y]) count += v;
          km += r.fp_km[y];
        }
        csv << (y + 1) << "," << detail::csv_num(count) << "," << detail::csv_num(km)
            << "\n";
        series.push_back({count, km});
      }
      emit_csv("FP_Usage", csv.str());
      emit_svg("FP_Usage", detail::svg_series({"fp_count", "fp_km"}, series));
      break;
    }
    case ReportKind::BandDegree: {
      std::ostringstream csv;
      csv << "year,c_band,superc_band,l_band\n";
      std::vector<std::vector<double>> series;
      for (int y = 0; y < years; ++y) {
        std::array<double, 3> deg{0, 0, 0};
        for (const auto& [lvl, r] : res.levels)
          for (int b = 0; b < 3; ++b) deg[b] += r.band_degree[b][y];
        csv << (y + 1) << "," << deg[0] << "," << deg[1] << "," << deg[2] << "\n";
        series.push_back({deg[0], deg[1], deg[2]});
      }
      emit_csv("FP_Degree", csv.str());
      emit_svg("FP_Degree", detail::svg_series({"C", "SuperC", "L"}, series));
      break;
    }
    case ReportKind::BvtLicense: {
      std::ostringstream csv;
      csv << "year,bvt_c,bvt_superc,bvt_l,bvt_total,licenses_total\n";
      std::vector<std::vector<double>> series;
      for (int y = 0; y < years; ++y) {
        std::array<double, 4> bvt{0, 0, 0, 0};
        double lic = 0;
        for (const auto& [lvl, r] : res.levels) {
          for (int b = 0; b < 3; ++b) bvt[b] += r.bvt_band_cumulative[b][y];
          bvt[3] += r.bvt_cumulative[y];
          lic += r.license_cumulative[y];
        }
        csv << (y + 1) << "," << bvt[0] << "," << bvt[1] << "," << bvt[2] << "," << bvt[3]
            << "," << lic << "\n";
        series.push_back({bvt[0], bvt[1], bvt[2], bvt[3], lic});
      }
      emit_csv("BVT_License", csv.str());
      emit_svg("BVT_License",
               detail::svg_series({"bvt_C", "bvt_SuperC", "bvt_L", "bvt_all", "licenses"},
                                  series));
      break;
    }
    case ReportKind::Cost: {
      std::ostringstream csv;
      csv << "year,opex,capex_mcs,capex_rob,capex_100g,capex_total,otco,ip_capex,tco\n";
      std::vector<std::vector<double>> series;
      for (int y = 0; y < years; ++y) {
        csv << (y + 1) << "," << detail::csv_num(bundle.cost.opex[y]) << ","
            << detail::csv_num(bundle.cost.capex_mcs[y]) << ","
            << detail::csv_num(bundle.cost.capex_rob[y]) << ","
            << detail::csv_num(bundle.cost.capex_100g[y]) << ","
            << detail::csv_num(bundle.cost.capex_total[y]) << ","
            << detail::csv_num(bundle.cost.otco[y]) << ","
            << detail::csv_num(bundle.cost.ip_capex[y]) << ","
            << detail::csv_num(bundle.cost.tco[y]) << "\n";
        series.push_back({bundle.cost.otco[y], bundle.cost.tco[y]});
      }
      emit_csv("cost_analyse", csv.str());
      emit_svg("cost_analyse", detail::svg_series({"otco", "tco"}, series));
      break;
    }
    case ReportKind::Energy: {
      std::ostringstream csv;
      csv << "year,optical_mwh,electrical_mwh,total_mwh,cum_total_mwh,per_100g_mwh\n";
      std::vector<std::vector<double>> series;
      for (int y = 0; y < years; ++y) {
        csv << (y + 1) << "," << detail::csv_num(bundle.energy.optical_mwh[y]) << ","
            << detail::csv_num(bundle.energy.electrical_mwh[y]) << ","
            << detail::csv_num(bundle.energy.total_mwh[y]) << ","
            << detail::csv_num(bundle.energy.total_cum[y]) << ","
            << detail::csv_num(bundle.energy.per_100g_mwh[y]) << "\n";
        series.push_back({bundle.energy.optical_cum[y], bundle.energy.electrical_cum[y]});
      }
      emit_csv("Energy", csv.str());
      emit_svg("Energy", detail::svg_series({"optical_cum", "electrical_cum"}, series));
      break;
    }
    case ReportKind::LatencyPdf: {
      const auto& lat = bundle.e2e_latencies_us;
      if (lat.empty()) throw ValidationError("no latency samples to report");
      const double lo = *std::min_element(lat.begin(), lat.end());
      const double hi = *std::max_element(lat.begin(), lat.end());
      const int bins = 20;
      const double width = std::max((hi - lo) / bins, 1e-9);
      std::vector<int> count(bins, 0);
      for (double v : lat) {
        int b = static_cast<int>((v - lo) / width);
        count[std::clamp(b, 0, bins - 1)] += 1;
      }
      std::ostringstream csv;
      csv << "bin_start_us,bin_end_us,count\n";
      std::vector<std::vector<double>> series;
      for (int b = 0; b < bins; ++b) {
        csv << detail::csv_num(lo + b * width) << "," << detail::csv_num(lo + (b + 1) * width)
            << "," << count[b] << "\n";
        series.push_back({double(count[b])});
      }
      emit_csv("Latency_PDF", csv.str());
      emit_svg("Latency_PDF", detail::svg_series({"count"}, series));
      break;
    }
    case ReportKind::TrafficFlow: {
      auto m = detail::overlay_per_link(
          res,
          [](const LevelResults& r, int y, int l) { return r.traffic_flow[y][l]; },
          num_links);
      for (int y = 1; y < years; ++y)  // cumulative carried traffic per link
        for (int l = 0; l < num_links; ++l) m[y][l] += m[y - 1][l];
      std::ostringstream csv;
      csv << "year";
      for (int l = 0; l < num_links; ++l) csv << ",link_" << l;
      csv << "\n";
      for (int y = 0; y < years; ++y) {
        csv << (y + 1);
        for (int l = 0; l < num_links; ++l) csv << "," << detail::csv_num(m[y][l]);
        csv << "\n";
      }
      emit_csv("Traffic_Flow", csv.str());
      emit_svg("Traffic_Flow", detail::svg_heatmap(m));
      break;
    }
  }
  return files;
}

}  // namespace metroplan

#endif  // METROPLAN_ANALYSIS_HPP
