#ifndef METROPLAN_PLANNER_HPP
#define METROPLAN_PLANNER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "metroplan/archive.hpp"
#include "metroplan/common.hpp"
#include "metroplan/qot.hpp"
#include "metroplan/spectrum.hpp"
#include "metroplan/topology.hpp"

namespace metroplan {

constexpr double kLatencyUsPerKm = 5.0;

enum class LandCostMetric {
  FpKmBvtBand,  // lexicographic (new fiber-pair km, new BVTs, band of last BVT)
  PathKm,       // total km of the pair
};

struct PlannerConfig {
  int period_years = 10;
  std::vector<double> bvt_bitrates = {400, 320, 260, 200, 120, 64};  // descending
  std::vector<double> license_capacities = {100, 80, 65, 50, 30, 16};
  int licenses_per_bvt = 4;
  int fp_max = 20;
  BandLayout band_layout{{64, 80}, 160};
  int kpair_standalone = 4;
  int kpair_colocated = 4;
  double cagr = 0.4;
  double dual_homing_split = 0.5;
  LandCostMetric land_cost_metric = LandCostMetric::FpKmBvtBand;

  void validate() const {
    if (period_years < 1) throw ValidationError("period_years must be at least 1");
    if (bvt_bitrates.empty() || bvt_bitrates.size() != license_capacities.size())
      throw ValidationError("bitrate and license capacity lists must pair up");
    for (std::size_t i = 1; i < bvt_bitrates.size(); ++i)
      if (!(bvt_bitrates[i] < bvt_bitrates[i - 1]))
        throw ValidationError("bvt_bitrates must be strictly descending");
    for (std::size_t i = 0; i < bvt_bitrates.size(); ++i)
      if (licenses_per_bvt * license_capacities[i] + 1e-9 < bvt_bitrates[i])
        throw ValidationError("license capacities cannot cover their BVT bitrate");
    if (fp_max < 1) throw ValidationError("fp_max must be at least 1");
    if (licenses_per_bvt < 1) throw ValidationError("licenses_per_bvt must be at least 1");
    if (!(dual_homing_split > 0 && dual_homing_split < 1))
      throw ValidationError("dual_homing_split must be inside (0,1)");
    if (kpair_standalone < 1 || kpair_colocated < 1)
      throw ValidationError("kpair limits must be at least 1");
    if (!(cagr > -1)) throw ValidationError("cagr must exceed -1");
    band_layout.validate();
  }

  double max_bitrate() const { return bvt_bitrates.front(); }

  double license_capacity_for(double bitrate) const {
    for (std::size_t i = 0; i < bvt_bitrates.size(); ++i)
      if (bvt_bitrates[i] == bitrate) return license_capacities[i];
    throw ValidationError("no license capacity configured for bitrate " +
                          std::to_string(bitrate));
  }

  /// Smallest configured bitrate covering `demand`, capped at the top tier.
  double requested_tier(double demand) const {
    double tier = bvt_bitrates.front();
    for (double b : bvt_bitrates)
      if (b + 1e-9 >= demand && b < tier) tier = b;
    return tier;
  }
};

struct TrafficProfile {
  std::vector<double> base_capacity;              // per node, Gbps
  std::vector<std::vector<double>> annual_added;  // [year][node]
  std::set<int> bypass_nodes;
};

/// Mean of mc_steps uniform draws per node. Every node consumes draws even
/// when bypassed (rows are zeroed afterwards), so the non-bypassed demands are
/// identical across scenario variants sharing a seed.
inline std::vector<double> generate_initial_traffic(int num_nodes, const std::set<int>& bypass,
                                                    int mc_steps, double min_rate,
                                                    double max_rate, std::uint64_t seed) {
  if (num_nodes < 1) throw ValidationError("no nodes to generate traffic for");
  if (mc_steps < 1) throw ValidationError("mc_steps must be at least 1");
  if (!(min_rate <= max_rate)) throw ValidationError("min_rate must not exceed max_rate");
  std::mt19937_64 rng(seed);
  std::vector<double> sum(num_nodes, 0.0);
  for (int step = 0; step < mc_steps; ++step)
    for (int n = 0; n < num_nodes; ++n) sum[n] += uniform(rng, min_rate, max_rate);
  std::vector<double> mean(num_nodes);
  for (int n = 0; n < num_nodes; ++n)
    mean[n] = bypass.count(n) ? 0.0 : ledger_round(sum[n] / mc_steps);
  return mean;
}

/// Year-0 row carries the base demand; later rows hold the increments of a
/// constant compound growth of the cumulative demand.
inline std::vector<std::vector<double>> simulate_traffic_growth(
    const std::vector<double>& base, double cagr, int years) {
  if (!(cagr > -1)) throw ValidationError("cagr must exceed -1");
  std::vector<std::vector<double>> added(years, std::vector<double>(base.size(), 0.0));
  for (std::size_t n = 0; n < base.size(); ++n) {
    double prev_total = 0;
    for (int y = 0; y < years; ++y) {
      const double total = base[n] * std::pow(1.0 + cagr, y);
      added[y][n] = ledger_round(total - prev_total);
      prev_total = total;
    }
  }
  return added;
}

/// Occupancy tensors plus the per-year fiber-pair ledgers. Regular paths use
/// (slot, link, tier); primary paths of co-located nodes ride an intra-site
/// tensor indexed by node instead of link.
struct SpectrumState {
  int num_slots = 0;
  int num_links = 0;
  int num_nodes = 0;
  int fp_max = 0;
  int years = 0;
  std::vector<std::uint8_t> occ;            // [slot][link][tier]
  std::vector<std::uint8_t> occ_colocated;  // [slot][node][tier]
  std::vector<std::vector<int>> year_fp;            // [year][link], cumulative pairs
  std::vector<std::vector<int>> year_fp_colocated;  // [year][node]
  std::vector<std::uint8_t> band_used;            // [link][tier] -> band bitmask
  std::vector<std::uint8_t> band_used_colocated;  // [node][tier]

  static SpectrumState sized(int slots, int links, int nodes, int fp_max, int years) {
    SpectrumState s;
    s.num_slots = slots;
    s.num_links = links;
    s.num_nodes = nodes;
    s.fp_max = fp_max;
    s.years = years;
    s.occ.assign(static_cast<std::size_t>(slots) * links * fp_max, 0);
    s.occ_colocated.assign(static_cast<std::size_t>(slots) * nodes * fp_max, 0);
    s.year_fp.assign(years, std::vector<int>(links, 0));
    s.year_fp_colocated.assign(years, std::vector<int>(nodes, 0));
    s.band_used.assign(static_cast<std::size_t>(links) * fp_max, 0);
    s.band_used_colocated.assign(static_cast<std::size_t>(nodes) * fp_max, 0);
    return s;
  }

  std::size_t idx(int slot, int link, int tier) const {
    return (static_cast<std::size_t>(slot) * num_links + link) * fp_max + tier;
  }
  std::size_t idx_co(int slot, int node, int tier) const {
    return (static_cast<std::size_t>(slot) * num_nodes + node) * fp_max + tier;
  }

  bool free_on(int slot, int link, int tier) const { return occ[idx(slot, link, tier)] == 0; }
  bool free_on_colocated(int slot, int node, int tier) const {
    return occ_colocated[idx_co(slot, node, tier)] == 0;
  }

  void mark(int slot, int link, int tier, BandName band) {
    auto& cell = occ[idx(slot, link, tier)];
    if (cell) throw std::logic_error("double allocation of a spectrum cell");
    cell = 1;
    band_used[static_cast<std::size_t>(link) * fp_max + tier] |=
        static_cast<std::uint8_t>(1u << static_cast<int>(band));
  }
  void mark_colocated(int slot, int node, int tier, BandName band) {
    auto& cell = occ_colocated[idx_co(slot, node, tier)];
    if (cell) throw std::logic_error("double allocation of a co-located spectrum cell");
    cell = 1;
    band_used_colocated[static_cast<std::size_t>(node) * fp_max + tier] |=
        static_cast<std::uint8_t>(1u << static_cast<int>(band));
  }

  int band_fp_count(int link, BandName band) const {
    int c = 0;
    for (int t = 0; t < fp_max; ++t)
      if (band_used[static_cast<std::size_t>(link) * fp_max + t] &
          (1u << static_cast<int>(band)))
        ++c;
    return c;
  }
};

/// Bundles the QoT profile with everything needed to judge one slot of one
/// candidate path: penalties and node degrees for the WSS filter term.
struct QotEvaluator {
  const LinkQoTProfile* profile = nullptr;  // global link indexing
  const OpticalParameters* params = nullptr;
  FilterPenaltyTable filter_table = FilterPenaltyTable::defaults();
  double trx_snr_db = 36.0;  // non-finite disables the term
  double aging_margin_db = 1.0;
  std::vector<int> node_degree;  // initial full-topology degrees

  double path_gsnr_at_slot(const CandidatePath& path, int slot) const {
    std::vector<double> g;
    g.reserve(path.link_indices.size());
    for (int l : path.link_indices) g.push_back(profile->gsnr_db[l][slot]);
    int deg = 0;
    for (int n : path.nodes) deg = std::max(deg, node_degree[n]);
    QoTPenalties pen{trx_snr_db, filter_table.lookup(path.num_hops, deg), aging_margin_db};
    return path_gsnr(g, pen);
  }

  std::optional<ModulationFormat> modulation_at_slot(const CandidatePath& path,
                                                     int slot) const {
    return select_modulation(path_gsnr_at_slot(path, slot), *params);
  }
};

enum PathRole { kPrimary = 0, kSecondary = 1, kColocatedPrimary = 2 };

struct PlacedBvt {
  int slot = -1;
  int tier = -1;
  int band = 0;
  double bitrate = 0;
  double gsnr_db = 0;   // meaningless for co-located primary markers
  bool has_gsnr = true;
  double absorbed = 0;  // traffic loaded at establishment
  int licenses = 0;     // activated at establishment (per transponder end)
};

struct AssignmentRecord {
  int node = -1;
  int year = 0;
  int role = kPrimary;
  int path_index = -1;  // -1 marks the co-located primary
  int dest = -1;
  std::vector<int> links;  // global link indices, empty for markers
  double path_km = 0;
  int hops = 0;
  std::vector<PlacedBvt> bvts;
  double new_fp_km = 0;
  int new_fp_count = 0;
};

/// Residual-capacity accumulators of one (node, role); the planner keeps one
/// per role so primary and secondary carriers fill independently.
struct RoleState {
  double bvt_capacity_left = 0;
  double last_bvt_bitrate = 0;
  int last_bvt_band = -1;
  double last_license_cap = 0;
  double license_capacity_left = 0;
  int licenses_on_last = 0;
  int last_dest = -1;
  std::vector<int> last_links;
  double last_latency_us = 0;
  bool committed = false;
};

namespace detail {

/// Finds a slot for one BVT at the given fiber-pair tier: exact fit first
/// (lowest slot whose supported bitrate equals the requested tier), then first
/// fit (lowest feasible slot). The slot must be free on every link of the
/// path. Ascending slot order realizes the C -> SuperC -> L allocation order.
inline std::optional<std::pair<int, ModulationFormat>> find_slot_on_tier(
    const CandidatePath& path, int tier, double requested_tier_bitrate,
    const QotEvaluator& qot, const SpectrumState& state, const PlannerConfig& cfg) {
  auto free_everywhere = [&](int slot) {
    for (int l : path.link_indices)
      if (!state.free_on(slot, l, tier)) return false;
    return true;
  };
  int first_fit = -1;
  ModulationFormat first_mod;
  for (int slot = 0; slot < cfg.band_layout.total_slots; ++slot) {
    if (!free_everywhere(slot)) continue;
    auto mod = qot.modulation_at_slot(path, slot);
    if (!mod) continue;
    if (mod->bitrate_gbps == requested_tier_bitrate)
      return std::make_pair(slot, *mod);  // exact fit
    if (first_fit < 0) {
      first_fit = slot;
      first_mod = *mod;
    }
  }
  if (first_fit >= 0) return std::make_pair(first_fit, first_mod);
  return std::nullopt;
}

}  // namespace detail

/// Spectrum and fiber-pair assignment of one path of one node-year (Fig. 5
/// flow). Places bvt_count transponders and keeps adding more until their
/// combined bitrate covers traffic_to_assign; each placement searches
/// fiber-pair tiers in ascending order and, within a tier, requires one common
/// free slot across every link of the path. The co-located primary (no path
/// index) bypasses GSNR and always establishes top-bitrate carriers on the
/// node's intra-site tensor. Mutates state and role; ledger bookkeeping stays
/// with the caller so provisional evaluations can run on clones.
inline AssignmentRecord assign_spectrum(std::optional<int> path_index, PathRole role_kind,
                                        int year, const std::vector<CandidatePath>& candidates,
                                        double traffic_to_assign, int bvt_count, int node,
                                        const QotEvaluator& qot, SpectrumState& state,
                                        RoleState& role, const PlannerConfig& cfg,
                                        const std::vector<Link>& topo_links) {
  AssignmentRecord rec;
  rec.node = node;
  rec.year = year;
  rec.role = role_kind;

  const CandidatePath* path = nullptr;
  if (path_index) {
    path = &candidates.at(*path_index);
    rec.path_index = *path_index;
    rec.dest = path->dest;
    rec.links = path->link_indices;
    rec.path_km = path->distance;
    rec.hops = path->num_hops;
  } else {
    if (role_kind != kColocatedPrimary)
      throw ValidationError("only the co-located primary may omit the path index");
    rec.dest = node;
  }
  if (bvt_count < 0) throw ValidationError("negative BVT count");

  double absorbed_total = 0;
  int placed = 0;
  while (placed < bvt_count || absorbed_total + 1e-9 < traffic_to_assign) {
    const double remaining = traffic_to_assign - absorbed_total;
    if (remaining <= 1e-9 && placed >= bvt_count) break;
    if (remaining <= 1e-9) break;  // batch oversized; never place an idle BVT

    PlacedBvt bvt;
    if (!path_index) {
      // intra-site carrier: first free slot per tier, always the top bitrate
      bool done = false;
      for (int tier = 0; tier < cfg.fp_max && !done; ++tier) {
        for (int slot = 0; slot < cfg.band_layout.total_slots; ++slot) {
          if (!state.free_on_colocated(slot, node, tier)) continue;
          const BandName band = band_of_slot(cfg.band_layout, slot);
          state.mark_colocated(slot, node, tier, band);
          state.year_fp_colocated[year][node] =
              std::max(state.year_fp_colocated[year][node], tier + 1);
          bvt.slot = slot;
          bvt.tier = tier;
          bvt.band = static_cast<int>(band);
          bvt.bitrate = cfg.max_bitrate();
          bvt.has_gsnr = false;
          done = true;
          break;
        }
      }
      if (!done)
        throw BlockingError("co-located fiber pairs exhausted at node " +
                                std::to_string(node) + " year " + std::to_string(year),
                            node, year);
    } else {
      const double tier_bitrate = cfg.requested_tier(std::min(remaining, cfg.max_bitrate()));
      bool done = false;
      for (int tier = 0; tier < cfg.fp_max && !done; ++tier) {
        auto hit = detail::find_slot_on_tier(*path, tier, tier_bitrate, qot, state, cfg);
        if (!hit) continue;
        const auto& [slot, mod] = *hit;
        const BandName band = band_of_slot(cfg.band_layout, slot);
        for (int l : path->link_indices) {
          state.mark(slot, l, tier, band);
          const int prev = state.year_fp[year][l];
          if (tier + 1 > prev) {
            state.year_fp[year][l] = tier + 1;
            rec.new_fp_count += tier + 1 - prev;
            rec.new_fp_km += (tier + 1 - prev) * topo_links[l].km;
          }
        }
        bvt.slot = slot;
        bvt.tier = tier;
        bvt.band = static_cast<int>(band);
        bvt.bitrate = mod.bitrate_gbps;
        bvt.gsnr_db = ledger_round(qot.path_gsnr_at_slot(*path, slot));
        done = true;
      }
      if (!done)
        throw BlockingError("all fiber-pair tiers exhausted for node " +
                                std::to_string(node) + " year " + std::to_string(year) +
                                " path " + std::to_string(*path_index),
                            node, year);
    }

    bvt.absorbed = std::min(remaining, bvt.bitrate);
    const double cap = cfg.license_capacity_for(bvt.bitrate);
    bvt.licenses = std::clamp(static_cast<int>(std::ceil(bvt.absorbed / cap - 1e-12)), 1,
                              cfg.licenses_per_bvt);
    absorbed_total += bvt.absorbed;
    rec.bvts.push_back(bvt);
    ++placed;

    role.last_bvt_bitrate = bvt.bitrate;
    role.last_bvt_band = bvt.band;
    role.last_license_cap = cap;
    role.licenses_on_last = bvt.licenses;
    role.bvt_capacity_left = bvt.bitrate - bvt.absorbed;
    role.license_capacity_left = bvt.licenses * cap - bvt.absorbed;
  }

  // residual-served years keep riding the previously committed path, so the
  // role only re-homes when new carriers actually landed here
  if (!rec.bvts.empty()) {
    role.last_dest = rec.dest;
    role.last_links = rec.links;
    role.last_latency_us = ledger_round(rec.path_km * kLatencyUsPerKm);
    role.committed = true;
  }
  return rec;
}

/// Everything one hierarchy level's planning run accumulates; field layout
/// mirrors the result archive groups.
struct PlanLedger {
  int level = 0;
  int years = 0;
  int num_nodes = 0;
  int num_links = 0;

  // bvt_info (annual adds per band; cumulative views derived at save time)
  std::array<std::vector<int>, 3> bvt_annual_band{};
  std::vector<int> bvt_annual_total;
  std::array<std::vector<int>, 3> license_annual_band{};
  std::vector<int> license_annual_total;
  // rows: year, src, dest, role, slot, tier, band, bitrate, gsnr(-1 when n/a),
  // licenses, then the global link indices of the path (empty for intra-site)
  std::vector<std::vector<double>> bvt_establishments;

  // link_info
  std::vector<int> subnet_links;
  std::vector<std::vector<int>> year_fp;            // [year][link]
  std::vector<std::vector<int>> year_fp_colocated;  // [year][node]
  std::array<std::vector<std::vector<int>>, 3> band_fp_per_link{};  // [band][year][link]
  std::array<std::vector<int>, 3> band_degree{};                    // [band][year]
  std::vector<double> effective_fp_km;                              // [year]
  std::vector<std::vector<int>> node_degree_fp;                     // [year][node]
  std::vector<std::vector<double>> traffic_flow;                    // [year][link]

  // path_GSNR_info
  std::vector<std::vector<double>> gsnr_all;        // [year][...]
  std::vector<std::vector<double>> gsnr_primary;
  std::vector<std::vector<double>> gsnr_secondary;

  // node_capacity_profile
  std::vector<std::vector<double>> node_capacity;  // [year][node]

  // segments_latency (per source node of this level; -1 dest marks no entry)
  std::vector<std::array<double, 2>> segment_latency_us;
  std::vector<std::array<int, 2>> segment_dest;

  std::vector<std::vector<int>> land_links_per_node;

  static PlanLedger sized(int level, int years, int nodes, int links) {
    PlanLedger l;
    l.level = level;
    l.years = years;
    l.num_nodes = nodes;
    l.num_links = links;
    for (auto& b : l.bvt_annual_band) b.assign(years, 0);
    l.bvt_annual_total.assign(years, 0);
    for (auto& b : l.license_annual_band) b.assign(years, 0);
    l.license_annual_total.assign(years, 0);
    l.year_fp.assign(years, std::vector<int>(links, 0));
    l.year_fp_colocated.assign(years, std::vector<int>(nodes, 0));
    for (auto& b : l.band_fp_per_link) b.assign(years, std::vector<int>(links, 0));
    for (auto& b : l.band_degree) b.assign(years, 0);
    l.effective_fp_km.assign(years, 0.0);
    l.node_degree_fp.assign(years, std::vector<int>(nodes, 0));
    l.traffic_flow.assign(years, std::vector<double>(links, 0.0));
    l.gsnr_all.assign(years, {});
    l.gsnr_primary.assign(years, {});
    l.gsnr_secondary.assign(years, {});
    l.node_capacity.assign(years, std::vector<double>(nodes, 0.0));
    l.segment_latency_us.assign(nodes, {0.0, 0.0});
    l.segment_dest.assign(nodes, {-1, -1});
    l.land_links_per_node.assign(nodes, {});
    return l;
  }
};

struct PlannerState {
  SpectrumState state;
  PlanLedger ledger;
};

/// Zeroed planning state sized for one level run. The slot count must agree
/// with the configured band layout.
inline PlannerState init_planner(const PlannerConfig& cfg, int level, int num_links,
                                 int num_nodes, int num_slots) {
  cfg.validate();
  if (num_slots != cfg.band_layout.total_slots)
    throw ValidationError("num_slots " + std::to_string(num_slots) +
                          " does not match the band layout total " +
                          std::to_string(cfg.band_layout.total_slots));
  return {SpectrumState::sized(num_slots, num_links, num_nodes, cfg.fp_max,
                               cfg.period_years),
          PlanLedger::sized(level, cfg.period_years, num_nodes, num_links)};
}

struct LevelPlanInputs {
  const Topology* topology = nullptr;
  int level = 0;
  int minimum_level = 0;
  const std::vector<LandPair>* pairs = nullptr;  // standalone dual-homing pairs
  const std::vector<CandidatePath>* candidates_standalone = nullptr;
  const std::vector<CandidatePath>* candidates_colocated = nullptr;
  const QotEvaluator* qot = nullptr;
  const PlannerConfig* cfg = nullptr;
  std::vector<int> standalone_nodes;  // sources, ascending
  std::vector<int> colocated_nodes;   // sources, ascending
  const std::vector<std::vector<double>>* added_demand = nullptr;  // [year][node]
  std::vector<int> subnet_links;
  bool record_source_demand = false;  // true on the lowest-level run only
};

struct LevelPlanResult {
  PlanLedger ledger;
  SpectrumState state;
  std::vector<std::vector<double>> aggregated;  // [year][node] halves landed
};

namespace detail {

struct TrialOutcome {
  SpectrumState state;
  std::array<RoleState, 2> roles;
  AssignmentRecord primary;
  AssignmentRecord secondary;
  bool has_primary = false;
  bool has_secondary = false;
};

inline std::array<double, 3> trial_cost(const TrialOutcome& t, const PlannerConfig& cfg) {
  const double fp_km = t.primary.new_fp_km + t.secondary.new_fp_km;
  const double bvts =
      static_cast<double>(t.primary.bvts.size() + t.secondary.bvts.size());
  double band = 0;
  if (!t.primary.bvts.empty()) band = std::max(band, double(t.primary.bvts.back().band));
  if (!t.secondary.bvts.empty()) band = std::max(band, double(t.secondary.bvts.back().band));
  if (cfg.land_cost_metric == LandCostMetric::PathKm)
    return {t.primary.path_km + t.secondary.path_km, 0.0, 0.0};
  return {fp_km, bvts, band};
}

/// Drains h from the role's residual BVT capacity, activating licenses on the
/// last established carrier as the stored load crosses capacity boundaries.
/// Returns (traffic still to cover, licenses newly activated).
inline std::pair<double, int> consume_residual(RoleState& role, double h,
                                               const PlannerConfig& cfg) {
  const double eat = std::min(h, role.bvt_capacity_left);
  int new_licenses = 0;
  if (eat > 1e-12) {
    role.bvt_capacity_left -= eat;
    const double shortfall = eat - role.license_capacity_left;
    if (shortfall > 1e-9) {
      int want = static_cast<int>(std::ceil(shortfall / role.last_license_cap - 1e-12));
      want = std::min(want, cfg.licenses_per_bvt - role.licenses_on_last);
      role.licenses_on_last += want;
      role.license_capacity_left += want * role.last_license_cap;
      new_licenses = want;
    }
    role.license_capacity_left -= eat;
  }
  return {h - eat, new_licenses};
}

inline void apply_record_to_ledger(PlanLedger& ledger, const AssignmentRecord& rec) {
  for (const PlacedBvt& b : rec.bvts) {
    ledger.bvt_annual_band[b.band][rec.year] += 2;  // one transponder per end
    ledger.bvt_annual_total[rec.year] += 2;
    ledger.license_annual_band[b.band][rec.year] += 2 * b.licenses;
    ledger.license_annual_total[rec.year] += 2 * b.licenses;
    std::vector<double> row{double(rec.year), double(rec.node), double(rec.dest),
                            double(rec.role), double(b.slot),   double(b.tier),
                            double(b.band),   b.bitrate,        b.has_gsnr ? b.gsnr_db : -1.0,
                            double(b.licenses)};
    for (int l : rec.links) row.push_back(double(l));
    ledger.bvt_establishments.push_back(std::move(row));
    if (b.has_gsnr) {
      ledger.gsnr_all[rec.year].push_back(b.gsnr_db);
      if (rec.role == kPrimary)
        ledger.gsnr_primary[rec.year].push_back(b.gsnr_db);
      else
        ledger.gsnr_secondary[rec.year].push_back(b.gsnr_db);
    }
  }
}

}  // namespace detail

/// The annual planning loop of one hierarchy level (Fig. 6 flow): per year,
/// standalone sources first, then co-located ones. Standalone demand commits
/// to the cheapest provisionally-costed LAND pair; co-located primaries stay
/// intra-site while their secondaries pick the cheapest candidate path to a
/// different destination. Residual BVT and license capacity carry over per
/// (node, role).
inline LevelPlanResult run_level_plan(const LevelPlanInputs& in) {
  const Topology& topo = *in.topology;
  const PlannerConfig& cfg = *in.cfg;
  cfg.validate();
  const int years = cfg.period_years;
  const int num_nodes = topo.num_nodes();
  const int num_links = topo.num_links();
  const auto& demand = *in.added_demand;
  if (static_cast<int>(demand.size()) != years)
    throw ValidationError("demand matrix does not cover the planning period");
  if (in.qot->profile->num_links() != num_links)
    throw ValidationError("QoT profile does not cover the level's subnet");

  LevelPlanResult out;
  out.state = SpectrumState::sized(cfg.band_layout.total_slots, num_links, num_nodes,
                                   cfg.fp_max, years);
  out.ledger = PlanLedger::sized(in.level, years, num_nodes, num_links);
  out.ledger.subnet_links = in.subnet_links;
  out.aggregated.assign(years, std::vector<double>(num_nodes, 0.0));

  std::vector<std::array<RoleState, 2>> roles(num_nodes);

  // per-source LAND pair shortlists and co-located secondary shortlists
  std::map<int, std::vector<const LandPair*>> pair_shortlist;
  if (in.pairs)
    for (const LandPair& p : *in.pairs) {
      auto& v = pair_shortlist[p.src];
      if (static_cast<int>(v.size()) < cfg.kpair_standalone) v.push_back(&p);
    }
  std::map<int, std::vector<int>> colocated_shortlist;
  if (in.candidates_colocated)
    for (std::size_t i = 0; i < in.candidates_colocated->size(); ++i) {
      const CandidatePath& c = (*in.candidates_colocated)[i];
      if (c.dest == c.src) continue;
      auto& v = colocated_shortlist[c.src];
      if (static_cast<int>(v.size()) < cfg.kpair_colocated) v.push_back(static_cast<int>(i));
    }

  const double split = cfg.dual_homing_split;

  for (int y = 0; y < years; ++y) {
    if (y > 0) {
      out.state.year_fp[y] = out.state.year_fp[y - 1];
      out.state.year_fp_colocated[y] = out.state.year_fp_colocated[y - 1];
    }

    auto process_node = [&](int node, bool standalone) {
      const double t_added = demand[y][node];
      if (in.record_source_demand)
        out.ledger.node_capacity[y][node] =
            ledger_round(out.ledger.node_capacity[y][node] + t_added);
      if (t_added <= 1e-12) return;

      const std::array<double, 2> h{t_added * split, t_added * (1.0 - split)};
      std::array<double, 2> pure{};
      std::array<int, 2> required{};
      for (int r = 0; r < 2; ++r) {
        auto [left, new_lic] = detail::consume_residual(roles[node][r], h[r], cfg);
        pure[r] = left;
        required[r] = left > 1e-9
                          ? static_cast<int>(std::ceil(left / cfg.max_bitrate() - 1e-12))
                          : 0;
        if (new_lic > 0) {
          const int band = roles[node][r].last_bvt_band;
          out.ledger.license_annual_band[band][y] += 2 * new_lic;
          out.ledger.license_annual_total[y] += 2 * new_lic;
        }
      }

      if (required[0] + required[1] > 0) {
        std::vector<detail::TrialOutcome> trials;
        if (standalone) {
          auto it = pair_shortlist.find(node);
          if (it == pair_shortlist.end() || it->second.empty())
            throw BlockingError("no LAND pair available for node " + std::to_string(node) +
                                    " year " + std::to_string(y),
                                node, y);
          for (const LandPair* pr : it->second) {
            detail::TrialOutcome t{out.state, roles[node], {}, {}, false, false};
            t.primary = assign_spectrum(pr->primary_path, kPrimary, y,
                                        *in.candidates_standalone, pure[0], required[0],
                                        node, *in.qot, t.state, t.roles[0], cfg,
                                        topo.links());
            t.secondary = assign_spectrum(pr->secondary_path, kSecondary, y,
                                          *in.candidates_standalone, pure[1], required[1],
                                          node, *in.qot, t.state, t.roles[1], cfg,
                                          topo.links());
            t.has_primary = t.has_secondary = true;
            trials.push_back(std::move(t));
          }
        } else {
          auto it = colocated_shortlist.find(node);
          if (required[1] > 0 && (it == colocated_shortlist.end() || it->second.empty()))
            throw BlockingError("no secondary candidate path for co-located node " +
                                    std::to_string(node) + " year " + std::to_string(y),
                                node, y);
          if (required[1] > 0) {
            for (int ci : it->second) {
              detail::TrialOutcome t{out.state, roles[node], {}, {}, false, false};
              if (required[0] > 0) {
                t.primary = assign_spectrum(std::nullopt, kColocatedPrimary, y,
                                            *in.candidates_colocated, pure[0], required[0],
                                            node, *in.qot, t.state, t.roles[0], cfg,
                                            topo.links());
                t.has_primary = true;
              }
              t.secondary = assign_spectrum(ci, kSecondary, y, *in.candidates_colocated,
                                            pure[1], required[1], node, *in.qot, t.state,
                                            t.roles[1], cfg, topo.links());
              t.has_secondary = true;
              trials.push_back(std::move(t));
            }
          } else {
            detail::TrialOutcome t{out.state, roles[node], {}, {}, false, false};
            t.primary = assign_spectrum(std::nullopt, kColocatedPrimary, y,
                                        *in.candidates_colocated, pure[0], required[0],
                                        node, *in.qot, t.state, t.roles[0], cfg,
                                        topo.links());
            t.has_primary = true;
            trials.push_back(std::move(t));
          }
        }

        std::size_t best = 0;
        for (std::size_t i = 1; i < trials.size(); ++i)
          if (detail::trial_cost(trials[i], cfg) < detail::trial_cost(trials[best], cfg))
            best = i;
        detail::TrialOutcome& win = trials[best];
        out.state = std::move(win.state);
        roles[node] = win.roles;
        if (win.has_primary) detail::apply_record_to_ledger(out.ledger, win.primary);
        if (win.has_secondary) detail::apply_record_to_ledger(out.ledger, win.secondary);

        std::set<int> land_links(win.primary.links.begin(), win.primary.links.end());
        land_links.insert(win.secondary.links.begin(), win.secondary.links.end());
        out.ledger.land_links_per_node[node] = {land_links.begin(), land_links.end()};
      }

      // record segment latencies and route the full halves (residual-served
      // traffic rides the previously committed paths)
      for (int r = 0; r < 2; ++r) {
        const RoleState& role = roles[node][r];
        if (!role.committed) {
          if (h[r] > 1e-9)
            throw BlockingError("node " + std::to_string(node) +
                                    " carries traffic with no committed path",
                                node, y);
          continue;
        }
        out.ledger.segment_latency_us[node][r] = role.last_latency_us;
        out.ledger.segment_dest[node][r] = role.last_dest;
        out.aggregated[y][role.last_dest] =
            ledger_round(out.aggregated[y][role.last_dest] + h[r]);
        out.ledger.node_capacity[y][role.last_dest] =
            ledger_round(out.ledger.node_capacity[y][role.last_dest] + h[r]);
        for (int l : role.last_links)
          out.ledger.traffic_flow[y][l] = ledger_round(out.ledger.traffic_flow[y][l] + h[r]);
      }
    };

    for (int node : in.standalone_nodes) process_node(node, true);
    for (int node : in.colocated_nodes) process_node(node, false);

    // end-of-year snapshots
    out.ledger.year_fp[y] = out.state.year_fp[y];
    out.ledger.year_fp_colocated[y] = out.state.year_fp_colocated[y];
    double fp_km = 0;
    for (int l = 0; l < num_links; ++l)
      fp_km += topo.links()[l].km * out.state.year_fp[y][l];
    out.ledger.effective_fp_km[y] = ledger_round(fp_km);
    for (int b = 0; b < 3; ++b) {
      int degree = 0;
      for (int l = 0; l < num_links; ++l) {
        const int c = out.state.band_fp_count(l, static_cast<BandName>(b));
        out.ledger.band_fp_per_link[b][y][l] = c;
        degree += 2 * c;
      }
      out.ledger.band_degree[b][y] = degree;
    }
    for (int n = 0; n < num_nodes; ++n) {
      int deg = 0;
      for (int l = 0; l < num_links; ++l) {
        const Link& lk = topo.links()[l];
        if (lk.a == n || lk.b == n) deg += out.state.year_fp[y][l];
      }
      out.ledger.node_degree_fp[y][n] = deg;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// result persistence

namespace detail {

template <typename T>
std::vector<T> cumulative(const std::vector<T>& v) {
  std::vector<T> out = v;
  for (std::size_t i = 1; i < out.size(); ++i) out[i] += out[i - 1];
  return out;
}

}  // namespace detail

/// Writes the per-level archives: bvt_info, link_info, path_GSNR_info,
/// node_capacity_profile_array and segments_latency, verbatim key names.
inline std::vector<std::string> save_results(const PlanLedger& ledger,
                                             const std::string& topology_name,
                                             const std::string& results_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(results_dir, ec);
  if (!fs::is_directory(results_dir))
    throw IoError("cannot create results directory: " + results_dir);

  const std::string stem =
      results_dir + "/" + topology_name + "_HL" + std::to_string(ledger.level) + "_";
  std::vector<std::string> written;

  {
    nlohmann::json j;
    j["HL_All_100G_lincense"] = detail::cumulative(ledger.license_annual_total);
    j["HL_annual_license"] = ledger.license_annual_total;
    j["HL_CBand_license"] = ledger.license_annual_band[0];
    j["HL_SuperCBand_license"] = ledger.license_annual_band[1];
    j["HL_LBand_license"] = ledger.license_annual_band[2];
    j["HL_BVTNum_All"] = detail::cumulative(ledger.bvt_annual_total);
    j["HL_BVTNum_CBand"] = detail::cumulative(ledger.bvt_annual_band[0]);
    j["HL_BVTNum_SuperCBand"] = detail::cumulative(ledger.bvt_annual_band[1]);
    j["HL_BVTNum_LBand"] = detail::cumulative(ledger.bvt_annual_band[2]);
    j["BVT_establishment_info"] = ledger.bvt_establishments;
    write_archive(stem + "bvt_info.json", j);
    written.push_back(stem + "bvt_info.json");
  }
  {
    nlohmann::json j;
    j["HL_links_indices"] = ledger.subnet_links;
    j["num_link_CBand_annual"] = ledger.band_fp_per_link[0];
    j["num_link_SupCBand_annual"] = ledger.band_fp_per_link[1];
    j["num_link_LBand_annual"] = ledger.band_fp_per_link[2];
    j["HL_CDegree_Domain"] = ledger.band_degree[0];
    j["HL_SuperCDegree_Domain"] = ledger.band_degree[1];
    j["HL_LDegree_Domain"] = ledger.band_degree[2];
    j["Total_effective_FP_new_annual"] = ledger.effective_fp_km;
    j["HL_FPNum"] = ledger.year_fp;
    j["HL_FPNumCo"] = ledger.year_fp_colocated;
    j["degree_number_HLs"] = ledger.node_degree_fp;
    j["traffic_flow_links_array"] = ledger.traffic_flow;
    write_archive(stem + "link_info.json", j);
    written.push_back(stem + "link_info.json");
  }
  {
    nlohmann::json j;
    j["GSNR_all_paths"] = ledger.gsnr_all;
    j["GSNR_primary"] = ledger.gsnr_primary;
    j["GSNR_secondary"] = ledger.gsnr_secondary;
    write_archive(stem + "path_GSNR_info.json", j);
    written.push_back(stem + "path_GSNR_info.json");
  }
  {
    nlohmann::json j;
    j["node_capacity_profile_array"] = ledger.node_capacity;
    write_archive(stem + "node_capacity_profile_array.json", j);
    written.push_back(stem + "node_capacity_profile_array.json");
  }
  {
    nlohmann::json j;
    j["latency"] = ledger.segment_latency_us;
    j["destinations"] = ledger.segment_dest;
    write_archive(stem + "segments_latency.json", j);
    written.push_back(stem + "segments_latency.json");
  }
  return written;
}

}  // namespace metroplan

#endif  // METROPLAN_PLANNER_HPP
