// Shared miniature planning fixtures for the unit and acceptance suites.
#ifndef METROPLAN_TESTS_FIXTURES_HPP
#define METROPLAN_TESTS_FIXTURES_HPP

#include <algorithm>
#include <vector>

#include "metroplan/planner.hpp"
#include "metroplan/topology.hpp"

namespace fixtures {

using namespace metroplan;

inline BandLayout toy_layout() { return BandLayout{{4, 6}, 8}; }

inline PlannerConfig toy_config(int years = 1) {
  PlannerConfig cfg;
  cfg.period_years = years;
  cfg.band_layout = toy_layout();
  cfg.fp_max = 3;
  return cfg;
}

inline LinkQoTProfile uniform_profile(int links, int slots, double gsnr_db) {
  LinkQoTProfile p;
  p.gsnr_db.assign(links, std::vector<double>(slots, gsnr_db));
  p.gsnr_linear.assign(links, std::vector<double>(slots, db_to_linear(gsnr_db)));
  p.ase_w.assign(links, std::vector<double>(slots, 1e-6));
  p.nli_w.assign(links, std::vector<double>(slots, 0.0));
  p.optimal_power_dbm.assign(links, 0.0);
  p.optimal_power_w.assign(links, 1e-3);
  p.throughput_at_optimum.assign(links, 0.0);
  return p;
}

inline FilterPenaltyTable flat_penalty() {
  FilterPenaltyTable t;
  t.penalty_db = {{0.3}};
  return t;
}

inline QotEvaluator make_evaluator(const Topology& t, const LinkQoTProfile& prof,
                                   const OpticalParameters& params) {
  QotEvaluator q;
  q.profile = &prof;
  q.params = &params;
  q.filter_table = flat_penalty();
  q.trx_snr_db = kAbsent;
  q.aging_margin_db = 0.0;
  for (int n = 0; n < t.num_nodes(); ++n) q.node_degree.push_back(t.degree(n));
  return q;
}

inline std::vector<CandidatePath> sorted_candidates(const Topology& topo,
                                                    const CostMatrix& m,
                                                    const std::vector<int>& sources,
                                                    const std::vector<int>& dests, int k) {
  std::vector<CandidatePath> out;
  for (int src : sources)
    for (int dst : dests) {
      if (src == dst) continue;
      for (auto& p : k_shortest_paths(topo, m, src, dst, k)) out.push_back(p);
    }
  std::stable_sort(out.begin(), out.end(), [](const CandidatePath& a, const CandidatePath& b) {
    if (a.src != b.src) return a.src < b.src;
    return a.distance < b.distance;
  });
  return out;
}

/// Four nodes in a cycle: 0 and 1 form the upper tier, 2 and 3 are sources
/// with two disjoint routes each to distinct destinations.
struct SquareFixture {
  Topology topo = Topology::from_links(
      4, {{0, 2, 10}, {1, 2, 12}, {1, 3, 14}, {0, 3, 16}}, "square");
  PlannerConfig cfg;
  OpticalParameters params;
  LinkQoTProfile prof;
  QotEvaluator qot;
  std::vector<CandidatePath> cand_standalone;
  std::vector<CandidatePath> cand_colocated;
  std::vector<LandPair> pairs;
  std::vector<std::vector<double>> demand;

  SquareFixture(int years, double node_demand) {
    cfg = toy_config(years);
    prof = uniform_profile(4, 8, 25.0);
    qot = make_evaluator(topo, prof, params);
    CostMatrix m = full_cost_matrix(topo);
    cand_standalone = sorted_candidates(topo, m, {2, 3}, {0, 1}, 4);
    pairs = land_pairs({2, 3}, cand_standalone, 4);
    cand_colocated = sorted_candidates(topo, m, {0, 1}, {0, 1}, 4);
    std::vector<double> base(4, node_demand);
    demand = simulate_traffic_growth(base, cfg.cagr, years);
  }

  LevelPlanInputs inputs() const {
    LevelPlanInputs in;
    in.topology = &topo;
    in.level = 4;
    in.minimum_level = 4;
    in.pairs = &pairs;
    in.candidates_standalone = &cand_standalone;
    in.candidates_colocated = &cand_colocated;
    in.qot = &qot;
    in.cfg = &cfg;
    in.standalone_nodes = {2, 3};
    in.colocated_nodes = {0, 1};
    in.added_demand = &demand;
    in.subnet_links = {0, 1, 2, 3};
    in.record_source_demand = true;
    return in;
  }
};

}  // namespace fixtures

#endif  // METROPLAN_TESTS_FIXTURES_HPP
