// Brute-force reference implementations used to cross-check the library.
// Everything here enumerates exhaustively and stays independent of the
// algorithms under test.
#ifndef METROPLAN_TESTS_ORACLES_HPP
#define METROPLAN_TESTS_ORACLES_HPP

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "metroplan/topology.hpp"

namespace oracles {

struct SimplePath {
  std::vector<int> nodes;
  double distance = 0;
};

inline void enumerate_simple_paths_rec(const metroplan::CostMatrix& m, int node, int dst,
                                       std::vector<int>& stack, std::vector<char>& on_stack,
                                       double dist, std::vector<SimplePath>& out) {
  if (node == dst) {
    out.push_back({stack, dist});
    return;
  }
  for (int v = 0; v < m.n; ++v) {
    const double w = m.at(node, v);
    if (metroplan::is_absent(w) || on_stack[v]) continue;
    stack.push_back(v);
    on_stack[v] = 1;
    enumerate_simple_paths_rec(m, v, dst, stack, on_stack, dist + w, out);
    on_stack[v] = 0;
    stack.pop_back();
  }
}

/// Every simple path src->dst, sorted by (distance, hops, node sequence).
inline std::vector<SimplePath> all_simple_paths(const metroplan::CostMatrix& m, int src,
                                                int dst) {
  std::vector<SimplePath> out;
  std::vector<int> stack{src};
  std::vector<char> on_stack(m.n, 0);
  on_stack[src] = 1;
  enumerate_simple_paths_rec(m, src, dst, stack, on_stack, 0.0, out);
  std::sort(out.begin(), out.end(), [](const SimplePath& a, const SimplePath& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return out;
}

/// Random connected graph with n nodes and integer weights in [1, 9]. Edges
/// beyond a random spanning tree appear with probability edge_p.
inline metroplan::Topology random_connected_graph(std::mt19937_64& rng, int n,
                                                  double edge_p = 0.45) {
  std::vector<metroplan::Link> links;
  std::set<std::pair<int, int>> present;
  auto weight = [&] { return 1.0 + static_cast<double>(rng() % 9); };
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng() % v);
    links.push_back({u, v, weight()});
    present.insert({u, v});
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (present.count({u, v})) continue;
      if (metroplan::uniform01(rng) < edge_p) {
        links.push_back({u, v, weight()});
        present.insert({u, v});
      }
    }
  return metroplan::Topology::from_links(n, std::move(links), "rand");
}

/// LAND predicate re-check, written directly from the pair definition.
inline bool land_valid(const metroplan::CandidatePath& p, const metroplan::CandidatePath& s) {
  if (p.src != s.src) return false;
  if (p.dest == s.dest) return false;
  for (int np : p.nodes)
    for (int ns : s.nodes)
      if (np == ns && np != p.src) return false;
  for (int lp : p.link_indices)
    for (int ls : s.link_indices)
      if (lp == ls) return false;
  return true;
}

/// Brute-force LAND pairs: filter every ordered candidate pair per source in
/// table order, truncating to num_pairs.
inline std::vector<metroplan::LandPair> land_pairs_brute(
    const std::vector<int>& src_list, const std::vector<metroplan::CandidatePath>& cand,
    int num_pairs) {
  std::vector<metroplan::LandPair> out;
  for (int src : src_list) {
    std::vector<int> idxs;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (cand[i].src == src) idxs.push_back(static_cast<int>(i));
    int found = 0;
    for (int pi : idxs) {
      if (found >= num_pairs) break;
      for (int si : idxs) {
        if (found >= num_pairs) break;
        if (pi == si) continue;
        if (!land_valid(cand[pi], cand[si])) continue;
        out.push_back({pi, si, src, cand[si].distance, cand[si].num_hops});
        ++found;
      }
    }
  }
  return out;
}

}  // namespace oracles

#endif  // METROPLAN_TESTS_ORACLES_HPP
