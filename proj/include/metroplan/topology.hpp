#ifndef METROPLAN_TOPOLOGY_HPP
#define METROPLAN_TOPOLOGY_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <tuple>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "metroplan/common.hpp"

namespace metroplan {

struct Link {
  int a = 0;      // smaller endpoint
  int b = 0;      // larger endpoint
  double km = 0;  // positive length
};

/// Undirected weighted optical graph. Immutable after construction; the link
/// list order (ascending by (a, b)) defines the stable link indexing used by
/// spectrum occupancy and all result archives.
class Topology {
 public:
  Topology() = default;

  /// Build from an explicit link list. Throws ValidationError on self loops,
  /// duplicate links, non-positive lengths or (when required) a disconnected
  /// graph.
  static Topology from_links(int num_nodes, std::vector<Link> links,
                             std::string name, bool require_connected = true) {
    if (num_nodes <= 0) throw ValidationError("topology has no nodes");
    Topology t;
    t.name_ = std::move(name);
    t.num_nodes_ = num_nodes;
    for (auto& l : links) {
      if (l.a > l.b) std::swap(l.a, l.b);
      if (l.a == l.b) throw ValidationError("self loop on node " + std::to_string(l.a));
      if (l.a < 0 || l.b >= num_nodes)
        throw ValidationError("link endpoint out of range: " + std::to_string(l.b));
      if (!(l.km > 0))
        throw ValidationError("non-positive link length on (" + std::to_string(l.a) +
                              "," + std::to_string(l.b) + ")");
    }
    std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
      return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (std::size_t i = 1; i < links.size(); ++i)
      if (links[i].a == links[i - 1].a && links[i].b == links[i - 1].b)
        throw ValidationError("duplicate link (" + std::to_string(links[i].a) + "," +
                              std::to_string(links[i].b) + ")");
    t.links_ = std::move(links);
    t.adjacency_.assign(static_cast<std::size_t>(num_nodes) * num_nodes, kAbsent);
    for (std::size_t i = 0; i < t.links_.size(); ++i) {
      const Link& l = t.links_[i];
      t.adjacency_[static_cast<std::size_t>(l.a) * num_nodes + l.b] = l.km;
      t.adjacency_[static_cast<std::size_t>(l.b) * num_nodes + l.a] = l.km;
      t.link_index_[key(l.a, l.b)] = static_cast<int>(i);
    }
    if (require_connected && !t.connected())
      throw ValidationError("topology '" + t.name_ + "' is disconnected");
    return t;
  }

  int num_nodes() const { return num_nodes_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const std::string& name() const { return name_; }

  double adjacency(int u, int v) const {
    return adjacency_[static_cast<std::size_t>(u) * num_nodes_ + v];
  }

  bool has_node(int n) const { return n >= 0 && n < num_nodes_; }

  /// Index into links() for the undirected pair (u, v); both orientations
  /// resolve to the same index. Returns -1 when no such link exists.
  int link_index(int u, int v) const {
    auto it = link_index_.find(key(std::min(u, v), std::max(u, v)));
    return it == link_index_.end() ? -1 : it->second;
  }

  std::vector<int> neighbors(int u) const {
    std::vector<int> out;
    for (int v = 0; v < num_nodes_; ++v)
      if (!is_absent(adjacency(u, v))) out.push_back(v);
    return out;
  }

  int degree(int u) const {
    int d = 0;
    for (int v = 0; v < num_nodes_; ++v)
      if (!is_absent(adjacency(u, v))) ++d;
    return d;
  }

  bool connected() const {
    if (num_nodes_ == 0) return false;
    std::vector<char> seen(num_nodes_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : neighbors(u))
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push(v);
        }
    }
    return count == num_nodes_;
  }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  std::string name_;
  int num_nodes_ = 0;
  std::vector<Link> links_;
  std::vector<double> adjacency_;  // row-major, kAbsent marks no edge
  std::unordered_map<std::uint64_t, int> link_index_;
};

enum class TopologyFormat { CsvMatrix, Json };

namespace detail {

inline bool parse_absent_token(std::string tok) {
  tok.erase(std::remove_if(tok.begin(), tok.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            tok.end());
  if (tok.empty()) return true;
  std::string low;
  for (char c : tok) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "inf" || low == "+inf" || low == "infinity";
}

inline std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n,") == std::string::npos && rows.empty()) continue;
    if (line.empty() && in.eof()) break;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (parse_absent_token(cell)) {
        row.push_back(kAbsent);
      } else {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw ValidationError("unparsable matrix cell '" + cell + "' in " + path);
        }
      }
    }
    // a trailing comma means a final empty (absent) cell
    if (!line.empty() && line.back() == ',') row.push_back(kAbsent);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline Topology load_topology_from_matrix(const std::vector<std::vector<double>>& m,
                                          const std::string& name) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw ValidationError("empty topology matrix");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("topology matrix is not square");
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double up = m[i][j];
      const double lo = m[j][i];
      if (i == j) {
        if (!is_absent(up) && up != 0.0)
          throw ValidationError("self loop on node " + std::to_string(i));
        continue;
      }
      if (is_absent(up) != is_absent(lo))
        throw ValidationError("asymmetric adjacency at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      if (is_absent(up)) continue;
      const double scale = std::max({std::abs(up), std::abs(lo), 1.0});
      if (std::abs(up - lo) > 1e-9 * scale)
        throw ValidationError("asymmetric adjacency at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      const double km = 0.5 * (up + lo);
      if (!(km > 0))
        throw ValidationError("non-positive link length at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      links.push_back({i, j, km});
    }
  }
  return Topology::from_links(n, std::move(links), name);
}

inline Topology load_topology_from_json_text(const std::string& text,
                                             const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("topology JSON parse failure: ") + e.what());
  }
  if (!j.contains("nodes") || !j.contains("links"))
    throw ValidationError("topology JSON needs 'nodes' and 'links'");
  std::vector<int> nodes = j.at("nodes").get<std::vector<int>>();
  const int n = static_cast<int>(nodes.size());
  std::set<int> ids(nodes.begin(), nodes.end());
  if (static_cast<int>(ids.size()) != n || (n > 0 && (*ids.begin() != 0 || *ids.rbegin() != n - 1)))
    throw ValidationError("topology JSON nodes must be the contiguous ids 0..N-1");
  std::vector<Link> links;
  for (const auto& e : j.at("links")) {
    links.push_back({e.at("a").get<int>(), e.at("b").get<int>(), e.at("km").get<double>()});
  }
  return Topology::from_links(n, std::move(links), name);
}

/// Loads a topology from a square CSV length matrix (blank or `inf` cells mark
/// missing links, units km) or a JSON node/link list
/// {"nodes":[ids],"links":[{"a":i,"b":j,"km":x}]}. Matrix entries asymmetric
/// beyond 1e-9 relative are an error; smaller asymmetry is averaged away.
inline Topology load_topology(const std::string& path, TopologyFormat format,
                              const std::string& name = "") {
  std::string label = name;
  if (label.empty()) {
    label = path;
    const auto slash = label.find_last_of("/\\");
    if (slash != std::string::npos) label = label.substr(slash + 1);
    const auto dot = label.find_last_of('.');
    if (dot != std::string::npos) label = label.substr(0, dot);
  }
  if (format == TopologyFormat::CsvMatrix)
    return load_topology_from_matrix(detail::read_csv_matrix(path), label);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_topology_from_json_text(buf.str(), label);
}

/// Per-level node assignment used to build a HierarchyMap. A level's
/// colocated set may be omitted, in which case it accumulates the standalone
/// sets of every numerically smaller level.
struct LevelSpec {
  std::vector<int> standalone;
  std::optional<std::vector<int>> colocated;
};

class HierarchyMap {
 public:
  struct LevelSets {
    std::set<int> standalone;
    std::set<int> colocated;
  };

  const std::map<int, LevelSets>& levels() const { return levels_; }

  bool has_level(int level) const { return levels_.count(level) != 0; }

  const std::set<int>& standalone(int level) const { return at(level).standalone; }
  const std::set<int>& colocated(int level) const { return at(level).colocated; }

  /// standalone ∪ colocated for a level.
  std::set<int> members(int level) const {
    std::set<int> out = at(level).standalone;
    const auto& co = at(level).colocated;
    out.insert(co.begin(), co.end());
    return out;
  }

  std::vector<int> level_list() const {
    std::vector<int> out;
    for (const auto& [lvl, _] : levels_) out.push_back(lvl);
    return out;
  }

  friend HierarchyMap define_hierarchy(const Topology&, const std::map<int, LevelSpec>&);

 private:
  const LevelSets& at(int level) const {
    auto it = levels_.find(level);
    if (it == levels_.end())
      throw ValidationError("no hierarchy level " + std::to_string(level));
    return it->second;
  }

  std::map<int, LevelSets> levels_;
};

inline HierarchyMap define_hierarchy(const Topology& t,
                                     const std::map<int, LevelSpec>& assignments) {
  HierarchyMap h;
  std::set<int> seen_standalone;
  for (const auto& [level, spec] : assignments) {
    if (level < 1 || level > 4)
      throw ValidationError("hierarchy level out of range: " + std::to_string(level));
    HierarchyMap::LevelSets sets;
    for (int n : spec.standalone) {
      if (!t.has_node(n))
        throw ValidationError("unknown node in hierarchy: " + std::to_string(n));
      if (!seen_standalone.insert(n).second)
        throw ValidationError("node " + std::to_string(n) +
                              " appears in more than one standalone set");
      sets.standalone.insert(n);
    }
    if (spec.colocated) {
      for (int n : *spec.colocated) {
        if (!t.has_node(n))
          throw ValidationError("unknown node in hierarchy: " + std::to_string(n));
        sets.colocated.insert(n);
      }
    } else {
      // accumulation rule: all standalone nodes of numerically smaller levels
      for (const auto& [prev_level, prev_spec] : assignments) {
        if (prev_level >= level) break;
        sets.colocated.insert(prev_spec.standalone.begin(), prev_spec.standalone.end());
      }
    }
    h.levels_[level] = std::move(sets);
  }
  return h;
}

/// Standalone level containing the node, or nullopt when the node is not in
/// any standalone set (colocated membership does not count).
inline std::optional<int> standalone_level_of(const HierarchyMap& h, int node) {
  for (const auto& [level, sets] : h.levels())
    if (sets.standalone.count(node)) return level;
  return std::nullopt;
}

/// Dense cost matrix fed to the path search; kAbsent marks an unusable edge.
struct CostMatrix {
  int n = 0;
  std::vector<double> w;

  static CostMatrix filled(int n, double v) {
    CostMatrix m;
    m.n = n;
    m.w.assign(static_cast<std::size_t>(n) * n, v);
    return m;
  }

  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
};

struct HierarchySubgraph {
  Topology graph;                 // kept links only; may be disconnected
  CostMatrix cost;                // full node set; kAbsent on excluded edges
  std::vector<int> link_indices;  // global link indices of the kept links
};

/// Extracts the planning subnet for one hierarchy level. An edge is kept iff
/// one endpoint is standalone at `level` and the other endpoint is not
/// standalone at any level in [level+1, minimum_level]. Standalone membership
/// is used on both sides: a node colocated with a lower-level function still
/// belongs to its own standalone tier, so the per-level subnets partition the
/// link set.
inline HierarchySubgraph hierarchy_subgraph(const Topology& t, const HierarchyMap& h,
                                            int level, int minimum_level) {
  if (level < 1 || level > minimum_level)
    throw ValidationError("invalid hierarchy level range: level=" + std::to_string(level) +
                          " minimum=" + std::to_string(minimum_level));
  std::set<int> include;
  if (h.has_level(level)) include = h.standalone(level);
  std::set<int> exclude;
  for (int j = level + 1; j <= minimum_level; ++j)
    if (h.has_level(j)) {
      const auto& s = h.standalone(j);
      exclude.insert(s.begin(), s.end());
    }

  HierarchySubgraph out;
  out.cost = CostMatrix::filled(t.num_nodes(), kAbsent);
  std::vector<Link> kept;
  for (int i = 0; i < t.num_links(); ++i) {
    const Link& l = t.links()[i];
    const bool a_in = include.count(l.a) != 0;
    const bool b_in = include.count(l.b) != 0;
    const bool keep = (a_in && !exclude.count(l.b)) || (b_in && !exclude.count(l.a));
    if (!keep) continue;
    kept.push_back(l);
    out.link_indices.push_back(i);
    out.cost.at(l.a, l.b) = l.km;
    out.cost.at(l.b, l.a) = l.km;
  }
  out.graph = Topology::from_links(t.num_nodes(), std::move(kept), t.name() + "_HL" +
                                   std::to_string(level), /*require_connected=*/false);
  return out;
}

inline CostMatrix full_cost_matrix(const Topology& t) {
  CostMatrix m = CostMatrix::filled(t.num_nodes(), kAbsent);
  for (const Link& l : t.links()) {
    m.at(l.a, l.b) = l.km;
    m.at(l.b, l.a) = l.km;
  }
  return m;
}

/// Unique neighbors of a node set, input nodes excluded, sorted ascending.
inline std::vector<int> neighbor_nodes(const Topology& t, const std::vector<int>& nodes) {
  std::set<int> in(nodes.begin(), nodes.end());
  for (int n : nodes)
    if (!t.has_node(n)) throw ValidationError("unknown node: " + std::to_string(n));
  std::set<int> out;
  for (int n : nodes)
    for (int v : t.neighbors(n))
      if (!in.count(v)) out.insert(v);
  return {out.begin(), out.end()};
}

inline std::vector<std::pair<int, int>> node_degrees(const Topology& t,
                                                     const std::vector<int>& nodes) {
  std::vector<std::pair<int, int>> out;
  for (int n : nodes) {
    if (!t.has_node(n)) throw ValidationError("unknown node: " + std::to_string(n));
    out.emplace_back(n, t.degree(n));
  }
  return out;
}

struct CandidatePath {
  int src = -1;
  int dest = -1;
  std::vector<int> nodes;         // src first, dest last, simple
  std::vector<int> link_indices;  // global link indices, one per hop
  double distance = 0;
  int num_hops = 0;
};

namespace detail {

struct DijkstraResult {
  std::vector<int> nodes;
  double distance = 0;
};

/// Deterministic Dijkstra on a cost matrix with node/edge bans. Ties prefer
/// fewer hops, then the smaller node id at each settle, so identical inputs
/// reconstruct identical paths on every platform.
inline std::optional<DijkstraResult> dijkstra(const CostMatrix& m, int src, int dst,
                                              const std::vector<char>& banned_node,
                                              const std::set<std::pair<int, int>>& banned_edge) {
  const int n = m.n;
  std::vector<double> dist(n, kAbsent);
  std::vector<int> hops(n, std::numeric_limits<int>::max());
  std::vector<int> pred(n, -1);
  using Entry = std::tuple<double, int, int>;  // dist, hops, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[src] = 0;
  hops[src] = 0;
  pq.emplace(0.0, 0, src);
  while (!pq.empty()) {
    auto [d, hp, u] = pq.top();
    pq.pop();
    if (d != dist[u] || hp != hops[u]) continue;
    if (u == dst) break;
    for (int v = 0; v < n; ++v) {
      const double w = m.at(u, v);
      if (is_absent(w) || banned_node[v]) continue;
      if (banned_edge.count({std::min(u, v), std::max(u, v)})) continue;
      const double nd = d + w;
      const int nh = hp + 1;
      if (nd < dist[v] || (nd == dist[v] && nh < hops[v])) {
        dist[v] = nd;
        hops[v] = nh;
        pred[v] = u;
        pq.emplace(nd, nh, v);
      }
    }
  }
  if (is_absent(dist[dst])) return std::nullopt;
  DijkstraResult r;
  r.distance = dist[dst];
  for (int v = dst; v != -1; v = pred[v]) r.nodes.push_back(v);
  std::reverse(r.nodes.begin(), r.nodes.end());
  return r;
}

inline bool path_order(const std::pair<double, std::vector<int>>& a,
                       const std::pair<double, std::vector<int>>& b) {
  if (a.first != b.first) return a.first < b.first;
  if (a.second.size() != b.second.size()) return a.second.size() < b.second.size();
  return a.second < b.second;
}

}  // namespace detail

/// Yen's k-shortest loopless paths over a cost matrix. Results are sorted by
/// (distance, hops, lexicographic node sequence); link indices come from the
/// reference topology's undirected link list. An unreachable target yields an
/// empty list; src == dst is rejected.
inline std::vector<CandidatePath> k_shortest_paths(const Topology& ref, const CostMatrix& cost,
                                                   int src, int dst, int k) {
  if (src == dst) throw ValidationError("path source equals destination");
  if (k < 1) throw ValidationError("k must be at least 1");
  if (src < 0 || src >= cost.n || dst < 0 || dst >= cost.n)
    throw ValidationError("path endpoint out of range");

  using Entry = std::pair<double, std::vector<int>>;  // distance, node sequence
  std::vector<Entry> accepted;
  std::vector<char> no_ban(cost.n, 0);
  auto first = detail::dijkstra(cost, src, dst, no_ban, {});
  if (!first) return {};
  accepted.push_back({first->distance, first->nodes});

  auto cmp = [](const Entry& a, const Entry& b) { return detail::path_order(a, b); };
  std::set<Entry, decltype(cmp)> candidates(cmp);
  std::set<std::vector<int>> known{first->nodes};

  while (static_cast<int>(accepted.size()) < k) {
    const auto& prev = accepted.back().second;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const int spur = prev[i];
      std::vector<int> root(prev.begin(), prev.begin() + i + 1);
      std::set<std::pair<int, int>> banned_edge;
      for (const auto& [d, nodes] : accepted) {
        if (nodes.size() > i + 1 &&
            std::equal(root.begin(), root.end(), nodes.begin()))
          banned_edge.insert({std::min(nodes[i], nodes[i + 1]),
                              std::max(nodes[i], nodes[i + 1])});
      }
      std::vector<char> banned_node(cost.n, 0);
      for (std::size_t j = 0; j < i; ++j) banned_node[root[j]] = 1;
      auto spur_path = detail::dijkstra(cost, spur, dst, banned_node, banned_edge);
      if (!spur_path) continue;
      std::vector<int> total(root.begin(), root.end() - 1);
      total.insert(total.end(), spur_path->nodes.begin(), spur_path->nodes.end());
      if (known.count(total)) continue;
      double total_dist = 0;
      for (std::size_t j = 0; j + 1 < total.size(); ++j)
        total_dist += cost.at(total[j], total[j + 1]);
      candidates.insert({total_dist, total});
      known.insert(total);
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }

  std::sort(accepted.begin(), accepted.end(), detail::path_order);
  std::vector<CandidatePath> out;
  for (const auto& [d, nodes] : accepted) {
    CandidatePath p;
    p.src = src;
    p.dest = dst;
    p.nodes = nodes;
    p.distance = d;
    p.num_hops = static_cast<int>(nodes.size()) - 1;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      const int li = ref.link_index(nodes[j], nodes[j + 1]);
      if (li < 0)
        throw ValidationError("path hop has no link in the reference topology");
      p.link_indices.push_back(li);
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct LandPair {
  int primary_path = -1;    // index into the candidate table
  int secondary_path = -1;  // index into the candidate table
  int src = -1;
  double secondary_distance = 0;
  int secondary_hops = 0;
};

namespace detail {

inline bool land_disjoint(const CandidatePath& p, const CandidatePath& s) {
  if (p.dest == s.dest) return false;
  std::set<int> p_nodes(p.nodes.begin(), p.nodes.end());
  for (int n : s.nodes)
    if (n != s.src && p_nodes.count(n)) return false;
  std::set<int> p_links(p.link_indices.begin(), p.link_indices.end());
  for (int l : s.link_indices)
    if (p_links.count(l)) return false;
  return true;
}

}  // namespace detail

/// Link- and node-disjoint dual-homing pairs. Per source, ordered candidate
/// pairs (primary, secondary) are enumerated in ascending (primary distance,
/// secondary distance) order — i.e. candidate-table order on both slots — and
/// kept when the two paths have different destinations, share no node except
/// the source and share no link. At most num_pairs pairs per source.
inline std::vector<LandPair> land_pairs(const std::vector<int>& src_list,
                                        const std::vector<CandidatePath>& candidates,
                                        int num_pairs) {
  if (num_pairs < 1) throw ValidationError("num_pairs must be at least 1");
  // group candidate indices by source, preserving table order
  std::map<int, std::vector<int>> by_src;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    by_src[candidates[i].src].push_back(static_cast<int>(i));
  for (const auto& [src, idxs] : by_src)
    for (std::size_t i = 1; i < idxs.size(); ++i)
      if (candidates[idxs[i]].distance < candidates[idxs[i - 1]].distance)
        throw ValidationError("candidate table not sorted by distance for source " +
                              std::to_string(src));

  std::vector<LandPair> out;
  for (int src : src_list) {
    auto it = by_src.find(src);
    if (it == by_src.end()) continue;
    const auto& idxs = it->second;
    int found = 0;
    for (int pi : idxs) {
      if (found >= num_pairs) break;
      for (int si : idxs) {
        if (found >= num_pairs) break;
        if (si == pi) continue;
        const CandidatePath& p = candidates[pi];
        const CandidatePath& s = candidates[si];
        if (!detail::land_disjoint(p, s)) continue;
        out.push_back({pi, si, src, s.distance, s.num_hops});
        ++found;
      }
    }
  }
  return out;
}

/// Number of LAND pairs found per source (sources with zero pairs included).
inline std::vector<std::pair<int, int>> land_pair_counts(const std::vector<int>& src_list,
                                                         const std::vector<LandPair>& pairs) {
  std::vector<std::pair<int, int>> out;
  for (int src : src_list) {
    int c = 0;
    for (const auto& p : pairs)
      if (p.src == src) ++c;
    out.emplace_back(src, c);
  }
  return out;
}

}  // namespace metroplan

#endif  // METROPLAN_TOPOLOGY_HPP
