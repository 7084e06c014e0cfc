#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "metroplan/topology.hpp"
#include "oracles.hpp"

using namespace metroplan;

namespace {

Topology triangle(double km = 10) {
  return Topology::from_links(3, {{0, 1, km}, {0, 2, km}, {1, 2, km}}, "tri");
}

std::vector<std::vector<double>> triangle_matrix(double km = 10) {
  const double x = kAbsent;
  return {{x, km, km}, {km, x, km}, {km, km, x}};
}

}  // namespace

TEST_CASE("matrix load builds the triangle") {
  Topology t = load_topology_from_matrix(triangle_matrix(), "tri");
  REQUIRE(t.num_nodes() == 3);
  REQUIRE(t.num_links() == 3);
  for (const Link& l : t.links()) REQUIRE(l.km == 10.0);
  REQUIRE(t.link_index(1, 0) == 0);
  REQUIRE(t.link_index(2, 1) == 2);
}

TEST_CASE("matrix load rejects bad inputs") {
  SECTION("disconnected") {
    std::vector<std::vector<double>> m{{kAbsent, kAbsent}, {kAbsent, kAbsent}};
    REQUIRE_THROWS_AS(load_topology_from_matrix(m, "x"), ValidationError);
  }
  SECTION("non-square") {
    std::vector<std::vector<double>> m{{kAbsent, 1.0}};
    REQUIRE_THROWS_AS(load_topology_from_matrix(m, "x"), ValidationError);
  }
  SECTION("asymmetric beyond tolerance") {
    auto m = triangle_matrix();
    m[0][1] = 10.1;
    REQUIRE_THROWS_AS(load_topology_from_matrix(m, "x"), ValidationError);
  }
  SECTION("asymmetry within 1e-9 averages") {
    auto m = triangle_matrix();
    m[0][1] = 10.0 + 4e-9;
    Topology t = load_topology_from_matrix(m, "x");
    REQUIRE_THAT(t.links()[0].km, Catch::Matchers::WithinAbs(10.0 + 2e-9, 1e-12));
  }
  SECTION("non-positive length") {
    auto m = triangle_matrix();
    m[0][1] = m[1][0] = -3;
    REQUIRE_THROWS_AS(load_topology_from_matrix(m, "x"), ValidationError);
  }
}

TEST_CASE("csv and json files round through the loaders") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "metroplan_topo_test";
  fs::create_directories(dir);

  const fs::path csv = dir / "tri.csv";
  {
    std::ofstream out(csv);
    out << ",10,10\n10,,10\n10,10,\n";
  }
  Topology tc = load_topology(csv.string(), TopologyFormat::CsvMatrix);
  REQUIRE(tc.num_links() == 3);
  REQUIRE(tc.name() == "tri");

  const fs::path json = dir / "tri.json";
  {
    std::ofstream out(json);
    out << R"({"nodes":[0,1,2],"links":[{"a":0,"b":1,"km":10},{"a":0,"b":2,"km":10},{"a":1,"b":2,"km":10}]})";
  }
  Topology tj = load_topology(json.string(), TopologyFormat::Json);
  REQUIRE(tj.num_links() == 3);
  REQUIRE(tj.adjacency(2, 1) == 10.0);

  REQUIRE_THROWS_AS(load_topology((dir / "missing.csv").string(), TopologyFormat::CsvMatrix),
                    IoError);
}

TEST_CASE("hierarchy accumulation and overrides") {
  Topology t = triangle();
  SECTION("omitted colocated accumulates prior standalone sets") {
    auto h = define_hierarchy(t, {{4, {{0, 1}, std::nullopt}}, {3, {{2}, std::nullopt}}});
    REQUIRE(h.colocated(3).empty());           // no smaller level
    REQUIRE(h.colocated(4) == std::set<int>{2});
  }
  SECTION("explicit empty colocated stays empty") {
    auto h = define_hierarchy(t, {{3, {{2}, std::nullopt}},
                                  {4, {{0, 1}, std::vector<int>{}}}});
    REQUIRE(h.colocated(4).empty());
  }
  SECTION("unknown node") {
    REQUIRE_THROWS_AS(define_hierarchy(t, {{4, {{7}, std::nullopt}}}), ValidationError);
  }
  SECTION("overlapping standalone sets") {
    REQUIRE_THROWS_AS(define_hierarchy(t, {{3, {{0}, std::nullopt}},
                                           {4, {{0, 1}, std::nullopt}}}),
                      ValidationError);
  }
}

TEST_CASE("standalone level lookup") {
  Topology t = Topology::from_links(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, "chain");
  auto h = define_hierarchy(t, {{2, {{0}, std::nullopt}},
                                {3, {{1}, std::nullopt}},
                                {4, {{2, 3}, std::nullopt}}});
  REQUIRE(standalone_level_of(h, 1) == 3);
  REQUIRE(standalone_level_of(h, 0) == 2);  // also HL3/HL4 colocated; standalone wins
  REQUIRE_FALSE(standalone_level_of(h, 99).has_value());
}

TEST_CASE("hierarchy subgraph follows the membership rule") {
  // 5-node chain HL4-HL4-HL3-HL2-HL1
  Topology t = Topology::from_links(
      5, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 4, 4}}, "chain");
  auto h = define_hierarchy(t, {{1, {{4}, std::nullopt}},
                                {2, {{3}, std::nullopt}},
                                {3, {{2}, std::nullopt}},
                                {4, {{0, 1}, std::nullopt}}});

  SECTION("level 3 excludes edges dipping into HL4") {
    auto sub = hierarchy_subgraph(t, h, 3, 4);
    REQUIRE(sub.link_indices == std::vector<int>{2});  // only 2-3
    REQUIRE(sub.cost.at(2, 3) == 3.0);
    REQUIRE(is_absent(sub.cost.at(1, 2)));
  }
  SECTION("level == minimum keeps every edge touching the level") {
    auto sub = hierarchy_subgraph(t, h, 4, 4);
    REQUIRE(sub.link_indices == std::vector<int>{0, 1});
  }
  SECTION("invalid range") {
    REQUIRE_THROWS_AS(hierarchy_subgraph(t, h, 5, 4), ValidationError);
    REQUIRE_THROWS_AS(hierarchy_subgraph(t, h, 0, 4), ValidationError);
  }
  SECTION("edge set equals direct rule evaluation") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 30; ++it) {
      Topology g = oracles::random_connected_graph(rng, 2 + static_cast<int>(rng() % 7));
      const int n = g.num_nodes();
      std::map<int, LevelSpec> spec;
      std::vector<std::vector<int>> buckets(5);
      for (int v = 0; v < n; ++v) buckets[1 + rng() % 4].push_back(v);
      for (int lvl = 1; lvl <= 4; ++lvl)
        if (!buckets[lvl].empty()) spec[lvl] = {buckets[lvl], std::nullopt};
      if (spec.empty()) continue;
      auto hh = define_hierarchy(g, spec);
      const int min_level = spec.rbegin()->first;
      for (int lvl = 1; lvl <= min_level; ++lvl) {
        auto sub = hierarchy_subgraph(g, hh, lvl, min_level);
        std::set<int> got(sub.link_indices.begin(), sub.link_indices.end());
        std::set<int> want;
        for (int i = 0; i < g.num_links(); ++i) {
          const Link& l = g.links()[i];
          auto std_at = [&](int node, int at) {
            auto s = standalone_level_of(hh, node);
            return s && *s == at;
          };
          auto excluded = [&](int node) {
            auto s = standalone_level_of(hh, node);
            return s && *s >= lvl + 1 && *s <= min_level;
          };
          if ((std_at(l.a, lvl) && !excluded(l.b)) || (std_at(l.b, lvl) && !excluded(l.a)))
            want.insert(i);
        }
        REQUIRE(got == want);
      }
    }
  }
}

TEST_CASE("neighbors and degrees") {
  Topology t = triangle();
  REQUIRE(neighbor_nodes(t, {0}) == std::vector<int>{1, 2});
  REQUIRE(neighbor_nodes(t, {0, 1}) == std::vector<int>{2});
  Topology path = Topology::from_links(3, {{0, 1, 1}, {1, 2, 1}}, "p");
  REQUIRE(neighbor_nodes(path, {1}) == std::vector<int>{0, 2});
  REQUIRE_THROWS_AS(neighbor_nodes(t, {9}), ValidationError);

  auto deg = node_degrees(t, {0, 1, 2});
  for (auto [n, d] : deg) REQUIRE(d == 2);
  Topology star = Topology::from_links(
      5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}, "star");
  REQUIRE(node_degrees(star, {0})[0].second == 4);
}

TEST_CASE("degree sums satisfy the handshake lemma") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 15; ++it) {
    const int n = 3 + static_cast<int>(rng() % 8);
    Topology g = oracles::random_connected_graph(rng, n);
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    int sum = 0;
    for (auto [node, deg] : node_degrees(g, all)) sum += deg;
    REQUIRE(sum == 2 * g.num_links());
  }
}

TEST_CASE("k shortest paths on small graphs") {
  Topology t = triangle();
  CostMatrix m = full_cost_matrix(t);

  SECTION("triangle yields both simple paths") {
    auto ps = k_shortest_paths(t, m, 0, 1, 3);
    REQUIRE(ps.size() == 2);
    REQUIRE(ps[0].nodes == std::vector<int>{0, 1});
    REQUIRE(ps[0].distance == 10.0);
    REQUIRE(ps[0].link_indices == std::vector<int>{0});
    REQUIRE(ps[1].nodes == std::vector<int>{0, 2, 1});
    REQUIRE(ps[1].distance == 20.0);
    REQUIRE(ps[1].num_hops == 2);
  }
  SECTION("4-cycle opposite corners") {
    Topology c = Topology::from_links(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}}, "c4");
    auto ps = k_shortest_paths(c, full_cost_matrix(c), 0, 2, 2);
    REQUIRE(ps.size() == 2);
    REQUIRE(ps[0].distance == 2.0);
    REQUIRE(ps[1].distance == 2.0);
    REQUIRE(ps[0].nodes == std::vector<int>{0, 1, 2});  // lexicographic tie order
    REQUIRE(ps[1].nodes == std::vector<int>{0, 3, 2});
  }
  SECTION("unreachable target yields empty list") {
    Topology two = Topology::from_links(3, {{0, 1, 1}, {1, 2, 1}}, "p", false);
    CostMatrix cm = full_cost_matrix(two);
    cm.at(1, 2) = kAbsent;
    cm.at(2, 1) = kAbsent;
    REQUIRE(k_shortest_paths(two, cm, 0, 2, 4).empty());
  }
  SECTION("rejects src == dst") {
    REQUIRE_THROWS_AS(k_shortest_paths(t, m, 1, 1, 2), ValidationError);
  }
}

TEST_CASE("yen equals brute force on random graphs") {
  std::mt19937_64 rng(12345);
  for (int it = 0; it < 40; ++it) {
    const int n = 3 + static_cast<int>(rng() % 6);
    Topology g = oracles::random_connected_graph(rng, n);
    CostMatrix m = full_cost_matrix(g);
    const int src = static_cast<int>(rng() % n);
    int dst = static_cast<int>(rng() % n);
    if (dst == src) dst = (dst + 1) % n;
    const int k = 1 + static_cast<int>(rng() % 10);

    auto got = k_shortest_paths(g, m, src, dst, k);
    auto want = oracles::all_simple_paths(m, src, dst);
    const std::size_t expect = std::min<std::size_t>(want.size(), k);
    REQUIRE(got.size() == expect);
    std::multiset<double> got_d, want_d;
    for (const auto& p : got) got_d.insert(p.distance);
    for (std::size_t i = 0; i < expect; ++i) want_d.insert(want[i].distance);
    REQUIRE(got_d == want_d);

    // every returned path honors the type invariants
    for (const auto& p : got) {
      std::set<int> uniq(p.nodes.begin(), p.nodes.end());
      REQUIRE(uniq.size() == p.nodes.size());
      REQUIRE(p.num_hops == static_cast<int>(p.nodes.size()) - 1);
      REQUIRE(static_cast<int>(p.link_indices.size()) == p.num_hops);
      double d = 0;
      for (std::size_t j = 0; j + 1 < p.nodes.size(); ++j) {
        const int li = g.link_index(p.nodes[j], p.nodes[j + 1]);
        REQUIRE(li == p.link_indices[j]);
        d += g.links()[li].km;
      }
      REQUIRE_THAT(p.distance, Catch::Matchers::WithinAbs(d, 1e-9));
    }
  }
}

TEST_CASE("land pairs") {
  SECTION("degree-1 source has no pair") {
    Topology g = Topology::from_links(4, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}}, "g");
    CostMatrix m = full_cost_matrix(g);
    std::vector<CandidatePath> cand;
    for (int dst : {2, 3})
      for (auto& p : k_shortest_paths(g, m, 0, dst, 5)) cand.push_back(p);
    std::stable_sort(cand.begin(), cand.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                       return a.distance < b.distance;
                     });
    REQUIRE(land_pairs({0}, cand, 4).empty());
    REQUIRE(land_pair_counts({0}, {})[0].second == 0);
  }
  SECTION("hub graph matches brute force and rejects same destination") {
    // src 0 reaches distinct destinations 3 and 4 through disjoint hubs 1, 2
    Topology g = Topology::from_links(
        5, {{0, 1, 1}, {0, 2, 2}, {1, 3, 1}, {2, 4, 1}, {1, 4, 5}, {2, 3, 5}}, "hub");
    CostMatrix m = full_cost_matrix(g);
    std::vector<CandidatePath> cand;
    for (int dst : {3, 4})
      for (auto& p : k_shortest_paths(g, m, 0, dst, 8)) cand.push_back(p);
    std::stable_sort(cand.begin(), cand.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                       return a.distance < b.distance;
                     });
    auto got = land_pairs({0}, cand, 16);
    auto want = oracles::land_pairs_brute({0}, cand, 16);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].primary_path == want[i].primary_path);
      REQUIRE(got[i].secondary_path == want[i].secondary_path);
      REQUIRE(cand[got[i].primary_path].dest != cand[got[i].secondary_path].dest);
      REQUIRE(oracles::land_valid(cand[got[i].primary_path], cand[got[i].secondary_path]));
    }
  }
  SECTION("unsorted candidate table is rejected") {
    Topology g = triangle();
    CostMatrix m = full_cost_matrix(g);
    auto cand = k_shortest_paths(g, m, 0, 1, 3);
    std::swap(cand[0], cand[1]);
    REQUIRE_THROWS_AS(land_pairs({0}, cand, 1), ValidationError);
  }
}

TEST_CASE("land pairs equal brute force on random graphs") {
  std::mt19937_64 rng(777);
  for (int it = 0; it < 25; ++it) {
    const int n = 4 + static_cast<int>(rng() % 5);
    Topology g = oracles::random_connected_graph(rng, n);
    CostMatrix m = full_cost_matrix(g);
    const int src = static_cast<int>(rng() % n);
    std::vector<CandidatePath> cand;
    for (int dst = 0; dst < n; ++dst) {
      if (dst == src) continue;
      for (auto& p : k_shortest_paths(g, m, src, dst, 6)) cand.push_back(p);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                       return a.distance < b.distance;
                     });
    const int num_pairs = 1 + static_cast<int>(rng() % 6);
    auto got = land_pairs({src}, cand, num_pairs);
    auto want = oracles::land_pairs_brute({src}, cand, num_pairs);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].primary_path == want[i].primary_path);
      REQUIRE(got[i].secondary_path == want[i].secondary_path);
    }
  }
}

TEST_CASE("neighbor output is sorted and disjoint from the input") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 20; ++it) {
    const int n = 3 + static_cast<int>(rng() % 6);
    Topology g = oracles::random_connected_graph(rng, n);
    std::vector<int> in;
    for (int v = 0; v < n; ++v)
      if (rng() % 2) in.push_back(v);
    if (in.empty()) in.push_back(0);
    auto out = neighbor_nodes(g, in);
    REQUIRE(std::is_sorted(out.begin(), out.end()));
    for (int v : out)
      REQUIRE(std::find(in.begin(), in.end(), v) == in.end());
  }
}
