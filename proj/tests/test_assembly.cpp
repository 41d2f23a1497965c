#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "bsgate/assembly.hpp"
#include "bsgate/complex_io.hpp"
#include "bsgate/random_complex.hpp"

using namespace bsgate;

namespace {

std::string fixture(const std::string& name) { return std::string(BSGATE_FIXTURES) + "/" + name; }

WeightVector as_weights(const BranchedSurfaceComplex& c, const std::vector<long long>& v) {
  WeightVector w;
  for (std::size_t i = 0; i < c.sectors.size(); ++i) w[c.sectors[i].id] = v[i];
  return w;
}

// Inclusion-exclusion: sum of copy Euler characteristics, plus one per glued
// edge pair (read off the weights), minus one per vertex merge. Vertex merges
// come from a graph on corner occurrences keyed by (sector, level, word, index).
long euler_oracle(const BranchedSurfaceComplex& c, const WeightVector& w) {
  using Key = std::tuple<std::string, long long, std::size_t, std::size_t>;
  std::map<Key, Key> parent;
  std::function<Key(Key)> find = [&](Key k) {
    auto it = parent.find(k);
    if (it == parent.end() || it->second == k) return k;
    return it->second = find(it->second);
  };
  long total = 0, merges = 0, pairs = 0;
  for (const auto& s : c.sectors) total += w.at(s.id) * s.euler();
  // segment end e of the side item (sector, word, item): its vertex index
  auto end_vertex = [&](const std::string& sid, std::size_t word, std::size_t item, int e) {
    const auto& wd = c.sector(sid)->words[word];
    const auto& it = wd.edges[item];
    bool f = traverses_forward(*c.segment(it.segment), it.role, wd.start_vertex(item));
    bool start = f == (e == 0);
    return start ? (item + wd.size() - 1) % wd.size() : item;
  };
  auto where = side_items(c);
  auto join = [&](SideRole ra, long long la, SideRole rb, long long lb, const Segment& g) {
    auto a = where.at({g.id, ra});
    auto b = where.at({g.id, rb});
    ++pairs;
    for (int e = 0; e < 2; ++e) {
      Key ka{g.side(ra), la, a.word, end_vertex(g.side(ra), a.word, a.item, e)};
      Key kb{g.side(rb), lb, b.word, end_vertex(g.side(rb), b.word, b.item, e)};
      Key x = find(ka), y = find(kb);
      if (x != y) {
        parent[std::max(x, y)] = std::min(x, y);
        ++merges;
      }
    }
  };
  for (const auto& g : c.segments) {
    long long z = w.at(g.one), x = w.at(g.up), y = w.at(g.lo);
    for (long long i = 1; i <= y; ++i) join(SideRole::one, i, SideRole::lo, i, g);
    for (long long i = 1; i <= x; ++i) join(SideRole::one, z - x + i, SideRole::up, i, g);
  }
  return total - merges + pairs;
}

long total_euler(const AssembledSurface& s) {
  long t = 0;
  for (std::size_t i = 0; i < s.components.size(); ++i) t += euler_characteristic(s, i);
  return t;
}

void check_conservation(const BranchedSurfaceComplex& c, const WeightVector& w, const AssembledSurface& s,
                        const std::string& where) {
  EXPECT_EQ(roundtrip_weights(s), w) << where;
  auto runs = boundary_runs(s);
  for (const auto& g : c.segments) {
    long slack = w.at(g.one) - w.at(g.up) - w.at(g.lo);
    EXPECT_EQ(runs[g.id], slack) << where << " segment " << g.id;
  }
  auto corners = corner_multiplicity(s);
  for (const auto& d : c.doublepoints) {
    long slack = 0;
    for (const auto& [sid, k] : corner_form(derive_roles(c, d.id))) slack += k * w.at(sid);
    EXPECT_EQ(corners[d.id], slack) << where << " dp " << d.id;
  }
  EXPECT_EQ(total_euler(s), euler_oracle(c, w)) << where;
  for (const auto& comp : s.components)
    for (const auto& b : comp.boundary) {
      EXPECT_EQ(b.reflex, 0) << where;
      for (const auto& cr : b.corners) EXPECT_GE(cr.turn_count, 0);
    }
}

}  // namespace

TEST(Assemble, TorusSingleCopy) {
  auto c = load_complex(fixture("torus.bsf"));
  auto s = assemble(c, {{"T", 1}}, SystemKind::NegTisc);
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(euler_characteristic(s, 0), 0);
  EXPECT_EQ(classify(s), std::vector<Classification>{Classification::Closed});
}

TEST(Assemble, TorusThreeCopies) {
  auto c = load_complex(fixture("torus.bsf"));
  auto s = assemble(c, {{"T", 3}}, SystemKind::Isc);
  EXPECT_EQ(roundtrip_weights(s), (WeightVector{{"T", 3}}));
  EXPECT_EQ(s.components.size(), 3u);
}

TEST(Assemble, DocDisk) {
  auto c = load_complex(fixture("doc.bsf"));
  WeightVector w{{"D", 1}, {"T", 0}};
  auto s = assemble(c, w, SystemKind::Isc);
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(euler_characteristic(s, 0), 1);
  ASSERT_EQ(s.components[0].boundary.size(), 1u);
  EXPECT_TRUE(s.components[0].boundary[0].corners.empty());
  EXPECT_EQ(s.components[0].classification, Classification::Isc);
  EXPECT_EQ(roundtrip_weights(s), w);
}

TEST(Assemble, DocDoubledWitness) {
  auto c = load_complex(fixture("doc.bsf"));
  WeightVector w{{"D", 2}, {"T", 0}};
  auto s = assemble(c, w, SystemKind::Isc);
  ASSERT_EQ(s.components.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(euler_characteristic(s, i), 1);
  EXPECT_EQ(total_euler(s), euler_oracle(c, w));
}

TEST(Assemble, DocClosedTorus) {
  // Two disks capping both boundary circles of the torus sector.
  auto c = load_complex(fixture("doc.bsf"));
  WeightVector w{{"D", 2}, {"T", 1}};
  auto s = assemble(c, w, SystemKind::Isc);
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(s.components[0].classification, Classification::Closed);
  EXPECT_EQ(euler_characteristic(s, 0), 0);
}

TEST(Assemble, WeightsNotSatisfying) {
  auto c = load_complex(fixture("doc.bsf"));
  try {
    assemble(c, {{"D", 1}, {"T", 1}}, SystemKind::Isc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "WeightsNotSatisfying");
    EXPECT_NE(std::string(e.what()).find("segment:c"), std::string::npos);
  }
}

TEST(Assemble, TdiscPositiveTisc) {
  auto c = load_complex(fixture("tdisc.bsf"));
  auto sys = build_system(c, SystemKind::PosTisc);
  auto cert = feasible(sys);
  ASSERT_EQ(cert.verdict, Verdict::Feasible);
  auto w = as_weights(c, to_int64(cert.witness));
  auto s = assemble(c, w, SystemKind::PosTisc);
  check_conservation(c, w, s, "tdisc");
  bool found = false;
  for (const auto& comp : s.components)
    if (comp.classification == Classification::PosTisc) {
      found = true;
      for (const auto& b : comp.boundary)
        for (const auto& cr : b.corners) EXPECT_EQ(cr.dp, "p1");
    }
  EXPECT_TRUE(found);
}

TEST(Assemble, NegtdNegativeTisc) {
  auto c = load_complex(fixture("negtd.bsf"));
  WeightVector w{{"D", 1}, {"X", 0}, {"Y", 0}, {"U", 0}};
  auto s = assemble(c, w, SystemKind::NegTisc);
  check_conservation(c, w, s, "negtd");
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(s.components[0].classification, Classification::NegTisc);
  ASSERT_EQ(s.components[0].boundary.size(), 1u);
  ASSERT_EQ(s.components[0].boundary[0].corners.size(), 1u);
  EXPECT_EQ(s.components[0].boundary[0].corners[0].dp, "p");
  EXPECT_EQ(s.components[0].boundary[0].corners[0].turn_count, 0);
}

TEST(Assemble, FigureFiveCornerWraps) {
  // All vectors with entries <= 4 and nonnegative corner slack; some corners wrap.
  auto c = load_complex(fixture("fig5.bsf"));
  int max_turn = 0;
  for (long long z = 0; z <= 4; ++z)
    for (long long x = 0; x <= z; ++x)
      for (long long y = 0; x + y <= z; ++y)
        for (long long v = y; v <= z; ++v)
          for (long long wv = 0; wv + v <= z; ++wv)
            for (long long u = 0; u + y <= v && u + wv <= x; ++u) {
              WeightVector w{{"u", u}, {"v", v}, {"w", wv}, {"x", x}, {"y", y}, {"z", z}};
              if (z + u - x - v < 0) continue;
              auto s = assemble(c, w, SystemKind::NegTisc);
              check_conservation(c, w, s, "fig5");
              for (const auto& comp : s.components)
                for (const auto& b : comp.boundary)
                  for (const auto& cr : b.corners) max_turn = std::max(max_turn, cr.turn_count);
            }
  EXPECT_GE(max_turn, 1);
}

TEST(Assemble, RandomWitnessesConserve) {
  int assembled = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto c = random_complex(seed);
    for (auto k : {SystemKind::NegTisc, SystemKind::PosTisc, SystemKind::Isc}) {
      auto sys = build_system(c, k);
      auto cert = feasible(sys);
      if (cert.verdict != Verdict::Feasible) continue;
      auto v = to_int64(cert.witness);
      for (long long mult : {1, 2}) {
        std::vector<long long> m = v;
        for (auto& e : m) e *= mult;
        auto w = as_weights(c, m);
        auto s = assemble(c, w, k);
        check_conservation(c, w, s, "seed " + std::to_string(seed));
        ++assembled;
      }
    }
  }
  EXPECT_GT(assembled, 50);
}
