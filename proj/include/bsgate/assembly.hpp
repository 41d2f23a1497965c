#pragma once

// Realizes a weight vector as a glued surface: w(s) stacked copies of every
// sector, glued along segments in vertical order, then traces the boundary.
//
// At a segment with weights (z; x up, y lo) the one-sheet copies 1..y meet the
// lower copies 1..y, copies z-x+1..z meet the upper copies 1..x, and the
// middle copies y+1..z-x keep that edge as boundary.

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bsgate/complex.hpp"
#include "bsgate/complex_io.hpp"
#include "bsgate/weights.hpp"

namespace bsgate {

enum class Classification { Closed, Isc, PosTisc, NegTisc, Other };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Closed: return "closed";
    case Classification::Isc: return "isc";
    case Classification::PosTisc: return "pos-tisc";
    case Classification::NegTisc: return "neg-tisc";
    case Classification::Other: return "other";
  }
  return "?";
}

struct CornerRecord {
  std::string dp;
  int turn_count = 0;  // interior angle 90 + 360 * turn_count degrees
  Sign sign = Sign::positive;
};

struct BoundaryRun {
  std::string edge;  // segment id, or free:<label>
  int level = 0;     // copy level of the sector carrying the run
  std::string sector;
};

struct BoundaryComponent {
  std::vector<BoundaryRun> runs;
  std::vector<CornerRecord> corners;
  int reflex = 0;  // corners of interior angle 270 mod 360
  bool has_free = false;
};

struct SurfaceComponent {
  std::vector<std::size_t> copies;
  long vertices = 0, edges = 0, copy_euler = 0;
  std::vector<BoundaryComponent> boundary;
  Classification classification = Classification::Closed;
};

struct AssembledSurface {
  std::vector<std::string> sector_ids;
  std::vector<std::pair<std::string, int>> copies;  // (sector, level), level from 1
  std::vector<SurfaceComponent> components;
  long glued_edge_pairs = 0;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace detail

/// Glues the copies and traces the boundary. Throws WeightsNotSatisfying when
/// w violates an equality or inequality of the kind's system, and
/// TracingInconsistency when the level bookkeeping fails.
inline AssembledSurface assemble(const BranchedSurfaceComplex& c, const WeightVector& weights, SystemKind kind) {
  const auto sys = build_system(c, kind);
  std::vector<long long> w;
  for (const auto& s : c.sectors) {
    auto it = weights.find(s.id);
    long long v = it == weights.end() ? 0 : it->second;
    if (v < 0) throw Error("WeightsNotSatisfying", "negative weight on " + s.id);
    w.push_back(v);
  }
  for (const auto& f : sys.equalities)
    if (f.eval(w) != 0) throw Error("WeightsNotSatisfying", "violated equality " + f.provenance);
  for (const auto& f : sys.inequalities)
    if (f.eval(w) < 0) throw Error("WeightsNotSatisfying", "violated inequality " + f.provenance);
  for (const auto& [id, v] : weights)
    if (!c.sector(id)) throw Error("WeightsNotSatisfying", "weight for unknown sector " + id);

  const std::size_t ns = c.sectors.size();
  // Node layout per copy: one copy node, then the word vertices in order.
  std::vector<std::vector<std::size_t>> word_off(ns);
  std::vector<std::size_t> word_total(ns, 0);
  for (std::size_t s = 0; s < ns; ++s)
    for (const auto& wd : c.sectors[s].words) {
      word_off[s].push_back(word_total[s]);
      word_total[s] += wd.size();
    }
  AssembledSurface out;
  for (const auto& s : c.sectors) out.sector_ids.push_back(s.id);
  std::vector<std::size_t> base;
  std::vector<std::vector<std::size_t>> copy_of(ns);  // [sector][level-1] -> copy index
  std::size_t nodes = 0;
  for (std::size_t s = 0; s < ns; ++s)
    for (long long l = 1; l <= w[s]; ++l) {
      copy_of[s].push_back(out.copies.size());
      out.copies.push_back({c.sectors[s].id, static_cast<int>(l)});
      base.push_back(nodes);
      nodes += 1 + word_total[s];
    }
  const std::size_t ncopies = out.copies.size();
  std::vector<std::size_t> copy_sector(ncopies);
  for (std::size_t s = 0; s < ns; ++s)
    for (auto k : copy_of[s]) copy_sector[k] = s;
  auto vnode = [&](std::size_t copy, std::size_t word, std::size_t k) {
    return base[copy] + 1 + word_off[copy_sector[copy]][word] + k;
  };

  struct ItemAt {
    std::size_t copy, word, item;
  };
  std::vector<std::optional<ItemAt>> partner(nodes);  // indexed like vertices: item i <-> node of vertex i
  const auto items = side_items(c);
  auto fwd = [&](std::size_t s, std::size_t word, std::size_t i) {
    const auto& wd = c.sectors[s].words[word];
    const Segment* g = c.segment(wd.edges[i].segment);
    return traverses_forward(*g, wd.edges[i].role, wd.start_vertex(i));
  };
  auto glue = [&](const ItemRef& a, std::size_t ca, const ItemRef& b, std::size_t cb) {
    auto na = vnode(ca, a.word, a.item), nb = vnode(cb, b.word, b.item);
    if (partner[na] || partner[nb]) throw Error("TracingInconsistency", "edge glued twice");
    partner[na] = ItemAt{cb, b.word, b.item};
    partner[nb] = ItemAt{ca, a.word, a.item};
    ++out.glued_edge_pairs;
  };
  for (const auto& g : c.segments) {
    const ItemRef one = items.at({g.id, SideRole::one});
    const ItemRef up = items.at({g.id, SideRole::up});
    const ItemRef lo = items.at({g.id, SideRole::lo});
    long long z = w[one.sector], x = w[up.sector], y = w[lo.sector];
    for (long long i = 1; i <= y; ++i) glue(one, copy_of[one.sector][i - 1], lo, copy_of[lo.sector][i - 1]);
    for (long long i = 1; i <= x; ++i) glue(one, copy_of[one.sector][z - x + i - 1], up, copy_of[up.sector][i - 1]);
  }

  // Vertex classes and components.
  detail::UnionFind uf(nodes);
  for (std::size_t k = 0; k < ncopies; ++k)
    for (std::size_t j = 1; j <= word_total[copy_sector[k]]; ++j) uf.unite(base[k], base[k] + j);
  detail::UnionFind vf(nodes);
  for (std::size_t k = 0; k < ncopies; ++k) {
    std::size_t s = copy_sector[k];
    for (std::size_t wi = 0; wi < c.sectors[s].words.size(); ++wi) {
      const auto& wd = c.sectors[s].words[wi];
      const std::size_t len = wd.size();
      for (std::size_t i = 0; i < len; ++i) {
        const auto& p = partner[vnode(k, wi, i)];
        if (!p) continue;
        std::size_t ps = copy_sector[p->copy];
        const auto& pw = c.sectors[ps].words[p->word];
        const std::size_t plen = pw.size();
        // vertex at segment end e of an item: end0 is the start when forward
        auto at_end = [](bool forward, std::size_t item, std::size_t n, int e) {
          bool start = forward == (e == 0);
          return start ? (item + n - 1) % n : item;
        };
        bool fa = fwd(s, wi, i), fb = fwd(ps, p->word, p->item);
        for (int e = 0; e < 2; ++e) {
          auto va = vnode(k, wi, at_end(fa, i, len, e));
          auto vb = vnode(p->copy, p->word, at_end(fb, p->item, plen, e));
          vf.unite(va, vb);
          uf.unite(va, vb);
        }
      }
    }
  }

  std::map<std::size_t, std::size_t> comp_of_root;
  for (std::size_t k = 0; k < ncopies; ++k) {
    auto r = uf.find(base[k]);
    if (!comp_of_root.count(r)) {
      comp_of_root[r] = out.components.size();
      out.components.emplace_back();
    }
    auto& comp = out.components[comp_of_root[r]];
    comp.copies.push_back(k);
    comp.copy_euler += c.sectors[copy_sector[k]].euler();
  }
  {
    std::vector<char> seen(nodes, 0);
    for (std::size_t k = 0; k < ncopies; ++k) {
      auto& comp = out.components[comp_of_root[uf.find(base[k])]];
      std::size_t s = copy_sector[k];
      for (std::size_t wi = 0; wi < c.sectors[s].words.size(); ++wi)
        for (std::size_t i = 0; i < c.sectors[s].words[wi].size(); ++i) {
          auto v = vnode(k, wi, i);
          auto r = vf.find(v);
          if (!seen[r]) {
            seen[r] = 1;
            ++comp.vertices;
          }
          // each glued pair counted once, from its smaller node
          const auto& p = partner[v];
          if (!p || vnode(p->copy, p->word, p->item) > v) ++comp.edges;
        }
    }
  }

  // Boundary tracing.
  auto slot_of = [&](std::size_t s, std::size_t word, std::size_t item, bool at_item_end) -> std::optional<int> {
    const auto& e = c.sectors[s].words[word].edges[item];
    if (e.is_free) return std::nullopt;
    const Segment* g = c.segment(e.segment);
    if (g->kind != SegmentKind::arc) return std::nullopt;
    bool f = fwd(s, word, item);
    const SegmentEnd& end = g->ends[(f == at_item_end) ? 1 : 0];
    if (end.is_free) return std::nullopt;
    return end.slot;
  };
  auto vertex_angle = [&](std::size_t s, std::size_t word, std::size_t k) {
    const auto& wd = c.sectors[s].words[word];
    if (!wd.vertices[k].is_dp) return 180;
    auto a = slot_of(s, word, k, true);
    auto b = slot_of(s, word, (k + 1) % wd.size(), false);
    if (!a || !b) throw Error("TracingInconsistency", "corner without germs at dp " + wd.vertices[k].dp);
    return (*a - *b + 4) % 4 == 2 ? 180 : 90;
  };

  std::vector<char> visited(nodes, 0);
  const std::size_t step_limit = 4 * nodes + 16;
  for (std::size_t k0 = 0; k0 < ncopies; ++k0) {
    std::size_t s0 = copy_sector[k0];
    for (std::size_t w0 = 0; w0 < c.sectors[s0].words.size(); ++w0)
      for (std::size_t i0 = 0; i0 < c.sectors[s0].words[w0].size(); ++i0) {
        if (partner[vnode(k0, w0, i0)] || visited[vnode(k0, w0, i0)]) continue;
        BoundaryComponent bc;
        std::size_t copy = k0, word = w0, item = i0;
        int dir = 1;
        std::size_t guard = 0;
        for (;;) {
          if (++guard > step_limit) throw Error("TracingInconsistency", "boundary trace does not close");
          std::size_t s = copy_sector[copy];
          const auto& wd = c.sectors[s].words[word];
          visited[vnode(copy, word, item)] = 1;
          const auto& e = wd.edges[item];
          bc.runs.push_back({e.is_free ? "free:" + e.label : e.segment, out.copies[copy].second, c.sectors[s].id});
          if (e.is_free) bc.has_free = true;
          // far vertex of the run
          const std::size_t len = wd.size();
          std::size_t k = dir > 0 ? item : (item + len - 1) % len;
          auto entry_slot = slot_of(s, word, item, dir > 0);
          std::string dp = wd.vertices[k].is_dp ? wd.vertices[k].dp : std::string{};
          int angle = 0;
          std::size_t cur_copy = copy, cur_word = word;
          for (std::size_t walk = 0;; ++walk) {
            if (walk > step_limit) throw Error("TracingInconsistency", "vertex walk does not end");
            std::size_t cs = copy_sector[cur_copy];
            const auto& cw = c.sectors[cs].words[cur_word];
            const std::size_t clen = cw.size();
            if (vertex_label(cw.vertices[k]) != dp)
              throw Error("TracingInconsistency", "vertex class mixes double points");
            angle += vertex_angle(cs, cur_word, k);
            std::size_t n = dir > 0 ? (k + 1) % clen : k;
            const auto& p = partner[vnode(cur_copy, cur_word, n)];
            if (!p) {
              copy = cur_copy;
              word = cur_word;
              item = n;
              break;
            }
            // end of item n sitting at vertex k
            bool fn = fwd(cs, cur_word, n);
            int en = dir > 0 ? (fn ? 0 : 1) : (fn ? 1 : 0);
            std::size_t ps = copy_sector[p->copy];
            const std::size_t plen = c.sectors[ps].words[p->word].size();
            bool fp = fwd(ps, p->word, p->item);
            bool at_start = fp == (en == 0);
            cur_copy = p->copy;
            cur_word = p->word;
            if (at_start) {
              k = (p->item + plen - 1) % plen;
              dir = -1;
            } else {
              k = p->item;
              dir = 1;
            }
          }
          if (!dp.empty()) {
            auto exit_slot = slot_of(copy_sector[copy], word, item, dir < 0);
            if (!entry_slot || !exit_slot) throw Error("TracingInconsistency", "boundary meets dp " + dp + " off a germ");
            if (*entry_slot % 2 != *exit_slot % 2) {
              const DoublePoint* d = c.doublepoint(dp);
              if (angle % 360 == 90) bc.corners.push_back({dp, (angle - 90) / 360, d->sign});
              else if (angle % 360 == 270) ++bc.reflex;
              else throw Error("TracingInconsistency", "corner angle " + std::to_string(angle) + " at dp " + dp);
            } else if (angle % 360 != 180) {
              throw Error("TracingInconsistency", "straight pass with angle " + std::to_string(angle) + " at dp " + dp);
            }
          }
          if (copy == k0 && word == w0 && item == i0) break;
          if (visited[vnode(copy, word, item)])
            throw Error("TracingInconsistency", "boundary trace re-enters a run");
        }
        out.components[comp_of_root[uf.find(base[k0])]].boundary.push_back(std::move(bc));
      }
  }

  for (auto& comp : out.components) {
    if (comp.boundary.empty()) {
      comp.classification = Classification::Closed;
      continue;
    }
    bool free = false, reflex = false, pos = false, neg = false;
    for (const auto& b : comp.boundary) {
      free |= b.has_free;
      reflex |= b.reflex > 0;
      for (const auto& cr : b.corners) (cr.sign == Sign::positive ? pos : neg) = true;
    }
    if (free || reflex || (pos && neg)) comp.classification = Classification::Other;
    else if (pos) comp.classification = Classification::PosTisc;
    else if (neg) comp.classification = Classification::NegTisc;
    else comp.classification = Classification::Isc;
  }
  return out;
}

/// V - E + F of one component, where each copy contributes its own Euler
/// characteristic in place of a face count.
inline long euler_characteristic(const AssembledSurface& s, std::size_t component) {
  const auto& c = s.components.at(component);
  return c.vertices - c.edges + c.copy_euler;
}

/// Copies per sector.
inline WeightVector roundtrip_weights(const AssembledSurface& s) {
  WeightVector w;
  for (const auto& id : s.sector_ids) w[id] = 0;
  for (const auto& [id, level] : s.copies) ++w[id];
  return w;
}

inline std::vector<Classification> classify(const AssembledSurface& s) {
  std::vector<Classification> out;
  for (const auto& c : s.components) out.push_back(c.classification);
  return out;
}

/// Number of boundary runs along each segment.
inline std::map<std::string, long> boundary_runs(const AssembledSurface& s) {
  std::map<std::string, long> out;
  for (const auto& c : s.components)
    for (const auto& b : c.boundary)
      for (const auto& r : b.runs)
        if (r.edge.rfind("free:", 0) != 0) ++out[r.edge];
  return out;
}

/// Number of corner records at each double point.
inline std::map<std::string, long> corner_multiplicity(const AssembledSurface& s) {
  std::map<std::string, long> out;
  for (const auto& c : s.components)
    for (const auto& b : c.boundary)
      for (const auto& cr : b.corners) ++out[cr.dp];
  return out;
}

}  // namespace bsgate
