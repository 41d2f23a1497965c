#pragma once

// Boundary-word completion and a seeded generator of small valid complexes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bsgate/complex.hpp"

namespace bsgate {

/// Placement of a double point: roles plus the slots of G1..G4. complete_words
/// needs it because the words themselves are what role derivation reads.
struct Placement {
  std::string dp;
  std::array<int, 4> germ_slot;
};

namespace detail {

// Endpoint of a side item: (segment index, role, end index).
struct Endpoint {
  std::size_t seg;
  SideRole role;
  int end;
  auto operator<=>(const Endpoint&) const = default;
};

}  // namespace detail

/// Fills every sector's boundary words from the segments, the corner pattern
/// at each double point (given by `placements`) and an arbitrary pairing of
/// free ends inside each sector. Existing words are replaced. Returns false
/// when no consistent words exist for this pairing (odd free-end parity in a
/// sector, or a cycle forcing two conventional items in opposite directions).
inline bool complete_words(BranchedSurfaceComplex& c, const std::vector<Placement>& placements) {
  using detail::Endpoint;
  std::map<Endpoint, Endpoint> mate;

  std::map<std::string, std::array<int, 4>> place;
  for (const auto& p : placements) place[p.dp] = p.germ_slot;
  // slot -> segment end at that slot
  std::map<std::pair<std::string, int>, std::pair<std::size_t, int>> at_slot;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    const auto& s = c.segments[i];
    if (s.kind != SegmentKind::arc) continue;
    for (int e = 0; e < 2; ++e)
      if (!s.ends[e].is_free) at_slot[{s.ends[e].dp, s.ends[e].slot}] = {i, e};
  }
  for (const auto& d : c.doublepoints) {
    auto it = place.find(d.id);
    if (it == place.end()) return false;
    for (const auto& cs : kCorners) {
      auto a = at_slot.find({d.id, it->second[cs.germ_a]});
      auto b = at_slot.find({d.id, it->second[cs.germ_b]});
      if (a == at_slot.end() || b == at_slot.end()) return false;
      Endpoint ea{a->second.first, cs.side_a, a->second.second};
      Endpoint eb{b->second.first, cs.side_b, b->second.second};
      mate[ea] = eb;
      mate[eb] = ea;
    }
  }
  std::map<std::string, std::vector<Endpoint>> free_eps;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    const auto& s = c.segments[i];
    if (s.kind != SegmentKind::arc) continue;
    for (int e = 0; e < 2; ++e)
      if (s.ends[e].is_free)
        for (auto r : {SideRole::one, SideRole::up, SideRole::lo}) free_eps[s.side(r)].push_back({i, r, e});
  }
  for (auto& [sid, eps] : free_eps) {
    if (eps.size() % 2) return false;
    for (std::size_t k = 0; k < eps.size(); k += 2) {
      mate[eps[k]] = eps[k + 1];
      mate[eps[k + 1]] = eps[k];
    }
  }

  for (auto& sec : c.sectors) sec.words.clear();
  std::map<std::string, int> free_count;
  std::set<std::pair<std::size_t, SideRole>> used;
  for (std::size_t i = 0; i < c.segments.size(); ++i)
    for (auto r : {SideRole::one, SideRole::up, SideRole::lo}) {
      if (used.count({i, r})) continue;
      const Segment& s0 = c.segments[i];
      auto* sec = const_cast<Sector*>(c.sector(s0.side(r)));
      if (!sec) return false;
      if (s0.kind == SegmentKind::circle) {
        used.insert({i, r});
        sec->words.push_back({{EdgeItem::seg(s0.id, r)}, {VertexItem::smooth()}});
        continue;
      }
      // Walk the cycle: enter (i, r) at end 0, leave at end 1.
      struct Step {
        std::size_t seg;
        SideRole role;
        int enter;
      };
      std::vector<Step> cyc;
      std::size_t seg = i;
      SideRole role = r;
      int enter = 0;
      for (;;) {
        if (used.count({seg, role})) {
          if (seg != i || role != r || enter != 0) return false;
          break;
        }
        used.insert({seg, role});
        cyc.push_back({seg, role, enter});
        auto m = mate.find(Endpoint{seg, role, 1 - enter});
        if (m == mate.end()) return false;
        if (c.segments[m->second.seg].side(m->second.role) != sec->id) return false;
        seg = m->second.seg;
        role = m->second.role;
        enter = m->second.end;
      }
      // Orientation forced by conventional items.
      std::optional<bool> keep;
      for (const auto& st : cyc) {
        const Segment& s = c.segments[st.seg];
        if (!direction_is_conventional(s)) continue;
        bool fwd = st.enter == 0;
        bool want = st.role != SideRole::one;
        bool k = fwd == want;
        if (keep && *keep != k) return false;
        keep = k;
      }
      if (keep && !*keep) {
        std::reverse(cyc.begin(), cyc.end());
        for (auto& st : cyc) st.enter = 1 - st.enter;
      }
      BoundaryWord w;
      for (const auto& st : cyc) {
        const Segment& s = c.segments[st.seg];
        w.edges.push_back(EdgeItem::seg(s.id, st.role));
        const SegmentEnd& out = s.ends[1 - st.enter];
        if (out.is_free) {
          w.vertices.push_back(VertexItem::smooth());
          w.edges.push_back(EdgeItem::free_edge("f" + sec->id + "_" + std::to_string(free_count[sec->id]++)));
          w.vertices.push_back(VertexItem::smooth());
        } else {
          w.vertices.push_back(VertexItem::at(out.dp));
        }
      }
      sec->words.push_back(std::move(w));
    }
  return true;
}

/// Generates a random validator-clean complex; deterministic in the seed.
/// At most `max_sectors` sectors and `max_dps` double points.
inline BranchedSurfaceComplex random_complex(std::uint64_t seed, int max_sectors = 6, int max_dps = 4) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int attempt = 0;; ++attempt) {
    BranchedSurfaceComplex c;
    c.name = "random" + std::to_string(seed);
    int ns = pick(1, max_sectors);
    for (int i = 0; i < ns; ++i) c.sectors.push_back(Sector{"S" + std::to_string(i), pick(0, 3) == 0 ? 1 : 0, {}});
    auto sec = [&]() { return c.sectors[pick(0, ns - 1)].id; };

    int nd = pick(0, max_dps);
    std::vector<Placement> placements;
    struct Open {
      std::string dp;
      int slot;
      std::array<std::string, 3> triple;
    };
    std::vector<Open> open;
    for (int d = 0; d < nd; ++d) {
      std::string id = "p" + std::to_string(d);
      std::array<std::string, 6> role;
      for (auto& r : role) r = sec();
      int s = pick(0, 3), dir = pick(0, 1) ? 1 : 3;
      std::array<int, 4> slots{s, (s + dir) % 4, (s + 2) % 4, (s + 3 * dir) % 4};
      if (!open.empty() && pick(0, 2) > 0) {
        // Reuse an open germ's triple so the two germs can form one segment.
        const Open& o = open[pick(0, static_cast<int>(open.size()) - 1)];
        int g = pick(0, 3);
        for (int k = 0; k < 3; ++k) role[static_cast<int>(kGermPattern[g][k])] = o.triple[k];
      }
      for (int g = 0; g < 4; ++g)
        open.push_back({id, slots[g],
                        {role[static_cast<int>(kGermPattern[g][0])], role[static_cast<int>(kGermPattern[g][1])],
                         role[static_cast<int>(kGermPattern[g][2])]}});
      placements.push_back({id, slots});
      c.doublepoints.push_back({id, pick(0, 1) ? Sign::positive : Sign::negative});
    }
    std::shuffle(open.begin(), open.end(), rng);
    int nseg = 0;
    auto new_id = [&]() { return "g" + std::to_string(nseg++); };
    std::vector<bool> done(open.size(), false);
    for (std::size_t a = 0; a < open.size(); ++a) {
      if (done[a]) continue;
      done[a] = true;
      Segment s;
      s.id = new_id();
      s.one = open[a].triple[0];
      s.up = open[a].triple[1];
      s.lo = open[a].triple[2];
      s.ends[0] = SegmentEnd::at(open[a].dp, open[a].slot);
      s.ends[1] = SegmentEnd::free_end();
      for (std::size_t b = a + 1; b < open.size(); ++b)
        if (!done[b] && open[b].dp != open[a].dp && open[b].triple == open[a].triple && pick(0, 3) > 0) {
          done[b] = true;
          s.ends[1] = SegmentEnd::at(open[b].dp, open[b].slot);
          break;
        }
      c.segments.push_back(s);
    }
    for (int k = pick(0, 2); k > 0; --k) {
      Segment s{new_id(), SegmentKind::circle, sec(), sec(), sec(), {}};
      c.segments.push_back(s);
    }
    for (int k = pick(0, 1); k > 0; --k) {
      Segment s{new_id(), SegmentKind::arc, sec(), sec(), sec(), {SegmentEnd::free_end(), SegmentEnd::free_end()}};
      c.segments.push_back(s);
    }
    if (!complete_words(c, placements)) continue;
    if (!validate(c).empty()) continue;
    return c;
  }
}

}  // namespace bsgate
