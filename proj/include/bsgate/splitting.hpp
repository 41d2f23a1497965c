#pragma once

// Elementary splitting along a directed arc in a sector Z, from an entry edge
// P to an exit edge Q on Z's boundary.
//
// The arc is thickened into a strip. Its upper sheet continues the upper
// sector X_P of P and its lower sheet continues Y_P; the strip's two lateral
// curves become new branch segments whose one-sheet side is what is left of Z.
// At Q the strip meets the sheets X_Q (up) and Y_Q (lo) of Q's segment:
//   over:    new double points L (negative) and R (positive),
//   under:   L (positive) and R (negative),
//   neutral: X_P joins X_Q and Y_P joins Y_Q, no new double points.
// L lies on the side of the strip reached first after P in Z's word order.
//
// Over/under add two segments mid and tip running L -> R across the strip
// and a new disk sector T between them:
//   over:  mid = (Y_P; T, Y_Q)  tip = (X_Q; X_P, T)  slots q, s, mid, tip
//   under: mid = (X_P; X_Q, T)  tip = (Y_Q; T, Y_P)  slots s, q, tip, mid
// where q/s are the pieces of Q's and P's segments ending there.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bsgate/complex.hpp"
#include "bsgate/weights.hpp"

namespace bsgate {

enum class MoveChoice { Over, Under, Neutral };

inline const char* to_string(MoveChoice m) {
  switch (m) {
    case MoveChoice::Over: return "over";
    case MoveChoice::Under: return "under";
    case MoveChoice::Neutral: return "neutral";
  }
  return "?";
}

struct Position {
  std::size_t word = 0;
  std::size_t item = 0;
  std::optional<SideRole> side;  // checked against the item when present
  bool operator==(const Position&) const = default;
};

struct SplitLocus {
  std::string sector;
  Position entry, exit;
  bool operator==(const SplitLocus&) const = default;
};

/// Parses W:K:P (word index, item index, side).
inline Position parse_position(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw Error("usage", "position must be W:K:P, got '" + text + "'");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (...) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') throw Error("usage", "bad index in '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  Position p{num(parts[0]), num(parts[1]), std::nullopt};
  if (parts[2] == "one") p.side = SideRole::one;
  else if (parts[2] == "up") p.side = SideRole::up;
  else if (parts[2] == "lo") p.side = SideRole::lo;
  else throw Error("usage", "bad side in '" + text + "'");
  return p;
}

inline std::string print_position(const BranchedSurfaceComplex& c, const std::string& sector, const Position& p) {
  const auto& e = c.sector(sector)->words.at(p.word).edges.at(p.item);
  return std::to_string(p.word) + ":" + std::to_string(p.item) + ":" + (e.is_free ? "free" : to_string(e.role));
}

namespace detail {

inline const EdgeItem& locus_item(const BranchedSurfaceComplex& c, const std::string& sector, const Position& p) {
  const Sector* s = c.sector(sector);
  if (!s) throw Error("InvalidLocus", "unknown sector " + sector);
  if (p.word >= s->words.size() || p.item >= s->words[p.word].size())
    throw Error("InvalidLocus", "position " + std::to_string(p.word) + ":" + std::to_string(p.item) +
                                    " outside the words of " + sector);
  const auto& e = s->words[p.word].edges[p.item];
  if (e.is_free) throw Error("InvalidLocus", "locus position on a free edge");
  if (p.side && *p.side != e.role)
    throw Error("InvalidLocus", "position side " + std::string(to_string(*p.side)) + " does not match item side " +
                                    to_string(e.role));
  return e;
}

inline std::string fresh(const std::string& prefix, std::set<std::string>& taken) {
  for (int n = 1;; ++n) {
    std::string id = prefix + std::to_string(n);
    if (taken.insert(id).second) return id;
  }
}

// Chain replacing one edge item, written in Z's traversal direction.
struct Chain {
  std::vector<EdgeItem> items;
  std::vector<VertexItem> inner;  // items.size() - 1 vertices
};

/// Replaces the item (g, role), wherever it sits, by `chain`, reversing the
/// chain when the sector runs along g against `z_forward`.
inline void replace_item(std::vector<Sector>& sectors, const Segment& g, SideRole role, bool z_forward, Chain chain) {
  for (auto& sec : sectors)
    for (auto& w : sec.words)
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& e = w.edges[i];
        if (e.is_free || e.segment != g.id || e.role != role) continue;
        bool f = traverses_forward(g, role, w.start_vertex(i));
        if (f != z_forward) {
          std::reverse(chain.items.begin(), chain.items.end());
          std::reverse(chain.inner.begin(), chain.inner.end());
        }
        VertexItem end = w.vertices[i];
        std::vector<EdgeItem> edges(w.edges.begin(), w.edges.begin() + i);
        std::vector<VertexItem> verts(w.vertices.begin(), w.vertices.begin() + i);
        for (std::size_t k = 0; k < chain.items.size(); ++k) {
          edges.push_back(chain.items[k]);
          verts.push_back(k + 1 < chain.items.size() ? chain.inner[k] : end);
        }
        edges.insert(edges.end(), w.edges.begin() + i + 1, w.edges.end());
        verts.insert(verts.end(), w.vertices.begin() + i + 1, w.vertices.end());
        w.edges = std::move(edges);
        w.vertices = std::move(verts);
        return;
      }
  throw Error("InvariantViolation", "item " + g.id + ":" + to_string(role) + " missing");
}

/// Merges cyclically adjacent copies of the same item joined at a smooth
/// vertex (a cut circle closing up again).
inline void merge_repeats(BoundaryWord& w, const std::set<std::string>& mergeable) {
  bool changed = true;
  while (changed && w.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t j = (i + 1) % w.size();
      if (w.edges[i] == w.edges[j] && !w.edges[i].is_free && mergeable.count(w.edges[i].segment) &&
          !w.vertices[i].is_dp) {
        w.vertices[i] = w.vertices[j];
        w.edges.erase(w.edges.begin() + j);
        w.vertices.erase(w.vertices.begin() + j);
        changed = true;
        break;
      }
    }
  }
}

/// Rewrites every segment side from the words: the sector whose word lists
/// (g, r) becomes side r of g.
inline void sync_sides(BranchedSurfaceComplex& c) {
  for (const auto& sec : c.sectors)
    for (const auto& w : sec.words)
      for (const auto& e : w.edges)
        if (!e.is_free)
          for (auto& g : c.segments)
            if (g.id == e.segment) g.side(e.role) = sec.id;
}

}  // namespace detail

/// True when Z is not the one-sheet sector at the exit.
inline bool is_bad_move(const BranchedSurfaceComplex& c, const SplitLocus& locus) {
  return detail::locus_item(c, locus.sector, locus.exit).role != SideRole::one;
}

/// Pushforward data: each original sector's weight is the sum of the listed
/// new sectors' weights.
struct SplitRecord {
  MoveChoice choice = MoveChoice::Over;
  std::string dp_L, dp_R;  // empty for neutral
  std::map<std::string, std::vector<std::string>> preimage;
};

struct SplitResult {
  BranchedSurfaceComplex complex;
  std::string dp_L, dp_R;
  SplitRecord record;
};

inline SplitResult split(const BranchedSurfaceComplex& c, const SplitLocus& locus, MoveChoice choice) {
  using detail::Chain;
  if (auto rep = validate(c); !rep.empty()) throw Error("InvalidLocus", "complex does not validate: " + rep.front());
  const EdgeItem& eP = detail::locus_item(c, locus.sector, locus.entry);
  const EdgeItem& eQ = detail::locus_item(c, locus.sector, locus.exit);
  if (locus.entry.word == locus.exit.word && locus.entry.item == locus.exit.item)
    throw Error("InvalidLocus", "entry and exit coincide");
  if (eP.role != SideRole::one) throw Error("InvalidLocus", "branching at the entry is not inward");
  if (eQ.role != SideRole::one) throw Error("BadMove", "branching at the exit is outward for " + locus.sector);

  const std::string Z = locus.sector;
  const Sector& zs = *c.sector(Z);
  const Segment gP = *c.segment(eP.segment);
  const Segment gQ = *c.segment(eQ.segment);
  const std::string XP = gP.up, YP = gP.lo, XQ = gQ.up, YQ = gQ.lo;

  const auto& wP = zs.words[locus.entry.word];
  const auto& wQ = zs.words[locus.exit.word];
  const std::size_t iP = locus.entry.item, iQ = locus.exit.item;
  const bool same_word = locus.entry.word == locus.exit.word;
  const bool fwdP = traverses_forward(gP, SideRole::one, wP.start_vertex(iP));
  const bool fwdQ = traverses_forward(gQ, SideRole::one, wQ.start_vertex(iQ));

  std::set<std::string> sector_ids, segment_ids, dp_ids;
  for (const auto& s : c.sectors) sector_ids.insert(s.id);
  for (const auto& s : c.segments) segment_ids.insert(s.id);
  for (const auto& d : c.doublepoints) dp_ids.insert(d.id);

  SplitResult res;
  BranchedSurfaceComplex& out = res.complex;
  out.name = c.name;
  const std::string Z1 = same_word ? detail::fresh(Z + "_", sector_ids) : Z;
  const std::string Z2 = same_word ? detail::fresh(Z + "_", sector_ids) : Z;
  res.record.choice = choice;
  for (const auto& s : c.sectors) res.record.preimage[s.id] = {s.id};
  res.record.preimage[Z] = {Z1};

  // Ends of P's and Q's segments on either side of the arc, in Z's direction.
  const SegmentEnd p_before = gP.ends[fwdP ? 0 : 1], p_after = gP.ends[fwdP ? 1 : 0];
  const SegmentEnd q_before = gQ.ends[fwdQ ? 0 : 1], q_after = gQ.ends[fwdQ ? 1 : 0];

  // Z's boundary split into the two sides of the arc.
  auto tail = [](const BoundaryWord& w, std::size_t from_item, std::size_t to_item, BoundaryWord& dst) {
    // items strictly after from_item up to strictly before to_item, cyclic
    const std::size_t n = w.size();
    dst.vertices.push_back(w.vertices[from_item]);
    for (std::size_t j = (from_item + 1) % n; j != to_item; j = (j + 1) % n) {
      dst.edges.push_back(w.edges[j]);
      dst.vertices.push_back(w.vertices[j]);
    }
  };

  if (choice == MoveChoice::Neutral) {
    if (gP.kind != SegmentKind::arc || gQ.kind != SegmentKind::arc)
      throw Error("InvalidLocus", "neutral move needs arcs at entry and exit");
    for (const auto* s : {&XP, &YP, &XQ, &YQ})
      if (*s == Z) throw Error("InvalidLocus", "neutral move needs " + Z + " off the two-sheet sides");
    if (XP == XQ || YP == YQ || XP == YP || XP == YQ || XQ == YP || XQ == YQ)
      throw Error("InvalidLocus", "neutral move needs four distinct sheets at entry and exit");
    const std::string SL = detail::fresh("s", segment_ids), SR = detail::fresh("s", segment_ids);
    out.sectors = c.sectors;
    out.segments.clear();
    for (const auto& g : c.segments)
      if (g.id != gP.id && g.id != gQ.id) out.segments.push_back(g);
    out.segments.push_back({SL, SegmentKind::arc, Z1, XP, YP, {q_before, p_after}});
    out.segments.push_back({SR, SegmentKind::arc, Z2, XP, YP, {p_before, q_after}});
    out.doublepoints = c.doublepoints;

    // Merge the sheets: walk of Q's sheet sector, written as a chain from the
    // after-Q end round to the before-Q end.
    auto merged_chain = [&](const std::string& Qside, SideRole r) {
      const Sector& qs = *c.sector(Qside);
      std::size_t wq = 0, iq = 0;
      for (std::size_t k = 0; k < qs.words.size(); ++k)
        for (std::size_t i = 0; i < qs.words[k].size(); ++i)
          if (!qs.words[k].edges[i].is_free && qs.words[k].edges[i].segment == gQ.id && qs.words[k].edges[i].role == r)
            wq = k, iq = i;
      const auto& w = qs.words[wq];
      const std::size_t n = w.size();
      bool fq = traverses_forward(gQ, r, w.start_vertex(iq));
      Chain ch;
      ch.items.push_back(EdgeItem::seg(SR, r));
      if (fq == fwdQ) {
        for (std::size_t j = (iq + 1) % n; j != iq; j = (j + 1) % n) {
          ch.inner.push_back(w.vertices[(j + n - 1) % n]);
          ch.items.push_back(w.edges[j]);
        }
        ch.inner.push_back(w.vertices[(iq + n - 1) % n]);
      } else {
        for (std::size_t j = (iq + n - 1) % n; j != iq; j = (j + n - 1) % n) {
          ch.inner.push_back(w.vertices[j]);
          ch.items.push_back(w.edges[j]);
        }
        ch.inner.push_back(w.vertices[iq]);
      }
      ch.items.push_back(EdgeItem::seg(SL, r));
      return std::make_pair(ch, wq);
    };
    auto [chX, wqX] = merged_chain(XQ, SideRole::up);
    auto [chY, wqY] = merged_chain(YQ, SideRole::lo);
    detail::replace_item(out.sectors, gP, SideRole::up, fwdP, chX);
    detail::replace_item(out.sectors, gP, SideRole::lo, fwdP, chY);
    auto absorb = [&](const std::string& keep, const std::string& gone, std::size_t used_word) {
      Sector* k = nullptr;
      for (auto& s : out.sectors)
        if (s.id == keep) k = &s;
      const Sector& g = *c.sector(gone);
      k->genus += g.genus;
      for (std::size_t i = 0; i < g.words.size(); ++i)
        if (i != used_word) k->words.push_back(g.words[i]);
      res.record.preimage[gone] = {keep};
    };
    absorb(XP, XQ, wqX);
    absorb(YP, YQ, wqY);
    std::erase_if(out.sectors, [&](const Sector& s) { return s.id == XQ || s.id == YQ; });

    BoundaryWord z1, z2;
    if (same_word) {
      z1.edges.push_back(EdgeItem::seg(SL, SideRole::one));
      tail(wP, iP, iQ, z1);
      z2.edges.push_back(EdgeItem::seg(SR, SideRole::one));
      tail(wP, iQ, iP, z2);
    } else {
      z1.edges.push_back(EdgeItem::seg(SL, SideRole::one));
      tail(wP, iP, iP, z1);
      z1.edges.push_back(EdgeItem::seg(SR, SideRole::one));
      tail(wQ, iQ, iQ, z1);
    }
    std::vector<Sector> secs;
    for (const auto& s : out.sectors) {
      if (s.id != Z) {
        secs.push_back(s);
        continue;
      }
      Sector a{Z1, s.genus, {z1}};
      for (std::size_t k = 0; k < s.words.size(); ++k)
        if (k != locus.entry.word && k != locus.exit.word) a.words.push_back(s.words[k]);
      secs.push_back(a);
      if (same_word) secs.push_back(Sector{Z2, 0, {z2}});
    }
    out.sectors = std::move(secs);
    detail::sync_sides(out);
    if (auto rep = validate(out); !rep.empty())
      throw Error("InvalidLocus", "neutral move not representable here: " + rep.front());
    return res;
  }

  // Over / under.
  const bool over = choice == MoveChoice::Over;
  const std::string L = detail::fresh("L", dp_ids), R = detail::fresh("R", dp_ids);
  const std::string T = detail::fresh("T", sector_ids);
  res.dp_L = res.record.dp_L = L;
  res.dp_R = res.record.dp_R = R;

  std::string sL, sR, q1, q2;
  const std::string mid = detail::fresh("s", segment_ids), tip = detail::fresh("s", segment_ids);
  // slots at L (and R): which piece sits where
  const int slot_q = over ? 0 : 1, slot_s = over ? 1 : 0, slot_mid = over ? 2 : 3, slot_tip = over ? 3 : 2;
  std::vector<Segment> segs;
  for (const auto& g : c.segments)
    if (g.id != gP.id && g.id != gQ.id) segs.push_back(g);
  if (gP.kind == SegmentKind::circle) {
    sL = sR = detail::fresh("s", segment_ids);
    segs.push_back({sL, SegmentKind::arc, Z1, XP, YP, {SegmentEnd::at(L, slot_s), SegmentEnd::at(R, slot_s)}});
  } else {
    sL = detail::fresh("s", segment_ids);
    sR = detail::fresh("s", segment_ids);
    Segment a{sL, SegmentKind::arc, Z1, XP, YP, {}};
    Segment b{sR, SegmentKind::arc, Z2, XP, YP, {}};
    a.ends[fwdP ? 1 : 0] = p_after;
    a.ends[fwdP ? 0 : 1] = SegmentEnd::at(L, slot_s);
    b.ends[fwdP ? 0 : 1] = p_before;
    b.ends[fwdP ? 1 : 0] = SegmentEnd::at(R, slot_s);
    segs.push_back(a);
    segs.push_back(b);
  }
  if (gQ.kind == SegmentKind::circle) {
    q1 = q2 = detail::fresh("s", segment_ids);
    segs.push_back({q1, SegmentKind::arc, Z1, XQ, YQ, {SegmentEnd::at(R, slot_q), SegmentEnd::at(L, slot_q)}});
  } else {
    q1 = detail::fresh("s", segment_ids);
    q2 = detail::fresh("s", segment_ids);
    Segment a{q1, SegmentKind::arc, Z1, XQ, YQ, {}};
    Segment b{q2, SegmentKind::arc, Z2, XQ, YQ, {}};
    a.ends[fwdQ ? 0 : 1] = q_before;
    a.ends[fwdQ ? 1 : 0] = SegmentEnd::at(L, slot_q);
    b.ends[fwdQ ? 1 : 0] = q_after;
    b.ends[fwdQ ? 0 : 1] = SegmentEnd::at(R, slot_q);
    segs.push_back(a);
    segs.push_back(b);
  }
  const std::array<SegmentEnd, 2> lr_mid{SegmentEnd::at(L, slot_mid), SegmentEnd::at(R, slot_mid)};
  const std::array<SegmentEnd, 2> lr_tip{SegmentEnd::at(L, slot_tip), SegmentEnd::at(R, slot_tip)};
  if (over) {
    segs.push_back({mid, SegmentKind::arc, YP, T, YQ, lr_mid});
    segs.push_back({tip, SegmentKind::arc, XQ, XP, T, lr_tip});
  } else {
    segs.push_back({mid, SegmentKind::arc, XP, XQ, T, lr_mid});
    segs.push_back({tip, SegmentKind::arc, YQ, T, YP, lr_tip});
  }

  auto item = [](const std::string& g, SideRole r) { return EdgeItem::seg(g, r); };
  const auto vL = VertexItem::at(L), vR = VertexItem::at(R);
  BoundaryWord z1, z2;
  if (same_word) {
    z1.edges.push_back(item(sL, SideRole::one));
    tail(wP, iP, iQ, z1);
    z1.edges.push_back(item(q1, SideRole::one));
    z1.vertices.push_back(vL);
    z2.edges.push_back(item(q2, SideRole::one));
    tail(wP, iQ, iP, z2);
    z2.edges.push_back(item(sR, SideRole::one));
    z2.vertices.push_back(vR);
  } else {
    z1.edges.push_back(item(sL, SideRole::one));
    tail(wP, iP, iP, z1);
    z1.edges.push_back(item(sR, SideRole::one));
    z1.vertices.push_back(vR);
    z1.edges.push_back(item(q2, SideRole::one));
    tail(wQ, iQ, iQ, z1);
    z1.edges.push_back(item(q1, SideRole::one));
    z1.vertices.push_back(vL);
  }
  for (const auto& s : c.sectors) {
    if (s.id != Z) {
      out.sectors.push_back(s);
      continue;
    }
    Sector a{Z1, s.genus, {z1}};
    for (std::size_t k = 0; k < s.words.size(); ++k)
      if (k != locus.entry.word && k != locus.exit.word) a.words.push_back(s.words[k]);
    out.sectors.push_back(a);
    if (same_word) out.sectors.push_back(Sector{Z2, 0, {z2}});
  }

  // Sheets: the P and Q items become chains through L and R. A sheet may lie
  // in Z itself, so this runs after Z is cut.
  Chain cxp{{item(sR, SideRole::up), over ? item(tip, SideRole::up) : item(mid, SideRole::one), item(sL, SideRole::up)},
            {vR, vL}};
  Chain cyp{{item(sR, SideRole::lo), over ? item(mid, SideRole::one) : item(tip, SideRole::lo), item(sL, SideRole::lo)},
            {vR, vL}};
  Chain cxq{{item(q1, SideRole::up), over ? item(tip, SideRole::one) : item(mid, SideRole::up), item(q2, SideRole::up)},
            {vL, vR}};
  Chain cyq{{item(q1, SideRole::lo), over ? item(mid, SideRole::lo) : item(tip, SideRole::one), item(q2, SideRole::lo)},
            {vL, vR}};
  detail::replace_item(out.sectors, gP, SideRole::up, fwdP, cxp);
  detail::replace_item(out.sectors, gP, SideRole::lo, fwdP, cyp);
  detail::replace_item(out.sectors, gQ, SideRole::up, fwdQ, cxq);
  detail::replace_item(out.sectors, gQ, SideRole::lo, fwdQ, cyq);
  const std::set<std::string> mergeable{sL, q1};
  for (auto& s : out.sectors)
    for (auto& w : s.words) detail::merge_repeats(w, mergeable);

  BoundaryWord tw;
  tw.edges = over ? std::vector<EdgeItem>{item(mid, SideRole::up), item(tip, SideRole::lo)}
                  : std::vector<EdgeItem>{item(tip, SideRole::up), item(mid, SideRole::lo)};
  tw.vertices = {vR, vL};
  out.sectors.push_back(Sector{T, 0, {tw}});
  out.segments = std::move(segs);
  out.doublepoints = c.doublepoints;
  out.doublepoints.push_back({L, over ? Sign::negative : Sign::positive});
  out.doublepoints.push_back({R, over ? Sign::positive : Sign::negative});
  detail::sync_sides(out);
  if (auto rep = validate(out); !rep.empty())
    throw Error("InvariantViolation", std::string(to_string(choice)) + " split failed validation: " + rep.front());
  return res;
}

/// Weight on the original complex: sum over each sector's preimage list.
inline WeightVector pushforward_weights(const BranchedSurfaceComplex& after, const WeightVector& w,
                                        const SplitRecord& rec) {
  for (const auto& [id, v] : w)
    if (!after.sector(id)) throw Error("IndexMismatch", "weight for unknown sector " + id);
  WeightVector out;
  for (const auto& [orig, pre] : rec.preimage) {
    long long s = 0;
    for (const auto& id : pre) {
      if (!after.sector(id)) throw Error("IndexMismatch", "preimage sector " + id + " missing");
      auto it = w.find(id);
      s += it == w.end() ? 0 : it->second;
    }
    out[orig] = s;
  }
  return out;
}

struct SafeSplitResult {
  SplitResult split;
  MoveChoice choice = MoveChoice::Over;
  CriterionVerdict over_verdict;
  std::optional<CriterionVerdict> under_verdict;  // computed only when over is not clean
};

/// Over first; under when over leaves an isc or a negative tisc.
inline SafeSplitResult safe_split(const BranchedSurfaceComplex& c, const SplitLocus& locus) {
  if (!criterion(c).passes) throw Error("PreconditionFailed", "input complex carries an isc or a negative tisc");
  if (is_bad_move(c, locus)) throw Error("BadMove", "branching at the exit is outward for " + locus.sector);
  SafeSplitResult r;
  r.split = split(c, locus, MoveChoice::Over);
  r.over_verdict = criterion(r.split.complex);
  if (r.over_verdict.passes) {
    r.choice = MoveChoice::Over;
    return r;
  }
  SplitResult u = split(c, locus, MoveChoice::Under);
  r.under_verdict = criterion(u.complex);
  if (r.under_verdict->passes) {
    r.split = std::move(u);
    r.choice = MoveChoice::Under;
    return r;
  }
  throw Error("InvariantViolation", "neither the over nor the under split is clean");
}

struct ScheduleStep {
  std::size_t index = 0;
  SplitLocus locus;
  MoveChoice choice = MoveChoice::Over;
  std::string dp_L, dp_R;
  CriterionVerdict verdict;  // of the committed complex
};

struct ScheduleResult {
  BranchedSurfaceComplex complex;
  std::vector<ScheduleStep> trace;
};

/// Error thrown by run_schedule, carrying the failing step.
class ScheduleError : public Error {
 public:
  ScheduleError(std::size_t step, const Error& inner)
      : Error(inner.code(), "step " + std::to_string(step) + ": " + inner.what()), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

inline ScheduleResult run_schedule(const BranchedSurfaceComplex& c, const std::vector<SplitLocus>& schedule) {
  ScheduleResult res{c, {}};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    try {
      auto r = safe_split(res.complex, schedule[i]);
      ScheduleStep st{i, schedule[i], r.choice, r.split.dp_L, r.split.dp_R,
                      r.choice == MoveChoice::Over ? r.over_verdict : *r.under_verdict};
      res.complex = std::move(r.split.complex);
      res.trace.push_back(std::move(st));
    } catch (const Error& e) {
      throw ScheduleError(i, e);
    }
  }
  return res;
}

/// Plan file: one locus per line, `<sector> <entry W:K:P> <exit W:K:P>`.
inline std::vector<SplitLocus> parse_plan(std::string_view text) {
  std::vector<SplitLocus> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> t;
    for (std::string s; ls >> s;) t.push_back(s);
    if (t.empty()) continue;
    if (t.size() != 3) throw Error("usage", "plan line " + std::to_string(lineno) + ": expected sector entry exit");
    out.push_back({t[0], parse_position(t[1]), parse_position(t[2])});
  }
  return out;
}

/// All loci with an inward entry and a distinct exit, in a fixed order.
inline std::vector<SplitLocus> enumerate_loci(const BranchedSurfaceComplex& c) {
  std::vector<SplitLocus> out;
  for (const auto& s : c.sectors) {
    std::vector<Position> ones, all;
    for (std::size_t k = 0; k < s.words.size(); ++k)
      for (std::size_t i = 0; i < s.words[k].size(); ++i) {
        const auto& e = s.words[k].edges[i];
        if (e.is_free) continue;
        all.push_back({k, i, e.role});
        if (e.role == SideRole::one) ones.push_back({k, i, e.role});
      }
    for (const auto& p : ones)
      for (const auto& q : all)
        if (!(p.word == q.word && p.item == q.item)) out.push_back({s.id, p, q});
  }
  return out;
}

}  // namespace bsgate
