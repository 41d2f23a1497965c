#pragma once

// Combinatorial model of a generic branched surface: sectors with boundary
// words, branch segments (components of the branch locus minus its double
// points) and signed double points.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bsgate {

/// Error carrying a short machine-readable code next to the human text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

enum class SideRole { one, up, lo };
enum class SegmentKind { arc, circle };
enum class Sign { positive, negative };

inline const char* to_string(SideRole r) {
  switch (r) {
    case SideRole::one: return "one";
    case SideRole::up: return "up";
    case SideRole::lo: return "lo";
  }
  return "?";
}
inline const char* to_string(Sign s) { return s == Sign::positive ? "+" : "-"; }

struct EdgeItem {
  bool is_free = false;
  std::string segment;  // when !is_free
  SideRole role = SideRole::one;
  std::string label;  // when is_free

  static EdgeItem seg(std::string id, SideRole r) { return {false, std::move(id), r, {}}; }
  static EdgeItem free_edge(std::string l) { return {true, {}, SideRole::one, std::move(l)}; }
  bool operator==(const EdgeItem&) const = default;
};

struct VertexItem {
  bool is_dp = false;
  std::string dp;

  static VertexItem smooth() { return {}; }
  static VertexItem at(std::string id) { return {true, std::move(id)}; }
  bool operator==(const VertexItem&) const = default;
};

/// Cyclic word e0 v0 e1 v1 ... e(k-1) v(k-1); vertex i sits between edge i
/// and edge i+1 (mod k).
struct BoundaryWord {
  std::vector<EdgeItem> edges;
  std::vector<VertexItem> vertices;

  std::size_t size() const { return edges.size(); }
  const VertexItem& start_vertex(std::size_t i) const {
    return vertices[(i + vertices.size() - 1) % vertices.size()];
  }
  const VertexItem& end_vertex(std::size_t i) const { return vertices[i]; }
  bool operator==(const BoundaryWord&) const = default;
};

struct Sector {
  std::string id;
  int genus = 0;
  std::vector<BoundaryWord> words;

  int euler() const { return 2 - 2 * genus - static_cast<int>(words.size()); }
  bool operator==(const Sector&) const = default;
};

struct SegmentEnd {
  bool is_free = true;
  std::string dp;
  int slot = 0;

  static SegmentEnd free_end() { return {}; }
  static SegmentEnd at(std::string id, int s) { return {false, std::move(id), s}; }
  bool operator==(const SegmentEnd&) const = default;
};

struct Segment {
  std::string id;
  SegmentKind kind = SegmentKind::arc;
  std::string one, up, lo;
  std::array<SegmentEnd, 2> ends{};

  const std::string& side(SideRole r) const {
    return r == SideRole::one ? one : (r == SideRole::up ? up : lo);
  }
  std::string& side(SideRole r) {
    return r == SideRole::one ? one : (r == SideRole::up ? up : lo);
  }
  bool operator==(const Segment&) const = default;
};

struct DoublePoint {
  std::string id;
  Sign sign = Sign::positive;
  bool operator==(const DoublePoint&) const = default;
};

struct BranchedSurfaceComplex {
  std::string name;
  std::vector<Sector> sectors;
  std::vector<Segment> segments;
  std::vector<DoublePoint> doublepoints;

  bool operator==(const BranchedSurfaceComplex&) const = default;

  std::optional<std::size_t> sector_index(const std::string& id) const {
    for (std::size_t i = 0; i < sectors.size(); ++i)
      if (sectors[i].id == id) return i;
    return std::nullopt;
  }
  const Segment* segment(const std::string& id) const {
    for (const auto& s : segments)
      if (s.id == id) return &s;
    return nullptr;
  }
  const DoublePoint* doublepoint(const std::string& id) const {
    for (const auto& d : doublepoints)
      if (d.id == id) return &d;
    return nullptr;
  }
  const Sector* sector(const std::string& id) const {
    auto i = sector_index(id);
    return i ? &sectors[*i] : nullptr;
  }
};

// ---------------------------------------------------------------------------
// Traversal direction of a segment edge inside a boundary word.
//
// An arc whose two ends carry different labels (distinct double points, or a
// double point and a free end) is oriented by the vertex items next to it.
// Circles, arcs with both ends free and arcs with both ends at the same
// double point follow the fixed convention: up/lo sides run end0 -> end1 and
// the one-sheet side runs end1 -> end0.

inline std::string end_label(const SegmentEnd& e) { return e.is_free ? std::string{} : e.dp; }
inline std::string vertex_label(const VertexItem& v) { return v.is_dp ? v.dp : std::string{}; }

inline bool direction_is_conventional(const Segment& s) {
  return s.kind == SegmentKind::circle || end_label(s.ends[0]) == end_label(s.ends[1]);
}

/// True when the word traverses the segment from end0 to end1.
inline bool traverses_forward(const Segment& s, SideRole role, const VertexItem& start) {
  if (direction_is_conventional(s)) return role != SideRole::one;
  return vertex_label(start) == end_label(s.ends[0]);
}

/// Location of one edge item inside a sector's boundary words.
struct ItemRef {
  std::size_t sector = 0;
  std::size_t word = 0;
  std::size_t item = 0;
  auto operator<=>(const ItemRef&) const = default;
};

/// Map (segment id, side role) -> position of its edge item. Items that occur
/// more than once keep the first position; validate() reports duplicates.
inline std::map<std::pair<std::string, SideRole>, ItemRef> side_items(
    const BranchedSurfaceComplex& c) {
  std::map<std::pair<std::string, SideRole>, ItemRef> out;
  for (std::size_t s = 0; s < c.sectors.size(); ++s)
    for (std::size_t k = 0; k < c.sectors[s].words.size(); ++k) {
      const auto& w = c.sectors[s].words[k];
      for (std::size_t i = 0; i < w.size(); ++i)
        if (!w.edges[i].is_free) out.try_emplace({w.edges[i].segment, w.edges[i].role}, ItemRef{s, k, i});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Double point roles.
//
// Near a double point two branch curves cross. Their four germs, in cyclic
// slot order G1 G2 G3 G4 (G1/G3 on one curve, G2/G4 on the other), carry
//   G1 = (z; up x, lo y)   G2 = (z; up w, lo v)
//   G3 = (v; up u, lo y)   G4 = (x; up w, lo u)
// giving the branch inequalities z>=x+y, z>=w+v, v>=u+y, x>=w+u. The labelling
// with the opposite stacking is the same picture after (x<->v, y<->w).

enum class Role { u = 0, v, w, x, y, z };
inline constexpr std::array<Role, 6> kRoles{Role::u, Role::v, Role::w, Role::x, Role::y, Role::z};
inline const char* to_string(Role r) {
  static constexpr const char* names[] = {"u", "v", "w", "x", "y", "z"};
  return names[static_cast<int>(r)];
}

/// One segment end attached to a double point.
struct Germ {
  std::string segment;
  int end = 0;  // 0 or 1
  std::string one, up, lo;
};

struct RoleAssignment {
  std::array<std::string, 6> sector;  // indexed by Role
  std::array<int, 4> germ_slot{};     // slot of G1..G4

  const std::string& operator[](Role r) const { return sector[static_cast<int>(r)]; }
  bool operator==(const RoleAssignment&) const = default;
};

/// Germ pattern: (one, up, lo) roles per germ G1..G4.
inline constexpr std::array<std::array<Role, 3>, 4> kGermPattern{{
    {Role::z, Role::x, Role::y},
    {Role::z, Role::w, Role::v},
    {Role::v, Role::u, Role::y},
    {Role::x, Role::w, Role::u},
}};

/// Corners of the six quadrant sheets: pairs of (germ index 0..3, side).
struct CornerSpec {
  Role role;
  int germ_a;
  SideRole side_a;
  int germ_b;
  SideRole side_b;
  int angle;  // quarter turns swept by the sheet at the double point
};
inline constexpr std::array<CornerSpec, 6> kCorners{{
    {Role::z, 0, SideRole::one, 1, SideRole::one, 1},
    {Role::x, 0, SideRole::up, 3, SideRole::one, 1},
    {Role::v, 1, SideRole::lo, 2, SideRole::one, 1},
    {Role::u, 2, SideRole::up, 3, SideRole::lo, 1},
    {Role::y, 0, SideRole::lo, 2, SideRole::lo, 2},
    {Role::w, 1, SideRole::up, 3, SideRole::up, 2},
}};

/// Slots of G1..G4 for the eight dihedral placements, in a fixed order.
inline std::array<std::array<int, 4>, 8> dihedral_placements() {
  std::array<std::array<int, 4>, 8> out{};
  int n = 0;
  for (int d : {1, 3})
    for (int s = 0; s < 4; ++s)
      out[n++] = {s, (s + d) % 4, (s + 2) % 4, (s + 3 * d) % 4};
  return out;
}

/// All role assignments consistent with the germ sector triples (by slot).
inline std::vector<RoleAssignment> role_candidates(const std::array<Germ, 4>& by_slot) {
  std::vector<RoleAssignment> out;
  for (const auto& place : dihedral_placements()) {
    std::array<std::optional<std::string>, 6> got;
    bool ok = true;
    for (int g = 0; g < 4 && ok; ++g) {
      const Germ& germ = by_slot[place[g]];
      const std::array<const std::string*, 3> sides{&germ.one, &germ.up, &germ.lo};
      for (int k = 0; k < 3 && ok; ++k) {
        auto& slot = got[static_cast<int>(kGermPattern[g][k])];
        if (!slot) slot = *sides[k];
        else if (*slot != *sides[k]) ok = false;
      }
    }
    if (!ok) continue;
    RoleAssignment ra;
    for (int r = 0; r < 6; ++r) ra.sector[r] = *got[r];
    ra.germ_slot = place;
    if (std::find(out.begin(), out.end(), ra) == out.end()) out.push_back(ra);
  }
  return out;
}

/// Corner form z + u - x - v as sector -> coefficient (zero entries dropped).
inline std::map<std::string, long> corner_form(const RoleAssignment& ra) {
  std::map<std::string, long> f;
  f[ra[Role::z]] += 1;
  f[ra[Role::u]] += 1;
  f[ra[Role::x]] -= 1;
  f[ra[Role::v]] -= 1;
  std::erase_if(f, [](const auto& kv) { return kv.second == 0; });
  return f;
}

/// The four germs attached to a double point, by slot; nullopt on bad arity.
inline std::optional<std::array<Germ, 4>> germs_at(const BranchedSurfaceComplex& c,
                                                   const std::string& dp) {
  std::array<std::optional<Germ>, 4> by_slot;
  for (const auto& s : c.segments) {
    if (s.kind != SegmentKind::arc) continue;
    for (int e = 0; e < 2; ++e) {
      const auto& end = s.ends[e];
      if (end.is_free || end.dp != dp) continue;
      if (end.slot < 0 || end.slot > 3 || by_slot[end.slot]) return std::nullopt;
      by_slot[end.slot] = Germ{s.id, e, s.one, s.up, s.lo};
    }
  }
  std::array<Germ, 4> out;
  for (int i = 0; i < 4; ++i) {
    if (!by_slot[i]) return std::nullopt;
    out[i] = *by_slot[i];
  }
  return out;
}

/// A corner of a boundary word at a double point, as two (slot, side) pairs.
using SlotSide = std::pair<int, SideRole>;
using WordCorner = std::pair<SlotSide, SlotSide>;

inline WordCorner make_corner(SlotSide a, SlotSide b) {
  return a < b ? WordCorner{a, b} : WordCorner{b, a};
}

/// Slot at which an edge item's word-start (at_start) or word-end meets `dp`.
inline std::optional<int> item_slot(const Segment& s, SideRole role, const VertexItem& start,
                                    bool at_start) {
  if (s.kind != SegmentKind::arc) return std::nullopt;
  bool fwd = traverses_forward(s, role, start);
  const SegmentEnd& e = s.ends[(fwd == at_start) ? 0 : 1];
  if (e.is_free) return std::nullopt;
  return e.slot;
}

/// Word corners at `dp`, collected from every boundary word. Returns nullopt if
/// some corner at `dp` is not flanked by two germs of `dp`.
inline std::optional<std::vector<WordCorner>> word_corners_at(const BranchedSurfaceComplex& c,
                                                              const std::string& dp) {
  std::vector<WordCorner> out;
  for (const auto& sec : c.sectors)
    for (const auto& w : sec.words) {
      const std::size_t k = w.size();
      for (std::size_t i = 0; i < k; ++i) {
        if (!w.vertices[i].is_dp || w.vertices[i].dp != dp) continue;
        const auto& a = w.edges[i];
        const auto& b = w.edges[(i + 1) % k];
        if (a.is_free || b.is_free) return std::nullopt;
        const Segment* sa = c.segment(a.segment);
        const Segment* sb = c.segment(b.segment);
        if (!sa || !sb) return std::nullopt;
        auto slot_a = item_slot(*sa, a.role, w.start_vertex(i), false);
        auto slot_b = item_slot(*sb, b.role, w.start_vertex((i + 1) % k), true);
        if (!slot_a || !slot_b) return std::nullopt;
        if (sa->ends[0].dp != dp && sa->ends[1].dp != dp) return std::nullopt;
        out.push_back(make_corner({*slot_a, a.role}, {*slot_b, b.role}));
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<WordCorner> expected_corners(const RoleAssignment& ra) {
  std::vector<WordCorner> out;
  for (const auto& cs : kCorners)
    out.push_back(make_corner({ra.germ_slot[cs.germ_a], cs.side_a}, {ra.germ_slot[cs.germ_b], cs.side_b}));
  std::sort(out.begin(), out.end());
  return out;
}

/// Derives the roles at a double point from its germs and from the corners the
/// boundary words turn there. Throws Error{"NoConsistentRoles"} when no
/// placement fits, or when fitting placements disagree on the corner form.
inline RoleAssignment derive_roles(const BranchedSurfaceComplex& c, const std::string& dp) {
  auto germs = germs_at(c, dp);
  if (!germs) throw Error("NoConsistentRoles", "double point " + dp + " does not have four segment ends");
  auto cands = role_candidates(*germs);
  auto corners = word_corners_at(c, dp);
  std::vector<RoleAssignment> fitting;
  for (const auto& ra : cands)
    if (corners && *corners == expected_corners(ra)) fitting.push_back(ra);
  if (fitting.empty())
    throw Error("NoConsistentRoles", "role derivation failed at dp:" + dp);
  const auto form = corner_form(fitting.front());
  for (const auto& ra : fitting)
    if (corner_form(ra) != form)
      throw Error("NoConsistentRoles", "role derivation ambiguous at dp:" + dp);
  return fitting.front();
}

// ---------------------------------------------------------------------------

using ValidationReport = std::vector<std::string>;

/// Checks every structural invariant; empty report on success.
inline ValidationReport validate(const BranchedSurfaceComplex& c) {
  ValidationReport rep;
  auto note = [&](std::string s) { rep.push_back(std::move(s)); };

  std::set<std::string> ids;
  for (const auto& s : c.sectors)
    if (!ids.insert("sector:" + s.id).second) note("duplicate sector " + s.id);
  for (const auto& s : c.segments)
    if (!ids.insert("segment:" + s.id).second) note("duplicate segment " + s.id);
  for (const auto& d : c.doublepoints)
    if (!ids.insert("dp:" + d.id).second) note("duplicate dp " + d.id);

  bool refs_ok = true;
  for (const auto& sec : c.sectors) {
    if (sec.genus < 0) note("negative genus on sector " + sec.id);
    for (std::size_t k = 0; k < sec.words.size(); ++k) {
      const auto& w = sec.words[k];
      if (w.edges.empty() || w.vertices.size() != w.edges.size()) {
        note("malformed boundary word " + sec.id + ":" + std::to_string(k));
        refs_ok = false;
        continue;
      }
      for (const auto& e : w.edges)
        if (!e.is_free && !c.segment(e.segment)) {
          note("dangling segment " + e.segment + " in sector " + sec.id);
          refs_ok = false;
        }
      for (const auto& v : w.vertices)
        if (v.is_dp && !c.doublepoint(v.dp)) {
          note("dangling dp " + v.dp + " in sector " + sec.id);
          refs_ok = false;
        }
    }
  }
  for (const auto& s : c.segments) {
    for (auto r : {SideRole::one, SideRole::up, SideRole::lo})
      if (!c.sector(s.side(r))) {
        note("dangling sector " + s.side(r) + " in segment " + s.id);
        refs_ok = false;
      }
    if (s.kind == SegmentKind::arc)
      for (const auto& e : s.ends)
        if (!e.is_free) {
          if (!c.doublepoint(e.dp)) {
            note("dangling dp " + e.dp + " in segment " + s.id);
            refs_ok = false;
          }
          if (e.slot < 0 || e.slot > 3) note("bad slot on segment " + s.id);
        }
  }
  if (!refs_ok) return rep;

  // Every (segment, side) appears exactly once, inside the sector named there.
  std::map<std::pair<std::string, SideRole>, int> seen;
  for (const auto& sec : c.sectors)
    for (std::size_t k = 0; k < sec.words.size(); ++k) {
      const auto& w = sec.words[k];
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& e = w.edges[i];
        if (e.is_free) continue;
        const Segment& seg = *c.segment(e.segment);
        ++seen[{e.segment, e.role}];
        if (seg.side(e.role) != sec.id)
          note("segment " + seg.id + " side " + to_string(e.role) + " listed in sector " + sec.id +
               " but belongs to " + seg.side(e.role));
        if (seg.kind == SegmentKind::circle) {
          if (w.size() != 1 || w.vertices[0].is_dp)
            note("circle " + seg.id + " must form a whole boundary word of " + sec.id);
          continue;
        }
        // Vertex items next to an arc must match its ends.
        bool fwd = traverses_forward(seg, e.role, w.start_vertex(i));
        const SegmentEnd& s_end = seg.ends[fwd ? 0 : 1];
        const SegmentEnd& t_end = seg.ends[fwd ? 1 : 0];
        if (vertex_label(w.start_vertex(i)) != end_label(s_end) ||
            vertex_label(w.end_vertex(i)) != end_label(t_end))
          note("vertex items around " + seg.id + ":" + to_string(e.role) + " in " + sec.id +
               " do not match its ends");
      }
    }
  for (const auto& s : c.segments)
    for (auto r : {SideRole::one, SideRole::up, SideRole::lo}) {
      int n = seen[{s.id, r}];
      if (n != 1)
        note("segment " + s.id + " side " + to_string(r) + " appears " + std::to_string(n) +
             " times in boundary words");
    }

  for (const auto& d : c.doublepoints) {
    if (!germs_at(c, d.id)) {
      note("dp:" + d.id + " does not have exactly four segment ends");
      continue;
    }
    try {
      (void)derive_roles(c, d.id);
    } catch (const Error&) {
      note("role derivation failed at dp:" + d.id);
    }
  }
  return rep;
}

}  // namespace bsgate
