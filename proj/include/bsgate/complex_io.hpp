#pragma once

// Text format for branched surface complexes.
//
//   surface <name>
//   sector  <sid> genus <int> bwords <int>
//   bword   <sid> <k> : <item> ( <vtx> <item> )* [<vtx>]
//   segment <gid> <arc|circle> one <sid> up <sid> lo <sid> [ends <end> <end>]
//   dp      <did> sign <+|->
//
// item := seg:<gid>:<one|up|lo> | free:<label>, vtx := v:dp:<did> | v:smooth,
// end := dp:<did>:<slot> | free. A missing closing vertex is smooth.

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsgate/complex.hpp"

namespace bsgate {

/// Parse failure. code() is one of: syntax, duplicate, dangling, arity.
class ParseError : public Error {
 public:
  ParseError(std::string code, int line, int col, const std::string& msg)
      : Error(std::move(code), format(line, col, msg)), line_(line), col_(col) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return col_; }

 private:
  static std::string format(int line, int col, const std::string& msg) {
    if (line <= 0) return msg;
    return "line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg;
  }
  int line_, col_;
};

namespace detail {

struct Token {
  std::string text;
  int col;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(':', start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

inline bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) return false;
  return true;
}

inline std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<SideRole> to_role(const std::string& s) {
  if (s == "one") return SideRole::one;
  if (s == "up") return SideRole::up;
  if (s == "lo") return SideRole::lo;
  return std::nullopt;
}

}  // namespace detail

/// Parses a complex and resolves every cross-reference.
inline BranchedSurfaceComplex parse_complex(std::string_view text) {
  using detail::Token;
  BranchedSurfaceComplex c;
  bool have_name = false;

  struct Pending {
    int line;
    int col;
  };
  std::map<std::string, Pending> sector_at, segment_at, dp_at;
  std::map<std::string, long long> declared_bwords;
  std::map<std::string, std::map<long long, BoundaryWord>> words;
  std::map<std::pair<std::string, long long>, Pending> word_at;
  // references to resolve afterwards: (kind, id, line, col, owner)
  struct Ref {
    std::string kind, id, owner;
    int line, col;
  };
  std::vector<Ref> refs;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    auto fail = [&](const Token& t, const std::string& msg) -> ParseError {
      return ParseError("syntax", lineno, t.col, msg);
    };
    auto need = [&](std::size_t n) {
      if (toks.size() < n)
        throw ParseError("syntax", lineno, toks.back().col + static_cast<int>(toks.back().text.size()),
                         "unexpected end of line after '" + toks.back().text + "'");
    };
    auto ident = [&](const Token& t) {
      if (!detail::valid_ident(t.text)) throw fail(t, "invalid identifier '" + t.text + "'");
      return t.text;
    };
    auto keyword = [&](const Token& t, const char* kw) {
      if (t.text != kw) throw fail(t, std::string("expected '") + kw + "', found '" + t.text + "'");
    };
    const std::string& head = toks[0].text;

    if (head == "surface") {
      need(2);
      if (toks.size() != 2) throw fail(toks[2], "trailing token");
      if (have_name) throw ParseError("duplicate", lineno, toks[0].col, "second surface line");
      c.name = ident(toks[1]);
      have_name = true;
    } else if (head == "sector") {
      need(6);
      if (toks.size() != 6) throw fail(toks[6], "trailing token");
      std::string id = ident(toks[1]);
      keyword(toks[2], "genus");
      auto g = detail::to_int(toks[3].text);
      if (!g || *g < 0) throw fail(toks[3], "genus must be a nonnegative integer");
      keyword(toks[4], "bwords");
      auto b = detail::to_int(toks[5].text);
      if (!b || *b < 0) throw fail(toks[5], "bwords must be a nonnegative integer");
      if (sector_at.count(id)) throw ParseError("duplicate", lineno, toks[1].col, "duplicate sector " + id);
      sector_at[id] = {lineno, toks[1].col};
      declared_bwords[id] = *b;
      c.sectors.push_back(Sector{id, static_cast<int>(*g), {}});
    } else if (head == "bword") {
      need(5);
      std::string sid = ident(toks[1]);
      auto k = detail::to_int(toks[2].text);
      if (!k || *k < 0) throw fail(toks[2], "word index must be a nonnegative integer");
      keyword(toks[3], ":");
      BoundaryWord w;
      bool expect_item = true;
      for (std::size_t i = 4; i < toks.size(); ++i) {
        const Token& t = toks[i];
        auto parts = detail::split_colon(t.text);
        if (expect_item) {
          if (parts.size() == 3 && parts[0] == "seg") {
            auto r = detail::to_role(parts[2]);
            if (!r || !detail::valid_ident(parts[1])) throw fail(t, "bad edge item '" + t.text + "'");
            w.edges.push_back(EdgeItem::seg(parts[1], *r));
            refs.push_back({"segment", parts[1], "sector " + sid, lineno, t.col});
          } else if (parts.size() == 2 && parts[0] == "free" && detail::valid_ident(parts[1])) {
            w.edges.push_back(EdgeItem::free_edge(parts[1]));
          } else {
            throw fail(t, "expected edge item, found '" + t.text + "'");
          }
        } else {
          if (parts.size() == 2 && parts[0] == "v" && parts[1] == "smooth") {
            w.vertices.push_back(VertexItem::smooth());
          } else if (parts.size() == 3 && parts[0] == "v" && parts[1] == "dp" && detail::valid_ident(parts[2])) {
            w.vertices.push_back(VertexItem::at(parts[2]));
            refs.push_back({"dp", parts[2], "sector " + sid, lineno, t.col});
          } else {
            throw fail(t, "expected vertex item, found '" + t.text + "'");
          }
        }
        expect_item = !expect_item;
      }
      if (w.vertices.size() < w.edges.size()) w.vertices.push_back(VertexItem::smooth());
      auto key = std::make_pair(sid, *k);
      if (word_at.count(key))
        throw ParseError("duplicate", lineno, toks[2].col, "duplicate word " + sid + " " + toks[2].text);
      word_at[key] = {lineno, toks[1].col};
      refs.push_back({"sector", sid, "bword", lineno, toks[1].col});
      words[sid][*k] = std::move(w);
    } else if (head == "segment") {
      need(9);
      Segment s;
      s.id = ident(toks[1]);
      if (toks[2].text == "arc") s.kind = SegmentKind::arc;
      else if (toks[2].text == "circle") s.kind = SegmentKind::circle;
      else throw fail(toks[2], "expected arc or circle");
      keyword(toks[3], "one");
      s.one = ident(toks[4]);
      keyword(toks[5], "up");
      s.up = ident(toks[6]);
      keyword(toks[7], "lo");
      s.lo = ident(toks[8]);
      for (int i : {4, 6, 8}) refs.push_back({"sector", toks[i].text, "segment " + s.id, lineno, toks[i].col});
      if (s.kind == SegmentKind::arc) {
        need(12);
        keyword(toks[9], "ends");
        for (int e = 0; e < 2; ++e) {
          const Token& t = toks[10 + e];
          auto parts = detail::split_colon(t.text);
          if (parts.size() == 1 && parts[0] == "free") {
            s.ends[e] = SegmentEnd::free_end();
          } else if (parts.size() == 3 && parts[0] == "dp" && detail::valid_ident(parts[1])) {
            auto slot = detail::to_int(parts[2]);
            if (!slot || *slot < 0 || *slot > 3) throw fail(t, "slot must be 0..3");
            s.ends[e] = SegmentEnd::at(parts[1], static_cast<int>(*slot));
            refs.push_back({"dp", parts[1], "segment " + s.id, lineno, t.col});
          } else {
            throw fail(t, "bad segment end '" + t.text + "'");
          }
        }
        if (toks.size() != 12) throw fail(toks[12], "trailing token");
      } else if (toks.size() != 9) {
        throw fail(toks[9], "a circle has no ends");
      }
      if (segment_at.count(s.id)) throw ParseError("duplicate", lineno, toks[1].col, "duplicate segment " + s.id);
      segment_at[s.id] = {lineno, toks[1].col};
      c.segments.push_back(std::move(s));
    } else if (head == "dp") {
      need(4);
      if (toks.size() != 4) throw fail(toks[4], "trailing token");
      DoublePoint d;
      d.id = ident(toks[1]);
      keyword(toks[2], "sign");
      if (toks[3].text == "+") d.sign = Sign::positive;
      else if (toks[3].text == "-") d.sign = Sign::negative;
      else throw fail(toks[3], "sign must be + or -");
      if (dp_at.count(d.id)) throw ParseError("duplicate", lineno, toks[1].col, "duplicate dp " + d.id);
      dp_at[d.id] = {lineno, toks[1].col};
      c.doublepoints.push_back(d);
    } else {
      throw fail(toks[0], "unknown directive '" + head + "'");
    }
  }

  for (const auto& r : refs) {
    const auto& table = r.kind == "sector" ? sector_at : (r.kind == "segment" ? segment_at : dp_at);
    if (!table.count(r.id))
      throw ParseError("dangling", r.line, r.col, r.owner + " references undeclared " + r.kind + " " + r.id);
  }

  for (auto& sec : c.sectors) {
    auto& ws = words[sec.id];
    long long n = declared_bwords[sec.id];
    for (long long k = 0; k < n; ++k) {
      auto it = ws.find(k);
      if (it == ws.end())
        throw ParseError("arity", sector_at[sec.id].line, sector_at[sec.id].col,
                         "sector " + sec.id + " declares " + std::to_string(n) + " words but word " +
                             std::to_string(k) + " is missing");
      sec.words.push_back(std::move(it->second));
    }
    if (static_cast<long long>(ws.size()) != n) {
      auto key = std::make_pair(sec.id, ws.rbegin()->first);
      throw ParseError("arity", word_at[key].line, word_at[key].col,
                       "sector " + sec.id + " has more words than declared");
    }
  }

  // Four distinct slots per double point.
  std::map<std::string, std::set<int>> slots;
  for (const auto& s : c.segments) {
    if (s.kind != SegmentKind::arc) continue;
    for (const auto& e : s.ends) {
      if (e.is_free) continue;
      if (!slots[e.dp].insert(e.slot).second)
        throw ParseError("arity", segment_at[s.id].line, segment_at[s.id].col,
                         "slot " + std::to_string(e.slot) + " of dp " + e.dp + " used twice");
    }
  }
  for (const auto& d : c.doublepoints)
    if (slots[d.id].size() != 4)
      throw ParseError("arity", dp_at[d.id].line, dp_at[d.id].col,
                       "dp " + d.id + " has " + std::to_string(slots[d.id].size()) + " segment ends, expected 4");
  return c;
}

inline BranchedSurfaceComplex load_complex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_complex(ss.str());
}

inline std::string print_item(const EdgeItem& e) {
  return e.is_free ? "free:" + e.label : "seg:" + e.segment + ":" + to_string(e.role);
}
inline std::string print_vertex(const VertexItem& v) { return v.is_dp ? "v:dp:" + v.dp : "v:smooth"; }
inline std::string print_end(const SegmentEnd& e) {
  return e.is_free ? "free" : "dp:" + e.dp + ":" + std::to_string(e.slot);
}

/// Canonical text; parse_complex(print_complex(c)) == c.
inline std::string print_complex(const BranchedSurfaceComplex& c) {
  std::ostringstream o;
  o << "surface " << (c.name.empty() ? "unnamed" : c.name) << "\n";
  for (const auto& s : c.sectors) o << "sector " << s.id << " genus " << s.genus << " bwords " << s.words.size() << "\n";
  for (const auto& s : c.sectors)
    for (std::size_t k = 0; k < s.words.size(); ++k) {
      const auto& w = s.words[k];
      o << "bword " << s.id << " " << k << " :";
      for (std::size_t i = 0; i < w.size(); ++i) o << " " << print_item(w.edges[i]) << " " << print_vertex(w.vertices[i]);
      o << "\n";
    }
  for (const auto& s : c.segments) {
    o << "segment " << s.id << (s.kind == SegmentKind::arc ? " arc" : " circle") << " one " << s.one << " up " << s.up
      << " lo " << s.lo;
    if (s.kind == SegmentKind::arc) o << " ends " << print_end(s.ends[0]) << " " << print_end(s.ends[1]);
    o << "\n";
  }
  for (const auto& d : c.doublepoints) o << "dp " << d.id << " sign " << to_string(d.sign) << "\n";
  return o.str();
}

using WeightVector = std::map<std::string, long long>;

/// Sidecar weights: lines `w <sid> <int>`; omitted sectors are 0.
inline WeightVector parse_weights(std::string_view text, const BranchedSurfaceComplex& c) {
  WeightVector w;
  for (const auto& s : c.sectors) w[s.id] = 0;
  std::set<std::string> seen;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 3 || toks[0].text != "w")
      throw ParseError("syntax", lineno, toks[0].col, "expected 'w <sid> <int>'");
    if (!c.sector(toks[1].text))
      throw ParseError("dangling", lineno, toks[1].col, "weight for undeclared sector " + toks[1].text);
    if (!seen.insert(toks[1].text).second)
      throw ParseError("duplicate", lineno, toks[1].col, "duplicate weight for " + toks[1].text);
    auto v = detail::to_int(toks[2].text);
    if (!v || *v < 0) throw ParseError("syntax", lineno, toks[2].col, "weight must be a nonnegative integer");
    w[toks[1].text] = *v;
  }
  return w;
}

inline std::string print_weights(const WeightVector& w, const BranchedSurfaceComplex& c) {
  std::ostringstream o;
  for (const auto& s : c.sectors) {
    auto it = w.find(s.id);
    o << "w " << s.id << " " << (it == w.end() ? 0 : it->second) << "\n";
  }
  return o.str();
}

}  // namespace bsgate
