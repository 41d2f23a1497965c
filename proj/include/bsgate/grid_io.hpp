#pragma once

// Grid text format: four header lines, then one sample per line.
//
//   kind box|cylinder|annulus [h]
//   bounds lo0 hi0 lo1 hi1 [lo2 hi2]
//   shape n0 n1 [n2]
//   spacing d0 d1 [d2]
//
// Numbers use %.17g. With the `h` flag the f samples are followed by the same
// number of h samples.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bsgate/charts.hpp"

namespace bsgate {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string grid_header(const SlopeGrid& g) {
  std::string s = std::string("kind ") + to_string(g.kind) + (g.h.empty() ? "" : " h") + "\nbounds";
  for (const auto& a : g.axes) s += " " + format_double(a.lo) + " " + format_double(a.hi);
  s += "\nshape";
  for (const auto& a : g.axes) s += " " + std::to_string(a.n);
  s += "\nspacing";
  for (const auto& a : g.axes) s += " " + format_double(a.spacing());
  return s + "\n";
}

inline std::string print_grid(const SlopeGrid& g) {
  std::string s = grid_header(g);
  for (double v : g.f) s += format_double(v) + "\n";
  for (double v : g.h) s += format_double(v) + "\n";
  return s;
}

inline SlopeGrid parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](const char* key) {
    if (!std::getline(in, line)) throw Error("syntax", std::string("grid header missing '") + key + "' line");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) throw Error("syntax", std::string("grid header expected '") + key + "', got '" + k + "'");
    std::vector<std::string> rest;
    for (std::string t; ls >> t;) rest.push_back(t);
    return rest;
  };
  auto kind = next("kind");
  if (kind.empty() || kind.size() > 2 || (kind.size() == 2 && kind[1] != "h"))
    throw Error("syntax", "bad kind line");
  SlopeGrid g;
  if (kind[0] == "box") g.kind = ChartKind::Box;
  else if (kind[0] == "cylinder") g.kind = ChartKind::Cylinder;
  else if (kind[0] == "annulus") g.kind = ChartKind::Annulus;
  else throw Error("syntax", "unknown chart kind '" + kind[0] + "'");
  const bool has_h = kind.size() == 2;
  const std::size_t na = g.kind == ChartKind::Annulus ? 2 : 3;
  auto bounds = next("bounds");
  auto shape = next("shape");
  auto spacing = next("spacing");
  if (bounds.size() != 2 * na || shape.size() != na || spacing.size() != na)
    throw Error("syntax", "header field counts do not match the chart kind");
  auto num = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      used = 0;
    }
    if (used != s.size()) throw Error("syntax", "bad number '" + s + "'");
    return v;
  };
  const std::size_t theta = g.kind == ChartKind::Cylinder ? 1 : 0;
  for (std::size_t a = 0; a < na; ++a) {
    Axis ax;
    ax.lo = num(bounds[2 * a]);
    ax.hi = num(bounds[2 * a + 1]);
    const double n = num(shape[a]);
    if (!(n >= 1) || n != std::floor(n) || n > 1e8) throw Error("syntax", "bad shape entry '" + shape[a] + "'");
    ax.n = static_cast<std::size_t>(n);
    ax.periodic = g.kind != ChartKind::Box && a == theta;
    g.axes.push_back(ax);
  }
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n * (has_h ? 2 : 1); ++i) {
    if (!std::getline(in, line)) throw Error("syntax", "grid has fewer samples than its shape");
    (i < n ? g.f : g.h).push_back(num(line));
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw Error("syntax", "trailing data after samples");
  check_grid(g);
  // The header is canonical: it must be what we would print.
  std::string again = grid_header(g);
  std::string given = text.substr(0, again.size());
  if (given != again) throw Error("syntax", "grid header is not in canonical form");
  return g;
}

inline SlopeGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid(ss.str());
}

}  // namespace bsgate
