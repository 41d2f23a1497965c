#pragma once

// Sampled slope functions on box, cylinder and annulus charts.
//
// Box: the plane field is ker(dz + f dx); it is a confoliation where
// df/dy <= 0 and contact where df/dy < 0. Cylinder: ker(dz + f dtheta) with
// f = r^2 h; confoliation where df/dr <= 0, contact where df/dr < 0 off the
// axis and where h < 0 on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bsgate/complex.hpp"

namespace bsgate {

enum class ChartKind { Box, Cylinder, Annulus };

inline const char* to_string(ChartKind k) {
  switch (k) {
    case ChartKind::Box: return "box";
    case ChartKind::Cylinder: return "cylinder";
    case ChartKind::Annulus: return "annulus";
  }
  return "?";
}

struct Axis {
  double lo = 0, hi = 1;
  std::size_t n = 2;
  bool periodic = false;  // samples lo + i (hi - lo) / n, no duplicate endpoint

  double spacing() const { return periodic ? (hi - lo) / static_cast<double>(n) : (hi - lo) / static_cast<double>(n - 1); }
  double at(std::size_t i) const {
    if (!periodic && i + 1 == n) return hi;
    return lo + static_cast<double>(i) * spacing();
  }
  bool operator==(const Axis&) const = default;
};

/// Row-major samples; the last axis varies fastest.
/// Box axes x, y, z. Cylinder axes r, theta, z. Annulus axes theta, z.
struct SlopeGrid {
  ChartKind kind = ChartKind::Box;
  std::vector<Axis> axes;
  std::vector<double> f;
  std::vector<double> h;  // cylinder only; empty when absent

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.n;
    return s;
  }
  std::size_t stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < axes.size(); ++a) s *= axes[a].n;
    return s;
  }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * axes[1].n + j) * axes[2].n + k;
  }
  std::size_t index(std::size_t i, std::size_t j) const { return i * axes[1].n + j; }
  bool operator==(const SlopeGrid&) const = default;
};

inline void check_grid(const SlopeGrid& g) {
  const std::size_t want = g.kind == ChartKind::Annulus ? 2 : 3;
  if (g.axes.size() != want) throw Error("MalformedGrid", std::string(to_string(g.kind)) + " grid needs " +
                                                              std::to_string(want) + " axes");
  for (std::size_t a = 0; a < g.axes.size(); ++a) {
    const auto& ax = g.axes[a];
    if (ax.n < (ax.periodic ? 1u : 2u) || !(ax.hi > ax.lo) || !(ax.spacing() > 0))
      throw Error("MalformedGrid", "axis " + std::to_string(a) + " has no positive spacing");
  }
  const std::size_t theta = g.kind == ChartKind::Cylinder ? 1 : 0;
  for (std::size_t a = 0; a < g.axes.size(); ++a) {
    bool should = g.kind != ChartKind::Box && a == theta;
    if (g.axes[a].periodic != should) throw Error("MalformedGrid", "axis " + std::to_string(a) + " periodicity");
  }
  if (g.f.size() != g.size()) throw Error("MalformedGrid", "value count does not match the shape");
  if (!g.h.empty() && (g.kind != ChartKind::Cylinder || g.h.size() != g.size()))
    throw Error("MalformedGrid", "h samples need a cylinder grid of the same shape");
}

inline SlopeGrid make_box(std::size_t nx, std::size_t ny, std::size_t nz) {
  return {ChartKind::Box, {{-1, 1, nx, false}, {-1, 1, ny, false}, {-1, 1, nz, false}}, std::vector<double>(nx * ny * nz, 0.0), {}};
}

inline SlopeGrid make_cylinder(double R, std::size_t nr, std::size_t ntheta, std::size_t nz) {
  const std::size_t n = nr * ntheta * nz;
  return {ChartKind::Cylinder,
          {{0, R, nr, false}, {0, 2 * std::numbers::pi, ntheta, true}, {-1, 1, nz, false}},
          std::vector<double>(n, 0.0),
          std::vector<double>(n, 0.0)};
}

inline SlopeGrid make_annulus(std::size_t ntheta, std::size_t nz) {
  return {ChartKind::Annulus, {{0, 2 * std::numbers::pi, ntheta, true}, {-1, 1, nz, false}},
          std::vector<double>(ntheta * nz, 0.0), {}};
}

/// Samples fn(a0, a1, a2) (or fn(a0, a1) via the 3-argument form with a2 = 0
/// for annuli) into dst.
inline void fill(SlopeGrid& g, std::vector<double>& dst, const std::function<double(double, double, double)>& fn) {
  dst.assign(g.size(), 0.0);
  if (g.axes.size() == 2) {
    for (std::size_t i = 0; i < g.axes[0].n; ++i)
      for (std::size_t j = 0; j < g.axes[1].n; ++j) dst[g.index(i, j)] = fn(g.axes[0].at(i), g.axes[1].at(j), 0.0);
    return;
  }
  for (std::size_t i = 0; i < g.axes[0].n; ++i)
    for (std::size_t j = 0; j < g.axes[1].n; ++j)
      for (std::size_t k = 0; k < g.axes[2].n; ++k)
        dst[g.index(i, j, k)] = fn(g.axes[0].at(i), g.axes[1].at(j), g.axes[2].at(k));
}

/// Central differences along one axis; second-order one-sided at the ends of
/// closed axes, wrapped on periodic axes.
inline std::vector<double> derivative(const SlopeGrid& g, const std::vector<double>& v, std::size_t axis) {
  const auto& ax = g.axes[axis];
  const std::size_t n = ax.n, st = g.stride(axis);
  const double h = ax.spacing();
  if (!ax.periodic && n < 3)
    throw Error("DegenerateGrid", "axis " + std::to_string(axis) + " needs at least 3 samples");
  std::vector<double> d(v.size());
  for (std::size_t base = 0; base < v.size(); ++base) {
    const std::size_t i = (base / st) % n;
    const std::size_t b0 = base - i * st;
    auto at = [&](std::size_t m) { return v[b0 + m * st]; };
    if (ax.periodic) {
      d[base] = (at((i + 1) % n) - at((i + n - 1) % n)) / (2 * h);
    } else if (i == 0) {
      d[base] = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
    } else if (i + 1 == n) {
      d[base] = (3 * at(n - 1) - 4 * at(n - 2) + at(n - 3)) / (2 * h);
    } else {
      d[base] = (at(i + 1) - at(i - 1)) / (2 * h);
    }
  }
  return d;
}

struct ChartReport {
  bool is_confoliation = false;
  std::vector<std::uint8_t> contact_mask;  // per sample
  double max_violation = 0;
  double tol = 1e-9;
  double identity_residual = 0;  // cylinder: max |f - r^2 h|
  std::vector<double> derivative;  // df/dy (box) or df/dr (cylinder)
};

inline ChartReport check_box(const SlopeGrid& g, double tol = 1e-9) {
  check_grid(g);
  if (g.kind != ChartKind::Box) throw Error("MalformedGrid", "check_box needs a box grid");
  ChartReport r;
  r.tol = tol;
  r.derivative = derivative(g, g.f, 1);
  r.contact_mask.resize(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    r.max_violation = std::max(r.max_violation, r.derivative[c]);
    r.contact_mask[c] = r.derivative[c] < -tol;
  }
  r.is_confoliation = r.max_violation <= tol;
  return r;
}

/// Coefficient of dx^dy^dz in w^dw for w = dz + f dx, from the components of
/// w and a separately coded difference stencil.
inline std::vector<double> contact_oracle_box(const SlopeGrid& g) {
  check_grid(g);
  if (g.kind != ChartKind::Box) throw Error("MalformedGrid", "contact_oracle_box needs a box grid");
  for (const auto& ax : g.axes)
    if (ax.n < 3) throw Error("DegenerateGrid", "box axes need at least 3 samples");
  const std::size_t N = g.size();
  const std::vector<double> P = g.f, Q(N, 0.0), R(N, 1.0);
  // d(F)/d(axis) at cell c
  auto partial = [&](const std::vector<double>& F, std::size_t axis, std::size_t c) {
    const std::size_t n = g.axes[axis].n, st = g.stride(axis);
    const std::size_t i = (c / st) % n;
    const double h = g.axes[axis].spacing();
    const std::size_t lo = i == 0 ? 0 : (i + 1 == n ? i - 2 : i - 1);
    const double a = F[c - i * st + lo * st], b = F[c - i * st + (lo + 1) * st], d = F[c - i * st + (lo + 2) * st];
    const double t = static_cast<double>(i) - static_cast<double>(lo);  // 0, 1 or 2
    // derivative at offset t of the parabola through (0,a), (1,b), (2,d)
    return ((b - a) + (t - 0.5) * (d - 2 * b + a)) / h;
  };
  std::vector<double> out(N);
  for (std::size_t c = 0; c < N; ++c) {
    // w . curl w
    double cx = partial(R, 1, c) - partial(Q, 2, c);
    double cy = partial(P, 2, c) - partial(R, 0, c);
    double cz = partial(Q, 0, c) - partial(P, 1, c);
    out[c] = P[c] * cx + Q[c] * cy + R[c] * cz;
  }
  return out;
}

inline ChartReport check_cylinder(const SlopeGrid& g, double tol = 1e-9) {
  check_grid(g);
  if (g.kind != ChartKind::Cylinder) throw Error("MalformedGrid", "check_cylinder needs a cylinder grid");
  if (g.h.empty()) throw Error("MissingH", "cylinder grid carries no h samples");
  ChartReport r;
  r.tol = tol;
  r.derivative = derivative(g, g.f, 0);
  r.contact_mask.resize(g.size());
  const auto& ra = g.axes[0];
  const std::size_t st = g.stride(0);
  double worst_b = 0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const std::size_t i = c / st;
    const double rad = ra.at(i);
    r.identity_residual = std::max(r.identity_residual, std::abs(g.f[c] - rad * rad * g.h[c]));
    if (i == 0) {
      r.contact_mask[c] = g.h[c] < -tol;
    } else {
      worst_b = std::max(worst_b, r.derivative[c]);
      r.contact_mask[c] = r.derivative[c] < -tol;
    }
  }
  r.max_violation = std::max(worst_b, r.identity_residual);
  r.is_confoliation = r.max_violation <= tol;
  return r;
}

namespace detail {

// 3t^2 - 2t^3 on [0, 1], clamped outside.
inline double smoothstep(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * (3 - 2 * t);
}

inline std::string cell_name(const SlopeGrid& g, std::size_t c) {
  std::string s = "(";
  for (std::size_t a = 0; a < g.axes.size(); ++a) {
    if (a) s += ",";
    s += std::to_string((c / g.stride(a)) % g.axes[a].n);
  }
  return s + ")";
}

inline bool z_interior(const SlopeGrid& g, std::size_t c) {
  const std::size_t za = g.axes.size() - 1;
  const std::size_t k = c % g.axes[za].n;
  return k != 0 && k + 1 != g.axes[za].n;
}

inline double z_window(const SlopeGrid& g, std::size_t c) {
  if (!z_interior(g, c)) return 0;
  const double z = g.axes.back().at(c % g.axes.back().n);
  return 1 - z * z;
}

}  // namespace detail

/// Samples that purify_box leaves untouched.
inline bool purify_box_fixed(const SlopeGrid& g, std::size_t c, double y1, double delta) {
  const double x = g.axes[0].at(c / g.stride(0)), y = g.axes[1].at((c / g.stride(1)) % g.axes[1].n);
  return std::abs(x) >= 1 - delta || y >= y1 || !detail::z_interior(g, c);
}

/// Samples where purify_box promises contact.
inline bool purify_box_target(const SlopeGrid& g, std::size_t c, double delta) {
  const double x = g.axes[0].at(c / g.stride(0));
  return std::abs(x) < 1 - delta && detail::z_interior(g, c);
}

/// Makes a box confoliation contact on {|x| < 1-delta, |z| < 1}. The input must
/// be contact on {y > y0, |z| < 1}; samples with |x| >= 1-delta, y >= y1 or
/// |z| = 1 are copied unchanged. Below y1 the slope is blended toward
/// f(x, y1, z) + (y1 - y), windowed in x and z.
inline SlopeGrid purify_box(const SlopeGrid& g, double y0, double y1, double delta, double tol = 1e-9) {
  if (!(0 < y0 && y0 < y1 && y1 < 1)) throw Error("PreconditionFailed", "need 0 < y0 < y1 < 1");
  if (!(delta > 0 && delta < 1)) throw Error("PreconditionFailed", "need 0 < delta < 1");
  auto rep = check_box(g, tol);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (rep.derivative[c] > tol)
      throw Error("PreconditionFailed", "not a confoliation at cell " + detail::cell_name(g, c));
    const double y = g.axes[1].at((c / g.stride(1)) % g.axes[1].n);
    if (y > y0 && detail::z_interior(g, c) && !rep.contact_mask[c])
      throw Error("PreconditionFailed", "not contact at cell " + detail::cell_name(g, c));
  }
  bool pure = true;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (purify_box_target(g, c, delta) && !rep.contact_mask[c]) pure = false;
  if (pure) return g;

  SlopeGrid out = g;
  const auto& ya = g.axes[1];
  for (std::size_t i = 0; i < g.axes[0].n; ++i) {
    const double x = g.axes[0].at(i);
    const double wx = detail::smoothstep(((1 - delta) - std::abs(x)) / delta);
    for (std::size_t k = 0; k < g.axes[2].n; ++k) {
      const double w = wx * detail::z_window(g, g.index(i, 0, k));
      if (w == 0) continue;
      // f(x, y1, z) by linear interpolation along y
      const double pos = (y1 - ya.lo) / ya.spacing();
      const std::size_t j0 = std::min(static_cast<std::size_t>(pos), ya.n - 2);
      const double t = pos - static_cast<double>(j0);
      const double f1 = (1 - t) * g.f[g.index(i, j0, k)] + t * g.f[g.index(i, j0 + 1, k)];
      for (std::size_t j = 0; j < ya.n; ++j) {
        const double y = ya.at(j);
        if (y >= y1) break;
        const std::size_t c = g.index(i, j, k);
        const double target = f1 + (y1 - y);
        out.f[c] = g.f[c] + w * (target - g.f[c]);
      }
    }
  }
  return out;
}

enum class PurifyMode { InnerContact, OuterContact };

/// Radial radius separating the kept part from the rebuilt part.
inline double purify_cylinder_split(const SlopeGrid& g, double r0, PurifyMode mode) {
  return mode == PurifyMode::InnerContact ? r0 / 2 : (r0 + g.axes[0].hi) / 2;
}

/// Samples that purify_cylinder leaves untouched.
inline bool purify_cylinder_fixed(const SlopeGrid& g, std::size_t c, double r0, PurifyMode mode) {
  const std::size_t i = c / g.stride(0);
  const double r = g.axes[0].at(i), r1 = purify_cylinder_split(g, r0, mode);
  if (!detail::z_interior(g, c)) return true;
  if (mode == PurifyMode::InnerContact) return r <= r1 || i + 1 == g.axes[0].n;
  return r >= r1;
}

/// Makes a cylinder confoliation contact on {|z| < 1}, axis included. Inner
/// mode keeps r <= r0/2 and interpolates down to the values at r = R; outer
/// mode keeps r >= (r0 + R)/2 and rebuilds the core from r^2 f(r1)/r1^2.
inline SlopeGrid purify_cylinder(const SlopeGrid& g, double r0, PurifyMode mode, double tol = 1e-9) {
  const auto& ra = g.axes.at(0);
  if (!(r0 > 0 && r0 < ra.hi)) throw Error("PreconditionFailed", "need 0 < r0 < R");
  auto rep = check_cylinder(g, tol);
  if (!rep.is_confoliation)
    throw Error("PreconditionFailed", "input is not a confoliation (violation " + std::to_string(rep.max_violation) + ")");
  const std::size_t st = g.stride(0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!detail::z_interior(g, c)) continue;
    const double r = ra.at(c / st);
    bool need = mode == PurifyMode::InnerContact ? r < r0 : r > r0;
    if (need && !rep.contact_mask[c])
      throw Error("PreconditionFailed", "not contact at cell " + detail::cell_name(g, c));
  }
  bool pure = true;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (detail::z_interior(g, c) && !rep.contact_mask[c]) pure = false;
  if (pure) return g;

  const double r1 = purify_cylinder_split(g, r0, mode);
  const double R = ra.hi;
  SlopeGrid out = g;
  const std::size_t nth = g.axes[1].n, nz = g.axes[2].n;
  // f at radius r1 by linear interpolation
  auto f_at = [&](double r, std::size_t j, std::size_t k) {
    const double pos = r / ra.spacing();
    const std::size_t i0 = std::min(static_cast<std::size_t>(pos), ra.n - 2);
    const double t = pos - static_cast<double>(i0);
    return (1 - t) * g.f[g.index(i0, j, k)] + t * g.f[g.index(i0 + 1, j, k)];
  };
  for (std::size_t j = 0; j < nth; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const double w = detail::z_window(g, g.index(0, j, k));
      if (w == 0) continue;
      const double f1 = f_at(r1, j, k);
      const double fR = g.f[g.index(ra.n - 1, j, k)];
      for (std::size_t i = 0; i < ra.n; ++i) {
        const std::size_t c = g.index(i, j, k);
        if (purify_cylinder_fixed(g, c, r0, mode)) continue;
        const double r = ra.at(i);
        if (mode == PurifyMode::InnerContact) {
          const double target = f1 + (fR - f1) * (r - r1) / (R - r1);
          out.f[c] = g.f[c] + w * (target - g.f[c]);
          out.h[c] = out.f[c] / (r * r);
        } else {
          const double hg = f1 / (r1 * r1);
          out.h[c] = g.h[c] + w * (hg - g.h[c]);
          out.f[c] = i == 0 ? 0.0 : g.f[c] + w * (r * r * hg - g.f[c]);
        }
      }
    }
  return out;
}

/// Radial profile: s^2 for s <= 1/2, rising to 1 at s = 1 and constant after.
inline double extend_profile(double s) {
  if (s >= 1) return 1;
  if (s <= 0.5) return s * s;
  const double S = detail::smoothstep((s - 0.5) / 0.5);
  return s * s + (1 - s * s) * S;
}

/// Cylinder chart f0(r, theta, z) = f(theta, z) beta(r / r0) over the annulus
/// data f, with h = f beta / r^2.
inline SlopeGrid extend_cell(const SlopeGrid& boundary, double r0, double R, std::size_t nr, double tol = 1e-9) {
  check_grid(boundary);
  if (boundary.kind != ChartKind::Annulus) throw Error("MalformedGrid", "extend_cell needs annulus boundary data");
  if (!(r0 > 0 && r0 < R)) throw Error("PreconditionFailed", "need 0 < r0 < R");
  if (nr < 3) throw Error("DegenerateGrid", "radial axis needs at least 3 samples");
  const std::size_t nth = boundary.axes[0].n, nz = boundary.axes[1].n;
  for (std::size_t j = 0; j < nth; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const double v = boundary.f[boundary.index(j, k)];
      const bool edge = k == 0 || k + 1 == nz;
      if (edge && std::abs(v) > tol)
        throw Error("PreconditionFailed", "boundary data nonzero at |z| = 1, cell " + detail::cell_name(boundary, boundary.index(j, k)));
      if (!edge && !(v < 0))
        throw Error("PreconditionFailed", "boundary data not negative at cell " + detail::cell_name(boundary, boundary.index(j, k)));
    }
  SlopeGrid out = make_cylinder(R, nr, nth, nz);
  out.axes[1] = boundary.axes[0];
  out.axes[2] = boundary.axes[1];
  const auto& ra = out.axes[0];
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = ra.at(i), s = r / r0;
    const double beta = extend_profile(s);
    for (std::size_t j = 0; j < nth; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        const double v = boundary.f[boundary.index(j, k)];
        const std::size_t c = out.index(i, j, k);
        out.f[c] = s >= 1 ? v : v * beta;
        out.h[c] = s <= 0.5 ? v / (r0 * r0) : v * beta / (r * r);
      }
  }
  return out;
}

}  // namespace bsgate
