#pragma once

// Return map of the leaf equation dz/dtheta = f(theta, z) around an annulus.
// Integration runs in increasing theta, so f < 0 pushes leaves down.

#include <cmath>
#include <functional>
#include <numbers>

#include "bsgate/charts.hpp"

namespace bsgate {

namespace detail {

// Cubic through p1 at t = 0 and p2 at t = 1 with centred tangents.
inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  const double m1 = (p2 - p0) / 2, m2 = (p3 - p1) / 2;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p1 + (t3 - 2 * t2 + t) * m1 + (-2 * t3 + 3 * t2) * p2 + (t3 - t2) * m2;
}

}  // namespace detail

/// Catmull-Rom interpolation of annulus samples: periodic in theta, ghost
/// samples in z extrapolated quadratically so quadratics in z are exact.
inline double annulus_value(const SlopeGrid& g, double theta, double z) {
  const auto& ta = g.axes[0];
  const auto& za = g.axes[1];
  const std::size_t nt = ta.n, nz = za.n;
  auto sample = [&](long j, long k) {
    j = ((j % static_cast<long>(nt)) + static_cast<long>(nt)) % static_cast<long>(nt);
    auto v = [&](long kk) { return g.f[g.index(static_cast<std::size_t>(j), static_cast<std::size_t>(kk))]; };
    const long last = static_cast<long>(nz) - 1;
    if (k < 0) return nz >= 3 ? 3 * v(0) - 3 * v(1) + v(2) : 2 * v(0) - v(1);
    if (k > last) return nz >= 3 ? 3 * v(last) - 3 * v(last - 1) + v(last - 2) : 2 * v(last) - v(last - 1);
    return v(k);
  };
  const double tp = (theta - ta.lo) / ta.spacing();
  const double zp = std::clamp((z - za.lo) / za.spacing(), 0.0, static_cast<double>(nz - 1));
  const long j = static_cast<long>(std::floor(tp));
  const long k = std::min(static_cast<long>(std::floor(zp)), static_cast<long>(nz) - 2);
  const double u = tp - static_cast<double>(j), s = zp - static_cast<double>(k);
  double col[4];
  for (int a = 0; a < 4; ++a) {
    const long jj = j - 1 + a;
    col[a] = detail::catmull_rom(sample(jj, k - 1), sample(jj, k), sample(jj, k + 1), sample(jj, k + 2), s);
  }
  return detail::catmull_rom(col[0], col[1], col[2], col[3], u);
}

/// Classical RK4 from theta = 0 to 2 pi with the largest uniform step not
/// exceeding `step`; z is clamped to [-1, 1].
inline double holonomy_map(const std::function<double(double, double)>& f, double z0, double step) {
  if (!(step > 0)) throw Error("PreconditionFailed", "step must be positive");
  if (!(z0 > -1 && z0 < 1)) throw Error("PreconditionFailed", "z0 must lie in (-1, 1)");
  const double span = 2 * std::numbers::pi;
  const long n = static_cast<long>(std::ceil(span / step));
  const double h = span / static_cast<double>(n);
  auto clamp = [](double z) { return std::clamp(z, -1.0, 1.0); };
  double z = z0;
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * h;
    const double k1 = f(t, z);
    const double k2 = f(t + h / 2, clamp(z + h / 2 * k1));
    const double k3 = f(t + h / 2, clamp(z + h / 2 * k2));
    const double k4 = f(t + h, clamp(z + h * k3));
    z = clamp(z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
  }
  return z;
}

inline double holonomy_map(const SlopeGrid& annulus, double z0, double step) {
  check_grid(annulus);
  if (annulus.kind != ChartKind::Annulus) throw Error("MalformedGrid", "holonomy needs an annulus grid");
  return holonomy_map([&](double t, double z) { return annulus_value(annulus, t, z); }, z0, step);
}

}  // namespace bsgate
