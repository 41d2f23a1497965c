// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "bsgate/assembly.hpp"
#include "bsgate/charts.hpp"
#include "bsgate/complex_io.hpp"
#include "bsgate/holonomy.hpp"
#include "bsgate/random_complex.hpp"
#include "bsgate/splitting.hpp"
#include "bsgate/weights.hpp"

using namespace bsgate;

namespace {

std::string fixture(const std::string& name) { return std::string(BSGATE_FIXTURES) + "/" + name; }

const std::vector<std::string> kCorpus{"torus.bsf", "doc.bsf", "tdisc.bsf", "negtd.bsf", "split.bsf", "clean.bsf"};
constexpr std::array<SystemKind, 3> kKinds{SystemKind::NegTisc, SystemKind::PosTisc, SystemKind::Isc};

struct Outcome {
  bool ok = true;
  std::string detail;
  std::ostringstream why;

  void fail(const std::string& s) {
    if (ok) why << s;
    ok = false;
  }
};

WeightVector as_weights(const ConstraintSystem& s, const std::vector<long long>& v) {
  WeightVector w;
  for (std::size_t j = 0; j < s.variables.size(); ++j) w[s.variables[j]] = v[j];
  return w;
}

Certificate feasible_cert(const std::vector<long long>& v) {
  Certificate c;
  c.verdict = Verdict::Feasible;
  c.witness.assign(v.begin(), v.end());
  return c;
}

// 1. feasible() against bounded enumeration.
void oracle_equivalence(Outcome& o) {
  std::vector<BranchedSurfaceComplex> pool;
  for (const auto& f : kCorpus) pool.push_back(load_complex(fixture(f)));
  std::size_t random_valid = 0;
  for (std::uint64_t seed = 0; random_valid < 200; ++seed) {
    auto c = random_complex(seed, 6, 4);
    if (!validate(c).empty()) continue;
    pool.push_back(std::move(c));
    ++random_valid;
  }
  std::size_t systems = 0, witnesses = 0;
  for (const auto& c : pool)
    for (auto k : kKinds) {
      auto s = build_system(c, k);
      auto cert = feasible(s);
      auto bf = brute_force(s, 6);
      ++systems;
      if (!bf) continue;
      ++witnesses;
      if (!verify_certificate(s, feasible_cert(*bf))) o.fail(c.name + ": brute-force witness rejected");
      if (cert.verdict == Verdict::Infeasible) o.fail(c.name + " " + to_string(k) + ": infeasible but brute force found a witness");
    }
  o.detail = std::to_string(pool.size()) + " complexes, " + std::to_string(systems) + " systems, " +
             std::to_string(witnesses) + " brute-force witnesses";
}

// 2. Every certificate verifies; zero vector rejected, scaled witnesses accepted.
void certificate_soundness(Outcome& o) {
  std::vector<BranchedSurfaceComplex> pool;
  for (const auto& f : kCorpus) pool.push_back(load_complex(fixture(f)));
  for (std::uint64_t seed = 0; seed < 100; ++seed) pool.push_back(random_complex(seed + 10000));
  std::size_t feas = 0, infeas = 0;
  for (const auto& c : pool)
    for (auto k : kKinds) {
      auto s = build_system(c, k);
      auto cert = feasible(s);
      (cert.verdict == Verdict::Feasible ? feas : infeas)++;
      if (!verify_certificate(s, cert)) o.fail(c.name + " " + to_string(k) + ": certificate rejected");
      if (!s.strict_group.empty() && verify_certificate(s, feasible_cert(std::vector<long long>(s.variables.size(), 0))))
        o.fail(c.name + ": zero vector accepted");
      if (cert.verdict == Verdict::Feasible)
        for (int m = 2; m <= 5; ++m) {
          Certificate scaled = cert;
          for (auto& v : scaled.witness) v *= m;
          if (!verify_certificate(s, scaled)) o.fail(c.name + ": scaled witness rejected");
        }
    }
  o.detail = std::to_string(feas) + " feasible, " + std::to_string(infeas) + " infeasible certificates";
}

Classification classification_for(SystemKind k) {
  switch (k) {
    case SystemKind::NegTisc: return Classification::NegTisc;
    case SystemKind::PosTisc: return Classification::PosTisc;
    case SystemKind::Isc: return Classification::Isc;
  }
  return Classification::Other;
}

// 3. Witnesses from criterion runs assemble and conserve weights and slacks;
// on the named corpus some component carries the requested kind.
void assembly_round_trip(Outcome& o) {
  std::size_t checked = 0;
  std::vector<std::string> files = kCorpus;
  files.push_back("fig5.bsf");
  for (const auto& f : files) {
    auto c = load_complex(fixture(f));
    auto v = criterion(c);
    const std::pair<const ConstraintSystem*, const Certificate*> runs[] = {{&v.neg_tisc_system, &v.neg_tisc},
                                                                            {&v.isc_system, &v.isc}};
    const SystemKind kinds[] = {SystemKind::NegTisc, SystemKind::Isc};
    for (int r = 0; r < 2; ++r) {
      const auto& [s, cert] = runs[r];
      if (cert->verdict != Verdict::Feasible) continue;
      ++checked;
      auto w = as_weights(*s, to_int64(cert->witness));
      auto surf = assemble(c, w, kinds[r]);
      const std::string tag = f + " " + to_string(kinds[r]);
      if (roundtrip_weights(surf) != w) o.fail(tag + ": weights not reproduced");
      auto bruns = boundary_runs(surf);
      for (const auto& g : c.segments)
        if (bruns[g.id] != w.at(g.one) - w.at(g.up) - w.at(g.lo)) o.fail(tag + ": boundary runs at " + g.id);
      auto corners = corner_multiplicity(surf);
      for (const auto& d : c.doublepoints) {
        long slack = 0;
        for (const auto& [sid, k] : corner_form(derive_roles(c, d.id))) slack += k * w.at(sid);
        if (corners[d.id] != slack) o.fail(tag + ": corner multiplicity at " + d.id);
      }
      // fig5 is a free-boundary local model; its components are Other by rule.
      if (f == "fig5.bsf") continue;
      auto cls = classify(surf);
      if (std::find(cls.begin(), cls.end(), classification_for(kinds[r])) == cls.end())
        o.fail(tag + ": no component classified as requested");
    }
  }
  o.detail = std::to_string(checked) + " witnesses assembled";
}

// 4. safe_split over every good locus of the clean fixtures and their one-step splits.
void safe_split_behaviour(Outcome& o) {
  std::vector<BranchedSurfaceComplex> family;
  for (const char* f : {"clean.bsf", "split.bsf"}) {
    auto base = load_complex(fixture(f));
    family.push_back(base);
    for (const auto& l : enumerate_loci(base))
      if (!is_bad_move(base, l)) family.push_back(safe_split(base, l).split.complex);
  }
  std::size_t loci = 0, over = 0, under = 0;
  for (const auto& c : family) {
    if (!criterion(c).passes) {
      o.fail(c.name + ": family member fails the criterion");
      continue;
    }
    std::size_t here = 0;
    for (const auto& l : enumerate_loci(c)) {
      if (is_bad_move(c, l)) continue;
      if (++here > 50) break;
      ++loci;
      try {
        auto r = safe_split(c, l);
        (r.choice == MoveChoice::Over ? over : under)++;
        if (!criterion(r.split.complex).passes) o.fail("committed complex fails the criterion");
      } catch (const Error& e) {
        o.fail(std::string(e.code()) + ": " + e.what());
      }
    }
  }
  o.detail = std::to_string(family.size()) + " complexes, " + std::to_string(loci) + " loci, " + std::to_string(over) +
             " over, " + std::to_string(under) + " under";
}

// Segment equalities only: one = up + lo.
bool switch_equalities(const BranchedSurfaceComplex& c, const WeightVector& w) {
  for (const auto& g : c.segments)
    if (w.at(g.one) != w.at(g.up) + w.at(g.lo)) return false;
  return true;
}

// 5. Over/Under bookkeeping and exhaustive pushforward on split.bsf.
void split_bookkeeping(Outcome& o) {
  std::size_t splits = 0, vectors = 0;
  for (const char* f : {"split.bsf", "clean.bsf"}) {
    auto c = load_complex(fixture(f));
    for (const auto& l : enumerate_loci(c)) {
      if (is_bad_move(c, l)) continue;
      for (auto m : {MoveChoice::Over, MoveChoice::Under}) {
        auto r = split(c, l, m);
        ++splits;
        const auto& a = r.complex;
        if (a.doublepoints.size() != c.doublepoints.size() + 2) o.fail(std::string(f) + ": not two new double points");
        const Sign want_l = m == MoveChoice::Over ? Sign::negative : Sign::positive;
        const Sign want_r = m == MoveChoice::Over ? Sign::positive : Sign::negative;
        if (!a.doublepoint(r.dp_L) || a.doublepoint(r.dp_L)->sign != want_l) o.fail(std::string(f) + ": L sign");
        if (!a.doublepoint(r.dp_R) || a.doublepoint(r.dp_R)->sign != want_r) o.fail(std::string(f) + ": R sign");
        if (!validate(a).empty()) o.fail(std::string(f) + ": split not validator-clean: " + validate(a).front());
        if (std::string(f) != "split.bsf") continue;
        std::vector<std::string> ids;
        for (const auto& s : a.sectors) ids.push_back(s.id);
        std::vector<long long> v(ids.size(), 0);
        for (;;) {
          WeightVector w;
          for (std::size_t j = 0; j < ids.size(); ++j) w[ids[j]] = v[j];
          if (switch_equalities(a, w)) {
            ++vectors;
            if (!switch_equalities(c, pushforward_weights(a, w, r.record))) o.fail("pushforward breaks switch equalities");
          }
          std::size_t j = v.size();
          while (j > 0 && v[j - 1] == 2) v[--j] = 0;
          if (j == 0) break;
          ++v[j - 1];
        }
      }
    }
  }
  o.detail = std::to_string(splits) + " splits, " + std::to_string(vectors) + " closed vectors pushed forward";
}

int sign_tol(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

SlopeGrid box65(const std::function<double(double, double, double)>& fn) {
  auto g = make_box(65, 65, 65);
  fill(g, g.f, fn);
  return g;
}

// 6. check_box against the independent contact oracle.
void box_sign_agreement(Outcome& o) {
  struct Field {
    const char* name;
    std::function<double(double, double, double)> f;
    std::optional<double> exact;  // oracle value when linear in y
  };
  const Field fields[] = {{"-1-y", [](double, double y, double) { return -1 - y; }, 1.0},
                          {"-1", [](double, double, double) { return -1.0; }, 0.0},
                          {"-y^3", [](double, double y, double) { return -y * y * y; }, std::nullopt}};
  std::size_t cells = 0;
  for (const auto& fl : fields) {
    auto g = box65(fl.f);
    auto rep = check_box(g, 1e-9);
    auto oc = contact_oracle_box(g);
    for (std::size_t i = 1; i + 1 < 65; ++i)
      for (std::size_t j = 1; j + 1 < 65; ++j)
        for (std::size_t k = 1; k + 1 < 65; ++k) {
          const auto c = g.index(i, j, k);
          ++cells;
          if (sign_tol(oc[c], 1e-9) != -sign_tol(rep.derivative[c], 1e-9))
            o.fail(std::string(fl.name) + ": sign disagreement at " + detail::cell_name(g, c));
          if (fl.exact && std::abs(oc[c] - *fl.exact) > 1e-12) o.fail(std::string(fl.name) + ": oracle not exact");
          if (fl.exact && std::abs(oc[c] + rep.derivative[c]) > 1e-12) o.fail(std::string(fl.name) + ": discrepancy");
        }
  }
  o.detail = std::to_string(cells) + " interior cells";
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// 7. purify_box, purify_cylinder and extend_cell outputs re-pass their checks.
void purification(Outcome& o) {
  const double tol = 1e-9;
  std::size_t fixed = 0;
  {
    const double y0 = 0.5, y1 = 0.75, delta = 0.1;
    auto g = box65([&](double, double y, double) { return -1 - std::pow(std::max(0.0, y - y0), 3); });
    auto out = purify_box(g, y0, y1, delta, tol);
    auto rep = check_box(out, tol);
    if (!rep.is_confoliation) o.fail("purify_box: not a confoliation");
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (purify_box_fixed(g, c, y1, delta)) {
        ++fixed;
        if (!same_bits(out.f[c], g.f[c])) o.fail("purify_box: fixed stratum changed at " + detail::cell_name(g, c));
      }
      if (purify_box_target(g, c, delta) && !rep.contact_mask[c]) o.fail("purify_box: not contact at " + detail::cell_name(g, c));
    }
  }
  auto cyl = [](auto f, auto h) {
    auto g = make_cylinder(1.0, 65, 65, 65);
    fill(g, g.f, f);
    fill(g, g.h, h);
    return g;
  };
  auto check_pure = [&](const SlopeGrid& in, const SlopeGrid& out, double r0, PurifyMode mode, const char* tag) {
    auto rep = check_cylinder(out, tol);
    if (!rep.is_confoliation) o.fail(std::string(tag) + ": not a confoliation");
    for (std::size_t c = 0; c < out.size(); ++c) {
      const std::size_t k = c % out.axes[2].n;
      if (k != 0 && k + 1 != out.axes[2].n && !rep.contact_mask[c])
        o.fail(std::string(tag) + ": not contact at " + detail::cell_name(out, c));
      if (purify_cylinder_fixed(in, c, r0, mode)) {
        ++fixed;
        if (!same_bits(out.f[c], in.f[c]) || !same_bits(out.h[c], in.h[c]))
          o.fail(std::string(tag) + ": fixed stratum changed");
      }
    }
  };
  {
    const double r0 = 0.5;
    auto g = cyl(
        [=](double r, double, double) {
          double s = std::min(r / r0, 1.0);
          return -r0 * r0 * (s * s - s * s * s * s / 2);
        },
        [=](double r, double, double) {
          double s = r / r0;
          return s < 1 ? -(1 - s * s / 2) : -r0 * r0 / (2 * r * r);
        });
    check_pure(g, purify_cylinder(g, r0, PurifyMode::InnerContact, tol), r0, PurifyMode::InnerContact, "purify_cylinder inner");
  }
  {
    const double r0 = 0.25;
    auto g = cyl([=](double r, double, double) { return r < r0 ? 0.0 : -std::pow(r - r0, 3); },
                 [=](double r, double, double) { return r < r0 ? 0.0 : -std::pow(r - r0, 3) / (r * r); });
    check_pure(g, purify_cylinder(g, r0, PurifyMode::OuterContact, tol), r0, PurifyMode::OuterContact, "purify_cylinder outer");
  }
  for (auto fb : std::vector<std::function<double(double, double)>>{
           [](double, double z) { return -(1 - z * z); },
           [](double t, double z) { return -(1 - z * z) * (2 + std::sin(t)); }}) {
    const double r0 = 0.5;
    auto bd = make_annulus(65, 65);
    fill(bd, bd.f, [&](double t, double z, double) { return fb(t, z); });
    auto c = extend_cell(bd, r0, 1.0, 65, tol);
    auto rep = check_cylinder(c, tol);
    if (!rep.is_confoliation) o.fail("extend_cell: not a confoliation");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::size_t ri = i / c.stride(0), j = (i / c.stride(1)) % c.axes[1].n, k = i % c.axes[2].n;
      const double r = c.axes[0].at(ri);
      const bool interior = k != 0 && k + 1 != c.axes[2].n;
      if (r >= r0) {
        ++fixed;
        if (!same_bits(c.f[i], bd.f[bd.index(j, k)])) o.fail("extend_cell: (a) fails at " + detail::cell_name(c, i));
      }
      if (interior && r < r0 && !rep.contact_mask[i]) o.fail("extend_cell: (b)/(c) fail at " + detail::cell_name(c, i));
    }
  }
  o.detail = "5 constructions on 65^3 grids, " + std::to_string(fixed) + " fixed samples bit-identical";
}

// 8. Holonomy of f = -c(1 - z^2) against tanh(artanh z0 - 2 pi c).
void holonomy_accuracy(Outcome& o) {
  double worst = 0;
  for (double c : {0.1, 0.5}) {
    auto g = make_annulus(16, 33);
    fill(g, g.f, [&](double, double z, double) { return -c * (1 - z * z); });
    for (double z0 : {-0.5, 0.0, 0.5}) {
      const double want = std::tanh(std::atanh(z0) - 2 * std::numbers::pi * c);
      worst = std::max(worst, std::abs(holonomy_map(g, z0, 1e-3) - want));
    }
    for (int i = -9; i <= 9; ++i) {
      const double z0 = i / 10.0;
      if (!(holonomy_map(g, z0, 1e-3) < z0)) o.fail("non-negative displacement at z0=" + std::to_string(z0));
    }
  }
  if (worst > 1e-6) o.fail("closed-form error " + std::to_string(worst));
  std::ostringstream d;
  d << "max error " << worst;
  o.detail = d.str();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    void (*run)(Outcome&);
  };
  const Criterion all[] = {
      {"1 oracle equivalence", 60, oracle_equivalence},
      {"2 certificate soundness", 5, certificate_soundness},
      {"3 assembly round trip", 10, assembly_round_trip},
      {"4 safe split keeps the criterion", 120, safe_split_behaviour},
      {"5 split bookkeeping", 30, split_bookkeeping},
      {"6 box sign agreement", 5, box_sign_agreement},
      {"7 purification postconditions", 10, purification},
      {"8 holonomy accuracy", 2, holonomy_accuracy},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const Error& e) {
      o.fail(std::string("error: ") + e.code() + ": " + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.fail("over time budget");
    char t[32];
    std::snprintf(t, sizeof t, "%.2fs/%gs", secs, c.budget_s);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.name << " (" << t << ") " << o.detail;
    if (!o.ok) std::cout << " -- " << o.why.str();
    std::cout << std::endl;
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
