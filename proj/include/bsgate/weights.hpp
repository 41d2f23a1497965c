#pragma once

// Weight systems over sectors and their exact feasibility decision.
//
// Every constraint is homogeneous, so an integer vector satisfying the system
// with at least one strict member exists iff a rational vector exists with the
// strict members' slacks summing to at least 1.

#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bsgate/complex.hpp"
#include "bsgate/simplex.hpp"

namespace bsgate {

enum class SystemKind { NegTisc, PosTisc, Isc };

inline const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::NegTisc: return "neg-tisc";
    case SystemKind::PosTisc: return "pos-tisc";
    case SystemKind::Isc: return "isc";
  }
  return "?";
}

struct LinearForm {
  std::vector<long long> coef;
  long long constant = 0;
  std::string provenance;

  template <class V>
  Rational eval(const V& w) const {
    Rational s = constant;
    for (std::size_t j = 0; j < coef.size(); ++j)
      if (coef[j]) s += Rational(coef[j]) * Rational(w[j]);
    return s;
  }
};

struct ConstraintSystem {
  std::vector<std::string> variables;
  std::vector<LinearForm> equalities;    // = 0
  std::vector<LinearForm> inequalities;  // >= 0
  std::vector<std::size_t> strict_group;  // indices into inequalities; slack sum >= 1
};

enum class Verdict { Feasible, Infeasible };

struct Certificate {
  Verdict verdict = Verdict::Infeasible;
  std::vector<BigInt> witness;  // per variable, when Feasible
  std::vector<Rational> lambda;  // per equality, when Infeasible
  std::vector<Rational> mu;      // per inequality (>= 0), when Infeasible
};

inline void check_well_formed(const ConstraintSystem& s) {
  const std::size_t n = s.variables.size();
  for (const auto* rows : {&s.equalities, &s.inequalities})
    for (const auto& f : *rows) {
      if (f.coef.size() != n) throw Error("MalformedSystem", "constraint " + f.provenance + " has wrong arity");
      if (f.constant != 0) throw Error("MalformedSystem", "constraint " + f.provenance + " is not homogeneous");
    }
  for (auto g : s.strict_group)
    if (g >= s.inequalities.size()) throw Error("MalformedSystem", "strict group index out of range");
}

/// The system of the requested kind; the complex must validate cleanly.
inline ConstraintSystem build_system(const BranchedSurfaceComplex& c, SystemKind kind) {
  auto rep = validate(c);
  if (!rep.empty()) throw Error("ValidationFailed", rep.front());
  ConstraintSystem s;
  for (const auto& sec : c.sectors) s.variables.push_back(sec.id);
  const std::size_t n = s.variables.size();
  auto idx = [&](const std::string& id) { return *c.sector_index(id); };

  for (const auto& g : c.segments) {
    LinearForm f{std::vector<long long>(n, 0), 0, "segment:" + g.id};
    f.coef[idx(g.one)] += 1;
    f.coef[idx(g.up)] -= 1;
    f.coef[idx(g.lo)] -= 1;
    s.inequalities.push_back(std::move(f));
  }
  if (kind == SystemKind::Isc) {
    s.strict_group.resize(s.inequalities.size());
    std::iota(s.strict_group.begin(), s.strict_group.end(), 0);
  }
  for (const auto& d : c.doublepoints) {
    LinearForm f{std::vector<long long>(n, 0), 0, "dp:" + d.id};
    for (const auto& [sid, k] : corner_form(derive_roles(c, d.id))) f.coef[idx(sid)] += k;
    bool strict_sign = (kind == SystemKind::NegTisc && d.sign == Sign::negative) ||
                       (kind == SystemKind::PosTisc && d.sign == Sign::positive);
    if (strict_sign) {
      s.strict_group.push_back(s.inequalities.size());
      s.inequalities.push_back(std::move(f));
    } else {
      s.equalities.push_back(std::move(f));
    }
  }
  return s;
}

namespace detail {

inline std::vector<BigInt> primitive_integer(const std::vector<Rational>& x) {
  BigInt l = 1;
  for (const auto& v : x) {
    BigInt d = boost::multiprecision::denominator(v);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& v : x) {
    BigInt k = boost::multiprecision::numerator(v) * (l / boost::multiprecision::denominator(v));
    out.push_back(k);
    g = boost::multiprecision::gcd(g, k);
  }
  if (g > 1)
    for (auto& k : out) k /= g;
  return out;
}

}  // namespace detail

/// Exact decision with a certificate for either verdict.
inline Certificate feasible(const ConstraintSystem& s) {
  check_well_formed(s);
  const std::size_t n = s.variables.size();
  const std::size_t ne = s.equalities.size(), ni = s.inequalities.size();

  // Primal: E w = 0, G w - sl = 0, sum_S sl - t = 1; w, sl, t >= 0.
  {
    const std::size_t cols = n + ni + 1;
    RMatrix A;
    std::vector<Rational> b;
    for (const auto& f : s.equalities) {
      std::vector<Rational> row(cols, 0);
      for (std::size_t j = 0; j < n; ++j) row[j] = f.coef[j];
      A.push_back(std::move(row));
      b.push_back(0);
    }
    for (std::size_t g = 0; g < ni; ++g) {
      std::vector<Rational> row(cols, 0);
      for (std::size_t j = 0; j < n; ++j) row[j] = s.inequalities[g].coef[j];
      row[n + g] = -1;
      A.push_back(std::move(row));
      b.push_back(0);
    }
    std::vector<Rational> agg(cols, 0);
    for (auto g : s.strict_group) agg[n + g] += 1;
    agg[cols - 1] = -1;
    A.push_back(std::move(agg));
    b.push_back(1);
    if (auto x = phase_one(A, b)) {
      Certificate c;
      c.verdict = Verdict::Feasible;
      c.witness = detail::primitive_integer(std::vector<Rational>(x->begin(), x->begin() + n));
      return c;
    }
  }

  // Farkas: E^T l+ - E^T l- + G^T mu + sigma = -sum_S G_g; all >= 0.
  const std::size_t cols = 2 * ne + ni + n;
  RMatrix A(n, std::vector<Rational>(cols, 0));
  std::vector<Rational> b(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t e = 0; e < ne; ++e) {
      A[j][e] = s.equalities[e].coef[j];
      A[j][ne + e] = -s.equalities[e].coef[j];
    }
    for (std::size_t g = 0; g < ni; ++g) A[j][2 * ne + g] = s.inequalities[g].coef[j];
    A[j][2 * ne + ni + j] = 1;
    for (auto g : s.strict_group) b[j] -= s.inequalities[g].coef[j];
  }
  Certificate c;
  c.verdict = Verdict::Infeasible;
  c.lambda.assign(ne, 0);
  c.mu.assign(ni, 0);
  if (auto y = phase_one(A, b)) {
    for (std::size_t e = 0; e < ne; ++e) c.lambda[e] = (*y)[e] - (*y)[ne + e];
    for (std::size_t g = 0; g < ni; ++g) c.mu[g] = (*y)[2 * ne + g];
  } else {
    throw Error("InvariantViolation", "neither a witness nor infeasibility multipliers exist");
  }
  return c;
}

/// Substitutes the certificate into the system; independent of the solver.
inline bool verify_certificate(const ConstraintSystem& s, const Certificate& c) {
  const std::size_t n = s.variables.size();
  if (c.verdict == Verdict::Feasible) {
    if (c.witness.size() != n) return false;
    for (const auto& v : c.witness)
      if (v < 0) return false;
    for (const auto& f : s.equalities)
      if (f.eval(c.witness) != 0) return false;
    for (const auto& f : s.inequalities)
      if (f.eval(c.witness) < 0) return false;
    Rational agg = 0;
    for (auto g : s.strict_group) agg += s.inequalities.at(g).eval(c.witness);
    return agg >= 1;
  }
  if (c.lambda.size() != s.equalities.size() || c.mu.size() != s.inequalities.size()) return false;
  for (const auto& m : c.mu)
    if (m < 0) return false;
  for (std::size_t j = 0; j < n; ++j) {
    Rational comb = 0;
    for (std::size_t e = 0; e < s.equalities.size(); ++e) comb += c.lambda[e] * s.equalities[e].coef[j];
    for (std::size_t g = 0; g < s.inequalities.size(); ++g) comb += c.mu[g] * s.inequalities[g].coef[j];
    for (auto g : s.strict_group) comb += s.inequalities[g].coef[j];
    if (comb > 0) return false;
  }
  return true;
}

/// Lexicographically least integer vector in [0, bound]^n satisfying the
/// system, first variable most significant. nullopt proves nothing.
inline std::optional<std::vector<long long>> brute_force(const ConstraintSystem& s, long long bound) {
  check_well_formed(s);
  const std::size_t n = s.variables.size();
  std::vector<long long> w(n, 0);
  auto ok = [&]() {
    auto dot = [&](const LinearForm& f) {
      long long v = 0;
      for (std::size_t j = 0; j < n; ++j) v += f.coef[j] * w[j];
      return v;
    };
    for (const auto& f : s.equalities)
      if (dot(f) != 0) return false;
    long long agg = 0;
    std::vector<long long> slack(s.inequalities.size());
    for (std::size_t g = 0; g < s.inequalities.size(); ++g) {
      slack[g] = dot(s.inequalities[g]);
      if (slack[g] < 0) return false;
    }
    for (auto g : s.strict_group) agg += slack[g];
    return agg >= 1;
  };
  for (;;) {
    if (ok()) return w;
    std::size_t j = n;
    while (j > 0 && w[j - 1] == bound) w[--j] = 0;
    if (j == 0) return std::nullopt;
    ++w[j - 1];
  }
}

struct CriterionVerdict {
  bool passes = false;
  ConstraintSystem neg_tisc_system, isc_system;
  Certificate neg_tisc, isc;
};

/// No negative tisc weights and no isc weights.
inline CriterionVerdict criterion(const BranchedSurfaceComplex& c) {
  CriterionVerdict v;
  v.neg_tisc_system = build_system(c, SystemKind::NegTisc);
  v.isc_system = build_system(c, SystemKind::Isc);
  v.neg_tisc = feasible(v.neg_tisc_system);
  v.isc = feasible(v.isc_system);
  v.passes = v.neg_tisc.verdict == Verdict::Infeasible && v.isc.verdict == Verdict::Infeasible;
  return v;
}

inline std::vector<long long> to_int64(const std::vector<BigInt>& w) {
  std::vector<long long> out;
  for (const auto& v : w) {
    if (v > std::numeric_limits<long long>::max()) throw Error("Overflow", "witness entry exceeds 64 bits");
    out.push_back(static_cast<long long>(v));
  }
  return out;
}

/// Slack of every inequality at w.
inline std::vector<Rational> inequality_slacks(const ConstraintSystem& s, const std::vector<long long>& w) {
  std::vector<Rational> out;
  for (const auto& f : s.inequalities) out.push_back(f.eval(w));
  return out;
}

}  // namespace bsgate
