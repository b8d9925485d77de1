#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "conefix/errors.hpp"
#include "conefix/ordered_space.hpp"
#include "conefix/pcm.hpp"

namespace conefix {

/// The two self-maps whose common fixed point is sought.
/// The iteration applies `t` on odd steps and `s` on even steps.
template <typename Scalar = double>
struct MappingPair {
  using Map = std::function<Point<Scalar>(const Point<Scalar>&)>;
  Map t;
  Map s;
};

/// Applies `map` and checks the image stays inside the domain box.
template <typename Scalar>
Point<Scalar> apply_map(const PartialConeMetricSpace<Scalar>& space,
                        const typename MappingPair<Scalar>::Map& map, const Point<Scalar>& x,
                        std::string_view label) {
  Point<Scalar> y = map(x);
  space.require_in_domain(y, label);
  return y;
}

enum class Family { kannan, reich, rational, implicit_linear, max_type };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::kannan: return "kannan";
    case Family::reich: return "reich";
    case Family::rational: return "rational";
    case Family::implicit_linear: return "implicit";
    case Family::max_type: return "max";
  }
  return "?";
}

inline std::optional<Family> family_from_string(std::string_view name) {
  if (name == "kannan") return Family::kannan;
  if (name == "reich") return Family::reich;
  if (name == "rational") return Family::rational;
  if (name == "implicit" || name == "implicit-linear") return Family::implicit_linear;
  if (name == "max" || name == "max-type") return Family::max_type;
  return std::nullopt;
}

/// Contraction family plus its constants. Slots a family does not use stay zero.
template <typename Scalar = double>
struct ContractionSpec {
  Family family = Family::max_type;
  Scalar alpha{0};
  Scalar beta{0};
  Scalar gamma{0};
  Scalar s{0};
  Scalar r{0};

  /// p(Tx,Sy) <= α p(x,Tx) + β p(y,Sy)
  static ContractionSpec kannan(Scalar a, Scalar b) { return {Family::kannan, a, b}; }
  /// p(Tx,Sy) <= α p(x,y) + β p(x,Tx) + γ p(y,Sy)
  static ContractionSpec reich(Scalar a, Scalar b, Scalar g) { return {Family::reich, a, b, g}; }
  /// p(Tx,Sy) <= α p(x,Tx)p(y,Sy) / (1 + p(x,y)) + β p(x,y)
  static ContractionSpec rational(Scalar a, Scalar b) { return {Family::rational, a, b}; }
  /// α p(Tx,Sy) + β[p(x,Tx) + p(y,Sy)] + γ[p(Tx,y) + p(x,Sy)] <= s p(x,y) + r p(x,STx)
  static ContractionSpec implicit_linear(Scalar a, Scalar b, Scalar g, Scalar s_, Scalar r_) {
    return {Family::implicit_linear, a, b, g, s_, r_};
  }
  /// p(Tx,Sy) <= α max{p(x,y), p(x,Tx), p(y,Sy)}
  static ContractionSpec max_type(Scalar a) { return {Family::max_type, a}; }

  bool operator==(const ContractionSpec&) const = default;
};

/// Returns one message per violated constraint; empty means the spec is valid.
///
/// Strict inequalities are checked strictly, with no tolerance.
template <typename Scalar>
std::vector<std::string> validate_params(const ContractionSpec<Scalar>& spec) {
  std::vector<std::string> errors;
  const Scalar a = spec.alpha, b = spec.beta, g = spec.gamma;
  for (Scalar v : {a, b, g, spec.s, spec.r}) {
    if (!std::isfinite(static_cast<double>(v))) {
      errors.emplace_back("parameters must be finite");
      return errors;
    }
  }
  auto unit = [](Scalar v) { return v >= Scalar(0) && v < Scalar(1); };
  auto unused = [&](Scalar v, const char* name) {
    if (v != Scalar(0)) errors.push_back(std::string("unused parameter ") + name + " must be 0");
  };

  switch (spec.family) {
    case Family::kannan:
    case Family::rational:
      if (!unit(a)) errors.emplace_back("α∈[0,1) violated");
      if (!unit(b)) errors.emplace_back("β∈[0,1) violated");
      if (!(a + b < Scalar(1))) errors.emplace_back("α+β<1 violated");
      unused(g, "γ");
      unused(spec.s, "s");
      unused(spec.r, "r");
      break;
    case Family::reich:
      if (!unit(a)) errors.emplace_back("α∈[0,1) violated");
      if (!unit(b)) errors.emplace_back("β∈[0,1) violated");
      if (!unit(g)) errors.emplace_back("γ∈[0,1) violated");
      if (!(a + b + g < Scalar(1))) errors.emplace_back("α+β+γ<1 violated");
      unused(spec.s, "s");
      unused(spec.r, "r");
      break;
    case Family::implicit_linear: {
      const Scalar ab = a + b;
      if (ab == Scalar(0)) {
        errors.emplace_back("α+β≠0 violated");
      } else {
        const Scalar k = (spec.s - b) / ab;
        if (!(k >= Scalar(0) && k < Scalar(1))) errors.emplace_back("0≤(s−β)/(α+β)<1 violated");
      }
      if (!(ab + g > Scalar(0))) errors.emplace_back("α+β+γ>0 violated");
      if (!(g > Scalar(0))) errors.emplace_back("γ>0 violated");
      if (!(g - spec.r >= Scalar(0))) errors.emplace_back("γ−r≥0 violated");
      break;
    }
    case Family::max_type:
      if (!unit(a)) errors.emplace_back("α∈[0,1) violated");
      unused(b, "β");
      unused(g, "γ");
      unused(spec.s, "s");
      unused(spec.r, "r");
      break;
  }
  return errors;
}

template <typename Scalar>
void require_valid(const ContractionSpec<Scalar>& spec) {
  const auto errors = validate_params(spec);
  if (errors.empty()) return;
  std::string msg = std::string(to_string(spec.family)) + " constants invalid:";
  for (const auto& e : errors) msg += " " + e + ";";
  msg.pop_back();
  throw ConstraintError(msg);
}

/// Geometric factor K of the first iteration step, p(x1,x2) <= K p(x0,x1).
///
/// kannan α/(1−β), reich (α+β)/(1−γ), rational β/(1−α),
/// implicit-linear (s−β)/(α+β), max-type α.
template <typename Scalar>
Scalar contraction_rate(const ContractionSpec<Scalar>& spec) {
  require_valid(spec);
  const Scalar a = spec.alpha, b = spec.beta, g = spec.gamma;
  switch (spec.family) {
    case Family::kannan: return a / (Scalar(1) - b);
    case Family::reich: return (a + b) / (Scalar(1) - g);
    case Family::rational: return b / (Scalar(1) - a);
    case Family::implicit_linear: return (spec.s - b) / (a + b);
    case Family::max_type: return a;
  }
  return Scalar(0);
}

/// Factor bounding every step of the alternating sequence, both parities.
///
/// A T-step followed by an S-step uses the condition at (x, y) = (x_{2n}, x_{2n+1});
/// an S-step followed by a T-step uses it at (x_{2n+2}, x_{2n+1}), which swaps the
/// roles of the p(x,Tx) and p(y,Sy) coefficients. For kannan this gives
/// max(α/(1−β), β/(1−α)); for reich max((α+β)/(1−γ), (α+γ)/(1−β)). The other
/// families are symmetric under the swap, so this equals contraction_rate.
template <typename Scalar>
Scalar iteration_rate(const ContractionSpec<Scalar>& spec) {
  const Scalar first = contraction_rate(spec);
  const Scalar a = spec.alpha, b = spec.beta, g = spec.gamma;
  switch (spec.family) {
    case Family::kannan: return std::max(first, b / (Scalar(1) - a));
    case Family::reich: return std::max(first, (a + g) / (Scalar(1) - b));
    default: return first;
  }
}

/// Left side and right-hand basis of a condition that is linear in its constants:
/// rhs = Σ_j θ_j basis[j], with θ = (α, β, γ) truncated to basis.size().
///
/// Every basis vector is a nonnegative combination of metric values, so the
/// feasible constants form an upward-closed set.
template <typename Scalar = double>
struct LinearTerms {
  ConeVector<Scalar> lhs;
  std::vector<ConeVector<Scalar>> basis;
};

template <typename Scalar>
LinearTerms<Scalar> linear_terms(Family family, const PartialConeMetricSpace<Scalar>& space,
                                 const MappingPair<Scalar>& maps, const Point<Scalar>& x,
                                 const Point<Scalar>& y) {
  const Point<Scalar> tx = apply_map(space, maps.t, x, "T(x)");
  const Point<Scalar> sy = apply_map(space, maps.s, y, "S(y)");
  LinearTerms<Scalar> out;
  out.lhs = pcm_eval(space, tx, sy);
  switch (family) {
    case Family::kannan:
      out.basis = {pcm_eval(space, x, tx), pcm_eval(space, y, sy)};
      break;
    case Family::reich:
      out.basis = {pcm_eval(space, x, y), pcm_eval(space, x, tx), pcm_eval(space, y, sy)};
      break;
    case Family::rational: {
      const ConeVector<Scalar> pxy = pcm_eval(space, x, y);
      const ConeVector<Scalar> num = pcm_eval(space, x, tx).cwiseProduct(pcm_eval(space, y, sy));
      const ConeVector<Scalar> den = (ConeVector<Scalar>::Ones(pxy.size()) + pxy).eval();
      out.basis = {num.cwiseQuotient(den).eval(), pxy};
      break;
    }
    case Family::max_type:
      out.basis = {join(space.ambient(), {pcm_eval(space, x, y), pcm_eval(space, x, tx),
                                          pcm_eval(space, y, sy)})};
      break;
    case Family::implicit_linear:
      throw ConstraintError("implicit-linear condition is not linear in a single side");
  }
  return out;
}

/// Σ_j coeffs[j] basis[j], accumulated left to right.
template <typename Scalar>
ConeVector<Scalar> combine(std::span<const Scalar> coeffs, const std::vector<ConeVector<Scalar>>& basis) {
  ConeVector<Scalar> out = coeffs[0] * basis[0];
  for (std::size_t j = 1; j < basis.size(); ++j) out += coeffs[j] * basis[j];
  return out;
}

template <typename Scalar = double>
struct ConditionCheck {
  ConeVector<Scalar> lhs;
  ConeVector<Scalar> rhs;
  ConeVector<Scalar> slack;  ///< rhs - lhs
  bool holds = false;
};

/// Evaluates the family's inequality at (x, y).
template <typename Scalar>
ConditionCheck<Scalar> holds_at(const ContractionSpec<Scalar>& spec,
                                const PartialConeMetricSpace<Scalar>& space,
                                const MappingPair<Scalar>& maps, const Point<Scalar>& x,
                                const Point<Scalar>& y) {
  require_valid(spec);
  space.require_in_domain(x, "x");
  space.require_in_domain(y, "y");
  ConditionCheck<Scalar> out;
  if (spec.family == Family::implicit_linear) {
    const Point<Scalar> tx = apply_map(space, maps.t, x, "T(x)");
    const Point<Scalar> sy = apply_map(space, maps.s, y, "S(y)");
    const Point<Scalar> stx = apply_map(space, maps.s, tx, "S(T(x))");
    out.lhs = spec.alpha * pcm_eval(space, tx, sy) +
              spec.beta * (pcm_eval(space, x, tx) + pcm_eval(space, y, sy)) +
              spec.gamma * (pcm_eval(space, tx, y) + pcm_eval(space, x, sy));
    out.rhs = spec.s * pcm_eval(space, x, y) + spec.r * pcm_eval(space, x, stx);
  } else {
    auto terms = linear_terms(spec.family, space, maps, x, y);
    const Scalar coeffs[3] = {spec.alpha, spec.beta, spec.gamma};
    out.lhs = std::move(terms.lhs);
    out.rhs = combine<Scalar>(std::span<const Scalar>(coeffs, terms.basis.size()), terms.basis);
  }
  out.slack = out.rhs - out.lhs;
  out.holds = cone_contains(space.ambient(), out.slack);
  return out;
}

/// Seeded (x, y) pairs from the domain box; one pair in eight has y = x.
template <typename Scalar>
std::vector<std::pair<Point<Scalar>, Point<Scalar>>> sample_pairs(
    const PartialConeMetricSpace<Scalar>& space, std::uint64_t seed, std::int64_t n) {
  if (n < 1) throw ConstraintError("sample count must be >= 1");
  auto sampler = space.sampler(seed);
  std::vector<std::pair<Point<Scalar>, Point<Scalar>>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Point<Scalar> x = sampler.draw();
    Point<Scalar> y = sampler.coin(0.125) ? x : sampler.draw();
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

template <typename Scalar = double>
struct PairViolation {
  Point<Scalar> x;
  Point<Scalar> y;
  ConeVector<Scalar> slack;
};

template <typename Scalar = double>
struct Certificate {
  ContractionSpec<Scalar> spec;
  std::int64_t samples_checked = 0;
  std::vector<PairViolation<Scalar>> violations;
  /// Minimum over samples of the most negative slack coordinate.
  Scalar worst_slack{0};

  bool pass() const { return violations.empty(); }
};

template <typename Scalar>
Certificate<Scalar> verify_pairs(const ContractionSpec<Scalar>& spec,
                                 const PartialConeMetricSpace<Scalar>& space,
                                 const MappingPair<Scalar>& maps,
                                 const std::vector<std::pair<Point<Scalar>, Point<Scalar>>>& pairs) {
  require_valid(spec);
  Certificate<Scalar> cert;
  cert.spec = spec;
  bool first = true;
  for (const auto& [x, y] : pairs) {
    const auto check = holds_at(spec, space, maps, x, y);
    const Scalar low = check.slack.minCoeff();
    if (first || low < cert.worst_slack) cert.worst_slack = low;
    first = false;
    if (!check.holds) cert.violations.push_back({x, y, check.slack});
    ++cert.samples_checked;
  }
  return cert;
}

/// Checks the contraction condition on `n` seeded pairs from the domain box.
/// Map images leaving the box raise DomainError; failed inequalities are data.
template <typename Scalar>
Certificate<Scalar> verify_sampled(const ContractionSpec<Scalar>& spec,
                                   const PartialConeMetricSpace<Scalar>& space,
                                   const MappingPair<Scalar>& maps, std::uint64_t seed, std::int64_t n) {
  return verify_pairs(spec, space, maps, sample_pairs(space, seed, n));
}

}  // namespace conefix
