#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "conefix/errors.hpp"
#include "conefix/ordered_space.hpp"
#include "conefix/sampling.hpp"

namespace conefix {

/// Element of the point set X. Coordinates live in the space's domain box.
template <typename Scalar = double>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A point set with a cone-valued partial metric p : X x X -> E.
///
/// X is represented by a closed box of coordinate points, used both for
/// domain checks and for sampling. The metric is an arbitrary deterministic
/// callable; its output dimension is checked on every evaluation.
template <typename Scalar = double>
class PartialConeMetricSpace {
 public:
  using Vector = ConeVector<Scalar>;
  using PointType = Point<Scalar>;
  using Metric = std::function<Vector(const PointType&, const PointType&)>;

  PartialConeMetricSpace(std::string name, AmbientSpace<Scalar> ambient, PointType lower,
                         PointType upper, Metric metric, Scalar normal_constant = Scalar(1))
      : name_(std::move(name)),
        ambient_(std::move(ambient)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        metric_(std::move(metric)),
        normal_constant_(normal_constant) {
    if (lower_.size() < 1 || lower_.size() != upper_.size()) {
      throw StructuralError("domain box bounds must be nonempty and of equal length");
    }
    if (!lower_.allFinite() || !upper_.allFinite() || !(lower_.array() <= upper_.array()).all()) {
      throw StructuralError("domain box must be finite with lower <= upper");
    }
    if (!metric_) {
      throw StructuralError("partial cone metric space needs a metric");
    }
    if (!(normal_constant_ > Scalar(0))) {
      throw ConstraintError("normal constant must be positive");
    }
  }

  const std::string& name() const { return name_; }
  const AmbientSpace<Scalar>& ambient() const { return ambient_; }
  Eigen::Index point_dimension() const { return lower_.size(); }
  const PointType& lower() const { return lower_; }
  const PointType& upper() const { return upper_; }
  Scalar normal_constant() const { return normal_constant_; }

  /// Box membership, widened by the ambient order tolerance to absorb rounding in map outputs.
  bool in_domain(const PointType& x) const {
    if (x.size() != point_dimension() || !x.allFinite()) return false;
    const Scalar slack = ambient_.order_tolerance();
    return ((x.array() >= lower_.array() - slack) && (x.array() <= upper_.array() + slack)).all();
  }

  void require_in_domain(const PointType& x, std::string_view what) const {
    if (x.size() != point_dimension()) {
      throw StructuralError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                            ", expected " + std::to_string(point_dimension()));
    }
    if (!in_domain(x)) {
      throw DomainError(std::string(what) + " lies outside the domain box of space '" + name_ + "'");
    }
  }

  /// Raw metric evaluation; callers go through pcm_eval for the checks.
  Vector raw(const PointType& x, const PointType& y) const { return metric_(x, y); }

  BoxSampler<Scalar> sampler(std::uint64_t seed) const { return BoxSampler<Scalar>(lower_, upper_, seed); }

 private:
  std::string name_;
  AmbientSpace<Scalar> ambient_;
  PointType lower_;
  PointType upper_;
  Metric metric_;
  Scalar normal_constant_;
};

template <typename Scalar>
ConeVector<Scalar> pcm_eval(const PartialConeMetricSpace<Scalar>& space, const Point<Scalar>& x,
                            const Point<Scalar>& y) {
  space.require_in_domain(x, "first metric argument");
  space.require_in_domain(y, "second metric argument");
  ConeVector<Scalar> v = space.raw(x, y);
  check_vector(space.ambient(), v);
  return v;
}

/// d_p(x, y) = 2 p(x, y) - p(x, x) - p(y, y), a genuine cone metric.
///
/// The self-distances are summed before subtracting so the result is
/// bitwise symmetric whenever p is.
template <typename Scalar>
ConeVector<Scalar> induced_metric(const PartialConeMetricSpace<Scalar>& space, const Point<Scalar>& x,
                                  const Point<Scalar>& y) {
  const ConeVector<Scalar> pxy = pcm_eval(space, x, y);
  const ConeVector<Scalar> pxx = pcm_eval(space, x, x);
  const ConeVector<Scalar> pyy = pcm_eval(space, y, y);
  return (Scalar(2) * pxy - (pxx + pyy)).eval();
}

/// Convergence of a sequence to `candidate`, judged at the last element of `trace_tail`:
/// both |p(x_n, c) - p(c, c)| and |p(x_n, x_n) - p(c, c)| must be within `tol`.
template <typename Scalar>
bool is_converged(const PartialConeMetricSpace<Scalar>& space, std::span<const Point<Scalar>> trace_tail,
                  const Point<Scalar>& candidate, Scalar tol) {
  if (trace_tail.empty()) {
    throw StructuralError("is_converged needs a nonempty trace tail");
  }
  const auto& last = trace_tail.back();
  const ConeVector<Scalar> self = pcm_eval(space, candidate, candidate);
  const auto& amb = space.ambient();
  return norm(amb, (pcm_eval(space, last, candidate) - self).eval()) <= tol &&
         norm(amb, (pcm_eval(space, last, last) - self).eval()) <= tol;
}

/// norm(p(x_m, x_n)): the Cauchy residual against the zero anchor.
template <typename Scalar>
Scalar cauchy_residual(const PartialConeMetricSpace<Scalar>& space, const Point<Scalar>& x_m,
                       const Point<Scalar>& x_n) {
  return norm(space.ambient(), pcm_eval(space, x_m, x_n));
}

enum class Axiom { pcm1, pcm2, pcm3, pcm4 };

inline std::string_view to_string(Axiom a) {
  switch (a) {
    case Axiom::pcm1: return "PCM1";
    case Axiom::pcm2: return "PCM2";
    case Axiom::pcm3: return "PCM3";
    case Axiom::pcm4: return "PCM4";
  }
  return "?";
}

template <typename Scalar = double>
struct AxiomViolation {
  Axiom axiom;
  std::vector<Point<Scalar>> witnesses;
  ConeVector<Scalar> slack;
};

template <typename Scalar = double>
struct AxiomReport {
  std::int64_t samples_checked = 0;
  std::vector<AxiomViolation<Scalar>> violations;

  bool pass() const { return violations.empty(); }
};

/// Checks every partial cone metric axiom on one triple, appending violations to `out`.
///
/// PCM3 is exact (bitwise). PCM1 and PCM4 use the cone order with the ambient
/// tolerance. PCM2 only in its falsifiable direction: for x != y the three
/// values p(x,x), p(x,y), p(y,y) must not all agree within the tolerance.
template <typename Scalar>
void check_axioms_at(const PartialConeMetricSpace<Scalar>& space, const Point<Scalar>& x,
                     const Point<Scalar>& y, const Point<Scalar>& z,
                     std::vector<AxiomViolation<Scalar>>& out) {
  const auto& amb = space.ambient();
  const Scalar tol = amb.order_tolerance();
  const ConeVector<Scalar> pxx = pcm_eval(space, x, x);
  const ConeVector<Scalar> pyy = pcm_eval(space, y, y);
  const ConeVector<Scalar> pzz = pcm_eval(space, z, z);
  const ConeVector<Scalar> pxy = pcm_eval(space, x, y);
  const ConeVector<Scalar> pyx = pcm_eval(space, y, x);
  const ConeVector<Scalar> pxz = pcm_eval(space, x, z);
  const ConeVector<Scalar> pzy = pcm_eval(space, z, y);

  // PCM1: 0 <= p(a,a) <= p(a,b), for both orientations of the pair.
  auto pcm1 = [&](const Point<Scalar>& a, const Point<Scalar>& b, const ConeVector<Scalar>& paa,
                  const ConeVector<Scalar>& pab) {
    if (!cone_contains(amb, paa)) {
      out.push_back({Axiom::pcm1, {a, b}, paa});
    } else if (!leq(amb, paa, pab)) {
      out.push_back({Axiom::pcm1, {a, b}, (pab - paa).eval()});
    }
  };
  pcm1(x, y, pxx, pxy);
  pcm1(y, x, pyy, pyx);

  const bool distinct = ((x - y).array().abs() > tol).any();
  if (distinct) {
    const bool all_equal = ((pxx - pxy).array().abs() <= tol).all() &&
                           ((pyy - pxy).array().abs() <= tol).all();
    if (all_equal) {
      out.push_back({Axiom::pcm2, {x, y}, (pxy - pxx).eval()});
    }
  }

  if (pxy != pyx) {
    out.push_back({Axiom::pcm3, {x, y}, (pxy - pyx).eval()});
  }

  const ConeVector<Scalar> bound = (pxz + pzy - pzz).eval();
  if (!leq(amb, pxy, bound)) {
    out.push_back({Axiom::pcm4, {x, y, z}, (bound - pxy).eval()});
  }
}

/// Samples `n` seeded triples from the domain box and checks the axioms on each.
///
/// One draw in eight reuses x as y, and likewise for z, so diagonal cases
/// (where the axioms degenerate to equalities) are always exercised.
template <typename Scalar>
AxiomReport<Scalar> check_axioms(const PartialConeMetricSpace<Scalar>& space, std::uint64_t seed,
                                 std::int64_t n) {
  if (n < 1) {
    throw ConstraintError("check_axioms needs n >= 1");
  }
  auto sampler = space.sampler(seed);
  AxiomReport<Scalar> report;
  for (std::int64_t i = 0; i < n; ++i) {
    const Point<Scalar> x = sampler.draw();
    const Point<Scalar> y = sampler.coin(0.125) ? x : sampler.draw();
    const Point<Scalar> z = sampler.coin(0.125) ? (sampler.coin(0.5) ? x : y) : sampler.draw();
    check_axioms_at(space, x, y, z, report.violations);
    ++report.samples_checked;
  }
  return report;
}

}  // namespace conefix
