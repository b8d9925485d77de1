#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "conefix/errors.hpp"
#include "conefix/sampling.hpp"

namespace conefix {

/// Element of the ambient ordered vector space E (finite coordinate vector).
template <typename Scalar = double>
using ConeVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class NormKind { sup, one_sum };

template <typename Scalar>
constexpr Scalar default_order_tolerance() {
  return Scalar(1e-12);
}

/// Finite-dimensional coordinate space ordered by the nonnegative orthant.
///
/// `order_tolerance` is the per-coordinate slack used by cone membership:
/// a vector belongs to the cone when every coordinate is >= -order_tolerance.
/// Zero gives the exact order used by the algebraic-law tests.
template <typename Scalar = double>
class AmbientSpace {
 public:
  using Vector = ConeVector<Scalar>;

  static constexpr Scalar max_order_tolerance = Scalar(1e-6);

  explicit AmbientSpace(Eigen::Index dimension, NormKind norm_kind = NormKind::sup,
                        Scalar order_tolerance = default_order_tolerance<Scalar>())
      : dimension_(dimension), norm_kind_(norm_kind), order_tolerance_(order_tolerance) {
    if (dimension_ < 1) {
      throw StructuralError("ambient dimension must be >= 1, got " + std::to_string(dimension_));
    }
    if (!(order_tolerance_ >= Scalar(0)) || order_tolerance_ > max_order_tolerance) {
      throw ConstraintError("order_tolerance must lie in [0, 1e-6]");
    }
  }

  Eigen::Index dimension() const { return dimension_; }
  NormKind norm_kind() const { return norm_kind_; }
  Scalar order_tolerance() const { return order_tolerance_; }

  AmbientSpace with_tolerance(Scalar tolerance) const {
    return AmbientSpace(dimension_, norm_kind_, tolerance);
  }

  Vector zero() const { return Vector::Zero(dimension_); }

 private:
  Eigen::Index dimension_;
  NormKind norm_kind_;
  Scalar order_tolerance_;
};

/// Throws StructuralError unless `v` has the ambient dimension and finite coordinates.
template <typename Scalar, typename Derived>
void check_vector(const AmbientSpace<Scalar>& space, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != space.dimension()) {
    throw StructuralError("cone vector has dimension " + std::to_string(v.size()) +
                          ", ambient space has dimension " + std::to_string(space.dimension()));
  }
  if (!v.allFinite()) {
    throw StructuralError("cone vector has a non-finite coordinate");
  }
}

template <typename Scalar, typename Derived>
bool cone_contains(const AmbientSpace<Scalar>& space, const Eigen::MatrixBase<Derived>& v) {
  check_vector(space, v);
  return (v.array() >= -space.order_tolerance()).all();
}

/// x <= y in the cone order, i.e. y - x is in the cone.
template <typename Scalar, typename DerivedX, typename DerivedY>
bool leq(const AmbientSpace<Scalar>& space, const Eigen::MatrixBase<DerivedX>& x,
         const Eigen::MatrixBase<DerivedY>& y) {
  check_vector(space, x);
  check_vector(space, y);
  return cone_contains(space, (y - x).eval());
}

/// Coordinatewise maximum: the least upper bound in the orthant order.
template <typename Scalar>
ConeVector<Scalar> join(const AmbientSpace<Scalar>& space, std::span<const ConeVector<Scalar>> vs) {
  if (vs.empty()) {
    throw StructuralError("join of an empty list");
  }
  check_vector(space, vs.front());
  ConeVector<Scalar> out = vs.front();
  for (const auto& v : vs.subspan(1)) {
    check_vector(space, v);
    out = out.cwiseMax(v);
  }
  return out;
}

template <typename Scalar>
ConeVector<Scalar> join(const AmbientSpace<Scalar>& space,
                        std::initializer_list<ConeVector<Scalar>> vs) {
  return join(space, std::span<const ConeVector<Scalar>>(vs.begin(), vs.size()));
}

template <typename Scalar, typename Derived>
Scalar norm(const AmbientSpace<Scalar>& space, const Eigen::MatrixBase<Derived>& v) {
  check_vector(space, v);
  switch (space.norm_kind()) {
    case NormKind::sup:
      return v.template lpNorm<Eigen::Infinity>();
    case NormKind::one_sum:
      return v.template lpNorm<1>();
  }
  return Scalar(0);
}

/// How ordered pairs 0 <= x <= y are drawn by normal_constant.
enum class PairSampling {
  mixed,          ///< x = y∘u with u from the boundary-biased unit-box sampler, plus x = y draws
  diagonal_only,  ///< x = y on every draw
};

/// Empirical lower bound on the normal constant M of the orthant cone.
///
/// Maximises norm(x) / norm(y) over `samples` seeded ordered pairs 0 <= x <= y with y != 0.
/// Both supported norms are monotone on the orthant, so the exact value is 1.
template <typename Scalar>
Scalar normal_constant(const AmbientSpace<Scalar>& space, std::int64_t samples, std::uint64_t seed,
                       PairSampling mode = PairSampling::mixed) {
  if (samples < 1) {
    throw ConstraintError("normal_constant needs at least one sample");
  }
  const auto dim = space.dimension();
  BoxSampler<Scalar> unit(ConeVector<Scalar>::Zero(dim), ConeVector<Scalar>::Ones(dim), seed);
  Scalar best(0);
  for (std::int64_t i = 0; i < samples; ++i) {
    ConeVector<Scalar> y = unit.draw();
    while (!(y.array() > Scalar(0)).any()) {
      y = unit.draw();
    }
    ConeVector<Scalar> x = y;
    if (mode == PairSampling::mixed && !unit.coin(0.25)) {
      x = y.cwiseProduct(unit.draw());
    }
    const Scalar ratio = norm(space, x) / norm(space, y);
    if (ratio > best) best = ratio;
  }
  return best;
}

}  // namespace conefix
