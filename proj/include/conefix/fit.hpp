#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "conefix/contractions.hpp"

namespace conefix {

/// Parameterisations accepted by fit_constants.
enum class FitShape {
  kannan,            ///< free (α, β)
  kannan_symmetric,  ///< α = β
  reich,             ///< free (α, β, γ)
  reich_symmetric,   ///< α = β = γ
  rational,          ///< free (α, β)
  max_type,          ///< α
};

inline std::optional<FitShape> fit_shape_from_string(std::string_view name) {
  if (name == "kannan") return FitShape::kannan;
  if (name == "kannan-sym") return FitShape::kannan_symmetric;
  if (name == "reich") return FitShape::reich;
  if (name == "reich-sym") return FitShape::reich_symmetric;
  if (name == "rational") return FitShape::rational;
  if (name == "max" || name == "max-type") return FitShape::max_type;
  return std::nullopt;
}

inline FitShape fit_shape_for(Family family) {
  switch (family) {
    case Family::kannan: return FitShape::kannan;
    case Family::reich: return FitShape::reich;
    case Family::rational: return FitShape::rational;
    case Family::max_type: return FitShape::max_type;
    case Family::implicit_linear: break;
  }
  throw ConstraintError("unsupported family for fitting");
}

struct FitOptions {
  double grid_step = 1.0 / 256;
  /// Grid for the two outer constants of the three-parameter reich search.
  double outer_step_3d = 1.0 / 32;
};

namespace detail {

/// Precomputed condition terms for a fixed sample set; feasibility of a
/// constant vector is then a pass over plain vectors.
template <typename Scalar>
class FeasibilityOracle {
 public:
  FeasibilityOracle(Family family, const PartialConeMetricSpace<Scalar>& space,
                    const MappingPair<Scalar>& maps,
                    const std::vector<std::pair<Point<Scalar>, Point<Scalar>>>& pairs)
      : ambient_(space.ambient()) {
    terms_.reserve(pairs.size());
    for (const auto& [x, y] : pairs) terms_.push_back(linear_terms(family, space, maps, x, y));
  }

  bool feasible(const std::array<Scalar, 3>& theta) const {
    for (const auto& t : terms_) {
      const ConeVector<Scalar> rhs =
          combine<Scalar>(std::span<const Scalar>(theta.data(), t.basis.size()), t.basis);
      if (!cone_contains(ambient_, (rhs - t.lhs).eval())) return false;
    }
    return true;
  }

 private:
  AmbientSpace<Scalar> ambient_;
  std::vector<LinearTerms<Scalar>> terms_;
};

template <typename Scalar>
ContractionSpec<Scalar> make_spec(FitShape shape, const std::array<Scalar, 3>& v) {
  switch (shape) {
    case FitShape::kannan: return ContractionSpec<Scalar>::kannan(v[0], v[1]);
    case FitShape::kannan_symmetric: return ContractionSpec<Scalar>::kannan(v[0], v[0]);
    case FitShape::reich: return ContractionSpec<Scalar>::reich(v[0], v[1], v[2]);
    case FitShape::reich_symmetric: return ContractionSpec<Scalar>::reich(v[0], v[0], v[0]);
    case FitShape::rational: return ContractionSpec<Scalar>::rational(v[0], v[1]);
    case FitShape::max_type: return ContractionSpec<Scalar>::max_type(v[0]);
  }
  return {};
}

}  // namespace detail

/// Smallest-rate constants of the given shape that pass the condition on `n` seeded pairs.
///
/// The first free constant is searched by bisection over the grid
/// {0, h, 2h, ...} restricted to the valid region, then refined once at the
/// midpoint below the grid hit. Remaining free constants (if any) are swept
/// over a grid, and the candidate with the smallest iteration_rate wins; ties
/// go to the smaller constant sum. Returns nullopt when nothing valid passes.
template <typename Scalar>
std::optional<ContractionSpec<Scalar>> fit_constants(FitShape shape,
                                                     const PartialConeMetricSpace<Scalar>& space,
                                                     const MappingPair<Scalar>& maps,
                                                     std::uint64_t seed, std::int64_t n,
                                                     const FitOptions& options = {}) {
  if (!(options.grid_step > 0 && options.grid_step < 1) ||
      !(options.outer_step_3d > 0 && options.outer_step_3d < 1)) {
    throw ConstraintError("fit grid steps must lie in (0, 1)");
  }
  const auto pairs = sample_pairs(space, seed, n);
  const Family family = detail::make_spec<Scalar>(shape, {0, 0, 0}).family;
  const detail::FeasibilityOracle<Scalar> oracle(family, space, maps, pairs);

  // Coefficient vector (α, β, γ) as seen by the linear condition.
  auto theta_of = [&](const std::array<Scalar, 3>& v) {
    const auto spec = detail::make_spec<Scalar>(shape, v);
    return std::array<Scalar, 3>{spec.alpha, spec.beta, spec.gamma};
  };
  auto valid = [&](const std::array<Scalar, 3>& v) {
    return validate_params(detail::make_spec<Scalar>(shape, v)).empty();
  };

  // Minimal feasible value of v[0] with v[1], v[2] held fixed.
  const Scalar h = Scalar(options.grid_step);
  auto min_first = [&](std::array<Scalar, 3> v) -> std::optional<Scalar> {
    auto at = [&](Scalar t) {
      v[0] = t;
      return v;
    };
    if (!valid(at(0))) return std::nullopt;
    long top = 0;
    while (valid(at(Scalar(top + 1) * h))) ++top;
    if (!oracle.feasible(theta_of(at(Scalar(top) * h)))) return std::nullopt;
    long lo = -1, hi = top;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (oracle.feasible(theta_of(at(Scalar(mid) * h)))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    Scalar best = Scalar(hi) * h;
    if (hi > 0) {
      const Scalar refined = (Scalar(hi) - Scalar(0.5)) * h;
      if (oracle.feasible(theta_of(at(refined)))) best = refined;
    }
    return best;
  };

  std::optional<ContractionSpec<Scalar>> best;
  Scalar best_rate{0};
  Scalar best_sum{0};
  auto consider = [&](const std::array<Scalar, 3>& v) {
    const auto spec = detail::make_spec<Scalar>(shape, v);
    const Scalar rate = iteration_rate(spec);
    const Scalar sum = spec.alpha + spec.beta + spec.gamma;
    if (!best || rate < best_rate || (rate == best_rate && sum < best_sum)) {
      best = spec;
      best_rate = rate;
      best_sum = sum;
    }
  };

  switch (shape) {
    case FitShape::kannan_symmetric:
    case FitShape::reich_symmetric:
    case FitShape::max_type:
      if (auto t = min_first({0, 0, 0})) consider({*t, 0, 0});
      break;
    case FitShape::kannan:
    case FitShape::rational:
      for (long j = 0; Scalar(j) * h < Scalar(1); ++j) {
        if (auto t = min_first({0, Scalar(j) * h, 0})) consider({*t, Scalar(j) * h, 0});
      }
      break;
    case FitShape::reich: {
      const Scalar g = Scalar(options.outer_step_3d);
      for (long j = 0; Scalar(j) * g < Scalar(1); ++j) {
        for (long k = 0; Scalar(j + k) * g < Scalar(1); ++k) {
          const std::array<Scalar, 3> v{0, Scalar(j) * g, Scalar(k) * g};
          if (auto t = min_first(v)) consider({*t, v[1], v[2]});
        }
      }
      break;
    }
  }
  return best;
}

/// Family-level entry point; implicit-linear has no fitting support.
template <typename Scalar>
std::optional<ContractionSpec<Scalar>> fit_constants(Family family,
                                                     const PartialConeMetricSpace<Scalar>& space,
                                                     const MappingPair<Scalar>& maps,
                                                     std::uint64_t seed, std::int64_t n,
                                                     const FitOptions& options = {}) {
  return fit_constants(fit_shape_for(family), space, maps, seed, n, options);
}

}  // namespace conefix
