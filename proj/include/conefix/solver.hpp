#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "conefix/contractions.hpp"
#include "conefix/errors.hpp"
#include "conefix/ordered_space.hpp"
#include "conefix/pcm.hpp"

namespace conefix {

template <typename Scalar = double>
struct StopConfig {
  Scalar tol = Scalar(1e-10);
  std::int64_t max_iters = 100000;
  /// Also trigger the convergence test once M K^n/(1−K) ||p(x1,x0)|| <= tol (needs a spec).
  bool use_apriori = false;
};

/// Iterates are stored in the trace only up to this point dimension.
inline constexpr Eigen::Index trace_point_limit = 8;

template <typename Scalar = double>
struct TraceRecord {
  std::int64_t n = 0;
  Scalar step_norm{0};  ///< norm(p(x_{n+1}, x_n))
  Scalar self_norm{0};  ///< norm(p(x_n, x_n))
  Scalar iterate_norm{0};
  std::optional<Point<Scalar>> point;
};

template <typename Scalar = double>
struct IterationTrace {
  Eigen::Index point_dimension = 0;
  std::vector<TraceRecord<Scalar>> records;
};

enum class SolveStatus { converged, max_iters_exceeded };
enum class StopReason { residual, apriori_bound, max_iters };

inline std::string_view to_string(SolveStatus s) {
  return s == SolveStatus::converged ? "converged" : "max_iters_exceeded";
}

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::residual: return "residual";
    case StopReason::apriori_bound: return "apriori_bound";
    case StopReason::max_iters: return "max_iters";
  }
  return "?";
}

template <typename Scalar = double>
struct SolveResult {
  SolveStatus status = SolveStatus::max_iters_exceeded;
  StopReason reason = StopReason::max_iters;
  Point<Scalar> x_star;
  std::int64_t iterations = 0;
  Scalar residual_t{0};     ///< norm(p(x*, T x*))
  Scalar residual_s{0};     ///< norm(p(x*, S x*))
  Scalar self_distance{0};  ///< norm(p(x*, x*))
  IterationTrace<Scalar> trace;
  /// Map applications: one per trace record plus residual probes.
  std::int64_t map_calls = 0;
  std::optional<Scalar> rate;
  std::optional<Scalar> final_apriori_bound;

  bool converged() const { return status == SolveStatus::converged; }
};

/// M K^n ||p(x1,x0)|| / (1 − K): bound on ||p(x_m, x_n)|| for every m > n.
template <typename Scalar>
Scalar apriori_bound(Scalar rate, Scalar normal_constant, Scalar first_step_norm, std::int64_t n) {
  if (!(rate >= Scalar(0) && rate < Scalar(1))) {
    throw ConstraintError("a-priori bound needs a rate K in [0, 1)");
  }
  if (!(normal_constant >= Scalar(1))) {
    throw ConstraintError("a-priori bound needs a normal constant M >= 1");
  }
  if (!(first_step_norm >= Scalar(0)) || n < 0) {
    throw ConstraintError("a-priori bound needs a nonnegative first step norm and n >= 0");
  }
  using std::pow;
  return normal_constant * pow(rate, Scalar(n)) * first_step_norm / (Scalar(1) - rate);
}

/// Alternating Picard iteration x_{2n+1} = T x_{2n}, x_{2n+2} = S x_{2n+1}.
///
/// Record n of the trace holds x_n and the step to x_{n+1}, so each record
/// costs exactly one map application. When the step (the residual of the
/// map just applied) drops to `tol`, or the a-priori bound does, the other
/// map is probed at x_n; both residuals within `tol` ends the run with
/// x* = x_n. Divergence is reported as max_iters_exceeded, never thrown.
template <typename Scalar>
SolveResult<Scalar> solve(const PartialConeMetricSpace<Scalar>& space, const MappingPair<Scalar>& maps,
                          const std::type_identity_t<Point<Scalar>>& x0,
                          const std::type_identity_t<StopConfig<Scalar>>& stop,
                          const std::optional<std::type_identity_t<ContractionSpec<Scalar>>>& spec = std::nullopt) {
  if (!(stop.tol > Scalar(0))) throw ConstraintError("stop tolerance must be positive");
  if (stop.max_iters < 1) throw ConstraintError("max_iters must be >= 1");
  space.require_in_domain(x0, "x0");

  const auto& amb = space.ambient();
  SolveResult<Scalar> result;
  result.trace.point_dimension = space.point_dimension();
  if (spec) result.rate = iteration_rate(*spec);
  const bool keep_points = space.point_dimension() <= trace_point_limit;

  auto step_label = [](std::int64_t k) { return "iterate x_" + std::to_string(k); };
  auto probe = [&](const typename MappingPair<Scalar>::Map& map, const Point<Scalar>& x,
                   std::int64_t n) {
    ++result.map_calls;
    const Point<Scalar> image = apply_map(space, map, x, "residual probe at " + step_label(n));
    return norm(amb, pcm_eval(space, x, image));
  };

  Point<Scalar> x = x0;
  Scalar first_step{0};
  for (std::int64_t n = 0; n < stop.max_iters; ++n) {
    const bool t_step = n % 2 == 0;
    const auto& lead = t_step ? maps.t : maps.s;
    const auto& other = t_step ? maps.s : maps.t;

    ++result.map_calls;
    Point<Scalar> next = apply_map(space, lead, x, step_label(n + 1));

    TraceRecord<Scalar> rec;
    rec.n = n;
    rec.step_norm = norm(amb, pcm_eval(space, next, x));
    rec.self_norm = norm(amb, pcm_eval(space, x, x));
    rec.iterate_norm = x.template lpNorm<Eigen::Infinity>();
    if (keep_points) rec.point = x;
    result.trace.records.push_back(rec);
    if (n == 0) first_step = rec.step_norm;

    std::optional<Scalar> bound;
    if (result.rate) {
      bound = apriori_bound(*result.rate, space.normal_constant(), first_step, n);
      result.final_apriori_bound = bound;
    }
    const bool by_residual = rec.step_norm <= stop.tol;
    const bool by_bound = stop.use_apriori && bound && *bound <= stop.tol;
    if (by_residual || by_bound) {
      const Scalar lead_residual = norm(amb, pcm_eval(space, x, next));
      const Scalar other_residual = probe(other, x, n);
      if (lead_residual <= stop.tol && other_residual <= stop.tol) {
        result.status = SolveStatus::converged;
        result.reason = by_residual ? StopReason::residual : StopReason::apriori_bound;
        result.x_star = x;
        result.iterations = n;
        result.residual_t = t_step ? lead_residual : other_residual;
        result.residual_s = t_step ? other_residual : lead_residual;
        result.self_distance = rec.self_norm;
        return result;
      }
    }
    x = std::move(next);
  }

  result.status = SolveStatus::max_iters_exceeded;
  result.reason = StopReason::max_iters;
  result.iterations = stop.max_iters;
  result.residual_t = probe(maps.t, x, stop.max_iters);
  result.residual_s = probe(maps.s, x, stop.max_iters);
  result.self_distance = norm(amb, pcm_eval(space, x, x));
  result.x_star = std::move(x);
  return result;
}

template <typename Scalar = double>
struct FixedPointReport {
  bool certified = false;
  Scalar residual_t{0};
  Scalar residual_s{0};
  Scalar self_distance{0};
  Scalar induced_t{0};  ///< norm(d_p(x, Tx))
  Scalar induced_s{0};  ///< norm(d_p(x, Sx))
};

/// Certifies x as a common fixed point with vanishing self-distance.
///
/// Requires p(x,Tx), p(x,Sx), p(x,x) within tol and d_p(x,Tx), d_p(x,Sx)
/// within 4 tol. A point with T x = S x = x but p(x,x) > tol is rejected.
template <typename Scalar>
FixedPointReport<Scalar> certify_fixed_point(const PartialConeMetricSpace<Scalar>& space,
                                             const MappingPair<Scalar>& maps,
                                             const std::type_identity_t<Point<Scalar>>& x,
                                             std::type_identity_t<Scalar> tol) {
  space.require_in_domain(x, "candidate fixed point");
  const auto& amb = space.ambient();
  const Point<Scalar> tx = apply_map(space, maps.t, x, "T(x)");
  const Point<Scalar> sx = apply_map(space, maps.s, x, "S(x)");
  FixedPointReport<Scalar> rep;
  rep.residual_t = norm(amb, pcm_eval(space, x, tx));
  rep.residual_s = norm(amb, pcm_eval(space, x, sx));
  rep.self_distance = norm(amb, pcm_eval(space, x, x));
  rep.induced_t = norm(amb, induced_metric(space, x, tx));
  rep.induced_s = norm(amb, induced_metric(space, x, sx));
  rep.certified = rep.residual_t <= tol && rep.residual_s <= tol && rep.self_distance <= tol &&
                  rep.induced_t <= 4 * tol && rep.induced_s <= 4 * tol;
  return rep;
}

template <typename Scalar = double>
struct UniquenessReport {
  std::vector<SolveResult<Scalar>> runs;
  std::vector<std::size_t> not_converged;  ///< indices into runs, excluded from comparison
  Scalar max_disagreement{0};              ///< max pairwise sup-distance between limits
  bool agree = false;
  bool uniqueness_asserted = true;
  std::string note;
};

/// Solves from every seed and checks all converged limits agree within 10 tol.
///
/// For implicit-linear contractions the report is marked as not asserting
/// uniqueness: that family only guarantees existence of a common fixed point.
template <typename Scalar>
UniquenessReport<Scalar> check_uniqueness(const PartialConeMetricSpace<Scalar>& space,
                                          const MappingPair<Scalar>& maps,
                                          const std::vector<Point<Scalar>>& seeds,
                                          const std::type_identity_t<StopConfig<Scalar>>& stop,
                                          const std::optional<std::type_identity_t<ContractionSpec<Scalar>>>& spec =
                                              std::nullopt) {
  if (seeds.size() < 2) throw ConstraintError("uniqueness probing needs at least two seeds");
  UniquenessReport<Scalar> rep;
  if (spec && spec->family == Family::implicit_linear) {
    rep.uniqueness_asserted = false;
    rep.note = "uniqueness not asserted for implicit-linear contractions";
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    rep.runs.push_back(solve(space, maps, seeds[i], stop, spec));
    if (!rep.runs.back().converged()) rep.not_converged.push_back(i);
  }
  std::vector<const Point<Scalar>*> limits;
  for (const auto& run : rep.runs) {
    if (run.converged()) limits.push_back(&run.x_star);
  }
  for (std::size_t i = 0; i < limits.size(); ++i) {
    for (std::size_t j = i + 1; j < limits.size(); ++j) {
      const Scalar d = (*limits[i] - *limits[j]).template lpNorm<Eigen::Infinity>();
      if (d > rep.max_disagreement) rep.max_disagreement = d;
    }
  }
  rep.agree = !limits.empty() && rep.max_disagreement <= 10 * stop.tol;
  if (!rep.not_converged.empty() && rep.note.empty()) {
    rep.note = std::to_string(rep.not_converged.size()) + " run(s) did not converge";
  }
  return rep;
}

}  // namespace conefix
