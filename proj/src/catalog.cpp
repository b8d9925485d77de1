#include "conefix/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace conefix {

namespace {

Point<double> box(Eigen::Index dim, double value) { return Point<double>::Constant(dim, value); }

}  // namespace

Space make_r2_max_space(double k, double bound) {
  if (!(k >= 0)) throw ConstraintError("max-metric space needs k >= 0");
  if (!(bound >= 0)) throw ConstraintError("domain bound must be >= 0");
  auto metric = [k](const Point<double>& x, const Point<double>& y) {
    const double m = std::max(x[0], y[0]);
    ConeVector<double> v(2);
    v << m, k * m;
    return v;
  };
  return Space("r2-max", AmbientSpace<double>(2, NormKind::sup), box(1, 0.0), box(1, bound), metric);
}

Space make_l1_max_space(Eigen::Index dim, double bound) {
  if (dim < 1) throw StructuralError("l1 space dimension must be >= 1");
  if (!(bound >= 0)) throw ConstraintError("domain bound must be >= 0");
  auto metric = [](const Point<double>& x, const Point<double>& y) -> ConeVector<double> {
    return x.cwiseMax(y);
  };
  return Space("l1-max", AmbientSpace<double>(dim, NormKind::one_sum), box(dim, 0.0), box(dim, bound),
               metric);
}

Space make_r2_min_space(double k, double bound) {
  if (!(k >= 0)) throw ConstraintError("min-metric space needs k >= 0");
  auto metric = [k](const Point<double>& x, const Point<double>& y) {
    const double m = std::min(x[0], y[0]);
    ConeVector<double> v(2);
    v << m, k * m;
    return v;
  };
  return Space("r2-min", AmbientSpace<double>(2, NormKind::sup), box(1, 0.0), box(1, bound), metric);
}

namespace maps {

Map scale(double c) {
  return [c](const Point<double>& x) -> Point<double> { return c * x; };
}

Map tan_third() {
  return [](const Point<double>& x) -> Point<double> {
    return x.unaryExpr([](double v) { return v * std::tan(v) / 3; });
  };
}

Map sin_third() {
  return [](const Point<double>& x) -> Point<double> {
    return x.unaryExpr([](double v) { return v * std::sin(v) / 3; });
  };
}

Map cos_form() {
  return [](const Point<double>& x) -> Point<double> {
    return x.unaryExpr([](double v) { return v * (1 - std::cos(v)) / 3; });
  };
}

Map identity() {
  return [](const Point<double>& x) { return x; };
}

Map zero() {
  return [](const Point<double>& x) -> Point<double> { return Point<double>::Zero(x.size()); };
}

}  // namespace maps

std::vector<CatalogEntry> catalog(const CatalogOptions& options) {
  std::vector<CatalogEntry> out;
  out.push_back({"l1-tan-quarter",
                 make_l1_max_space(options.l1_dim),
                 {maps::tan_third(), maps::scale(0.25)},
                 Spec::kannan(1.0 / 3, 1.0 / 3),
                 box(options.l1_dim, 0.0),
                 "truncated l1 with coordinatewise max; T = x tan x / 3, S = x / 4; "
                 "Kannan-type with alpha = beta = 1/3"});
  // (alpha, beta) = (0, 1/2) is what fit_constants(rational) returns on this pair:
  // x >= y = 0 forces beta >= 1/2 and the rate beta / (1 - alpha) then prefers alpha = 0.
  out.push_back({"interval-half-sin",
                 make_r2_max_space(options.k),
                 {maps::scale(0.5), maps::sin_third()},
                 Spec::rational(0.0, 0.5),
                 box(1, 0.0),
                 "R^2-valued max metric on [0, pi/4]; T = x / 2, S = x sin x / 3; rational-type"});
  out.push_back({"interval-cos-half",
                 make_r2_max_space(options.k),
                 {maps::cos_form(), maps::scale(0.5)},
                 Spec::max_type(2.0 / 3),
                 box(1, 0.0),
                 "R^2-valued max metric on [0, pi/4]; T = x (1 - cos x) / 3, S = x / 2; "
                 "max-type with alpha = 2/3"});
  return out;
}

std::optional<CatalogEntry> find_entry(std::string_view id, const CatalogOptions& options) {
  for (auto& e : catalog(options)) {
    if (e.id == id) return std::move(e);
  }
  return std::nullopt;
}

}  // namespace conefix
