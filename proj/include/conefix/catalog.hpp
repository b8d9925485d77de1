#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conefix/contractions.hpp"
#include "conefix/pcm.hpp"

namespace conefix {

using Space = PartialConeMetricSpace<double>;
using Maps = MappingPair<double>;
using Spec = ContractionSpec<double>;
using Map = Maps::Map;

inline constexpr double quarter_pi = std::numbers::pi / 4;

/// X = [0, bound], E = R^2 with sup-norm, p(x,y) = (max{x,y}, k max{x,y}).
Space make_r2_max_space(double k, double bound = quarter_pi);

/// X = [0, bound]^dim, E = R^dim with 1-norm, p(x,y) = coordinatewise max.
Space make_l1_max_space(Eigen::Index dim, double bound = quarter_pi);

/// p(x,y) = (min{x,y}, k min{x,y}). Not a partial cone metric: PCM1 fails for x > y.
Space make_r2_min_space(double k = 1, double bound = quarter_pi);

/// Coordinatewise maps.
namespace maps {
Map scale(double c);  ///< x -> c x
Map tan_third();      ///< x -> x tan(x) / 3
Map sin_third();      ///< x -> x sin(x) / 3
Map cos_form();       ///< x -> x (1 - cos x) / 3
Map identity();
Map zero();
}  // namespace maps

struct CatalogEntry {
  std::string id;
  Space space;
  Maps maps;
  Spec spec;
  Point<double> expected_fixed_point;
  std::string note;
};

struct CatalogOptions {
  Eigen::Index l1_dim = 8;
  double k = 1;
};

std::vector<CatalogEntry> catalog(const CatalogOptions& options = {});

std::optional<CatalogEntry> find_entry(std::string_view id, const CatalogOptions& options = {});

}  // namespace conefix
