#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "conefix/catalog.hpp"

namespace conefix::cli {

enum ExitCode : int {
  ok = 0,
  config_error = 1,
  not_converged = 2,
  violations_found = 3,
  fit_infeasible = 4,
};

/// A space and mapping pair assembled from the closed set of inline forms.
struct InlineProblem {
  Space space;
  Maps maps;
};

/// Parses `<space>[,T=<map>][,S=<map>][,box=<B>]`.
///
/// Spaces: `max-metric[:k]`, `min-metric[:k]`, `l1-max[:dim]`.
/// Maps: `scale:c`, `tanthird`, `sinthird`, `cosform`, `identity`, `zero`.
/// Missing maps default to the identity; the box bound defaults to pi/4.
InlineProblem parse_inline(std::string_view text);

/// Parses a starting point: `max`, `zero`, `rand`, a scalar (broadcast), or a
/// vector literal `[a,b,...]` / `a,b,...`.
Point<double> parse_point(std::string_view text, const Space& space, std::uint64_t seed);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conefix::cli
