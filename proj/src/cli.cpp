#include "conefix/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "conefix/fit.hpp"
#include "conefix/report_json.hpp"
#include "conefix/solver.hpp"

namespace conefix::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw StructuralError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

Map parse_map(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  if (name == "scale") {
    if (colon == std::string_view::npos) throw StructuralError("scale map needs a factor, e.g. scale:0.5");
    return maps::scale(parse_number(text.substr(colon + 1), "scale factor"));
  }
  if (colon != std::string_view::npos) {
    throw StructuralError("map '" + std::string(name) + "' takes no parameter");
  }
  if (name == "tanthird") return maps::tan_third();
  if (name == "sinthird") return maps::sin_third();
  if (name == "cosform") return maps::cos_form();
  if (name == "identity") return maps::identity();
  if (name == "zero") return maps::zero();
  throw StructuralError("unknown map form '" + std::string(text) + "'");
}

struct Options {
  std::string entry;
  std::string inline_def;
  std::int64_t l1_dim = 8;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "jsonl";

  std::string family;
  std::optional<double> alpha, beta, gamma, s, r;

  std::string x0 = "max";
  double tol = 1e-10;
  std::int64_t max_iters = 100000;
  bool apriori = false;

  std::string what = "contraction";
  std::int64_t samples = 1000;
};

struct Problem {
  Space space;
  Maps maps;
  std::optional<Spec> spec;
  std::string id;
};

Problem load_problem(const Options& o) {
  if (o.entry.empty() == o.inline_def.empty()) {
    throw StructuralError("exactly one of --entry or --inline is required");
  }
  if (!o.entry.empty()) {
    CatalogOptions copt;
    copt.l1_dim = o.l1_dim;
    auto e = find_entry(o.entry, copt);
    if (!e) throw StructuralError("unknown entry id '" + o.entry + "'");
    return {std::move(e->space), std::move(e->maps), e->spec, e->id};
  }
  auto p = parse_inline(o.inline_def);
  return {std::move(p.space), std::move(p.maps), std::nullopt, "inline:" + o.inline_def};
}

bool any_param(const Options& o) { return o.alpha || o.beta || o.gamma || o.s || o.r; }

/// Applies --family / --alpha ... on top of the problem's own spec.
std::optional<Spec> effective_spec(const Options& o, std::optional<Spec> base) {
  if (!o.family.empty()) {
    Spec spec;
    if (o.family == "kannan-sym") {
      spec = Spec::kannan(o.alpha.value_or(0), o.alpha.value_or(0));
    } else if (o.family == "reich-sym") {
      const double a = o.alpha.value_or(0);
      spec = Spec::reich(a, a, a);
    } else {
      const auto fam = family_from_string(o.family);
      if (!fam) throw StructuralError("unknown family '" + o.family + "'");
      spec.family = *fam;
      spec.alpha = o.alpha.value_or(0);
      spec.beta = o.beta.value_or(0);
      spec.gamma = o.gamma.value_or(0);
      spec.s = o.s.value_or(0);
      spec.r = o.r.value_or(0);
    }
    return spec;
  }
  if (any_param(o)) {
    if (!base) throw StructuralError("constant overrides need --family when no entry spec exists");
    if (o.alpha) base->alpha = *o.alpha;
    if (o.beta) base->beta = *o.beta;
    if (o.gamma) base->gamma = *o.gamma;
    if (o.s) base->s = *o.s;
    if (o.r) base->r = *o.r;
  }
  return base;
}

void emit(const nlohmann::json& j, const Options& o, std::ostream& out) {
  out << j.dump(2) << '\n';
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw StructuralError("cannot open output file '" + o.out_path + "'");
    f << j.dump(2) << '\n';
  }
}

int cmd_solve(const Options& o, std::ostream& out) {
  auto problem = load_problem(o);
  const auto spec = effective_spec(o, problem.spec);
  if (spec) require_valid(*spec);
  if (o.format != "jsonl" && o.format != "json-lines" && o.format != "csv") {
    throw StructuralError("unknown trace format '" + o.format + "'");
  }
  const Point<double> x0 = parse_point(o.x0, problem.space, o.seed);
  StopConfig<double> stop;
  stop.tol = o.tol;
  stop.max_iters = o.max_iters;
  stop.use_apriori = o.apriori;
  const auto result = solve(problem.space, problem.maps, x0, stop, spec);

  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw StructuralError("cannot open output file '" + o.out_path + "'");
    if (o.format == "csv") {
      write_trace_csv(result.trace, f);
    } else {
      write_trace_jsonl(result.trace, f);
    }
  }
  nlohmann::json summary = summary_json(result);
  summary["problem"] = problem.id;
  if (spec) summary["spec"] = to_json(*spec);
  out << summary.dump(2) << '\n';
  return result.converged() ? ok : not_converged;
}

int cmd_verify(const Options& o, std::ostream& out) {
  auto problem = load_problem(o);
  if (o.samples < 1) throw StructuralError("-n must be >= 1");
  if (o.what == "axioms") {
    const auto report = check_axioms(problem.space, o.seed, o.samples);
    nlohmann::json j = to_json(report);
    j["problem"] = problem.id;
    emit(j, o, out);
    return report.pass() ? ok : violations_found;
  }
  if (o.what != "contraction") throw StructuralError("--what must be 'axioms' or 'contraction'");
  const auto spec = effective_spec(o, problem.spec);
  if (!spec) throw StructuralError("contraction check needs --family (inline problems carry no spec)");
  const auto cert = verify_sampled(*spec, problem.space, problem.maps, o.seed, o.samples);
  nlohmann::json j = to_json(cert);
  j["problem"] = problem.id;
  emit(j, o, out);
  return cert.pass() ? ok : violations_found;
}

int cmd_fit(const Options& o, std::ostream& out) {
  auto problem = load_problem(o);
  if (o.family.empty()) throw StructuralError("fit needs --family");
  if (o.samples < 1) throw StructuralError("-n must be >= 1");
  if (family_from_string(o.family) == Family::implicit_linear) {
    throw ConstraintError("unsupported family for fitting");
  }
  const auto shape = fit_shape_from_string(o.family);
  if (!shape) throw StructuralError("unknown family '" + o.family + "'");
  const auto fitted = fit_constants(*shape, problem.space, problem.maps, o.seed, o.samples);
  nlohmann::json j{{"problem", problem.id}, {"samples", o.samples}, {"feasible", fitted.has_value()}};
  if (fitted) j["spec"] = to_json(*fitted);
  emit(j, o, out);
  return fitted ? ok : fit_infeasible;
}

void add_problem_options(CLI::App& sub, Options& o) {
  sub.add_option("--entry", o.entry, "Catalog entry id (l1-tan-quarter, interval-half-sin, interval-cos-half)");
  sub.add_option("--inline", o.inline_def,
                 "Inline problem: <space>[,T=<map>][,S=<map>][,box=<B>]; spaces max-metric[:k], "
                 "min-metric[:k], l1-max[:dim]; maps scale:c, tanthird, sinthird, cosform, identity, zero");
  sub.add_option("--dim", o.l1_dim, "Truncation dimension of l1 catalog entries")->check(CLI::PositiveNumber);
  sub.add_option("--seed", o.seed, "Sampler seed")->envname("CONEFIX_SEED");
  sub.add_option("--out", o.out_path, "Output file (trace for solve, JSON report otherwise)");
}

void add_spec_options(CLI::App& sub, Options& o, const std::string& family_help) {
  sub.add_option("--family", o.family, family_help);
  sub.add_option("--alpha", o.alpha, "Constant alpha");
  sub.add_option("--beta", o.beta, "Constant beta");
  sub.add_option("--gamma", o.gamma, "Constant gamma");
  sub.add_option("--s", o.s, "Constant s (implicit-linear)");
  sub.add_option("--r", o.r, "Constant r (implicit-linear)");
}

}  // namespace

InlineProblem parse_inline(std::string_view text) {
  const auto parts = split(text, ',');
  const auto head = trim(parts.front());
  double bound = quarter_pi;
  Map t = maps::identity();
  Map s = maps::identity();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto part = trim(parts[i]);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw StructuralError("inline item '" + std::string(part) + "' lacks '='");
    const auto key = part.substr(0, eq);
    const auto value = part.substr(eq + 1);
    if (key == "T") {
      t = parse_map(value);
    } else if (key == "S") {
      s = parse_map(value);
    } else if (key == "box") {
      bound = parse_number(value, "box bound");
    } else {
      throw StructuralError("unknown inline key '" + std::string(key) + "'");
    }
  }
  const auto colon = head.find(':');
  const auto name = head.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  if (name == "max-metric") {
    const double k = has_param ? parse_number(head.substr(colon + 1), "k") : 1.0;
    return {make_r2_max_space(k, bound), {t, s}};
  }
  if (name == "min-metric") {
    const double k = has_param ? parse_number(head.substr(colon + 1), "k") : 1.0;
    return {make_r2_min_space(k, bound), {t, s}};
  }
  if (name == "l1-max") {
    const double d = has_param ? parse_number(head.substr(colon + 1), "dimension") : 8.0;
    if (d < 1 || d != std::floor(d)) throw StructuralError("l1-max dimension must be a positive integer");
    return {make_l1_max_space(static_cast<Eigen::Index>(d), bound), {t, s}};
  }
  throw StructuralError("unknown inline space form '" + std::string(head) + "'");
}

Point<double> parse_point(std::string_view text, const Space& space, std::uint64_t seed) {
  text = trim(text);
  const auto dim = space.point_dimension();
  Point<double> x;
  if (text == "max") {
    x = space.upper();
  } else if (text == "zero") {
    x = Point<double>::Zero(dim);
  } else if (text == "rand") {
    UnitSource src(seed);
    x.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      x[i] = space.lower()[i] + src.next() * (space.upper()[i] - space.lower()[i]);
    }
  } else {
    if (!text.empty() && text.front() == '[' && text.back() == ']') {
      text = text.substr(1, text.size() - 2);
    }
    const auto parts = split(text, ',');
    if (parts.size() == 1) {
      x = Point<double>::Constant(dim, parse_number(parts[0], "x0"));
    } else {
      if (static_cast<Eigen::Index>(parts.size()) != dim) {
        throw StructuralError("x0 has " + std::to_string(parts.size()) + " coordinates, expected " +
                              std::to_string(dim));
      }
      x.resize(dim);
      for (Eigen::Index i = 0; i < dim; ++i) x[i] = parse_number(parts[static_cast<std::size_t>(i)], "x0");
    }
  }
  space.require_in_domain(x, "x0");
  return x;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conefix: common fixed points of mapping pairs in partial cone metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "TOML/INI file; options go under a [solve], [verify] or [fit] section, keyed by "
                 "long flag name without dashes (entry, x0, max-iters, ...). Command-line flags take precedence.");
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "Run the alternating iteration and write its trace");
  add_problem_options(*solve_cmd, o);
  add_spec_options(*solve_cmd, o, "Override the contraction family (kannan, kannan-sym, reich, rational, implicit, max)");
  solve_cmd->add_option("--x0", o.x0, "Start point: scalar, vector literal, max, zero or rand")->capture_default_str();
  solve_cmd->add_option("--tol", o.tol, "Residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_flag("--apriori", o.apriori, "Also stop on the geometric a-priori bound (needs a spec)");
  solve_cmd->add_option("--format", o.format, "Trace format: jsonl or csv")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Sample the axioms or the contraction condition");
  add_problem_options(*verify_cmd, o);
  add_spec_options(*verify_cmd, o, "Contraction family (kannan, kannan-sym, reich, rational, implicit, max)");
  verify_cmd->add_option("--what", o.what, "axioms or contraction")->capture_default_str();
  verify_cmd->add_option("-n", o.samples, "Number of sampled pairs/triples")->capture_default_str();

  auto* fit_cmd = app.add_subcommand("fit", "Fit minimal-rate contraction constants on sampled pairs");
  add_problem_options(*fit_cmd, o);
  fit_cmd->add_option("--family", o.family, "kannan, kannan-sym, reich, reich-sym, rational or max");
  fit_cmd->add_option("-n", o.samples, "Number of sampled pairs")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : config_error;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    return cmd_fit(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
}

}  // namespace conefix::cli
