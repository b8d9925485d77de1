#include "conefix/report_json.hpp"

#include <iomanip>
#include <limits>

namespace conefix {

namespace {

nlohmann::json vec(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

nlohmann::json to_json(const Spec& spec) {
  nlohmann::json j{{"family", std::string(to_string(spec.family))}, {"alpha", spec.alpha}};
  switch (spec.family) {
    case Family::kannan:
    case Family::rational:
      j["beta"] = spec.beta;
      break;
    case Family::reich:
      j["beta"] = spec.beta;
      j["gamma"] = spec.gamma;
      break;
    case Family::implicit_linear:
      j["beta"] = spec.beta;
      j["gamma"] = spec.gamma;
      j["s"] = spec.s;
      j["r"] = spec.r;
      break;
    case Family::max_type:
      break;
  }
  if (validate_params(spec).empty()) {
    j["rate"] = contraction_rate(spec);
    j["iteration_rate"] = iteration_rate(spec);
  }
  return j;
}

nlohmann::json to_json(const Certificate<double>& cert) {
  nlohmann::json v = nlohmann::json::array();
  for (std::size_t i = 0; i < cert.violations.size() && i < max_reported_violations; ++i) {
    const auto& w = cert.violations[i];
    v.push_back({{"x", vec(w.x)}, {"y", vec(w.y)}, {"slack", vec(w.slack)}});
  }
  return {{"pass", cert.pass()},
          {"samples", cert.samples_checked},
          {"violations", v},
          {"violations_total", cert.violations.size()},
          {"worst_slack", cert.worst_slack},
          {"spec", to_json(cert.spec)}};
}

nlohmann::json to_json(const AxiomReport<double>& report) {
  nlohmann::json v = nlohmann::json::array();
  for (std::size_t i = 0; i < report.violations.size() && i < max_reported_violations; ++i) {
    const auto& w = report.violations[i];
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : w.witnesses) pts.push_back(vec(p));
    v.push_back({{"axiom", std::string(to_string(w.axiom))}, {"points", pts}, {"slack", vec(w.slack)}});
  }
  return {{"pass", report.pass()},
          {"samples", report.samples_checked},
          {"violations", v},
          {"violations_total", report.violations.size()}};
}

nlohmann::json to_json(const TraceRecord<double>& record) {
  nlohmann::json j{{"n", record.n}, {"step_norm", record.step_norm}, {"self_norm", record.self_norm}};
  if (record.point) {
    j["point"] = vec(*record.point);
  } else {
    j["iterate_norm"] = record.iterate_norm;
  }
  return j;
}

nlohmann::json summary_json(const SolveResult<double>& result) {
  nlohmann::json j{{"status", std::string(to_string(result.status))},
                   {"stop_reason", std::string(to_string(result.reason))},
                   {"iterations", result.iterations},
                   {"residual_T", result.residual_t},
                   {"residual_S", result.residual_s},
                   {"self_distance", result.self_distance},
                   {"map_calls", result.map_calls}};
  if (result.x_star.size() <= trace_point_limit) {
    j["x_star"] = vec(result.x_star);
  } else {
    j["x_star_norm"] = result.x_star.lpNorm<Eigen::Infinity>();
  }
  if (result.rate) j["K"] = *result.rate;
  if (result.final_apriori_bound) j["apriori_bound"] = *result.final_apriori_bound;
  return j;
}

void write_trace_jsonl(const IterationTrace<double>& trace, std::ostream& out) {
  for (const auto& r : trace.records) out << to_json(r).dump() << '\n';
}

void write_trace_csv(const IterationTrace<double>& trace, std::ostream& out) {
  const bool points = trace.point_dimension <= trace_point_limit;
  out << "n,step_norm,self_norm";
  if (points) {
    for (Eigen::Index i = 0; i < trace.point_dimension; ++i) out << ",x" << i;
  } else {
    out << ",iterate_norm";
  }
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : trace.records) {
    out << r.n << ',' << r.step_norm << ',' << r.self_norm;
    if (r.point) {
      for (Eigen::Index i = 0; i < r.point->size(); ++i) out << ',' << (*r.point)[i];
    } else {
      out << ',' << r.iterate_norm;
    }
    out << '\n';
  }
}

}  // namespace conefix
