#include "xlp/properties.hpp"

#include <algorithm>
#include <cmath>

#include "xlp/error.hpp"
#include "xlp/problems.hpp"

namespace xlp {

namespace {

using nlohmann::json;

constexpr double kChanged = 1e-6;
constexpr double kZeroScore = 1e-9;
constexpr double kNonzeroScore = 1e-6;

json to_array(const Vector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_array(const std::vector<std::optional<double>>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x ? json(*x) : json("none"));
  return out;
}

ModelSolution solve_optimal(const Problem& p, PivotRule rule) {
  ModelSolution s = solve(p, rule);
  if (s.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolveFailed, "problem '" + p.name + "' is " + to_string(s.status));
  }
  return s;
}

// Output of the chosen map; the solution map without a target is the whole x.
Vector output(const ModelSolution& s, const AttributionOptions& o) {
  if (o.map == MapKind::kObjective) return Vector::Constant(1, s.objective);
  if (o.target) return Vector::Constant(1, s.x(*o.target));
  return s.x;
}

// Largest change of the output between p and a probed copy. Columns of the
// probed copy are matched through col_origin.
double output_change(const ModelSolution& base, const ModelSolution& other, const std::vector<int>& col_origin,
                     const AttributionOptions& o) {
  if (o.map == MapKind::kObjective) return std::abs(base.objective - other.objective);
  double change = 0.0;
  for (std::size_t k = 0; k < col_origin.size(); ++k) {
    const int j = col_origin[k];
    if (o.target && j != *o.target) continue;
    change = std::max(change, std::abs(base.x(j) - other.x(static_cast<long>(k))));
  }
  return change;
}

std::vector<int> identity_origin(int n) {
  std::vector<int> v(n);
  for (int j = 0; j < n; ++j) v[j] = j;
  return v;
}

// All attributions needed to judge a subject: one per solution component when
// a gradient method runs on the solution map without a target.
std::vector<Attribution> attributions(const Problem& p, const MethodConfig& m, const AttributionOptions& o) {
  if (o.map == MapKind::kSolution && !o.target && m.method != Method::kOcclusion) {
    std::vector<Attribution> out;
    for (int k = 0; k < p.cols(); ++k) {
      AttributionOptions ok = o;
      ok.target = k;
      out.push_back(run_method(p, m, ok));
    }
    return out;
  }
  return {run_method(p, m, o)};
}

double combined_score(const Problem& p, const std::vector<Attribution>& as, const Subject& s) {
  if (as.size() == 1) return subject_score(p, as.front(), s);
  double v = 0.0;
  for (const auto& a : as) v = std::max(v, std::abs(subject_score(p, a, s)));
  return v;
}

double max_diff(const Attribution& a, const Attribution& b) {
  double d = 0.0;
  auto cmp = [&](const auto& x, const auto& y) {
    if (x.size() != y.size()) {
      d = kInf;
    } else if (x.size() > 0) {
      d = std::max(d, (x - y).cwiseAbs().maxCoeff());
    }
  };
  cmp(a.scores_A, b.scores_A);
  cmp(a.scores_b, b.scores_b);
  cmp(a.scores_w, b.scores_w);
  if (a.scores_structures.size() != b.scores_structures.size()) return kInf;
  for (std::size_t i = 0; i < a.scores_structures.size(); ++i) {
    const auto& x = a.scores_structures[i];
    const auto& y = b.scores_structures[i];
    if (x.solved != y.solved || x.value.has_value() != y.value.has_value() ||
        x.components.size() != y.components.size()) {
      return kInf;
    }
    if (x.value) d = std::max(d, std::abs(*x.value - *y.value));
    for (std::size_t k = 0; k < x.components.size(); ++k) {
      if (x.components[k].has_value() != y.components[k].has_value()) return kInf;
      if (x.components[k]) d = std::max(d, std::abs(*x.components[k] - *y.components[k]));
    }
  }
  return d;
}

json attribution_scores(const Attribution& a) {
  json out;
  if (a.method == Method::kOcclusion) {
    for (const auto& s : a.scores_structures) {
      if (!s.solved) {
        out[s.name] = "none";
      } else if (s.value) {
        out[s.name] = *s.value;
      } else {
        out[s.name] = to_array(s.components);
      }
    }
    return out;
  }
  json A = json::array();
  for (long i = 0; i < a.scores_A.rows(); ++i) A.push_back(to_array(Vector(a.scores_A.row(i).transpose())));
  out["A"] = A;
  out["b"] = to_array(a.scores_b);
  out["w"] = to_array(a.scores_w);
  return out;
}

// Optimal vertices of s's problem: the solver's answer plus those reachable by
// zero-reduced-cost pivots. Integer problems keep integral vertices only.
std::vector<Vector> optimal_vertices(const Problem& p, const ModelSolution& s) {
  std::vector<Vector> out = {s.x};
  std::vector<Vector> more;
  if (s.ilp) {
    more = multiplicity_probe(s.ilp->surrogate, s.ilp->surrogate_solution, 16);
  } else {
    more = multiplicity_probe(p, s.lp, 16);
  }
  for (auto& v : more) {
    bool integral = true;
    for (int j = 0; j < p.cols(); ++j) {
      if (p.integer[j] && std::abs(v(j) - std::round(v(j))) > 1e-6) integral = false;
    }
    if (integral) out.push_back(std::move(v));
  }
  return out;
}

std::string subject_name(const Problem& p, const Subject& s) {
  if (s.structure) return *s.structure;
  if (s.param == Parameter::kA) {
    return "A[" + std::to_string(s.index / p.cols()) + "][" + std::to_string(s.index % p.cols()) + "]";
  }
  return to_string(s.param) + "[" + std::to_string(s.index) + "]";
}

json subject_json(const Problem& p, const Subject& s) {
  json j;
  if (s.structure) {
    j["structure"] = *s.structure;
  } else {
    j["param"] = to_string(s.param);
    j["index"] = s.index;
  }
  j["label"] = subject_name(p, s);
  return j;
}

json options_json(const AttributionOptions& o) {
  json j{{"map", to_string(o.map)}, {"pivot_rule", to_string(o.rule)}, {"duals", to_string(o.duals)}};
  if (o.target) j["target"] = *o.target;
  return j;
}

}  // namespace

Problem apply_probe(const Problem& p, const Probe& probe) {
  if (probe.subject.structure) return mask_structure(p, *probe.subject.structure);
  Problem q = p;
  const int i = probe.subject.index;
  switch (probe.subject.param) {
    case Parameter::kA:
      if (i < 0 || i >= p.rows() * p.cols()) throw Error(ErrorCode::kInvalidArgument, "A index out of range");
      q.A(i / p.cols(), i % p.cols()) += probe.delta;
      break;
    case Parameter::kB:
      if (i < 0 || i >= p.rows()) throw Error(ErrorCode::kInvalidArgument, "b index out of range");
      q.b(i) += probe.delta;
      break;
    case Parameter::kW:
      if (i < 0 || i >= p.cols()) throw Error(ErrorCode::kInvalidArgument, "w index out of range");
      q.w(i) += probe.delta;
      break;
  }
  return q;
}

double subject_score(const Problem& p, const Attribution& a, const Subject& s) {
  if (s.structure) return structure_relevance(p, a, p.structure(*s.structure));
  if (a.method == Method::kOcclusion) {
    throw Error(ErrorCode::kInvalidArgument, "occlusion scores structures, not single entries");
  }
  switch (s.param) {
    case Parameter::kA: return a.scores_A(s.index / p.cols(), s.index % p.cols());
    case Parameter::kB: return a.scores_b(s.index);
    case Parameter::kW: return a.scores_w(s.index);
  }
  return 0.0;
}

Attribution run_method(const Problem& p, const MethodConfig& m, const AttributionOptions& options) {
  AttributionOptions o = options;
  o.steps = m.steps;
  if (m.method == Method::kIntegratedGradients) {
    return integrated_gradients(p, make_baseline(p, m.baseline, o.rule), o);
  }
  return attribute(p, m.method, o);
}

std::string describe(const MethodConfig& m) {
  if (m.method == Method::kIntegratedGradients) return "ig[" + to_string(m.baseline) + "]";
  return to_string(m.method);
}

PropertyReport check_sensitivity_part1(const Problem& p, const MethodConfig& m, const Subject& subject,
                                       const Probe& probe, const AttributionOptions& options) {
  PropertyReport r;
  r.property = Property::kSensitivityPart1;
  r.case_name = p.name;
  r.method = describe(m);
  r.tolerance = kZeroScore;
  r.evidence["subject"] = subject_json(p, subject);
  r.evidence["probe"] = subject_json(p, probe.subject);
  if (!probe.subject.structure) r.evidence["probe"]["delta"] = probe.delta;
  r.evidence["options"] = options_json(options);

  const ModelSolution base = solve_optimal(p, options.rule);
  std::vector<int> origin = identity_origin(p.cols());
  Problem probed;
  if (probe.subject.structure) {
    MaskResult mr = mask_with_index_map(p, *probe.subject.structure);
    probed = std::move(mr.problem);
    origin = std::move(mr.col_origin);
  } else {
    probed = apply_probe(p, probe);
  }
  const ModelSolution after = solve(probed, options.rule);
  double change = kInf;
  r.evidence["output"] = to_array(output(base, options));
  if (after.status == SolveStatus::kOptimal) {
    change = output_change(base, after, origin, options);
    r.evidence["probed_output"] = options.map == MapKind::kObjective ? json(to_array(output(after, options)))
                                                                      : json(to_array(after.x));
  } else {
    r.evidence["probed_output"] = to_string(after.status);
  }
  r.evidence["output_change"] = std::isfinite(change) ? json(change) : json("infinite");
  if (change <= kChanged) {
    r.verdict = Verdict::kInconclusive;
    r.evidence["error"] = std::string(to_string(ErrorCode::kProbeIneffective));
    r.summary = "probe did not change the output";
    return r;
  }
  const auto as = attributions(p, m, options);
  const double score = combined_score(p, as, subject);
  r.evidence["score"] = score;
  r.evidence["scores"] = attribution_scores(as.front());
  r.verdict = std::abs(score) <= kZeroScore ? Verdict::kViolated : Verdict::kHolds;
  r.summary = r.verdict == Verdict::kViolated
                  ? subject_name(p, subject) + " changes the output but has zero attribution"
                  : subject_name(p, subject) + " changes the output and has attribution " + std::to_string(score);
  return r;
}

PropertyReport check_sensitivity_part2(const Problem& p, const MethodConfig& m, const Subject& subject,
                                       double delta, const AttributionOptions& options) {
  PropertyReport r;
  r.property = Property::kSensitivityPart2;
  r.case_name = p.name;
  r.method = describe(m);
  r.tolerance = kNonzeroScore;
  r.evidence["subject"] = subject_json(p, subject);
  r.evidence["options"] = options_json(options);

  // Irrelevance is judged on the optimal value, which every correct solver agrees on.
  const ModelSolution base = solve_optimal(p, options.rule);
  const double tol = 1e-9 * std::max(1.0, std::abs(base.objective));
  json cert;
  cert["original"] = base.objective;
  auto certify = [&](const Problem& q, const std::string& label) {
    ModelSolution s = solve(q, options.rule);
    if (s.status != SolveStatus::kOptimal || std::abs(s.objective - base.objective) > tol) {
      throw Error(ErrorCode::kCertificationFailed,
                  subject_name(p, subject) + " is not irrelevant: " + label + " changes the optimal value");
    }
    cert[label] = s.objective;
    return s;
  };
  std::optional<MaskResult> masked;
  std::optional<ModelSolution> masked_solution;
  if (subject.structure) {
    masked = mask_with_index_map(p, *subject.structure);
    masked_solution = certify(masked->problem, "removed");
  } else {
    certify(apply_probe(p, {subject, delta}), "plus_delta");
    certify(apply_probe(p, {subject, -delta}), "minus_delta");
    cert["delta"] = delta;
  }
  r.evidence["certification"] = cert;

  const auto as = attributions(p, m, options);
  const double score = combined_score(p, as, subject);
  r.evidence["score"] = score;
  r.evidence["scores"] = attribution_scores(as.front());
  bool violated = std::abs(score) > kNonzeroScore;
  std::string how = "the solver's answer";

  if (m.method == Method::kOcclusion && options.map == MapKind::kSolution && masked) {
    const auto before = optimal_vertices(p, base);
    const auto after = optimal_vertices(masked->problem, *masked_solution);
    double best = 0.0;
    json pair;
    json distinct = json::array();
    for (const auto& u : before) {
      for (const auto& v : after) {
        std::vector<std::optional<double>> comp(p.cols());
        double d = 0.0;
        for (std::size_t k = 0; k < masked->col_origin.size(); ++k) {
          const int j = masked->col_origin[k];
          comp[j] = u(j) - v(static_cast<long>(k));
          if (!options.target || j == *options.target) d = std::max(d, std::abs(*comp[j]));
        }
        if (d > kNonzeroScore) {
          const json scored = to_array(comp);
          if (std::find(distinct.begin(), distinct.end(), scored) == distinct.end()) distinct.push_back(scored);
        }
        if (d > best) {
          best = d;
          pair = {{"original_vertex", to_array(u)}, {"masked_vertex", to_array(v)}, {"score", to_array(comp)}};
        }
      }
    }
    r.evidence["optimal_vertices"] = {{"original", before.size()}, {"masked", after.size()}};
    r.evidence["admissible_score"] = best;
    if (best > kNonzeroScore) {
      r.evidence["admissible"] = pair;
      r.evidence["admissible_scores"] = distinct;
      if (!violated) how = "another optimal vertex a solver may return";
      violated = true;
    }
  }
  r.verdict = violated ? Verdict::kViolated : Verdict::kHolds;
  r.summary = violated ? subject_name(p, subject) + " does not affect the optimal value but scores nonzero under " + how
                       : subject_name(p, subject) + " does not affect the optimal value and scores zero";
  return r;
}

PropertyReport completeness_residual(const Problem& p, const Baseline& baseline, int steps,
                                     const AttributionOptions& options) {
  if (options.map == MapKind::kSolution && !options.target) {
    throw Error(ErrorCode::kInvalidArgument, "completeness on the solution map needs a target component");
  }
  PropertyReport r;
  r.property = Property::kCompleteness;
  r.case_name = p.name;
  r.method = "ig[" + to_string(baseline.kind) + "]";
  AttributionOptions o = options;
  o.steps = steps;
  const Attribution a = integrated_gradients(p, baseline, o);
  const double total = a.scores_A.sum() + a.scores_b.sum() + a.scores_w.sum();
  const double at_input = output(solve_optimal(p, o.rule), o)(0);
  const ModelSolution base = solve(interpolate(p, baseline, 0.0), o.rule);
  if (base.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kPathInfeasible, "baseline problem is " + to_string(base.status) + " at alpha=0");
  }
  const double at_baseline = output(base, o)(0);
  const double delta = at_input - at_baseline;
  const double residual = std::abs(total - delta);
  r.tolerance = std::max(1e-6, 1e-4 * std::abs(delta));
  r.verdict = residual <= r.tolerance ? Verdict::kHolds : Verdict::kViolated;
  r.evidence = {{"sum_of_scores", total},     {"output", at_input},   {"baseline_output", at_baseline},
                {"difference", delta},        {"residual", residual}, {"steps", steps},
                {"options", options_json(o)}, {"caveats", a.caveats}};
  r.summary = "residual " + std::to_string(residual) + " against tolerance " + std::to_string(r.tolerance);
  return r;
}

PropertyReport implementation_invariance_report(const Problem& p, const std::vector<MethodConfig>& methods,
                                                const AttributionOptions& options) {
  PropertyReport r;
  r.property = Property::kImplementationInvariance;
  r.case_name = p.name;
  r.tolerance = kNonzeroScore;
  const PivotRule rules[2] = {PivotRule::kDantzig, PivotRule::kBland};
  ModelSolution sol[2] = {solve_optimal(p, rules[0]), solve_optimal(p, rules[1])};
  const double gap = std::abs(sol[0].objective - sol[1].objective);
  if (gap > 1e-8 * std::max(1.0, std::abs(sol[0].objective))) {
    throw Error(ErrorCode::kSolveFailed, "pivot rules disagree on the optimal value of '" + p.name + "'");
  }
  r.evidence["options"] = options_json(options);
  r.evidence["objective"] = {{"dantzig", sol[0].objective}, {"bland", sol[1].objective}};
  r.evidence["x"] = {{"dantzig", to_array(sol[0].x)}, {"bland", to_array(sol[1].x)}};
  r.evidence["methods"] = json::object();
  bool violated = false;
  std::vector<std::string> names;
  std::vector<std::string> differing;
  for (const auto& m : methods) {
    names.push_back(describe(m));
    json entry;
    try {
      AttributionOptions o = options;
      o.rule = rules[0];
      const auto a = attributions(p, m, o);
      o.rule = rules[1];
      const auto b = attributions(p, m, o);
      double d = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, max_diff(a[k], b[k]));
      entry["max_difference"] = std::isfinite(d) ? json(d) : json("incomparable");
      if (d > kNonzeroScore) {
        violated = true;
        differing.push_back(describe(m));
        entry["dantzig"] = attribution_scores(a.front());
        entry["bland"] = attribution_scores(b.front());
      }
    } catch (const Error& e) {
      entry["error"] = std::string(to_string(e.code())) + ": " + e.what();
    }
    r.evidence["methods"][describe(m)] = entry;
  }
  r.method = "";
  for (std::size_t i = 0; i < names.size(); ++i) r.method += (i ? "," : "") + names[i];
  r.verdict = violated ? Verdict::kViolated : Verdict::kHolds;
  if (violated) {
    std::string list;
    for (std::size_t i = 0; i < differing.size(); ++i) list += (i ? ", " : "") + differing[i];
    r.summary = "pivot rules give different attributions for " + list;
  } else {
    r.summary = "both pivot rules give identical attributions";
  }
  return r;
}

std::vector<MethodConfig> default_methods(const Problem& p) {
  std::vector<MethodConfig> out = {{Method::kSaliency}, {Method::kGradientTimesInput},
                                   {Method::kIntegratedGradients, BaselineKind::kNearZero}};
  if (!p.structures.empty()) out.push_back({Method::kOcclusion});
  return out;
}

std::vector<Finding> findings_matrix() {
  std::vector<Finding> out;
  const MethodConfig sal{Method::kSaliency};
  const MethodConfig gxi{Method::kGradientTimesInput};
  const MethodConfig ig_nz{Method::kIntegratedGradients, BaselineKind::kNearZero};
  const MethodConfig occ{Method::kOcclusion};

  // Edge 1 carries most of the MF1 flow, yet its capacity gets no gradient.
  const Problem mf1 = case_problem(CaseId::MF1);
  const int cap1 = 3;
  for (const auto& m : {sal, gxi, ig_nz}) {
    out.push_back({check_sensitivity_part1(mf1, m, Subject::entry(Parameter::kB, cap1),
                                           {Subject::of_structure("edge1")}),
                   Verdict::kViolated});
  }
  const Problem ro5 = case_problem(CaseId::RO5);
  for (int i = 0; i < 2; ++i) {
    out.push_back({check_sensitivity_part1(ro5, occ, Subject::of_structure("resource" + std::to_string(i + 1)),
                                           {Subject::entry(Parameter::kB, i), -1.0}),
                   Verdict::kViolated});
  }
  const Problem ro1 = case_problem(CaseId::RO1);
  out.push_back({check_sensitivity_part1(ro1, gxi, Subject::entry(Parameter::kB, 0),
                                         {Subject::entry(Parameter::kB, 0), -1.0}),
                 Verdict::kHolds});

  const Problem ks3 = case_problem(CaseId::KS3);
  const MethodConfig ig_avg{Method::kIntegratedGradients, BaselineKind::kItemAverageTenth};
  for (const auto& m : {sal, gxi, ig_avg}) {
    out.push_back({check_sensitivity_part2(ks3, m, Subject::of_structure("item1")), Verdict::kViolated});
  }
  const Problem sp2 = case_problem(CaseId::SP2);
  AttributionOptions solution_map;
  solution_map.map = MapKind::kSolution;
  for (const char* edge : {"edge2", "edge5"}) {
    out.push_back({check_sensitivity_part2(sp2, occ, Subject::of_structure(edge), 1e-3, solution_map),
                   Verdict::kViolated});
  }
  out.push_back({check_sensitivity_part2(ro1, sal, Subject::entry(Parameter::kA, 2)), Verdict::kHolds});

  out.push_back({completeness_residual(ro1, make_baseline(ro1, BaselineKind::kNearZero), 1000), Verdict::kHolds});
  for (CaseId id : {CaseId::RO5, CaseId::MF1}) {
    const Problem p = case_problem(id);
    out.push_back({completeness_residual(p, make_baseline(p, BaselineKind::kNearZero), 1000), std::nullopt});
  }
  out.push_back({completeness_residual(ks3, make_baseline(ks3, BaselineKind::kItemAverageTenth), 1000),
                 std::nullopt});

  for (CaseId id : all_cases()) {
    const Problem p = case_problem(id);
    std::optional<Verdict> expected;
    if (case_type(id) == 1) expected = Verdict::kHolds;
    if (id == CaseId::RO4) expected = Verdict::kViolated;
    out.push_back({implementation_invariance_report(p, default_methods(p)), expected});
  }
  return out;
}

std::string to_string(Property property) {
  switch (property) {
    case Property::kSensitivityPart1: return "sensitivity_part1";
    case Property::kSensitivityPart2: return "sensitivity_part2";
    case Property::kCompleteness: return "completeness";
    case Property::kImplementationInvariance: return "implementation_invariance";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

Property parse_property(const std::string& text) {
  for (Property p : {Property::kSensitivityPart1, Property::kSensitivityPart2, Property::kCompleteness,
                     Property::kImplementationInvariance}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown property '" + text + "'");
}

json to_json(const PropertyReport& r) {
  return {{"property", to_string(r.property)}, {"case", r.case_name},         {"method", r.method},
          {"verdict", to_string(r.verdict)},   {"tolerance", r.tolerance},    {"summary", r.summary},
          {"evidence", r.evidence}};
}

}  // namespace xlp
