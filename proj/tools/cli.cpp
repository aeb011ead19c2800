#include <charconv>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "render.hpp"
#include "xlp/attribution.hpp"
#include "xlp/energy.hpp"
#include "xlp/error.hpp"
#include "xlp/problems.hpp"
#include "xlp/properties.hpp"
#include "xlp/serialize.hpp"
#include "xlp_cli.hpp"

namespace xlp::cli {

namespace {

using nlohmann::json;

struct Context {
  const RunConfig& config;
  std::ostream& out;
  PivotRule rule;
};

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  throw Error(ErrorCode::kInvalidArgument, "format '" + c.format + "' is not available for " + c.command);
}

Problem load_problem(const RunConfig& c) {
  if (c.case_id && c.file) throw Error(ErrorCode::kInvalidArgument, "--case and --file are mutually exclusive");
  if (c.case_id) return case_problem(parse_case_id(*c.case_id));
  if (c.file) return load_problem_file(*c.file);
  throw Error(ErrorCode::kInvalidArgument, c.command + " needs --case or --file");
}

// "b[3]", "w[0]", "A[5]" (row-major) or "A[1,2]"; anything else names a structure.
Subject parse_subject(const Problem& p, const std::string& text) {
  static const std::regex entry(R"(^([Abw])\[(\d+)(?:,(\d+))?\]$)");
  std::smatch m;
  if (!std::regex_match(text, m, entry)) {
    p.structure(text);
    return Subject::of_structure(text);
  }
  const char param = m[1].str()[0];
  int index = std::stoi(m[2]);
  if (m[3].matched) {
    if (param != 'A') throw Error(ErrorCode::kInvalidArgument, "only A takes two indices: " + text);
    index = index * p.cols() + std::stoi(m[3]);
  }
  const Parameter kind = param == 'A' ? Parameter::kA : param == 'b' ? Parameter::kB : Parameter::kW;
  const int size = kind == Parameter::kA ? p.rows() * p.cols() : kind == Parameter::kB ? p.rows() : p.cols();
  if (index < 0 || index >= size) throw Error(ErrorCode::kInvalidArgument, "subject out of range: " + text);
  return Subject::entry(kind, index);
}

AttributionOptions attribution_options(const Context& ctx) {
  AttributionOptions o;
  o.map = parse_map_kind(ctx.config.map);
  o.target = ctx.config.target;
  o.rule = ctx.rule;
  o.duals = parse_dual_selection(ctx.config.duals);
  o.steps = ctx.config.steps;
  return o;
}

MethodConfig method_config(const RunConfig& c) {
  return {parse_method(c.method), parse_baseline_kind(c.baseline), c.steps};
}

int cmd_export(const Context& ctx) {
  ctx.out << serialize_problem(load_problem(ctx.config));
  return kOk;
}

int cmd_solve(const Context& ctx) {
  require_format(ctx.config, {"json", "table"});
  const ModelSolution s = solve(load_problem(ctx.config), ctx.rule);
  if (ctx.config.format == "json") {
    ctx.out << to_json(s).dump(2) << '\n';
  } else {
    ctx.out << solution_table(s);
  }
  return s.status == SolveStatus::kOptimal ? kOk : kSolverFailure;
}

int cmd_grad(const Context& ctx) {
  require_format(ctx.config, {"json"});
  const Problem p = load_problem(ctx.config);
  const ModelSolution s = solve(p, ctx.rule);
  if (s.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kNotOptimal, "solve returned " + to_string(s.status));
  }
  const MapKind map = parse_map_kind(ctx.config.map);
  json j = to_json(model_gradients(p, s, map, parse_dual_selection(ctx.config.duals)));
  if (ctx.config.finite_differences) {
    FdOptions fd;
    fd.rule = ctx.rule;
    fd.throw_on_infeasible = false;
    for (Parameter param : {Parameter::kA, Parameter::kB, Parameter::kW}) {
      const FdResult r = finite_difference_oracle(p, map, param, fd);
      json flags = json::array();
      for (const auto& row : r.flags) {
        json fr = json::array();
        for (FdFlag f : row) fr.push_back(f == FdFlag::kOk ? "ok" : f == FdFlag::kKink ? "kink" : "infeasible");
        flags.push_back(fr);
      }
      j["finite_differences"][to_string(param)] = {{"values", matrix_json(r.values)}, {"flags", flags}};
    }
  }
  ctx.out << j.dump(2) << '\n';
  return kOk;
}

void print_attribution(const Context& ctx, const std::string& label, const Attribution& a) {
  const std::string output = a.map_kind == MapKind::kObjective ? "objective"
                             : a.target                       ? "x" + std::to_string(*a.target)
                                                              : "x";
  if (ctx.config.format == "json") {
    ctx.out << to_json(a).dump(2) << '\n';
  } else if (ctx.config.format == "csv") {
    ctx.out << kAttributionCsvHeader << attribution_csv(label, output, a);
  } else {
    ctx.out << attribution_table(a);
  }
}

int cmd_attribute(const Context& ctx, bool occlude_only) {
  const RunConfig& c = ctx.config;
  const Problem p = load_problem(c);
  const AttributionOptions o = attribution_options(ctx);
  const Method method = occlude_only ? Method::kOcclusion : parse_method(c.method);
  Attribution a;
  if (method == Method::kOcclusion) {
    a = occlusion(p, c.structures, o);
  } else if (c.baseline_file) {
    if (method != Method::kIntegratedGradients) {
      throw Error(ErrorCode::kInvalidArgument, "--baseline-file applies to integrated gradients only");
    }
    a = attribute(p, method, o, baseline_from_json(json::parse(read_file(*c.baseline_file)), p));
  } else {
    a = run_method(p, {method, parse_baseline_kind(c.baseline), c.steps}, o);
  }
  MethodConfig label{method, a.baseline ? a.baseline->kind : BaselineKind::kNearZero, c.steps};
  print_attribution(ctx, describe(label), a);
  return kOk;
}

int cmd_check(const Context& ctx) {
  const RunConfig& c = ctx.config;
  require_format(c, {"json", "table"});
  std::vector<PropertyReport> reports;
  std::vector<std::optional<Verdict>> expected;
  if (c.all) {
    for (auto& f : findings_matrix()) {
      reports.push_back(std::move(f.report));
      expected.push_back(f.expected);
    }
  } else {
    const Problem p = load_problem(c);
    if (c.property.empty()) throw Error(ErrorCode::kInvalidArgument, "check needs --property or --all");
    const Property prop = parse_property(c.property);
    const AttributionOptions o = attribution_options(ctx);
    switch (prop) {
      case Property::kSensitivityPart1: {
        if (!c.subject) throw Error(ErrorCode::kInvalidArgument, "sensitivity_part1 needs --subject");
        const Subject subject = parse_subject(p, *c.subject);
        const Subject probed = c.probe ? parse_subject(p, *c.probe) : subject;
        reports.push_back(check_sensitivity_part1(p, method_config(c), subject, {probed, c.delta}, o));
        break;
      }
      case Property::kSensitivityPart2: {
        if (!c.subject) throw Error(ErrorCode::kInvalidArgument, "sensitivity_part2 needs --subject");
        const double delta = c.delta == -1.0 ? 1e-3 : c.delta;
        reports.push_back(check_sensitivity_part2(p, method_config(c), parse_subject(p, *c.subject), delta, o));
        break;
      }
      case Property::kCompleteness:
        reports.push_back(completeness_residual(p, make_baseline(p, parse_baseline_kind(c.baseline), ctx.rule),
                                                c.steps, o));
        break;
      case Property::kImplementationInvariance:
        reports.push_back(implementation_invariance_report(p, default_methods(p), o));
        break;
    }
    expected.emplace_back();
  }
  if (c.format == "json") {
    json out = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      json r = to_json(reports[i]);
      if (c.all) r["paper_verdict"] = expected[i] ? json(to_string(*expected[i])) : json(nullptr);
      out.push_back(r);
    }
    ctx.out << (c.all ? out : out.front()).dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      ctx.out << to_string(r.property) << "  " << r.case_name << "  " << r.method << "  " << to_string(r.verdict);
      if (c.all) ctx.out << "  (paper: " << (expected[i] ? to_string(*expected[i]) : "not stated") << ")";
      ctx.out << "\n  " << r.summary << '\n';
    }
  }
  return kOk;
}

int cmd_reproduce(const Context& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.case_id) {
    const Bundle b = reproduce_all(c.seed, ctx.rule);
    write_bundle(b, c.out_dir);
    ctx.out << render_summary(b.summary);
    return kOk;
  }
  require_format(c, {"table", "json", "csv"});
  const Problem p = case_problem(parse_case_id(*c.case_id));
  AttributionOptions o = attribution_options(ctx);
  std::vector<MethodConfig> methods;
  if (c.method == "gxi" && c.baseline == "near_zero") {
    methods = {{Method::kSaliency}, {Method::kGradientTimesInput}};
  } else {
    methods = {method_config(c)};
  }
  json j = json::object();
  std::string csv = kAttributionCsvHeader;
  for (const auto& m : methods) {
    const Attribution a = run_method(p, m, o);
    if (c.format == "table") {
      ctx.out << attribution_table(a) << '\n';
    } else if (c.format == "csv") {
      csv += attribution_csv(describe(m), o.map == MapKind::kObjective ? "objective" : "x", a);
    } else {
      j["attributions"][describe(m)] = to_json(a);
    }
  }
  const auto rows = check_golden(*c.case_id, ctx.rule);
  if (c.format == "table") {
    ctx.out << render_summary(rows);
  } else if (c.format == "csv") {
    ctx.out << csv;
  } else {
    for (const auto& r : rows) j["golden"].push_back({{"id", r.id}, {"source", r.source}, {"status", r.status}, {"detail", r.detail}});
    ctx.out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_energy(const Context& ctx) {
  const RunConfig& c = ctx.config;
  require_format(c, {"json", "csv", "table"});
  const EnergyInstance e = c.csv ? load_energy_csv(*c.csv) : synth_energy(c.seed, c.hours);
  const EnergyDesign d = c.use_lp ? solve_energy_design_lp(e) : solve_energy_design(e);
  const auto months = month_occlusion(e, c.use_lp);
  if (c.format == "json") {
    json j;
    if (!c.csv) j["seed"] = c.seed;
    j["horizon_hours"] = e.horizon_hours;
    j["design"] = to_json(d);
    j["months"] = json::array();
    for (const auto& m : months) j["months"].push_back(to_json(m));
    ctx.out << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    ctx.out << "month,present,cap_bat,cap_pv,objective\n";
    for (const auto& m : months) {
      ctx.out << m.month << ',' << (m.present ? 1 : 0) << ',' << number(m.cap_bat) << ',' << number(m.cap_pv) << ','
              << number(m.objective) << '\n';
    }
  } else {
    ctx.out << "cap_pv " << number(d.cap_pv) << "  cap_bat " << number(d.cap_bat) << "  objective "
            << number(d.objective) << "  bought " << number(d.bought) << "\n\n";
    ctx.out << "month   cap_bat      cap_pv       objective\n";
    for (const auto& m : months) {
      if (!m.present) continue;
      ctx.out << m.month << "     " << number(m.cap_bat) << "  " << number(m.cap_pv) << "  " << number(m.objective)
              << '\n';
    }
  }
  return kOk;
}

int cmd_map(const Context& ctx) {
  require_format(ctx.config, {"json", "table"});
  const Mrf m = ctx.config.file ? parse_mrf(read_file(*ctx.config.file)) : showcase_mrf();
  const MapShowcase s = map_edge_occlusion(m, ctx.rule);
  if (ctx.config.format == "json") {
    ctx.out << to_json(s).dump(2) << '\n';
    return kOk;
  }
  auto states = [](const std::vector<int>& v) {
    std::string t = "(";
    for (std::size_t i = 0; i < v.size(); ++i) t += (i ? "," : "") + std::to_string(v[i]);
    return t + ")";
  };
  ctx.out << "MAP " << states(s.states) << '\n';
  for (const auto& o : s.occlusion) {
    ctx.out << o.edge << "  " << (o.state_diff.empty() ? std::string("none") : states(o.state_diff)) << '\n';
  }
  return kOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotOptimal:
    case ErrorCode::kProbeInfeasible:
    case ErrorCode::kPathInfeasible:
    case ErrorCode::kMapMismatch:
    case ErrorCode::kUnreachable:
    case ErrorCode::kNonIntegralSolution:
    case ErrorCode::kCycleDetected:
    case ErrorCode::kSolveFailed:
    case ErrorCode::kProbeIneffective:
    case ErrorCode::kCertificationFailed:
      return kSolverFailure;
    default:
      return kUsage;
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Context ctx{config, out, config.rule ? parse_pivot_rule(*config.rule) : default_pivot_rule()};
    if (config.steps < 1) throw Error(ErrorCode::kInvalidArgument, "--steps must be positive");
    if (config.command == "solve") return cmd_solve(ctx);
    if (config.command == "grad") return cmd_grad(ctx);
    if (config.command == "attribute") return cmd_attribute(ctx, false);
    if (config.command == "occlude") return cmd_attribute(ctx, true);
    if (config.command == "check") return cmd_check(ctx);
    if (config.command == "reproduce") return cmd_reproduce(ctx);
    if (config.command == "energy") return cmd_energy(ctx);
    if (config.command == "map") return cmd_map(ctx);
    if (config.command == "export") return cmd_export(ctx);
    throw Error(ErrorCode::kInvalidArgument, "unknown command '" + config.command + "'");
  } catch (const Error& e) {
    err << "xlp: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "xlp: " << to_string(ErrorCode::kParseError) << ": " << e.what() << '\n';
    return kUsage;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explainable linear programming: solve, differentiate and attribute LPs and ILPs", "xlp"};
  app.require_subcommand(1);
  RunConfig c;
  std::string rule;

  auto problem_opts = [&](CLI::App* sub) {
    auto* cs = sub->add_option("--case", c.case_id, "catalog case (RO1..RO5, MF1, MF2, KS1..KS3, SP1, SP2)");
    auto* f = sub->add_option("--file", c.file, "problem JSON file");
    cs->excludes(f);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--rule", rule, "pivot rule: dantzig or bland (default: XLP_PIVOT or dantzig)");
    sub->add_option("--format", c.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto attribution_opts = [&](CLI::App* sub, bool with_method) {
    if (with_method) sub->add_option("--method", c.method, "saliency, gxi, ig or occlusion");
    sub->add_option("--map", c.map, "objective or solution");
    sub->add_option("--target", c.target, "solution component to explain");
    sub->add_option("--baseline", c.baseline,
                    "near_zero, equal_edges, item_average_tenth, constraint1_active, constraint2_active, both_active");
    sub->add_option("--steps", c.steps, "integrated-gradient steps");
    sub->add_option("--duals", c.duals, "least_norm or basis");
  };

  auto* solve = app.add_subcommand("solve", "solve a problem");
  problem_opts(solve);
  common(solve);

  auto* grad = app.add_subcommand("grad", "gradients of the objective or solution map");
  problem_opts(grad);
  common(grad);
  grad->add_option("--map", c.map, "objective or solution");
  grad->add_option("--duals", c.duals, "least_norm or basis");
  grad->add_flag("--fd", c.finite_differences, "add the central finite-difference oracle");

  auto* attr = app.add_subcommand("attribute", "attribution scores");
  problem_opts(attr);
  common(attr);
  attribution_opts(attr, true);
  attr->add_option("--baseline-file", c.baseline_file, "custom baseline JSON {A, b, w}");
  attr->add_option("--structures", c.structures, "structures to occlude (default: all)");

  auto* occ = app.add_subcommand("occlude", "occlusion of named structures");
  problem_opts(occ);
  common(occ);
  occ->add_option("--map", c.map, "objective or solution");
  occ->add_option("--target", c.target, "solution component to explain");
  occ->add_option("--structures", c.structures, "structures to occlude (default: all)");

  auto* check = app.add_subcommand("check", "attribution property diagnostics");
  problem_opts(check);
  common(check);
  attribution_opts(check, true);
  check->add_option("--property", c.property,
                    "sensitivity_part1, sensitivity_part2, completeness or implementation_invariance");
  check->add_flag("--all", c.all, "the full findings matrix");
  check->add_option("--subject", c.subject, "b[i], w[j], A[i,j], A[k] or a structure name");
  check->add_option("--probe", c.probe, "entry or structure changed by the probe (default: the subject)");
  check->add_option("--delta", c.delta, "entry change for the probe");

  auto* repro = app.add_subcommand("reproduce", "reproduce one case, or write the full bundle");
  repro->add_option("case", c.case_id, "catalog case; omit for the full bundle");
  repro->add_option("--rule", rule, "pivot rule: dantzig or bland");
  repro->add_option("--format", c.format, "table, json or csv")->check(CLI::IsMember({"json", "csv", "table"}));
  repro->add_option("--method", c.method, "method (default: saliency and gxi)");
  repro->add_option("--map", c.map, "objective or solution");
  repro->add_option("--baseline", c.baseline, "baseline for ig");
  repro->add_option("--steps", c.steps, "integrated-gradient steps");
  repro->add_option("--seed", c.seed, "seed for the synthetic energy year");
  repro->add_option("--out", c.out_dir, "bundle directory");

  auto* energy = app.add_subcommand("energy", "energy design and month occlusion");
  common(energy);
  energy->add_option("--csv", c.csv, "hour,demand_kwh,pv_availability");
  energy->add_option("--seed", c.seed, "seed for synthetic data");
  energy->add_option("--hours", c.hours, "synthetic horizon in hours")->check(CLI::Range(1, 8760));
  energy->add_flag("--lp", c.use_lp, "solve the dense LP instead of the structured search");

  auto* map = app.add_subcommand("map", "MAP inference and edge occlusion");
  common(map);
  map->add_option("--file", c.file, "MRF JSON (default: the showcase chain)");

  auto* exp = app.add_subcommand("export", "write a problem as JSON");
  problem_opts(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "xlp: " << to_string(ErrorCode::kInvalidArgument) << ": " << e.what() << '\n';
    return kUsage;
  }

  c.command = app.get_subcommands().front()->get_name();
  // reproduce prints tables unless asked otherwise.
  if (c.command == "reproduce" && c.format == "json" && !app.get_subcommand("reproduce")->count("--format")) {
    c.format = "table";
  }
  if (!rule.empty()) c.rule = rule;
  return run(c, out, err);
}

}  // namespace xlp::cli
