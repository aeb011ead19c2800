#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "xlp/attribution.hpp"
#include "xlp/energy.hpp"
#include "xlp/error.hpp"
#include "xlp/problems.hpp"
#include "xlp/properties.hpp"
#include "xlp/serialize.hpp"
#include "render.hpp"
#include "xlp_cli.hpp"

namespace xlp::cli {

extern const char* const kGoldenText;

namespace {

using nlohmann::json;

std::vector<MethodConfig> methods_for(const Problem& p) {
  std::vector<MethodConfig> out = {{Method::kSaliency},
                                   {Method::kGradientTimesInput},
                                   {Method::kIntegratedGradients, BaselineKind::kNearZero}};
  switch (p.family) {
    case Family::kResource:
      for (auto k : {BaselineKind::kConstraint1Active, BaselineKind::kConstraint2Active, BaselineKind::kBothActive}) {
        out.push_back({Method::kIntegratedGradients, k});
      }
      break;
    case Family::kMaxFlow:
    case Family::kShortestPath: out.push_back({Method::kIntegratedGradients, BaselineKind::kEqualEdges}); break;
    case Family::kKnapsack: out.push_back({Method::kIntegratedGradients, BaselineKind::kItemAverageTenth}); break;
    default: break;
  }
  out.push_back({Method::kOcclusion});
  return out;
}

json error_json(const std::string& what, const Error& e) {
  return {{"what", what}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}};
}

std::pair<std::string, std::string> case_files(CaseId id, PivotRule rule) {
  const Problem p = case_problem(id);
  json doc;
  doc["case"] = to_string(id);
  doc["type"] = case_type(id);
  doc["pivot_rule"] = to_string(rule);
  doc["problem"] = to_json(p);
  doc["errors"] = json::array();
  std::ostringstream csv;
  csv << kAttributionCsvHeader;

  const ModelSolution s = solve(p, rule);
  doc["solution"] = to_json(s);
  if (s.status != SolveStatus::kOptimal) return {doc.dump(2) + "\n", csv.str()};
  doc["alternative_optima"] = json::array();
  for (const auto& v : multiplicity_probe(s.ilp ? s.ilp->surrogate : p, s.lp, 4)) {
    doc["alternative_optima"].push_back(vector_json(v));
  }
  doc["gradients"]["objective"] = to_json(model_gradients(p, s, MapKind::kObjective));
  doc["gradients"]["solution"] = to_json(model_gradients(p, s, MapKind::kSolution));

  for (MapKind map : {MapKind::kObjective, MapKind::kSolution}) {
    const std::string map_name = to_string(map);
    json& slot = doc["attributions"][map_name];
    for (const auto& m : methods_for(p)) {
      const std::string name = describe(m);
      AttributionOptions o;
      o.map = map;
      o.rule = rule;
      try {
        if (map == MapKind::kSolution && m.method != Method::kOcclusion) {
          json list = json::array();
          for (int k = 0; k < p.cols(); ++k) {
            o.target = k;
            Attribution a = run_method(p, m, o);
            csv << attribution_csv(name, "x" + std::to_string(k), a);
            list.push_back(to_json(a));
          }
          slot[name] = list;
        } else {
          Attribution a = run_method(p, m, o);
          csv << attribution_csv(name, map == MapKind::kObjective ? "objective" : "x", a);
          slot[name] = to_json(a);
        }
      } catch (const Error& e) {
        doc["errors"].push_back(error_json(map_name + "/" + name, e));
      }
    }
  }
  return {doc.dump(2) + "\n", csv.str()};
}

json attribution_value(const json& e, PivotRule rule) {
  const Problem p = case_problem(parse_case_id(e.at("case")));
  MethodConfig m{parse_method(e.at("method"))};
  if (e.contains("baseline")) m.baseline = parse_baseline_kind(e.at("baseline"));
  AttributionOptions o;
  o.map = parse_map_kind(e.at("map"));
  o.rule = rule;
  const std::string field = e.at("field");
  if (field == "structure") {
    o.target.reset();
    const Attribution a = occlusion(p, {e.at("structure").get<std::string>()}, o);
    const auto& s = a.scores_structures.front();
    if (!s.solved) return "none";
    if (s.value) return *s.value;
    json out = json::array();
    for (const auto& c : s.components) out.push_back(c ? json(*c) : json("none"));
    return out;
  }
  const Attribution a = run_method(p, m, o);
  if (field == "structures") {
    json out = json::array();
    for (const auto& s : a.scores_structures) out.push_back(s.solved && s.value ? json(*s.value) : json("none"));
    return out;
  }
  if (field == "scores_A") return matrix_json(a.scores_A);
  const Vector& v = field == "scores_b" ? a.scores_b : a.scores_w;
  if (e.contains("rows")) {
    json out = json::array();
    for (int i : e.at("rows")) out.push_back(v(i));
    return out;
  }
  return vector_json(v);
}

json actual_value(const json& e, PivotRule rule) {
  const std::string kind = e.at("kind");
  if (kind == "objective" || kind == "x") {
    const ModelSolution s = solve(case_problem(parse_case_id(e.at("case"))), rule);
    if (s.status != SolveStatus::kOptimal) return to_string(s.status);
    if (kind == "objective") return s.objective;
    if (e.contains("index")) return s.x(e.at("index").get<int>());
    return vector_json(s.x);
  }
  if (kind == "attribution") return attribution_value(e, rule);
  const MapShowcase show = map_edge_occlusion(showcase_mrf(), rule);
  if (kind == "map_states") return show.states;
  for (const auto& o : show.occlusion) {
    if (o.edge == e.at("edge")) return o.state_diff.empty() ? json("none") : json(o.state_diff);
  }
  throw Error(ErrorCode::kInvalidArgument, "golden entry '" + e.at("id").get<std::string>() + "' is malformed");
}

// Largest deviation between two values of the same shape; infinite when the
// shapes or "none" markers disagree.
double deviation(const json& expected, const json& actual) {
  if (expected.is_number() && actual.is_number()) {
    return std::abs(expected.get<double>() - actual.get<double>());
  }
  if (expected.is_array() && actual.is_array()) {
    if (expected.size() != actual.size()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) d = std::max(d, deviation(expected[i], actual[i]));
    return d;
  }
  if (expected.is_string() && actual.is_string() && expected == actual) return 0.0;
  return INFINITY;
}

json rounded(const json& v) {
  if (v.is_number()) {
    const double x = std::round(v.get<double>() * 1e4) / 1e4;
    if (x == std::floor(x) && std::abs(x) < 1e15) return static_cast<long long>(x);
    return x;
  }
  if (v.is_array()) {
    json out = json::array();
    for (const auto& x : v) out.push_back(rounded(x));
    return out;
  }
  return v;
}

SummaryRow evaluate(const json& e, PivotRule rule) {
  SummaryRow row{e.at("id"), e.at("source"), "", ""};
  json actual;
  try {
    actual = actual_value(e, rule);
  } catch (const Error& err) {
    row.status = "ERROR";
    row.detail = std::string(to_string(err.code())) + ": " + err.what();
    return row;
  }
  const double tol = e.at("tolerance");
  const double d = deviation(e.at("expected"), actual);
  if (d <= tol + 1e-12) {
    if (row.source == "paper") {
      row.status = tol <= 1e-6 ? "paper-exact" : "paper-within-tolerance";
    } else {
      row.status = "derived-match";
    }
  } else {
    row.status = e.value("on_mismatch", std::string("MISMATCH"));
  }
  row.detail = "got " + rounded(actual).dump() + ", expected " + e.at("expected").dump();
  if (std::isfinite(d) && d > 0.0) row.detail += ", max deviation " + number(d);
  return row;
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::size_t w_id = 2, w_src = 6, w_status = 6;
  for (const auto& r : rows) {
    w_id = std::max(w_id, r.id.size());
    w_src = std::max(w_src, r.source.size());
    w_status = std::max(w_status, r.status.size());
  }
  std::ostringstream s;
  s << std::left << std::setw(static_cast<int>(w_id) + 2) << "id" << std::setw(static_cast<int>(w_src) + 2)
    << "source" << std::setw(static_cast<int>(w_status) + 2) << "status" << "detail\n";
  for (const auto& r : rows) {
    s << std::left << std::setw(static_cast<int>(w_id) + 2) << r.id << std::setw(static_cast<int>(w_src) + 2)
      << r.source << std::setw(static_cast<int>(w_status) + 2) << r.status << r.detail << '\n';
  }
  return s.str();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const json& golden() {
  static const json g = json::parse(kGoldenText);
  return g;
}

std::vector<SummaryRow> check_golden(const std::string& case_filter, PivotRule rule) {
  std::vector<SummaryRow> rows;
  for (const auto& e : golden().at("entries")) {
    const std::string c = e.contains("case") ? e.at("case").get<std::string>() : "MAP";
    if (!case_filter.empty() && c != case_filter) continue;
    rows.push_back(evaluate(e, rule));
  }
  return rows;
}

Bundle reproduce_all(std::uint64_t seed, PivotRule rule) {
  Bundle b;
  for (CaseId id : all_cases()) {
    try {
      auto [doc, csv] = case_files(id, rule);
      b.files.emplace_back("cases/" + to_string(id) + ".json", doc);
      b.files.emplace_back("cases/" + to_string(id) + ".csv", csv);
    } catch (const Error& e) {
      b.files.emplace_back("cases/" + to_string(id) + ".json",
                           json{{"case", to_string(id)}, {"errors", {error_json("case", e)}}}.dump(2) + "\n");
    }
  }
  b.summary = check_golden("", rule);

  json props = json::array();
  try {
    for (const auto& f : findings_matrix()) {
      json r = to_json(f.report);
      r["paper_verdict"] = f.expected ? json(to_string(*f.expected)) : json(nullptr);
      props.push_back(r);
      const std::string id = to_string(f.report.property) + "." + f.report.case_name + "." + f.report.method +
                             (f.report.evidence.contains("subject") ? "." + f.report.evidence["subject"]["label"].get<std::string>()
                                                                    : "");
      SummaryRow row{id, f.expected ? "paper" : "report", "", f.report.summary};
      if (!f.expected) {
        row.status = "reported: " + to_string(f.report.verdict);
      } else {
        row.status = f.report.verdict == *f.expected ? "paper-verdict" : "verdict differs";
      }
      b.summary.push_back(row);
    }
  } catch (const Error& e) {
    props.push_back(error_json("findings", e));
    b.summary.push_back({"properties", "paper", "ERROR", e.what()});
  }
  b.files.emplace_back("properties.json", props.dump(2) + "\n");

  b.files.emplace_back("map.json", to_json(map_edge_occlusion(showcase_mrf(), rule)).dump(2) + "\n");

  const EnergyInstance energy = synth_energy(seed);
  const auto months = month_occlusion(energy);
  json ej;
  ej["seed"] = seed;
  ej["horizon_hours"] = energy.horizon_hours;
  ej["design"] = to_json(solve_energy_design(energy));
  ej["months"] = json::array();
  double shoulder = -INFINITY, summer = -INFINITY;
  for (const auto& m : months) {
    ej["months"].push_back(to_json(m));
    if (!m.present) continue;
    if (m.month == "Mar" || m.month == "Apr" || m.month == "May" || m.month == "Sep" || m.month == "Oct") {
      shoulder = std::max(shoulder, m.cap_bat);
    }
    if (m.month == "Jun" || m.month == "Jul" || m.month == "Aug") summer = std::max(summer, m.cap_bat);
  }
  ej["spring_autumn_max_cap_bat"] = shoulder;
  ej["summer_max_cap_bat"] = summer;
  b.files.emplace_back("energy.json", ej.dump(2) + "\n");
  b.summary.push_back({"energy.seasonal_ordering", "derived", shoulder > summer ? "derived-match" : "MISMATCH",
                       "spring/autumn max " + number(shoulder) + " vs summer max " + number(summer)});

  std::ostringstream csv;
  csv << "id,source,status,detail\n";
  for (const auto& r : b.summary) {
    csv << csv_quote(r.id) << ',' << csv_quote(r.source) << ',' << csv_quote(r.status) << ','
        << csv_quote(r.detail) << '\n';
  }
  b.files.emplace_back("summary.csv", csv.str());
  b.files.emplace_back("summary.txt", summary_table(b.summary));
  return b;
}

void write_bundle(const Bundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  for (const auto& [rel, content] : bundle.files) {
    const fs::path path = fs::path(dir) / rel;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
}

std::string render_summary(const std::vector<SummaryRow>& rows) { return summary_table(rows); }

}  // namespace xlp::cli
