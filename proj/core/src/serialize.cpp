#include "xlp/serialize.hpp"

#include <fstream>
#include <sstream>

#include "xlp/error.hpp"

namespace xlp {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) fail(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

std::string sub(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }
std::string sub(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected true or false");
  return j.get<bool>();
}

const Json& array(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  return j;
}

std::vector<int> int_list(const Json& j, const std::string& field) {
  std::vector<int> out;
  for (std::size_t i = 0; i < array(j, field).size(); ++i) out.push_back(integer(j[i], sub(field, i)));
  return out;
}

Json bound_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string sense_text(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kEqual: return "=";
    case RowSense::kGreaterEqual: return ">=";
  }
  return "<=";
}

RowSense parse_row_sense(const std::string& s, const std::string& field) {
  if (s == "<=" || s == "le") return RowSense::kLessEqual;
  if (s == "=" || s == "==" || s == "eq") return RowSense::kEqual;
  if (s == ">=" || s == "ge") return RowSense::kGreaterEqual;
  fail(field, "unknown constraint sense '" + s + "'");
}

// Line and column of a byte offset, for syntax errors.
std::string position(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, position(text, e.byte == 0 ? 0 : e.byte - 1) + ": invalid JSON");
  }
}

Json basis_json(const std::vector<ActiveConstraint>& basis) {
  Json out = Json::array();
  for (const auto& a : basis) {
    const char* kind = a.kind == ActiveConstraint::Kind::kRow          ? "row"
                       : a.kind == ActiveConstraint::Kind::kLowerBound ? "lower"
                                                                       : "upper";
    out.push_back({{"kind", kind}, {"index", a.index}});
  }
  return out;
}

SolveStatus parse_status(const std::string& s, const std::string& field) {
  for (SolveStatus st : {SolveStatus::kOptimal, SolveStatus::kInfeasible, SolveStatus::kUnbounded}) {
    if (to_string(st) == s) return st;
  }
  fail(field, "unknown status '" + s + "'");
}

template <class F>
auto wrap(const std::string& field, F f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    fail(field, std::string(to_string(e.code())) + ": " + e.what());
  }
}

double no_negative_zero(double x) { return x == 0.0 ? 0.0 : x; }

}  // namespace

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(no_negative_zero(v(i)));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(no_negative_zero(m(i, j)));
    out.push_back(row);
  }
  return out;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  array(j, field);
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = number(j[i], sub(field, i));
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  array(j, field);
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = array(j[0], sub(field, 0)).size();
  Matrix m(static_cast<long>(j.size()), static_cast<long>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_field = sub(field, i);
    if (array(j[i], row_field).size() != cols) {
      fail(row_field, "has " + std::to_string(j[i].size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<long>(i), static_cast<long>(k)) = number(j[i][k], sub(row_field, k));
    }
  }
  return m;
}

std::string to_string(Family family) {
  switch (family) {
    case Family::kGeneric: return "generic";
    case Family::kResource: return "resource";
    case Family::kMaxFlow: return "max_flow";
    case Family::kShortestPath: return "shortest_path";
    case Family::kKnapsack: return "knapsack";
    case Family::kMap: return "map";
    case Family::kEnergy: return "energy";
  }
  return "generic";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::kGeneric, Family::kResource, Family::kMaxFlow, Family::kShortestPath, Family::kKnapsack,
                   Family::kMap, Family::kEnergy}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + s + "'");
}

std::string to_string(RemovalMode mode) {
  switch (mode) {
    case RemovalMode::kDeleteRowsAndCols: return "delete_rows_and_cols";
    case RemovalMode::kZeroEntries: return "zero_entries";
    case RemovalMode::kZeroBEntries: return "zero_b_entries";
  }
  return "delete_rows_and_cols";
}

RemovalMode parse_removal_mode(const std::string& s) {
  for (RemovalMode m : {RemovalMode::kDeleteRowsAndCols, RemovalMode::kZeroEntries, RemovalMode::kZeroBEntries}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown removal mode '" + s + "'");
}

Json to_json(const Problem& p) {
  Json j;
  j["name"] = p.name;
  j["sense"] = p.sense == Sense::kMaximize ? "maximize" : "minimize";
  j["family"] = to_string(p.family);
  j["A"] = matrix_json(p.A);
  if (p.rows() == 0) j["A"] = Json::array();
  j["b"] = vector_json(p.b);
  j["w"] = vector_json(p.w);
  Json senses = Json::array();
  for (RowSense s : p.senses) senses.push_back(sense_text(s));
  j["senses"] = senses;
  Json lb = Json::array();
  Json ub = Json::array();
  for (int k = 0; k < p.cols(); ++k) {
    lb.push_back(bound_json(p.lower(k)));
    ub.push_back(bound_json(p.upper(k)));
  }
  j["lb"] = lb;
  j["ub"] = ub;
  Json integer = Json::array();
  for (bool b : p.integer) integer.push_back(b);
  j["integer"] = integer;
  Json structures = Json::array();
  for (const auto& s : p.structures) {
    Json entries = Json::array();
    for (auto [r, c] : s.entries) entries.push_back({r, c});
    structures.push_back(
        {{"name", s.name}, {"rows", s.rows}, {"cols", s.cols}, {"entries", entries}, {"mode", to_string(s.mode)}});
  }
  j["structures"] = structures;
  return j;
}

Problem problem_from_json(const Json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  ProblemData d;
  if (j.contains("name")) d.name = text(j["name"], "name");
  if (j.contains("sense")) {
    const std::string s = text(j["sense"], "sense");
    if (s == "maximize" || s == "max") {
      d.sense = Sense::kMaximize;
    } else if (s == "minimize" || s == "min") {
      d.sense = Sense::kMinimize;
    } else {
      fail("sense", "expected 'maximize' or 'minimize'");
    }
  }
  if (j.contains("family")) d.family = wrap("family", [&] { return parse_family(text(j["family"], "family")); });

  d.w = vector_from_json(member(j, "w", ""), "w");
  const long n = d.w.size();
  const Json& a = member(j, "A", "");
  d.A = matrix_from_json(a, "A");
  if (a.empty()) d.A = Matrix(0, n);
  if (d.A.cols() != n) {
    fail("A", "has " + std::to_string(d.A.cols()) + " columns but w has " + std::to_string(n) + " entries");
  }
  const long m = d.A.rows();
  d.b = vector_from_json(member(j, "b", ""), "b");
  if (d.b.size() != m) {
    fail("b", "has " + std::to_string(d.b.size()) + " entries, expected " + std::to_string(m) + " (rows of A)");
  }
  if (j.contains("senses")) {
    const Json& s = array(j["senses"], "senses");
    if (static_cast<long>(s.size()) != m) fail("senses", "expected " + std::to_string(m) + " entries");
    for (std::size_t i = 0; i < s.size(); ++i) {
      d.senses.push_back(parse_row_sense(text(s[i], sub("senses", i)), sub("senses", i)));
    }
  }
  auto bounds = [&](const char* key, double missing) {
    Vector v;
    if (!j.contains(key)) return v;
    const Json& arr = array(j[key], key);
    if (static_cast<long>(arr.size()) != n) fail(key, "expected " + std::to_string(n) + " entries");
    v.resize(n);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      v(static_cast<long>(k)) = arr[k].is_null() ? missing : number(arr[k], sub(key, k));
    }
    return v;
  };
  d.lower = bounds("lb", -kInf);
  d.upper = bounds("ub", kInf);
  if (j.contains("integer")) {
    const Json& arr = array(j["integer"], "integer");
    if (static_cast<long>(arr.size()) != n) fail("integer", "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < arr.size(); ++k) d.integer.push_back(boolean(arr[k], sub("integer", k)));
  }
  if (j.contains("structures")) {
    const Json& arr = array(j["structures"], "structures");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = sub("structures", i);
      if (!arr[i].is_object()) fail(f, "expected an object");
      Structure s;
      s.name = text(member(arr[i], "name", f), sub(f, "name"));
      if (arr[i].contains("rows")) s.rows = int_list(arr[i]["rows"], sub(f, "rows"));
      if (arr[i].contains("cols")) s.cols = int_list(arr[i]["cols"], sub(f, "cols"));
      if (arr[i].contains("entries")) {
        const Json& e = array(arr[i]["entries"], sub(f, "entries"));
        for (std::size_t k = 0; k < e.size(); ++k) {
          std::vector<int> pair = int_list(e[k], sub(sub(f, "entries"), k));
          if (pair.size() != 2) fail(sub(sub(f, "entries"), k), "expected [row, col]");
          s.entries.emplace_back(pair[0], pair[1]);
        }
      }
      if (arr[i].contains("mode")) {
        s.mode = wrap(sub(f, "mode"), [&] { return parse_removal_mode(text(arr[i]["mode"], sub(f, "mode"))); });
      }
      d.structures.push_back(std::move(s));
    }
  }
  return wrap("(problem)", [&] { return build_problem(std::move(d)); });
}

std::string serialize_problem(const Problem& p) { return to_json(p).dump(2) + "\n"; }

Problem parse_problem(const std::string& text) { return problem_from_json(parse_text(text)); }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Problem load_problem_file(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  try {
    return parse_problem(content);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

Json to_json(const LpSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["x"] = vector_json(s.x);
  j["duals"] = vector_json(s.duals);
  j["basis"] = basis_json(s.basis);
  j["objective"] = s.objective;
  j["multiple_optima"] = s.multiple_optima;
  j["pivot_rule"] = to_string(s.pivot_rule);
  j["iterations"] = s.iterations;
  return j;
}

LpSolution lp_solution_from_json(const Json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  LpSolution s;
  s.status = parse_status(text(member(j, "status", ""), "status"), "status");
  s.x = vector_from_json(member(j, "x", ""), "x");
  s.duals = vector_from_json(member(j, "duals", ""), "duals");
  s.objective = number(member(j, "objective", ""), "objective");
  s.multiple_optima = boolean(member(j, "multiple_optima", ""), "multiple_optima");
  s.pivot_rule = wrap("pivot_rule", [&] { return parse_pivot_rule(text(member(j, "pivot_rule", ""), "pivot_rule")); });
  if (j.contains("iterations")) s.iterations = integer(j["iterations"], "iterations");
  const Json& basis = array(member(j, "basis", ""), "basis");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string f = sub("basis", i);
    const std::string kind = text(member(basis[i], "kind", f), sub(f, "kind"));
    ActiveConstraint a{ActiveConstraint::Kind::kRow, integer(member(basis[i], "index", f), sub(f, "index"))};
    if (kind == "lower") {
      a.kind = ActiveConstraint::Kind::kLowerBound;
    } else if (kind == "upper") {
      a.kind = ActiveConstraint::Kind::kUpperBound;
    } else if (kind != "row") {
      fail(sub(f, "kind"), "expected row, lower or upper");
    }
    s.basis.push_back(a);
  }
  return s;
}

Json to_json(const IlpSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["x"] = vector_json(s.x);
  j["objective"] = s.objective;
  j["node_count"] = s.node_count;
  j["pivot_rule"] = to_string(s.pivot_rule);
  j["relaxation_tight"] = s.relaxation_tight;
  if (s.status == SolveStatus::kOptimal) j["lp_relaxation_solution"] = to_json(s.surrogate_solution);
  return j;
}

Json to_json(const ModelSolution& s) {
  if (s.ilp) {
    Json j = to_json(*s.ilp);
    j["duals"] = vector_json(s.lp.duals);
    j["basis"] = basis_json(s.lp.basis);
    j["multiple_optima"] = s.lp.multiple_optima;
    return j;
  }
  return to_json(s.lp);
}

Json to_json(const GradientBundle& g) {
  Json j;
  j["map_kind"] = to_string(g.map_kind);
  j["shape"] = {{"rows", g.duals.size()}, {"cols", g.x.size()}};
  j["x"] = vector_json(g.x);
  j["objective"] = g.objective;
  j["duals"] = vector_json(g.duals);
  j["dual_selection"] = to_string(g.dual_selection);
  if (g.map_kind == MapKind::kObjective) {
    j["dO_dw"] = vector_json(g.dO_dw);
    j["dO_db"] = vector_json(g.dO_db);
    j["dO_dA"] = matrix_json(g.dO_dA);
  } else {
    j["dS_db"] = matrix_json(g.dS_db);
    Json t = Json::array();
    for (const auto& m : g.dS_dA) t.push_back(matrix_json(m));
    j["dS_dA"] = t;
    j["dS_dw"] = matrix_json(g.dS_dw);
  }
  j["degenerate"] = g.degenerate;
  j["surrogate"] = g.surrogate;
  j["notes"] = g.notes;
  return j;
}

GradientBundle gradient_bundle_from_json(const Json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  GradientBundle g;
  g.map_kind = wrap("map_kind", [&] { return parse_map_kind(text(member(j, "map_kind", ""), "map_kind")); });
  g.x = vector_from_json(member(j, "x", ""), "x");
  g.objective = number(member(j, "objective", ""), "objective");
  g.duals = vector_from_json(member(j, "duals", ""), "duals");
  g.dual_selection = wrap("dual_selection", [&] {
    return parse_dual_selection(text(member(j, "dual_selection", ""), "dual_selection"));
  });
  const long m = g.duals.size();
  const long n = g.x.size();
  auto shaped = [&](const Json& v, const std::string& f, long rows, long cols) {
    Matrix out = matrix_from_json(v, f);
    if (out.size() == 0) out.resize(rows, cols);
    if (out.rows() != rows || out.cols() != cols) fail(f, "has the wrong shape");
    return out;
  };
  if (g.map_kind == MapKind::kObjective) {
    g.dO_dw = vector_from_json(member(j, "dO_dw", ""), "dO_dw");
    g.dO_db = vector_from_json(member(j, "dO_db", ""), "dO_db");
    g.dO_dA = shaped(member(j, "dO_dA", ""), "dO_dA", m, n);
  } else {
    g.dS_db = shaped(member(j, "dS_db", ""), "dS_db", n, m);
    const Json& t = array(member(j, "dS_dA", ""), "dS_dA");
    for (std::size_t k = 0; k < t.size(); ++k) g.dS_dA.push_back(shaped(t[k], sub("dS_dA", k), m, n));
    g.dS_dw = shaped(member(j, "dS_dw", ""), "dS_dw", n, n);
  }
  g.degenerate = boolean(member(j, "degenerate", ""), "degenerate");
  g.surrogate = boolean(member(j, "surrogate", ""), "surrogate");
  const Json& notes = array(member(j, "notes", ""), "notes");
  for (std::size_t i = 0; i < notes.size(); ++i) g.notes.push_back(text(notes[i], sub("notes", i)));
  return g;
}

Json to_json(const Baseline& b) {
  return {{"kind", to_string(b.kind)}, {"A", matrix_json(b.A)}, {"b", vector_json(b.b)}, {"w", vector_json(b.w)}};
}

Baseline baseline_from_json(const Json& j, const Problem& p) {
  if (!j.is_object()) fail("(root)", "expected an object");
  Matrix A = matrix_from_json(member(j, "A", ""), "A");
  if (A.size() == 0) A.resize(p.rows(), p.cols());
  Vector b = vector_from_json(member(j, "b", ""), "b");
  Vector w = vector_from_json(member(j, "w", ""), "w");
  Baseline base = wrap("(baseline)", [&] { return custom_baseline(p, A, b, w); });
  if (j.contains("kind")) {
    base.kind = wrap("kind", [&] { return parse_baseline_kind(text(j["kind"], "kind")); });
  }
  return base;
}

Json to_json(const Attribution& a) {
  Json j;
  j["method"] = to_string(a.method);
  j["map_kind"] = to_string(a.map_kind);
  j["target"] = a.target ? Json(*a.target) : Json(nullptr);
  j["pivot_rule"] = to_string(a.rule);
  j["scores_A"] = matrix_json(a.scores_A);
  j["scores_b"] = vector_json(a.scores_b);
  j["scores_w"] = vector_json(a.scores_w);
  Json structures = Json::array();
  for (const auto& s : a.scores_structures) {
    Json e{{"name", s.name}, {"solved", s.solved}};
    e["value"] = s.solved ? (s.value ? Json(*s.value) : Json(nullptr)) : Json("none");
    if (!s.components.empty()) {
      Json c = Json::array();
      for (const auto& v : s.components) c.push_back(v ? Json(*v) : Json("none"));
      e["components"] = c;
    }
    structures.push_back(e);
  }
  j["scores_structures"] = structures;
  j["baseline"] = a.baseline ? to_json(*a.baseline) : Json(nullptr);
  j["steps"] = a.steps;
  j["caveats"] = a.caveats;
  return j;
}

Attribution attribution_from_json(const Json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  Attribution a;
  a.method = wrap("method", [&] { return parse_method(text(member(j, "method", ""), "method")); });
  a.map_kind = wrap("map_kind", [&] { return parse_map_kind(text(member(j, "map_kind", ""), "map_kind")); });
  if (j.contains("target") && !j["target"].is_null()) a.target = integer(j["target"], "target");
  a.rule = wrap("pivot_rule", [&] { return parse_pivot_rule(text(member(j, "pivot_rule", ""), "pivot_rule")); });
  a.scores_A = matrix_from_json(member(j, "scores_A", ""), "scores_A");
  a.scores_b = vector_from_json(member(j, "scores_b", ""), "scores_b");
  a.scores_w = vector_from_json(member(j, "scores_w", ""), "scores_w");
  if (a.scores_A.size() == 0 && a.scores_w.size() > 0) a.scores_A.resize(a.scores_b.size(), a.scores_w.size());
  const Json& structures = array(member(j, "scores_structures", ""), "scores_structures");
  for (std::size_t i = 0; i < structures.size(); ++i) {
    const std::string f = sub("scores_structures", i);
    StructureScore s;
    s.name = text(member(structures[i], "name", f), sub(f, "name"));
    s.solved = boolean(member(structures[i], "solved", f), sub(f, "solved"));
    const Json& v = member(structures[i], "value", f);
    if (s.solved && !v.is_null()) s.value = number(v, sub(f, "value"));
    if (structures[i].contains("components")) {
      const Json& c = array(structures[i]["components"], sub(f, "components"));
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_string() && c[k] == "none") {
          s.components.emplace_back();
        } else {
          s.components.emplace_back(number(c[k], sub(sub(f, "components"), k)));
        }
      }
    }
    a.scores_structures.push_back(std::move(s));
  }
  if (j.contains("baseline") && !j["baseline"].is_null()) {
    const Json& b = j["baseline"];
    Baseline base;
    base.kind = wrap("baseline.kind", [&] { return parse_baseline_kind(text(member(b, "kind", "baseline"), "baseline.kind")); });
    base.A = matrix_from_json(member(b, "A", "baseline"), "baseline.A");
    base.b = vector_from_json(member(b, "b", "baseline"), "baseline.b");
    base.w = vector_from_json(member(b, "w", "baseline"), "baseline.w");
    if (base.A.size() == 0) base.A.resize(base.b.size(), base.w.size());
    a.baseline = std::move(base);
  }
  if (j.contains("steps")) a.steps = integer(j["steps"], "steps");
  if (j.contains("caveats")) {
    const Json& c = array(j["caveats"], "caveats");
    for (std::size_t i = 0; i < c.size(); ++i) a.caveats.push_back(text(c[i], sub("caveats", i)));
  }
  return a;
}

Json to_json(const Mrf& m) {
  Json nodes = Json::array();
  for (const auto& n : m.nodes) nodes.push_back({{"name", n.name}, {"states", n.states}, {"phi", n.phi}});
  Json edges = Json::array();
  for (const auto& e : m.edges) {
    Json ej{{"i", e.i}, {"j", e.j}, {"phi", matrix_json(e.phi)}};
    if (!e.name.empty()) ej["name"] = e.name;
    edges.push_back(ej);
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

Mrf mrf_from_json(const Json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  Mrf m;
  const Json& nodes = array(member(j, "nodes", ""), "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string f = sub("nodes", i);
    MrfNode n;
    n.name = nodes[i].contains("name") ? text(nodes[i]["name"], sub(f, "name")) : "X" + std::to_string(i + 1);
    const Vector phi = vector_from_json(member(nodes[i], "phi", f), sub(f, "phi"));
    n.phi.assign(phi.data(), phi.data() + phi.size());
    n.states = nodes[i].contains("states") ? integer(nodes[i]["states"], sub(f, "states"))
                                           : static_cast<int>(n.phi.size());
    m.nodes.push_back(std::move(n));
  }
  if (j.contains("edges")) {
    const Json& edges = array(j["edges"], "edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string f = sub("edges", k);
      MrfEdge e;
      e.i = integer(member(edges[k], "i", f), sub(f, "i"));
      e.j = integer(member(edges[k], "j", f), sub(f, "j"));
      e.phi = matrix_from_json(member(edges[k], "phi", f), sub(f, "phi"));
      if (edges[k].contains("name")) e.name = text(edges[k]["name"], sub(f, "name"));
      m.edges.push_back(std::move(e));
    }
  }
  wrap("(mrf)", [&] {
    validate(m);
    return 0;
  });
  return m;
}

Mrf parse_mrf(const std::string& text) { return mrf_from_json(parse_text(text)); }

Json to_json(const MapShowcase& s) {
  Json occ = Json::array();
  for (const auto& o : s.occlusion) {
    occ.push_back({{"edge", o.edge}, {"state_diff", o.state_diff.empty() ? Json("none") : Json(o.state_diff)}});
  }
  return {{"states", s.states}, {"occlusion", occ}};
}

Json to_json(const EnergyDesign& d) {
  return {{"cap_pv", d.cap_pv}, {"cap_bat", d.cap_bat}, {"objective", d.objective}, {"bought", d.bought}};
}

Json to_json(const MonthScore& s) {
  if (!s.present) return {{"month", s.month}, {"present", false}};
  return {{"month", s.month}, {"present", true},         {"cap_bat", s.cap_bat},
          {"cap_pv", s.cap_pv}, {"objective", s.objective}};
}

}  // namespace xlp
