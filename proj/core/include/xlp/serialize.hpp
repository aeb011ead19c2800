#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "xlp/attribution.hpp"
#include "xlp/energy.hpp"
#include "xlp/gradients.hpp"
#include "xlp/model.hpp"
#include "xlp/problems.hpp"
#include "xlp/solver.hpp"

namespace xlp {

using Json = nlohmann::json;

// Problem schema:
// {name, sense, family?, A, b, w, senses, lb, ub, integer, structures:[{name, rows, cols, entries, mode}]}
// Infinite bounds are written as null. Optional fields take build_problem defaults.
Json to_json(const Problem& p);
Problem problem_from_json(const Json& j);
std::string serialize_problem(const Problem& p);
// Throws ParseError naming the line (syntax) or the field (schema).
Problem parse_problem(const std::string& text);
// Missing or unreadable files are reported as ParseError as well.
Problem load_problem_file(const std::string& path);

Json to_json(const LpSolution& s);
Json to_json(const IlpSolution& s);
Json to_json(const ModelSolution& s);
LpSolution lp_solution_from_json(const Json& j);

Json to_json(const GradientBundle& g);
GradientBundle gradient_bundle_from_json(const Json& j);

Json to_json(const Baseline& b);
Baseline baseline_from_json(const Json& j, const Problem& p);

Json to_json(const Attribution& a);
Attribution attribution_from_json(const Json& j);

Json to_json(const Mrf& m);
Mrf mrf_from_json(const Json& j);
Mrf parse_mrf(const std::string& text);

Json to_json(const MapShowcase& s);
Json to_json(const EnergyDesign& d);
Json to_json(const MonthScore& s);

Json vector_json(const Vector& v);
Json matrix_json(const Matrix& m);
Vector vector_from_json(const Json& j, const std::string& field);
Matrix matrix_from_json(const Json& j, const std::string& field);

std::string to_string(Family family);
Family parse_family(const std::string& text);
std::string to_string(RemovalMode mode);
RemovalMode parse_removal_mode(const std::string& text);

// Reads a whole file; throws Io.
std::string read_file(const std::string& path);

}  // namespace xlp
