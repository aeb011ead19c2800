#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xlp/attribution.hpp"
#include "xlp/model.hpp"

namespace xlp {

enum class Property { kSensitivityPart1, kSensitivityPart2, kCompleteness, kImplementationInvariance };
enum class Verdict { kHolds, kViolated, kInconclusive };

struct MethodConfig {
  Method method = Method::kSaliency;
  BaselineKind baseline = BaselineKind::kNearZero;
  int steps = 100;
};

// A single parameter entry (A row-major) or a named structure.
struct Subject {
  std::optional<std::string> structure;
  Parameter param = Parameter::kB;
  int index = 0;

  static Subject entry(Parameter param, int index) { return {std::nullopt, param, index}; }
  static Subject of_structure(const std::string& name) { return {name, Parameter::kB, 0}; }
};

// Change applied to a problem to test whether a subject matters: remove the
// structure, or add delta to the entry.
struct Probe {
  Subject subject;
  double delta = 0.0;
};

struct PropertyReport {
  Property property = Property::kSensitivityPart1;
  std::string case_name;
  std::string method;
  Verdict verdict = Verdict::kInconclusive;
  double tolerance = 0.0;
  std::string summary;
  nlohmann::json evidence;
};

Problem apply_probe(const Problem& p, const Probe& probe);

// Score of a subject under an attribution: the entry's score, the structure's
// occlusion score, or the largest absolute score over a structure's entries.
double subject_score(const Problem& p, const Attribution& a, const Subject& s);

Attribution run_method(const Problem& p, const MethodConfig& m, const AttributionOptions& options);
std::string describe(const MethodConfig& m);

// Violated iff the probe moves the output by more than 1e-6 while the
// subject's attribution is at most 1e-9. Inconclusive if the probe is ineffective.
PropertyReport check_sensitivity_part1(const Problem& p, const MethodConfig& m, const Subject& subject,
                                       const Probe& probe, const AttributionOptions& options = {});

// Irrelevance of the subject is certified by re-solving without it (structure)
// or with each entry moved by +-delta; throws CertificationFailed otherwise.
// Violated iff the subject's attribution exceeds 1e-6. For occlusion on the
// solution map every optimal vertex reachable from the solver's answers is
// also tried, since another solver may legitimately return it.
PropertyReport check_sensitivity_part2(const Problem& p, const MethodConfig& m, const Subject& subject,
                                       double delta = 1e-3, const AttributionOptions& options = {});

// |sum of IG scores - (M(p) - M(baseline))| against max(1e-6, 1e-4 |M(p) - M(baseline)|).
PropertyReport completeness_residual(const Problem& p, const Baseline& baseline, int steps,
                                     const AttributionOptions& options = {});

// Attributions under the Dantzig and Bland rules; violated iff any method's
// scores differ by more than 1e-6 while both solves agree on the objective.
PropertyReport implementation_invariance_report(const Problem& p, const std::vector<MethodConfig>& methods,
                                                const AttributionOptions& options = {});

std::vector<MethodConfig> default_methods(const Problem& p);

struct Finding {
  PropertyReport report;
  // Verdict the paper reports; empty when the row is informational.
  std::optional<Verdict> expected;
};

// The property findings over the catalog cases.
std::vector<Finding> findings_matrix();

std::string to_string(Property property);
std::string to_string(Verdict verdict);
Property parse_property(const std::string& text);

nlohmann::json to_json(const PropertyReport& r);

}  // namespace xlp
