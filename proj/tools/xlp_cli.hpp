#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xlp/error.hpp"
#include "xlp/solver.hpp"

namespace xlp::cli {

enum ExitCode { kOk = 0, kSolverFailure = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  std::optional<std::string> case_id;
  std::optional<std::string> file;
  std::string method = "gxi";
  std::string map = "objective";
  std::optional<int> target;
  std::string baseline = "near_zero";
  std::optional<std::string> baseline_file;
  int steps = 100;
  std::optional<std::string> rule;  // XLP_PIVOT or dantzig when unset
  std::string format = "json";
  std::uint64_t seed = 42;

  std::string duals = "least_norm";
  bool finite_differences = false;
  std::vector<std::string> structures;
  std::string property;
  bool all = false;
  std::optional<std::string> subject;
  std::optional<std::string> probe;
  double delta = -1.0;
  std::string out_dir = "xlp_bundle";
  std::optional<std::string> csv;
  int hours = 8760;
  bool use_lp = false;
};

int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

struct SummaryRow {
  std::string id;
  std::string source;
  std::string status;
  std::string detail;
};

struct Bundle {
  std::vector<SummaryRow> summary;
  // Relative path -> file content, in write order.
  std::vector<std::pair<std::string, std::string>> files;
};

// Every catalog case x method x map, the property findings, the MAP showcase
// and the synthetic energy study, compared against data/golden.json.
Bundle reproduce_all(std::uint64_t seed, PivotRule rule);
void write_bundle(const Bundle& bundle, const std::string& dir);

// Golden rows for one case (or all when empty).
std::vector<SummaryRow> check_golden(const std::string& case_filter, PivotRule rule);

const nlohmann::json& golden();

// Fixed-width id/source/status/detail table.
std::string render_summary(const std::vector<SummaryRow>& rows);

// Exit code for an error raised by the core library.
int exit_code_for(ErrorCode code);

}  // namespace xlp::cli
