#pragma once

#include <string>

#include "xlp/attribution.hpp"
#include "xlp/solver.hpp"

namespace xlp::cli {

std::string number(double v);

inline constexpr const char* kAttributionCsvHeader = "map,method,output,param,row,col,score\n";

// Long-format CSV rows (no header); output labels the scalar that was explained.
std::string attribution_csv(const std::string& method, const std::string& output, const Attribution& a);
std::string attribution_table(const Attribution& a);
std::string solution_table(const ModelSolution& s);

}  // namespace xlp::cli
