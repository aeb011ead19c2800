#include "render.hpp"

#include <iomanip>
#include <sstream>

namespace xlp::cli {

std::string number(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string attribution_csv(const std::string& method, const std::string& output, const Attribution& a) {
  std::ostringstream csv;
  const std::string map = to_string(a.map_kind);
  auto row = [&](const std::string& param, const std::string& r, const std::string& c, const std::string& v) {
    csv << map << ',' << method << ',' << output << ',' << param << ',' << r << ',' << c << ',' << v << '\n';
  };
  for (const auto& s : a.scores_structures) {
    if (!s.solved) {
      row("structure", s.name, "", "none");
    } else if (s.value) {
      row("structure", s.name, "", number(*s.value));
    } else {
      for (std::size_t k = 0; k < s.components.size(); ++k) {
        row("structure", s.name, std::to_string(k), s.components[k] ? number(*s.components[k]) : "none");
      }
    }
  }
  for (long i = 0; i < a.scores_A.rows(); ++i) {
    for (long j = 0; j < a.scores_A.cols(); ++j) row("A", std::to_string(i), std::to_string(j), number(a.scores_A(i, j)));
  }
  for (long i = 0; i < a.scores_b.size(); ++i) row("b", std::to_string(i), "", number(a.scores_b(i)));
  for (long j = 0; j < a.scores_w.size(); ++j) row("w", std::to_string(j), "", number(a.scores_w(j)));
  return csv.str();
}

namespace {

void vector_line(std::ostringstream& s, const std::string& label, const Vector& v) {
  s << std::left << std::setw(10) << label;
  for (long i = 0; i < v.size(); ++i) s << std::right << std::setw(12) << number(v(i));
  s << '\n';
}

}  // namespace

std::string attribution_table(const Attribution& a) {
  std::ostringstream s;
  s << to_string(a.method) << " on the " << to_string(a.map_kind) << " map";
  if (a.target) s << ", x" << *a.target;
  if (a.baseline) s << ", baseline " << to_string(a.baseline->kind) << ", " << a.steps << " steps";
  s << " (" << to_string(a.rule) << ")\n";
  if (a.method == Method::kOcclusion) {
    for (const auto& st : a.scores_structures) {
      s << std::left << std::setw(12) << st.name;
      if (!st.solved) {
        s << std::right << std::setw(12) << "none";
      } else if (st.value) {
        s << std::right << std::setw(12) << number(*st.value);
      } else {
        for (const auto& c : st.components) s << std::right << std::setw(12) << (c ? number(*c) : "none");
      }
      s << '\n';
    }
  } else {
    for (long i = 0; i < a.scores_A.rows(); ++i) vector_line(s, "A[" + std::to_string(i) + ",:]", a.scores_A.row(i));
    vector_line(s, "b", a.scores_b);
    vector_line(s, "w", a.scores_w);
  }
  for (const auto& c : a.caveats) s << "note: " << c << '\n';
  return s.str();
}

std::string solution_table(const ModelSolution& s) {
  std::ostringstream out;
  out << "status     " << to_string(s.status) << '\n';
  if (s.status != SolveStatus::kOptimal) return out.str();
  out << "objective  " << number(s.objective) << '\n';
  vector_line(out, "x", s.x);
  if (!s.integer) vector_line(out, "duals", s.lp.duals);
  if (s.lp.multiple_optima) out << "note: multiple optimal vertices\n";
  return out.str();
}

}  // namespace xlp::cli
