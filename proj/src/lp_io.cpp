#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vsl/lp.hpp"

namespace vsl::lp {

namespace {

std::string var_name(const LpProblem& p, int j) {
  if (j < static_cast<int>(p.var_names.size()) && !p.var_names[static_cast<size_t>(j)].empty())
    return p.var_names[static_cast<size_t>(j)];
  return "x" + std::to_string(j);
}

void write_terms(std::ostringstream& os, const LpProblem& p,
                 const std::vector<RowTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    if (first) {
      if (t.coef < 0.0) os << "- ";
      first = false;
    } else {
      os << (t.coef < 0.0 ? " - " : " + ");
    }
    const double mag = std::abs(t.coef);
    std::ostringstream num;
    num.precision(17);
    num << mag;
    os << num.str() << " " << var_name(p, t.col);
  }
  if (first) os << "0 " << var_name(p, 0);
}

}  // namespace

std::string to_lp_format(const LpProblem& p, const std::vector<int>& binaries) {
  std::ostringstream os;
  os << (p.maximize ? "Maximize" : "Minimize") << "\n obj: ";
  std::vector<RowTerm> obj_terms;
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.objective[static_cast<size_t>(j)] != 0.0)
      obj_terms.push_back({j, p.objective[static_cast<size_t>(j)]});
  write_terms(os, p, obj_terms);
  os << "\nSubject To\n";
  for (int r = 0; r < p.num_rows(); ++r) {
    const auto& row = p.rows[static_cast<size_t>(r)];
    os << " c" << r << ": ";
    std::ostringstream body;
    write_terms(body, p, row.terms);
    os << body.str();
    switch (row.rel) {
      case Relation::LE: os << " <= "; break;
      case Relation::EQ: os << " = "; break;
      case Relation::GE: os << " >= "; break;
    }
    std::ostringstream rhs;
    rhs.precision(17);
    rhs << row.rhs;
    os << rhs.str() << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < p.num_vars(); ++j) {
    const double lo = p.lower[static_cast<size_t>(j)];
    const double hi = p.upper[static_cast<size_t>(j)];
    std::ostringstream line;
    line.precision(17);
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      line << " " << var_name(p, j) << " free";
    } else if (lo == hi) {
      line << " " << var_name(p, j) << " = " << lo;
    } else {
      line << " ";
      if (std::isfinite(lo)) line << lo << " <= ";
      else line << "-inf <= ";
      line << var_name(p, j);
      if (std::isfinite(hi)) line << " <= " << hi;
    }
    os << line.str() << "\n";
  }
  if (!binaries.empty()) {
    os << "Binaries\n";
    for (int j : binaries) os << " " << var_name(p, j);
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

void write_lp_file(const std::string& path, const LpProblem& p,
                   const std::vector<int>& binaries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LP file " + path);
  out << to_lp_format(p, binaries);
}

}  // namespace vsl::lp
