#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace vsl::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LE, EQ, GE };

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kBudgetIncumbent,    // budget exhausted, incumbent available
  kBudgetNoIncumbent,  // budget exhausted, nothing feasible found
  kNumericalFailure,
};

const char* to_string(SolveStatus s);

struct RowTerm {
  int col = 0;
  double coef = 0.0;
};

struct Row {
  std::vector<RowTerm> terms;
  Relation rel = Relation::LE;
  double rhs = 0.0;
};

/// Sparse row-oriented linear program with variable bounds. The objective
/// sense is maximization by default, matching every problem built here.
struct LpProblem {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;
  std::vector<std::string> var_names;  // optional, used by the LP dump

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(double lo, double hi, double obj, std::string name = {});
  void add_row(Relation rel, double rhs, std::vector<RowTerm> terms);
  /// Throws std::invalid_argument on inconsistent dimensions or non-finite
  /// coefficients.
  void check_well_formed() const;
};

/// An LP plus binary marks and SOS1-style groups (exactly one member of a
/// group is 1); groups drive branching.
struct MilpProblem {
  LpProblem lp;
  std::vector<int> binaries;
  std::vector<std::vector<int>> sos1;
};

struct Solution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> values;
  double objective = -kInf;
  double best_bound = kInf;  // valid bound in the problem's sense
  long iterations = 0;       // simplex pivots (LP) or processed nodes (MILP)
};

struct MilpOptions {
  double budget_s = 1e18;
  double gap_tol = 1e-6;  // relative; optimal when gap below this
  long node_limit = std::numeric_limits<long>::max();
  int stop_after_incumbents = 0;       // 0: disabled
  std::vector<double> mip_start;       // optional full assignment hint
  /// Called once per processed node with (nodes, best bound, incumbent
  /// objective or -inf), both in the problem's sense.
  std::function<void(long, double, double)> progress;
};

Solution solve_lp(const LpProblem& p);

Solution solve_milp(const MilpProblem& p, const MilpOptions& opts = {});
inline Solution solve_milp(const MilpProblem& p, double budget_s,
                           double gap_tol) {
  MilpOptions o;
  o.budget_s = budget_s;
  o.gap_tol = gap_tol;
  return solve_milp(p, o);
}

/// Maps a candidate point to violated valid rows; empty means accept.
using CutOracle = std::function<std::vector<Row>(const std::vector<double>&)>;

/// Iterates solve_milp -> oracle at the incumbent -> add rows, until the
/// oracle is silent or the budget ends.
Solution solve_with_lazy_cuts(MilpProblem p, const CutOracle& oracle,
                              const MilpOptions& opts = {});

/// Plain-text dump (CPLEX LP format) for external cross-checking.
std::string to_lp_format(const LpProblem& p,
                         const std::vector<int>& binaries = {});
void write_lp_file(const std::string& path, const LpProblem& p,
                   const std::vector<int>& binaries = {});

namespace detail {

/// Bounded-variable revised simplex over [A | I] with a sparse LU basis
/// kernel and product-form updates. Used directly by branch-and-bound for
/// warm-started re-optimization.
class SimplexEngine {
 public:
  explicit SimplexEngine(const LpProblem& p);
  ~SimplexEngine();
  SimplexEngine(const SimplexEngine&) = delete;
  SimplexEngine& operator=(const SimplexEngine&) = delete;

  struct Basis {
    std::vector<int> basic;
    std::vector<unsigned char> status;
  };

  void set_var_bounds(int col, double lo, double hi);
  void reset_var_bounds(const LpProblem& p);

  SolveStatus solve_cold();
  /// Dual-simplex re-optimization from the loaded basis after bound
  /// changes; falls back to a cold solve on trouble.
  SolveStatus reoptimize();

  double objective() const;  // in the problem's sense
  void extract(std::vector<double>& x) const;
  double value_of(int col) const;

  Basis save_basis() const;
  void load_basis(const Basis& b);

  long iterations() const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace detail

}  // namespace vsl::lp
