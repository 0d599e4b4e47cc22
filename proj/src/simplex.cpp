#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vsl/lp.hpp"

namespace vsl::lp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kBudgetIncumbent: return "budget-exhausted-with-incumbent";
    case SolveStatus::kBudgetNoIncumbent: return "budget-exhausted-no-incumbent";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

int LpProblem::add_var(double lo, double hi, double obj, std::string name) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  if (!name.empty() || !var_names.empty()) {
    var_names.resize(objective.size() - 1, "");
    var_names.push_back(std::move(name));
  }
  return static_cast<int>(objective.size()) - 1;
}

void LpProblem::add_row(Relation rel, double rhs, std::vector<RowTerm> terms) {
  Row r;
  r.rel = rel;
  r.rhs = rhs;
  r.terms = std::move(terms);
  rows.push_back(std::move(r));
}

void LpProblem::check_well_formed() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
    throw std::invalid_argument("lp: bound arrays must match variable count");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw std::invalid_argument("lp: invalid bounds on variable " +
                                  std::to_string(j));
    if (!std::isfinite(objective[j]))
      throw std::invalid_argument("lp: non-finite objective coefficient");
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs))
      throw std::invalid_argument("lp: non-finite right-hand side");
    for (const auto& t : row.terms) {
      if (t.col < 0 || t.col >= n)
        throw std::invalid_argument("lp: row references unknown variable");
      if (!std::isfinite(t.coef))
        throw std::invalid_argument("lp: non-finite row coefficient");
    }
  }
}

namespace detail {

namespace {

enum VarStatus : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeZero = 3 };

constexpr double kPivTol = 1e-8;
constexpr double kDropTol = 1e-12;
constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-7;
constexpr int kRefactorEvery = 80;
constexpr int kBlandTrigger = 500;

}  // namespace

struct SimplexEngine::Impl {
  // problem data (rows scaled by s_r = 1/max|a_r|)
  int n = 0;  // structural
  int m = 0;  // rows
  bool maximize = true;
  std::vector<int> col_ptr, row_idx;
  std::vector<double> vals;
  std::vector<double> user_obj;   // structural, user sense
  std::vector<double> cost;       // per column, internal minimization
  std::vector<double> lb, ub;     // per column
  std::vector<double> rhs;        // scaled
  std::vector<int> art_row;       // artificial k -> row
  std::vector<double> art_sign;   // artificial k -> +-1

  std::vector<unsigned char> status;  // per column
  std::vector<int> basic;             // row position -> column
  std::vector<int> basic_pos;         // column -> row position or -1
  std::vector<double> x;              // per column

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool lu_ok = false;
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> ent;
  };
  std::vector<Eta> etas;

  long iters = 0;
  int degenerate_streak = 0;
  bool bland = false;
  double cost_scale = 1.0;

  int num_cols() const { return n + m + static_cast<int>(art_row.size()); }

  template <typename Fn>
  void for_col(int j, Fn&& fn) const {
    if (j < n) {
      for (int k = col_ptr[static_cast<size_t>(j)]; k < col_ptr[static_cast<size_t>(j) + 1]; ++k)
        fn(row_idx[static_cast<size_t>(k)], vals[static_cast<size_t>(k)]);
    } else if (j < n + m) {
      fn(j - n, 1.0);
    } else {
      const int k = j - n - m;
      fn(art_row[static_cast<size_t>(k)], art_sign[static_cast<size_t>(k)]);
    }
  }

  void build(const LpProblem& p) {
    p.check_well_formed();
    n = p.num_vars();
    m = p.num_rows();
    maximize = p.maximize;
    user_obj = p.objective;

    // row scaling for even tolerances
    std::vector<double> scale(static_cast<size_t>(m), 1.0);
    for (int r = 0; r < m; ++r) {
      double mx = 0.0;
      for (const auto& t : p.rows[static_cast<size_t>(r)].terms)
        mx = std::max(mx, std::abs(t.coef));
      if (mx > 0.0) scale[static_cast<size_t>(r)] = 1.0 / mx;
    }

    // CSC of structural columns
    std::vector<int> count(static_cast<size_t>(n), 0);
    for (const auto& row : p.rows)
      for (const auto& t : row.terms) ++count[static_cast<size_t>(t.col)];
    col_ptr.assign(static_cast<size_t>(n) + 1, 0);
    for (int j = 0; j < n; ++j) col_ptr[static_cast<size_t>(j) + 1] = col_ptr[static_cast<size_t>(j)] + count[static_cast<size_t>(j)];
    row_idx.assign(static_cast<size_t>(col_ptr[static_cast<size_t>(n)]), 0);
    vals.assign(row_idx.size(), 0.0);
    std::vector<int> next(col_ptr.begin(), col_ptr.end() - 1);
    for (int r = 0; r < m; ++r) {
      for (const auto& t : p.rows[static_cast<size_t>(r)].terms) {
        const int k = next[static_cast<size_t>(t.col)]++;
        row_idx[static_cast<size_t>(k)] = r;
        vals[static_cast<size_t>(k)] = t.coef * scale[static_cast<size_t>(r)];
      }
    }

    lb.assign(p.lower.begin(), p.lower.end());
    ub.assign(p.upper.begin(), p.upper.end());
    cost.assign(static_cast<size_t>(n + m), 0.0);
    for (int j = 0; j < n; ++j)
      cost[static_cast<size_t>(j)] = maximize ? -user_obj[static_cast<size_t>(j)] : user_obj[static_cast<size_t>(j)];
    cost_scale = 1.0;
    for (int j = 0; j < n; ++j) cost_scale = std::max(cost_scale, std::abs(cost[static_cast<size_t>(j)]));

    rhs.resize(static_cast<size_t>(m));
    lb.resize(static_cast<size_t>(n + m));
    ub.resize(static_cast<size_t>(n + m));
    for (int r = 0; r < m; ++r) {
      const auto& row = p.rows[static_cast<size_t>(r)];
      rhs[static_cast<size_t>(r)] = row.rhs * scale[static_cast<size_t>(r)];
      const int sj = n + r;
      switch (row.rel) {
        case Relation::LE:
          lb[static_cast<size_t>(sj)] = 0.0;
          ub[static_cast<size_t>(sj)] = kInf;
          break;
        case Relation::GE:
          lb[static_cast<size_t>(sj)] = -kInf;
          ub[static_cast<size_t>(sj)] = 0.0;
          break;
        case Relation::EQ:
          lb[static_cast<size_t>(sj)] = 0.0;
          ub[static_cast<size_t>(sj)] = 0.0;
          break;
      }
    }

    status.assign(static_cast<size_t>(n + m), kAtLower);
    x.assign(static_cast<size_t>(n + m), 0.0);
    basic.assign(static_cast<size_t>(m), -1);
    basic_pos.assign(static_cast<size_t>(n + m), -1);
  }

  double nonbasic_rest_value(int j) const {
    switch (status[static_cast<size_t>(j)]) {
      case kAtLower: return lb[static_cast<size_t>(j)];
      case kAtUpper: return ub[static_cast<size_t>(j)];
      default: return 0.0;
    }
  }

  void snap_nonbasics() {
    const int tc = num_cols();
    for (int j = 0; j < tc; ++j) {
      if (status[static_cast<size_t>(j)] == kBasic) continue;
      if (status[static_cast<size_t>(j)] == kFreeZero) {
        // free variables rest at 0 unless a bound appeared
        if (lb[static_cast<size_t>(j)] > 0.0 || ub[static_cast<size_t>(j)] < 0.0)
          status[static_cast<size_t>(j)] = std::isfinite(lb[static_cast<size_t>(j)]) ? kAtLower : kAtUpper;
      }
      if (status[static_cast<size_t>(j)] == kAtLower && !std::isfinite(lb[static_cast<size_t>(j)]))
        status[static_cast<size_t>(j)] = std::isfinite(ub[static_cast<size_t>(j)]) ? kAtUpper : kFreeZero;
      if (status[static_cast<size_t>(j)] == kAtUpper && !std::isfinite(ub[static_cast<size_t>(j)]))
        status[static_cast<size_t>(j)] = std::isfinite(lb[static_cast<size_t>(j)]) ? kAtLower : kFreeZero;
      x[static_cast<size_t>(j)] = nonbasic_rest_value(j);
    }
  }

  bool factorize() {
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 4);
    for (int r = 0; r < m; ++r) {
      const int j = basic[static_cast<size_t>(r)];
      for_col(j, [&](int row, double v) { trip.emplace_back(row, r, v); });
    }
    B.setFromTriplets(trip.begin(), trip.end());
    lu.compute(B);
    lu_ok = (lu.info() == Eigen::Success);
    etas.clear();
    return lu_ok;
  }

  void ftran(Eigen::VectorXd& v) const {
    v = lu.solve(v);
    for (const auto& e : etas) {
      const double piv = v[e.pos] / e.pivot;
      if (piv != 0.0)
        for (const auto& [i, val] : e.ent) v[i] -= val * piv;
      v[e.pos] = piv;
    }
  }

  void btran(Eigen::VectorXd& v) const {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double dot = 0.0;
      for (const auto& [i, val] : it->ent) dot += val * v[i];
      v[it->pos] = (v[it->pos] - dot) / it->pivot;
    }
    v = lu.adjoint().solve(v);
  }

  void compute_basics() {
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rhs.data(), m);
    const int tc = num_cols();
    for (int j = 0; j < tc; ++j) {
      if (status[static_cast<size_t>(j)] == kBasic) continue;
      const double v = x[static_cast<size_t>(j)];
      if (v != 0.0) for_col(j, [&](int row, double a) { r[row] -= a * v; });
    }
    ftran(r);
    for (int p = 0; p < m; ++p) x[static_cast<size_t>(basic[static_cast<size_t>(p)])] = r[p];
  }

  double current_cost(int j, int phase) const {
    if (phase == 1) return j >= n + m ? 1.0 : 0.0;
    return j < n + m ? cost[static_cast<size_t>(j)] : 0.0;
  }

  // reduced costs for all nonbasic columns; d = c_N - N^T y
  void reduced_costs(int phase, std::vector<double>& d, Eigen::VectorXd& y) const {
    y.setZero(m);
    for (int p = 0; p < m; ++p) {
      const double cb = current_cost(basic[static_cast<size_t>(p)], phase);
      if (cb != 0.0) y[p] = cb;
    }
    // y currently holds c_B in basis order; btran wants it as such
    Eigen::VectorXd cb = y;
    // map basis-ordered costs into row space: solve B^T y = c_B
    btran(cb);
    y = cb;
    const int tc = num_cols();
    d.assign(static_cast<size_t>(tc), 0.0);
    for (int j = 0; j < tc; ++j) {
      if (status[static_cast<size_t>(j)] == kBasic) continue;
      double dot = 0.0;
      for_col(j, [&](int row, double a) { dot += a * y[row]; });
      d[static_cast<size_t>(j)] = current_cost(j, phase) - dot;
    }
  }

  double feas_tol(int j) const {
    return kFeasTol * (1.0 + std::abs(x[static_cast<size_t>(j)]));
  }

  // ---- primal simplex on the current basis -------------------------------
  // phase 1 minimizes the artificial sum; phase 2 the real cost.
  SolveStatus primal(int phase, long max_iters) {
    std::vector<double> d;
    Eigen::VectorXd y(m), w(m);
    const double dual_tol = kDualTol * (phase == 1 ? 1.0 : cost_scale);
    degenerate_streak = 0;
    bland = false;
    long local = 0;
    int tiny_pivot_retries = 0;
    while (true) {
      if (local >= max_iters) return SolveStatus::kBudgetNoIncumbent;
      if (static_cast<int>(etas.size()) >= kRefactorEvery) {
        if (!factorize()) return SolveStatus::kNumericalFailure;
        compute_basics();
      }
      reduced_costs(phase, d, y);

      int q = -1;
      int dir = 0;
      double best = dual_tol;
      const int tc = num_cols();
      for (int j = 0; j < tc; ++j) {
        const auto st = status[static_cast<size_t>(j)];
        if (st == kBasic) continue;
        if (lb[static_cast<size_t>(j)] == ub[static_cast<size_t>(j)] && st != kFreeZero) continue;  // fixed
        const double dj = d[static_cast<size_t>(j)];
        double viol = 0.0;
        int dj_dir = 0;
        if (st == kAtLower && dj < -dual_tol) { viol = -dj; dj_dir = +1; }
        else if (st == kAtUpper && dj > dual_tol) { viol = dj; dj_dir = -1; }
        else if (st == kFreeZero && std::abs(dj) > dual_tol) {
          viol = std::abs(dj);
          dj_dir = dj < 0.0 ? +1 : -1;
        }
        if (dj_dir == 0) continue;
        if (bland) { q = j; dir = dj_dir; break; }
        if (viol > best) { best = viol; q = j; dir = dj_dir; }
      }
      if (q < 0) return SolveStatus::kOptimal;

      w.setZero();
      for_col(q, [&](int row, double a) { w[row] = a; });
      ftran(w);

      // ratio test
      double theta = kInf;
      if (std::isfinite(lb[static_cast<size_t>(q)]) && std::isfinite(ub[static_cast<size_t>(q)]))
        theta = ub[static_cast<size_t>(q)] - lb[static_cast<size_t>(q)];
      int leave_pos = -1;
      double leave_pivot = 0.0;
      int leave_to = kAtLower;
      for (int p = 0; p < m; ++p) {
        const double rate = -static_cast<double>(dir) * w[p];
        if (std::abs(rate) <= kPivTol) continue;
        const int bj = basic[static_cast<size_t>(p)];
        double room, cand;
        int to;
        if (rate > 0.0) {
          if (!std::isfinite(ub[static_cast<size_t>(bj)])) continue;
          room = ub[static_cast<size_t>(bj)] - x[static_cast<size_t>(bj)];
          to = kAtUpper;
        } else {
          if (!std::isfinite(lb[static_cast<size_t>(bj)])) continue;
          room = x[static_cast<size_t>(bj)] - lb[static_cast<size_t>(bj)];
          to = kAtLower;
        }
        cand = std::max(0.0, room) / std::abs(rate);
        const bool better =
            cand < theta - 1e-10 ||
            (cand < theta + 1e-10 && leave_pos >= 0 &&
             (bland ? bj < basic[static_cast<size_t>(leave_pos)]
                    : std::abs(w[p]) > std::abs(leave_pivot)));
        if (cand < theta + 1e-10 && (leave_pos < 0 || better)) {
          if (cand < theta) theta = cand;
          leave_pos = p;
          leave_pivot = w[p];
          leave_to = to;
        }
      }

      if (!std::isfinite(theta)) {
        return phase == 1 ? SolveStatus::kNumericalFailure : SolveStatus::kUnbounded;
      }

      ++iters;
      ++local;
      if (theta < 1e-10) {
        if (++degenerate_streak > kBlandTrigger) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }

      const bool bound_flip =
          leave_pos < 0 ||
          (std::isfinite(lb[static_cast<size_t>(q)]) && std::isfinite(ub[static_cast<size_t>(q)]) &&
           ub[static_cast<size_t>(q)] - lb[static_cast<size_t>(q)] <= theta + 1e-10 && leave_pos < 0);
      // update values along the direction
      for (int p = 0; p < m; ++p) {
        const double delta = -static_cast<double>(dir) * w[p] * theta;
        if (delta != 0.0) x[static_cast<size_t>(basic[static_cast<size_t>(p)])] += delta;
      }
      x[static_cast<size_t>(q)] += static_cast<double>(dir) * theta;

      if (bound_flip) {
        status[static_cast<size_t>(q)] = dir > 0 ? kAtUpper : kAtLower;
        x[static_cast<size_t>(q)] = status[static_cast<size_t>(q)] == kAtUpper ? ub[static_cast<size_t>(q)] : lb[static_cast<size_t>(q)];
        continue;
      }

      // pivot
      if (std::abs(leave_pivot) < kPivTol) {
        if (++tiny_pivot_retries > 5) return SolveStatus::kNumericalFailure;
        if (!factorize()) return SolveStatus::kNumericalFailure;
        compute_basics();
        continue;
      }
      tiny_pivot_retries = 0;
      const int leaving = basic[static_cast<size_t>(leave_pos)];
      status[static_cast<size_t>(leaving)] = static_cast<unsigned char>(leave_to);
      x[static_cast<size_t>(leaving)] =
          leave_to == kAtUpper ? ub[static_cast<size_t>(leaving)] : lb[static_cast<size_t>(leaving)];
      basic_pos[static_cast<size_t>(leaving)] = -1;
      basic[static_cast<size_t>(leave_pos)] = q;
      basic_pos[static_cast<size_t>(q)] = leave_pos;
      status[static_cast<size_t>(q)] = kBasic;

      Eta e;
      e.pos = leave_pos;
      e.pivot = leave_pivot;
      for (int p = 0; p < m; ++p)
        if (p != leave_pos && std::abs(w[p]) > kDropTol) e.ent.emplace_back(p, w[p]);
      etas.push_back(std::move(e));
    }
  }

  // ---- dual simplex re-optimization --------------------------------------
  SolveStatus dual(long max_iters) {
    std::vector<double> d;
    Eigen::VectorXd y(m), rho(m), w(m);
    long local = 0;
    int tiny_pivot_retries = 0;
    while (true) {
      if (local++ > max_iters) return SolveStatus::kNumericalFailure;
      if (static_cast<int>(etas.size()) >= kRefactorEvery) {
        if (!factorize()) return SolveStatus::kNumericalFailure;
        compute_basics();
      }
      // most violated basic
      int r = -1;
      double worst = kFeasTol;
      double sigma = 0.0;
      for (int p = 0; p < m; ++p) {
        const int bj = basic[static_cast<size_t>(p)];
        const double v = x[static_cast<size_t>(bj)];
        const double tol = kFeasTol * (1.0 + std::abs(v));
        if (v > ub[static_cast<size_t>(bj)] + tol && v - ub[static_cast<size_t>(bj)] > worst) {
          worst = v - ub[static_cast<size_t>(bj)];
          r = p;
          sigma = +1.0;
        } else if (v < lb[static_cast<size_t>(bj)] - tol && lb[static_cast<size_t>(bj)] - v > worst) {
          worst = lb[static_cast<size_t>(bj)] - v;
          r = p;
          sigma = -1.0;
        }
      }
      if (r < 0) return SolveStatus::kOptimal;

      reduced_costs(2, d, y);
      rho.setZero();
      rho[r] = 1.0;
      btran(rho);

      int q = -1;
      double best_theta = kInf;
      double best_alpha = 0.0;
      const int tc = num_cols();
      for (int j = 0; j < tc; ++j) {
        const auto st = status[static_cast<size_t>(j)];
        if (st == kBasic) continue;
        if (lb[static_cast<size_t>(j)] == ub[static_cast<size_t>(j)]) continue;  // fixed cannot enter
        double alpha = 0.0;
        for_col(j, [&](int row, double a) { alpha += a * rho[row]; });
        const double sa = sigma * alpha;
        bool ok = false;
        if (st == kAtLower && sa > kPivTol) ok = true;
        else if (st == kAtUpper && sa < -kPivTol) ok = true;
        else if (st == kFreeZero && std::abs(sa) > kPivTol) ok = true;
        if (!ok) continue;
        const double theta = std::max(0.0, d[static_cast<size_t>(j)] / sa);
        if (theta < best_theta - 1e-12 ||
            (theta < best_theta + 1e-12 && std::abs(alpha) > std::abs(best_alpha))) {
          best_theta = theta;
          best_alpha = alpha;
          q = j;
        }
      }
      if (q < 0) return SolveStatus::kInfeasible;

      w.setZero();
      for_col(q, [&](int row, double a) { w[row] = a; });
      ftran(w);
      if (std::abs(w[r]) < kPivTol) {
        if (++tiny_pivot_retries > 5) return SolveStatus::kNumericalFailure;
        if (!factorize()) return SolveStatus::kNumericalFailure;
        compute_basics();
        continue;
      }
      tiny_pivot_retries = 0;
      const int leaving = basic[static_cast<size_t>(r)];
      const double target = sigma > 0 ? ub[static_cast<size_t>(leaving)] : lb[static_cast<size_t>(leaving)];
      const double delta = (x[static_cast<size_t>(leaving)] - target) / w[r];
      for (int p = 0; p < m; ++p) {
        if (p == r || w[p] == 0.0) continue;
        x[static_cast<size_t>(basic[static_cast<size_t>(p)])] -= w[p] * delta;
      }
      x[static_cast<size_t>(q)] += delta;
      x[static_cast<size_t>(leaving)] = target;
      status[static_cast<size_t>(leaving)] = sigma > 0 ? kAtUpper : kAtLower;
      basic_pos[static_cast<size_t>(leaving)] = -1;
      basic[static_cast<size_t>(r)] = q;
      basic_pos[static_cast<size_t>(q)] = r;
      status[static_cast<size_t>(q)] = kBasic;

      Eta e;
      e.pos = r;
      e.pivot = w[r];
      for (int p = 0; p < m; ++p)
        if (p != r && std::abs(w[p]) > kDropTol) e.ent.emplace_back(p, w[p]);
      etas.push_back(std::move(e));
      ++iters;
    }
  }

  // ---- driver -------------------------------------------------------------
  void install_artificials() {
    art_row.clear();
    art_sign.clear();
    // demote any basic structural to its nearest bound
    for (int j = 0; j < n; ++j) {
      if (status[static_cast<size_t>(j)] != kBasic) continue;
      const double lo = lb[static_cast<size_t>(j)], hi = ub[static_cast<size_t>(j)];
      if (std::isfinite(lo) && std::isfinite(hi))
        status[static_cast<size_t>(j)] =
            std::abs(x[static_cast<size_t>(j)] - lo) <= std::abs(hi - x[static_cast<size_t>(j)])
                ? kAtLower : kAtUpper;
      else if (std::isfinite(lo))
        status[static_cast<size_t>(j)] = kAtLower;
      else if (std::isfinite(hi))
        status[static_cast<size_t>(j)] = kAtUpper;
      else
        status[static_cast<size_t>(j)] = kFreeZero;
      x[static_cast<size_t>(j)] = nonbasic_rest_value(j);
    }
    // residuals with slacks clamped into their ranges
    std::vector<double> resid(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) resid[static_cast<size_t>(r)] = rhs[static_cast<size_t>(r)];
    for (int j = 0; j < n; ++j) {
      const double v = x[static_cast<size_t>(j)];
      if (v != 0.0)
        for (int k = col_ptr[static_cast<size_t>(j)]; k < col_ptr[static_cast<size_t>(j) + 1]; ++k)
          resid[static_cast<size_t>(row_idx[static_cast<size_t>(k)])] -= vals[static_cast<size_t>(k)] * v;
    }
    status.resize(static_cast<size_t>(n + m));
    x.resize(static_cast<size_t>(n + m));
    lb.resize(static_cast<size_t>(n + m));
    ub.resize(static_cast<size_t>(n + m));
    basic.assign(static_cast<size_t>(m), -1);
    basic_pos.assign(static_cast<size_t>(n + m), -1);
    for (int r = 0; r < m; ++r) {
      const int sj = n + r;
      const double v = resid[static_cast<size_t>(r)];
      if (v >= lb[static_cast<size_t>(sj)] - kFeasTol && v <= ub[static_cast<size_t>(sj)] + kFeasTol) {
        basic[static_cast<size_t>(r)] = sj;
        basic_pos[static_cast<size_t>(sj)] = r;
        status[static_cast<size_t>(sj)] = kBasic;
        x[static_cast<size_t>(sj)] = v;
      } else {
        const double sv = std::clamp(v, lb[static_cast<size_t>(sj)], ub[static_cast<size_t>(sj)]);
        status[static_cast<size_t>(sj)] = sv == lb[static_cast<size_t>(sj)] ? kAtLower : kAtUpper;
        x[static_cast<size_t>(sj)] = sv;
        const double res = v - sv;
        art_row.push_back(r);
        art_sign.push_back(res >= 0.0 ? 1.0 : -1.0);
        const int aj = n + m + static_cast<int>(art_row.size()) - 1;
        lb.push_back(0.0);
        ub.push_back(kInf);
        status.push_back(kBasic);
        x.push_back(std::abs(res));
        basic[static_cast<size_t>(r)] = aj;
        basic_pos.resize(static_cast<size_t>(aj) + 1, -1);
        basic_pos[static_cast<size_t>(aj)] = r;
      }
    }
  }

  bool drop_artificials() {
    double infeas = 0.0;
    for (size_t k = 0; k < art_row.size(); ++k) infeas += std::abs(x[static_cast<size_t>(n + m) + k]);
    if (infeas > 1e-6 * (1.0 + static_cast<double>(m)) * 0.5) return false;
    // pin artificials at zero; pivot basic ones out when possible
    for (size_t k = 0; k < art_row.size(); ++k) {
      const int aj = n + m + static_cast<int>(k);
      lb[static_cast<size_t>(aj)] = ub[static_cast<size_t>(aj)] = 0.0;
      if (status[static_cast<size_t>(aj)] != kBasic) {
        status[static_cast<size_t>(aj)] = kAtLower;
        x[static_cast<size_t>(aj)] = 0.0;
        continue;
      }
      const int pos = basic_pos[static_cast<size_t>(aj)];
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(m);
      rho[pos] = 1.0;
      btran(rho);
      int enter = -1;
      double best = kPivTol * 10;
      for (int j = 0; j < n + m; ++j) {
        if (status[static_cast<size_t>(j)] == kBasic) continue;
        if (lb[static_cast<size_t>(j)] == ub[static_cast<size_t>(j)]) continue;
        double alpha = 0.0;
        for_col(j, [&](int row, double a) { alpha += a * rho[row]; });
        if (std::abs(alpha) > best) {
          best = std::abs(alpha);
          enter = j;
        }
      }
      if (enter < 0) continue;  // redundant row; keep pinned artificial basic
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
      for_col(enter, [&](int row, double a) { w[row] = a; });
      ftran(w);
      if (std::abs(w[pos]) < kPivTol) continue;
      Eta e;
      e.pos = pos;
      e.pivot = w[pos];
      for (int p = 0; p < m; ++p)
        if (p != pos && std::abs(w[p]) > kDropTol) e.ent.emplace_back(p, w[p]);
      etas.push_back(std::move(e));
      status[static_cast<size_t>(aj)] = kAtLower;
      x[static_cast<size_t>(aj)] = 0.0;
      basic_pos[static_cast<size_t>(aj)] = -1;
      basic[static_cast<size_t>(pos)] = enter;
      basic_pos[static_cast<size_t>(enter)] = pos;
      status[static_cast<size_t>(enter)] = kBasic;
      // keep x of entering as computed by next compute_basics
    }
    compute_basics();
    return true;
  }

  bool primal_feasible() const {
    for (int p = 0; p < m; ++p) {
      const int j = basic[static_cast<size_t>(p)];
      const double v = x[static_cast<size_t>(j)];
      const double tol = kFeasTol * 10.0 * (1.0 + std::abs(v));
      if (v < lb[static_cast<size_t>(j)] - tol || v > ub[static_cast<size_t>(j)] + tol) return false;
    }
    return true;
  }

  SolveStatus solve_cold(long max_iters) {
    degenerate_streak = 0;
    bland = false;
    // nonbasic structurals at the bound closest to zero
    for (int j = 0; j < n; ++j) {
      const double lo = lb[static_cast<size_t>(j)], hi = ub[static_cast<size_t>(j)];
      if (std::isfinite(lo) && std::isfinite(hi)) {
        status[static_cast<size_t>(j)] = std::abs(lo) <= std::abs(hi) ? kAtLower : kAtUpper;
      } else if (std::isfinite(lo)) {
        status[static_cast<size_t>(j)] = kAtLower;
      } else if (std::isfinite(hi)) {
        status[static_cast<size_t>(j)] = kAtUpper;
      } else {
        status[static_cast<size_t>(j)] = kFreeZero;
      }
      x[static_cast<size_t>(j)] = nonbasic_rest_value(j);
    }
    install_artificials();
    if (!factorize()) return SolveStatus::kNumericalFailure;
    compute_basics();
    if (!art_row.empty()) {
      const SolveStatus s1 = primal(1, max_iters);
      if (s1 == SolveStatus::kBudgetNoIncumbent || s1 == SolveStatus::kNumericalFailure)
        return s1;
      if (!drop_artificials()) return SolveStatus::kInfeasible;
    }
    SolveStatus s2 = primal(2, max_iters);
    if (s2 == SolveStatus::kOptimal) {
      if (!factorize()) return SolveStatus::kNumericalFailure;
      compute_basics();
      if (!primal_feasible()) {
        // drifted; one repair pass
        install_artificials();
        if (!factorize()) return SolveStatus::kNumericalFailure;
        compute_basics();
        if (!art_row.empty()) {
          if (primal(1, max_iters) != SolveStatus::kOptimal) return SolveStatus::kNumericalFailure;
          if (!drop_artificials()) return SolveStatus::kInfeasible;
        }
        s2 = primal(2, max_iters);
        if (s2 != SolveStatus::kOptimal && s2 != SolveStatus::kUnbounded)
          return SolveStatus::kNumericalFailure;
      }
    }
    return s2;
  }

  double user_objective() const {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += user_obj[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    return v;
  }
};

SimplexEngine::SimplexEngine(const LpProblem& p) : impl_(new Impl) {
  impl_->build(p);
}

SimplexEngine::~SimplexEngine() { delete impl_; }

void SimplexEngine::set_var_bounds(int col, double lo, double hi) {
  impl_->lb[static_cast<size_t>(col)] = lo;
  impl_->ub[static_cast<size_t>(col)] = hi;
}

void SimplexEngine::reset_var_bounds(const LpProblem& p) {
  for (int j = 0; j < impl_->n; ++j) {
    impl_->lb[static_cast<size_t>(j)] = p.lower[static_cast<size_t>(j)];
    impl_->ub[static_cast<size_t>(j)] = p.upper[static_cast<size_t>(j)];
  }
}

SolveStatus SimplexEngine::solve_cold() {
  const long cap = 40L * (impl_->m + impl_->n) + 10000L;
  return impl_->solve_cold(cap);
}

SolveStatus SimplexEngine::reoptimize() {
  auto& im = *impl_;
  im.snap_nonbasics();
  if (!im.factorize()) return solve_cold();
  im.compute_basics();
  const long cap = 20L * im.m + 2000L;
  SolveStatus s = im.dual(cap);
  if (s == SolveStatus::kOptimal) {
    // polish: dual pass ends primal feasible; ensure dual feasibility too
    s = im.primal(2, 40L * (im.m + im.n) + 10000L);
    if (s == SolveStatus::kOptimal && !im.primal_feasible()) s = SolveStatus::kNumericalFailure;
  }
  if (s == SolveStatus::kNumericalFailure) return solve_cold();
  return s;
}

double SimplexEngine::objective() const { return impl_->user_objective(); }

void SimplexEngine::extract(std::vector<double>& out) const {
  out.assign(impl_->x.begin(), impl_->x.begin() + impl_->n);
}

double SimplexEngine::value_of(int col) const { return impl_->x[static_cast<size_t>(col)]; }

SimplexEngine::Basis SimplexEngine::save_basis() const {
  Basis b;
  b.basic = impl_->basic;
  b.status.assign(impl_->status.begin(), impl_->status.end());
  return b;
}

void SimplexEngine::load_basis(const Basis& b) {
  auto& im = *impl_;
  // ignore stale artificial columns from other solves
  im.art_row.clear();
  im.art_sign.clear();
  im.lb.resize(static_cast<size_t>(im.n + im.m));
  im.ub.resize(static_cast<size_t>(im.n + im.m));
  im.x.assign(static_cast<size_t>(im.n + im.m), 0.0);
  im.status.assign(static_cast<size_t>(im.n + im.m), kAtLower);
  im.basic.assign(static_cast<size_t>(im.m), -1);
  im.basic_pos.assign(static_cast<size_t>(im.n + im.m), -1);
  for (size_t j = 0; j < im.status.size() && j < b.status.size(); ++j)
    im.status[j] = b.status[j];
  for (int p = 0; p < im.m; ++p) {
    int col = b.basic[static_cast<size_t>(p)];
    if (col >= im.n + im.m || col < 0) col = im.n + p;  // stale artificial -> slack
    im.basic[static_cast<size_t>(p)] = col;
  }
  // repair duplicates: a column can appear once
  std::vector<char> seen(static_cast<size_t>(im.n + im.m), 0);
  for (int p = 0; p < im.m; ++p) {
    int col = im.basic[static_cast<size_t>(p)];
    if (seen[static_cast<size_t>(col)]) col = im.n + p;
    seen[static_cast<size_t>(col)] = 1;
    im.basic[static_cast<size_t>(p)] = col;
    im.basic_pos[static_cast<size_t>(col)] = p;
    im.status[static_cast<size_t>(col)] = kBasic;
  }
  for (int j = 0; j < im.n + im.m; ++j) {
    if (im.status[static_cast<size_t>(j)] == kBasic && im.basic_pos[static_cast<size_t>(j)] < 0)
      im.status[static_cast<size_t>(j)] = kAtLower;
  }
  im.snap_nonbasics();
}

long SimplexEngine::iterations() const { return impl_->iters; }

}  // namespace detail

Solution solve_lp(const LpProblem& p) {
  detail::SimplexEngine engine(p);
  const auto status = engine.solve_cold();
  Solution sol;
  sol.status = status;
  sol.iterations = engine.iterations();
  if (status == SolveStatus::kOptimal) {
    engine.extract(sol.values);
    sol.objective = engine.objective();
    sol.best_bound = sol.objective;
  } else if (status == SolveStatus::kUnbounded) {
    sol.objective = p.maximize ? kInf : -kInf;
    sol.best_bound = sol.objective;
  } else if (status == SolveStatus::kInfeasible) {
    sol.objective = p.maximize ? -kInf : kInf;
    sol.best_bound = sol.objective;
  }
  return sol;
}

}  // namespace vsl::lp
