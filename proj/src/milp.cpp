#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "vsl/lp.hpp"

namespace vsl::lp {

namespace {

using Clock = std::chrono::steady_clock;
using detail::SimplexEngine;

constexpr double kIntTol = 1e-6;

struct BoundFix {
  int col;
  double lo, hi;
};

struct Node {
  std::vector<BoundFix> fixes;
  SimplexEngine::Basis basis;   // parent's optimal basis
  double parent_bound;          // valid bound (maximization sense)
  long seq;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->parent_bound != b->parent_bound) return a->parent_bound < b->parent_bound;
    return a->seq > b->seq;  // FIFO among ties
  }
};

double sense_mult(const LpProblem& p) { return p.maximize ? 1.0 : -1.0; }

bool integral(double v) { return std::abs(v - std::round(v)) <= kIntTol; }

}  // namespace

Solution solve_milp(const MilpProblem& prob, const MilpOptions& opts) {
  prob.lp.check_well_formed();
  for (int col : prob.binaries) {
    if (col < 0 || col >= prob.lp.num_vars())
      throw std::invalid_argument("milp: binary index out of range");
    if (prob.lp.lower[static_cast<size_t>(col)] < -kIntTol ||
        prob.lp.upper[static_cast<size_t>(col)] > 1.0 + kIntTol)
      throw std::invalid_argument("milp: binary variables must have bounds within [0,1]");
  }

  const auto t0 = Clock::now();
  const auto deadline = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count() >= opts.budget_s;
  };
  const double mult = sense_mult(prob.lp);  // compare in max sense

  Solution best;
  best.status = SolveStatus::kBudgetNoIncumbent;
  bool have_incumbent = false;
  double incumbent = -kInf;  // max sense
  int incumbents_found = 0;

  SimplexEngine engine(prob.lp);

  // Optional MIP start: fix binaries to the hinted values, solve the rest.
  if (!opts.mip_start.empty() &&
      static_cast<int>(opts.mip_start.size()) == prob.lp.num_vars()) {
    bool ok = true;
    for (int col : prob.binaries)
      if (!integral(opts.mip_start[static_cast<size_t>(col)])) ok = false;
    if (ok) {
      for (int col : prob.binaries) {
        const double v = std::round(opts.mip_start[static_cast<size_t>(col)]);
        engine.set_var_bounds(col, v, v);
      }
      if (engine.solve_cold() == SolveStatus::kOptimal) {
        have_incumbent = true;
        ++incumbents_found;
        incumbent = mult * engine.objective();
        engine.extract(best.values);
        best.objective = engine.objective();
      }
      engine.reset_var_bounds(prob.lp);
    }
  }

  // Root solve.
  const SolveStatus root_status = engine.solve_cold();
  if (root_status == SolveStatus::kInfeasible) {
    if (have_incumbent) {  // mip start proved feasibility; contradictory
      best.status = SolveStatus::kNumericalFailure;
      return best;
    }
    best.status = SolveStatus::kInfeasible;
    best.objective = prob.lp.maximize ? -kInf : kInf;
    best.best_bound = best.objective;
    return best;
  }
  if (root_status == SolveStatus::kUnbounded) {
    best.status = SolveStatus::kUnbounded;
    best.objective = prob.lp.maximize ? kInf : -kInf;
    best.best_bound = best.objective;
    return best;
  }
  if (root_status != SolveStatus::kOptimal) {
    best.status = SolveStatus::kNumericalFailure;
    return best;
  }

  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
  long seq = 0;
  long nodes = 0;
  double reported_bound = kInf;   // monotone nonincreasing (max sense)
  double lost_bound = -kInf;      // bounds of subtrees dropped on trouble
  std::shared_ptr<Node> dive;     // depth-first child processed next

  auto root = std::make_shared<Node>();
  root->parent_bound = mult * engine.objective();
  root->basis = engine.save_basis();
  root->seq = seq++;
  open.push(root);

  const auto current_bound = [&]() {
    double b = std::max(have_incumbent ? incumbent : -kInf, lost_bound);
    if (!open.empty()) b = std::max(b, open.top()->parent_bound);
    if (dive) b = std::max(b, dive->parent_bound);
    reported_bound = std::min(reported_bound, b);
    return reported_bound;
  };

  const auto rel_gap = [&]() {
    if (!have_incumbent) return kInf;
    const double bound = current_bound();
    return (bound - incumbent) / std::max(1.0, std::abs(incumbent));
  };

  bool budget_hit = false;

  while (dive || !open.empty()) {
    if (deadline() || nodes >= opts.node_limit ||
        (opts.stop_after_incumbents > 0 && incumbents_found >= opts.stop_after_incumbents)) {
      budget_hit = true;
      break;
    }
    if (opts.progress)
      opts.progress(nodes, mult * current_bound(),
                    have_incumbent ? mult * incumbent : -mult * kInf);
    else
      current_bound();
    if (have_incumbent && rel_gap() <= opts.gap_tol) break;

    std::shared_ptr<Node> node;
    if (dive) {
      node = std::move(dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (have_incumbent &&
        node->parent_bound <= incumbent + 1e-9 * (1.0 + std::abs(incumbent)))
      continue;  // pruned by bound

    ++nodes;
    engine.reset_var_bounds(prob.lp);
    for (const auto& f : node->fixes) engine.set_var_bounds(f.col, f.lo, f.hi);
    engine.load_basis(node->basis);
    SolveStatus st = engine.reoptimize();
    if (st == SolveStatus::kNumericalFailure) st = engine.solve_cold();
    if (st == SolveStatus::kInfeasible) continue;
    if (st != SolveStatus::kOptimal) {
      // drop the subtree but keep its bound honest
      lost_bound = std::max(lost_bound, node->parent_bound);
      budget_hit = true;
      continue;
    }
    const double node_obj = mult * engine.objective();
    if (have_incumbent && node_obj <= incumbent + 1e-9 * (1.0 + std::abs(incumbent)))
      continue;

    // pick a branching target
    int frac_group = -1;
    double group_score = -1.0;
    for (size_t g = 0; g < prob.sos1.size(); ++g) {
      double mx = 0.0;
      bool any_frac = false;
      for (int col : prob.sos1[g]) {
        const double v = engine.value_of(col);
        mx = std::max(mx, v);
        if (!integral(v)) any_frac = true;
      }
      if (!any_frac) continue;
      const double score = 1.0 - mx;  // spread-out groups first
      if (score > group_score) {
        group_score = score;
        frac_group = static_cast<int>(g);
      }
    }
    int frac_bin = -1;
    if (frac_group < 0) {
      double best_frac = kIntTol;
      for (int col : prob.binaries) {
        const double v = engine.value_of(col);
        const double f = std::min(v - std::floor(v), std::ceil(v) - v);
        if (f > best_frac) {
          best_frac = f;
          frac_bin = col;
        }
      }
    }

    if (frac_group < 0 && frac_bin < 0) {
      // integral solution
      if (!have_incumbent || node_obj > incumbent) {
        have_incumbent = true;
        ++incumbents_found;
        incumbent = node_obj;
        engine.extract(best.values);
        best.objective = engine.objective();
      }
      continue;
    }

    const auto basis = engine.save_basis();
    if (frac_group >= 0) {
      // one child per group member; dive into the most promising one
      std::vector<std::pair<double, int>> members;
      for (int col : prob.sos1[static_cast<size_t>(frac_group)])
        members.emplace_back(engine.value_of(col), col);
      std::sort(members.begin(), members.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      for (const auto& [val, one_col] : members) {
        auto child = std::make_shared<Node>();
        child->fixes = node->fixes;
        for (int col : prob.sos1[static_cast<size_t>(frac_group)])
          child->fixes.push_back({col, col == one_col ? 1.0 : 0.0,
                                  col == one_col ? 1.0 : 0.0});
        child->basis = basis;
        child->parent_bound = node_obj;
        child->seq = seq++;
        if (!dive)
          dive = child;
        else
          open.push(child);
      }
    } else {
      const double v = engine.value_of(frac_bin);
      const double frac = v - std::floor(v);
      for (int round_up : {frac >= 0.5 ? 1 : 0, frac >= 0.5 ? 0 : 1}) {
        auto child = std::make_shared<Node>();
        child->fixes = node->fixes;
        child->fixes.push_back({frac_bin, static_cast<double>(round_up),
                                static_cast<double>(round_up)});
        child->basis = basis;
        child->parent_bound = node_obj;
        child->seq = seq++;
        if (!dive)
          dive = child;
        else
          open.push(child);
      }
    }
  }
  if (dive) lost_bound = std::max(lost_bound, dive->parent_bound);

  best.iterations = nodes;
  const double bound = current_bound();
  best.best_bound = have_incumbent || !open.empty() || budget_hit
                        ? mult * bound
                        : (prob.lp.maximize ? -kInf : kInf);
  if (!have_incumbent) {
    if (budget_hit || !open.empty()) {
      best.status = SolveStatus::kBudgetNoIncumbent;
    } else {
      best.status = SolveStatus::kInfeasible;
      best.objective = prob.lp.maximize ? -kInf : kInf;
      best.best_bound = best.objective;
    }
    return best;
  }
  const bool closed = open.empty() || rel_gap() <= opts.gap_tol;
  best.status = (closed && !budget_hit) || rel_gap() <= opts.gap_tol
                    ? SolveStatus::kOptimal
                    : SolveStatus::kBudgetIncumbent;
  if (best.status == SolveStatus::kOptimal && open.empty() && !budget_hit)
    best.best_bound = best.objective;
  return best;
}

Solution solve_with_lazy_cuts(MilpProblem p, const CutOracle& oracle,
                              const MilpOptions& opts) {
  const auto t0 = Clock::now();
  MilpOptions round_opts = opts;
  Solution sol;
  for (int round = 0; round < 200; ++round) {
    const double spent = std::chrono::duration<double>(Clock::now() - t0).count();
    round_opts.budget_s = opts.budget_s - spent;
    if (round_opts.budget_s <= 0.0) {
      sol.status = sol.values.empty() ? SolveStatus::kBudgetNoIncumbent
                                      : SolveStatus::kBudgetIncumbent;
      return sol;
    }
    sol = solve_milp(p, round_opts);
    if (sol.status != SolveStatus::kOptimal &&
        sol.status != SolveStatus::kBudgetIncumbent)
      return sol;
    auto cuts = oracle(sol.values);
    if (cuts.empty()) return sol;
    for (auto& row : cuts) p.lp.rows.push_back(std::move(row));
    // warm start the next round from this incumbent
    round_opts.mip_start = sol.values;
  }
  sol.status = SolveStatus::kBudgetIncumbent;
  return sol;
}

}  // namespace vsl::lp
