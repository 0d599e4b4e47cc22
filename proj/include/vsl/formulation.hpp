#pragma once

#include <vector>

#include "vsl/ctm.hpp"
#include "vsl/highway.hpp"
#include "vsl/lp.hpp"
#include "vsl/scenario.hpp"

namespace vsl {

/// Everything the problem builders need: the highway, the N samples, the
/// Wasserstein radius and the dual bound eta_bar.
struct InstanceData {
  HighwayConfig cfg;
  std::vector<ScenarioSample> samples;
  double epsilon = 0.0;
  double eta_bar = 0.0;
  int tie_slots = 1;  // consecutive slots forced to share one speed choice

  int N() const { return static_cast<int>(samples.size()); }
};

/// eta_bar default; doubled adaptively when a solve touches the cap.
double default_eta_bar(const HighwayConfig& cfg);

/// nu upper bound per edge: u_free * (1/T + rho_jam * eta_bar).
double nu_bar(const HighwayConfig& cfg, int e, double eta_bar);

InstanceData make_instance(const HighwayConfig& cfg,
                           std::vector<ScenarioSample> samples, double epsilon,
                           double eta_bar = 0.0);

/// Examined binary supports; one canonical integer cut per entry.
struct CutSet {
  std::vector<SpeedSchedule> examined;
};

/// Flat variable indexing over the P4 blocks, ordered
/// x, y, z, rho, mu, nu, eta, [lambda], [s], [q]. Within a block the order
/// is sample-major, then time, then edge, then menu/level index.
class IndexMap {
 public:
  IndexMap(int n, int m, int T, int N, bool with_lambda, bool with_s,
           int levels = 0);

  int x(int e, int i, int t) const { return x0_ + (t * n_ + e) * m_ + i; }
  int y(int l, int e, int i, int t) const {
    return y0_ + ((l * T_ + t) * n_ + e) * m_ + i;
  }
  int z(int l, int e, int i, int t) const {
    return z0_ + ((l * T_ + t) * n_ + e) * m_ + i;
  }
  int rho(int l, int e, int t) const { return rho0_ + (l * T_ + t) * n_ + e; }
  int mu(int l, int e, int t) const { return mu0_ + (l * T_ + t) * n_ + e; }
  int nu(int l, int e, int t) const { return nu0_ + (l * T_ + t) * n_ + e; }
  int eta(int l, int e, int t) const { return eta0_ + (l * T_ + t) * n_ + e; }
  int lambda() const { return lambda0_; }
  int s(int l, int e, int t) const { return s0_ + (l * T_ + t) * n_ + e; }
  int q(int l, int e, int k, int t) const {
    return q0_ + ((l * T_ + t) * n_ + e) * levels_ + k;
  }

  bool has_lambda() const { return lambda0_ >= 0; }
  bool has_s() const { return s0_ >= 0; }
  int levels() const { return levels_; }
  int total() const { return total_; }

 private:
  int n_, m_, T_, levels_;
  int x0_, y0_, z0_, rho0_, mu0_, nu0_, eta0_, lambda0_, s0_, q0_;
  int total_;
};

/// Creates all shared P4 variables with their bounds and names.
void add_p4_vars(const InstanceData& inst, const IndexMap& map,
                 lp::LpProblem& p);

/// Glover rows for z = x*eta and y = x*rho (t >= 1), the y(0) pinning
/// equalities, and the regularization sums.
void glover_rows(const InstanceData& inst, const IndexMap& map,
                 lp::LpProblem& p);

/// Sample-trajectory equalities, demand rows and rho(0) pinning.
void trajectory_rows(const InstanceData& inst, const IndexMap& map,
                     lp::LpProblem& p);

/// Multiplier rows: the eta/mu inequality, nu = mu + u/T and the dual-norm
/// box |nu| <= lambda (skipped when lambda is absent).
void dual_rows(const InstanceData& inst, const IndexMap& map,
               lp::LpProblem& p);

/// Exactly-one rows per (e,t) plus optional slot ties; fills SOS1 groups.
void speed_rows(const InstanceData& inst, const IndexMap& map,
                lp::LpProblem& p, std::vector<std::vector<int>>* sos1);

/// One canonical integer cut per examined candidate.
void cut_rows(const InstanceData& inst, const IndexMap& map, const CutSet& cuts,
              lp::LpProblem& p);

struct UbpProblem {
  lp::MilpProblem milp;
  IndexMap map;
};

/// The upper-bounding MILP: all P4 rows, the McCormick envelope of nu*rho
/// and the integer cuts.
UbpProblem build_ubp(const InstanceData& inst, const CutSet& cuts);

/// Extracts the integral speed choice from a UBP/P5 solution.
SpeedSchedule schedule_from_solution(const InstanceData& inst,
                                     const IndexMap& map,
                                     const std::vector<double>& values);

struct LbpProblem {
  lp::LpProblem lp;
  int lambda = -1;  // -1 when epsilon == 0
  int mu0 = 0, nu0 = 0, eta0 = 0;
  int n = 0, T = 0;
  int mu(int l, int e, int t) const { return mu0 + (l * T + t) * n + e; }
  int nu(int l, int e, int t) const { return nu0 + (l * T + t) * n + e; }
  int eta(int l, int e, int t) const { return eta0 + (l * T + t) * n + e; }
};

/// Lower-bounding LP for a fixed candidate: x is fixed, rho pinned at the
/// propagated trajectories, z eliminated through z = x*eta.
/// Throws std::invalid_argument when a trajectory is inadmissible.
LbpProblem build_lbp(const InstanceData& inst, const SpeedSchedule& u,
                     const std::vector<DensityTrajectory>& trajs);

struct LbpDualProblem {
  lp::LpProblem lp;
  int rho0 = 0, dev0 = 0;
  int n = 0, T = 0;
  int rho(int l, int e, int t) const { return rho0 + (l * T + t) * n + e; }
  int dev(int l, int e, int t) const { return dev0 + (l * T + t) * n + e; }
};

/// Equivalent dual of the LBP: minimize the averaged flow over the
/// congestion box subject to the transport budget sum_l ||rho - rho_hat||_1
/// <= N*epsilon. Infeasible exactly when the box is out of reach, which is
/// the congestion signal.
LbpDualProblem build_lbp_dual(const InstanceData& inst, const SpeedSchedule& u,
                              const std::vector<DensityTrajectory>& trajs);

/// sum_l dist_1(rho_hat^(l), [0, rho_c(u)]) over slots 0..T-1; the fast
/// feasibility pre-check compares this against N*epsilon.
double box_distance(const HighwayConfig& cfg, const SpeedSchedule& u,
                    const std::vector<DensityTrajectory>& trajs);

}  // namespace vsl
