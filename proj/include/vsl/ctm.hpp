#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsl/highway.hpp"
#include "vsl/scenario.hpp"

namespace vsl {

/// Per-edge, per-slot speed limits drawn from the menu. The binary
/// encoding x_{e,i}(t) (one menu index per edge and slot) is kept as
/// indices rather than a 0/1 tensor.
struct SpeedSchedule {
  std::vector<std::vector<int>> menu_index;  // n x T, index into cfg.gamma

  int num_edges() const { return static_cast<int>(menu_index.size()); }
  int horizon() const {
    return menu_index.empty() ? 0 : static_cast<int>(menu_index.front().size());
  }
  double speed(const HighwayConfig& cfg, int e, int t) const {
    return cfg.gamma[static_cast<size_t>(
        menu_index[static_cast<size_t>(e)][static_cast<size_t>(t)])];
  }
};

/// Uniform schedule at one menu entry.
SpeedSchedule constant_schedule(const HighwayConfig& cfg, int menu_i);
/// Schedule from explicit speeds; every value must be in the menu.
SpeedSchedule schedule_from_speeds(const HighwayConfig& cfg,
                                   const std::vector<std::vector<double>>& u);
void validate(const SpeedSchedule& s, const HighwayConfig& cfg);

struct DemandViolation {
  int edge = 0;    // 1-based receiving edge
  int t = 0;
  double demand = 0.0;
  double bound = 0.0;
  std::string which;  // "capacity" or "space"
};

/// Densities over the horizon, slot 0 holding the initial state.
struct DensityTrajectory {
  std::vector<std::vector<double>> rho;  // n x (T+1)
  bool admissible = true;
  std::optional<DemandViolation> first_violation;
};

/// Planner propagation: the linear recursion with junction demand checks.
/// Propagation completes even after a violation so diagnostics can report
/// the whole trajectory; `admissible` is false from the first violation on.
DensityTrajectory propagate(const HighwayConfig& cfg, const SpeedSchedule& u,
                            const ScenarioSample& sample);

/// One slot of uncertain inputs for the plant.
struct DisturbanceSlice {
  double omega = 0.0;
  std::vector<double> r_in;   // per edge
  std::vector<double> r_out;  // per edge
};

DisturbanceSlice slice_at(const ScenarioSample& sample, int t);

struct PlantStepResult {
  std::vector<double> rho;      // next densities, clamped to [0, rho_jam]
  std::vector<double> outflow;  // realized outflow of each edge, veh/h
};

/// Saturating CTM step: per-edge sending demand u*min(rho, rho_c), receiving
/// capacity min(f_cap, tau*u_free*(rho_jam - rho)), junction flux the min of
/// the two sides; the last edge discharges freely.
PlantStepResult plant_step(const HighwayConfig& cfg,
                           const std::vector<double>& u_now,
                           const std::vector<double>& state,
                           const DisturbanceSlice& dist);

/// Rolls the plant over the sample's horizon from sample.rho0.
DensityTrajectory plant_rollout(const HighwayConfig& cfg,
                                const SpeedSchedule& u,
                                const ScenarioSample& sample);

/// H(u; rho) = (1/T) sum_{e,t<T} rho_e(t) u_e(t), veh/h.
double average_flow(const HighwayConfig& cfg, const SpeedSchedule& u,
                    const DensityTrajectory& traj);

/// True when rho_e(t) <= rho_c(u_e(t)) for every edge and slot t < T.
bool within_critical_box(const HighwayConfig& cfg, const SpeedSchedule& u,
                         const DensityTrajectory& traj);

/// CSV with columns (sample, edge, t, rho, u, rho_crit).
std::string trajectories_to_csv(const HighwayConfig& cfg,
                                const SpeedSchedule& u,
                                const std::vector<DensityTrajectory>& trajs);

}  // namespace vsl
