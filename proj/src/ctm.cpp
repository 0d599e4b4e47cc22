#include "vsl/ctm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vsl {

namespace {

std::string fmt9(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

SpeedSchedule constant_schedule(const HighwayConfig& cfg, int menu_i) {
  if (menu_i < 0 || menu_i >= cfg.menu_size())
    throw std::invalid_argument("constant_schedule: menu index out of range");
  SpeedSchedule s;
  s.menu_index.assign(static_cast<size_t>(cfg.num_edges()),
                      std::vector<int>(static_cast<size_t>(cfg.T), menu_i));
  return s;
}

SpeedSchedule schedule_from_speeds(const HighwayConfig& cfg,
                                   const std::vector<std::vector<double>>& u) {
  SpeedSchedule s;
  s.menu_index.resize(u.size());
  for (size_t e = 0; e < u.size(); ++e) {
    s.menu_index[e].resize(u[e].size());
    for (size_t t = 0; t < u[e].size(); ++t) {
      auto it = std::find(cfg.gamma.begin(), cfg.gamma.end(), u[e][t]);
      if (it == cfg.gamma.end())
        throw std::invalid_argument("schedule: speed " + std::to_string(u[e][t]) +
                                    " is not in the menu");
      s.menu_index[e][t] = static_cast<int>(it - cfg.gamma.begin());
    }
  }
  validate(s, cfg);
  return s;
}

void validate(const SpeedSchedule& s, const HighwayConfig& cfg) {
  if (s.num_edges() != cfg.num_edges())
    throw std::invalid_argument("schedule: edge count mismatch");
  for (const auto& row : s.menu_index) {
    if (static_cast<int>(row.size()) != cfg.T)
      throw std::invalid_argument("schedule: horizon mismatch");
    for (int i : row)
      if (i < 0 || i >= cfg.menu_size())
        throw std::invalid_argument("schedule: menu index out of range");
  }
}

DensityTrajectory propagate(const HighwayConfig& cfg, const SpeedSchedule& u,
                            const ScenarioSample& sample) {
  validate(u, cfg);
  validate(sample, cfg);
  const int n = cfg.num_edges();
  const int T = cfg.T;
  DensityTrajectory traj;
  traj.rho.assign(static_cast<size_t>(n),
                  std::vector<double>(static_cast<size_t>(T) + 1, 0.0));
  for (int e = 0; e < n; ++e) traj.rho[static_cast<size_t>(e)][0] = sample.rho0[static_cast<size_t>(e)];

  for (int t = 0; t < T; ++t) {
    for (int e = 0; e < n; ++e) {
      const auto& edge = cfg.edges[static_cast<size_t>(e)];
      const double he = cfg.h(e);
      const double ue = u.speed(cfg, e, t);
      const double rho_e = traj.rho[static_cast<size_t>(e)][static_cast<size_t>(t)];
      double inflow;
      if (e == 0) {
        inflow = sample.omega[static_cast<size_t>(t)];
      } else {
        const int s = e - 1;
        const double ratio =
            (1.0 - sample.r_out[static_cast<size_t>(s)][static_cast<size_t>(t)]) /
            (1.0 - sample.r_in[static_cast<size_t>(e)][static_cast<size_t>(t)]);
        const double us = u.speed(cfg, s, t);
        inflow = ratio * us * traj.rho[static_cast<size_t>(s)][static_cast<size_t>(t)];
        // Junction demand must respect downstream capacity and space.
        const double cap = edge.f_cap;
        const double space = tau(edge) * edge.u_free * (edge.rho_jam - rho_e);
        if (traj.admissible && inflow > std::min(cap, space) + 1e-9) {
          traj.admissible = false;
          traj.first_violation = DemandViolation{
              edge.id, t, inflow, std::min(cap, space),
              cap <= space ? "capacity" : "space"};
        }
      }
      traj.rho[static_cast<size_t>(e)][static_cast<size_t>(t) + 1] =
          rho_e + he * (inflow - ue * rho_e);
    }
  }
  return traj;
}

DisturbanceSlice slice_at(const ScenarioSample& sample, int t) {
  DisturbanceSlice d;
  d.omega = sample.omega.at(static_cast<size_t>(t));
  d.r_in.reserve(sample.r_in.size());
  d.r_out.reserve(sample.r_out.size());
  for (const auto& row : sample.r_in) d.r_in.push_back(row.at(static_cast<size_t>(t)));
  for (const auto& row : sample.r_out) d.r_out.push_back(row.at(static_cast<size_t>(t)));
  return d;
}

PlantStepResult plant_step(const HighwayConfig& cfg,
                           const std::vector<double>& u_now,
                           const std::vector<double>& state,
                           const DisturbanceSlice& dist) {
  const int n = cfg.num_edges();
  if (static_cast<int>(u_now.size()) != n || static_cast<int>(state.size()) != n)
    throw std::invalid_argument("plant_step: dimension mismatch");

  std::vector<double> demand(static_cast<size_t>(n));   // sending flow of e
  std::vector<double> receive(static_cast<size_t>(n));  // acceptance of e
  for (int e = 0; e < n; ++e) {
    const auto& edge = cfg.edges[static_cast<size_t>(e)];
    const double rho = state[static_cast<size_t>(e)];
    const double ue = u_now[static_cast<size_t>(e)];
    demand[static_cast<size_t>(e)] = ue * std::min(rho, critical_density(edge, ue));
    receive[static_cast<size_t>(e)] =
        std::min(edge.f_cap, tau(edge) * edge.u_free * (edge.rho_jam - rho));
    receive[static_cast<size_t>(e)] = std::max(0.0, receive[static_cast<size_t>(e)]);
  }

  // Junction fluxes: g_in[e] enters edge e; the realized outflow of the
  // upstream edge is capped by the same junction.
  std::vector<double> g_in(static_cast<size_t>(n), 0.0);
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  g_in[0] = std::min(dist.omega, receive[0]);
  for (int e = 1; e < n; ++e) {
    const int s = e - 1;
    const double keep = 1.0 - dist.r_out[static_cast<size_t>(s)];
    const double fresh = 1.0 - dist.r_in[static_cast<size_t>(e)];
    const double offered = keep * demand[static_cast<size_t>(s)] / fresh;
    g_in[static_cast<size_t>(e)] = std::min(offered, receive[static_cast<size_t>(e)]);
    out[static_cast<size_t>(s)] = g_in[static_cast<size_t>(e)] * fresh / keep;
  }
  out[static_cast<size_t>(n - 1)] = demand[static_cast<size_t>(n - 1)];

  PlantStepResult res;
  res.rho.resize(static_cast<size_t>(n));
  res.outflow = out;
  for (int e = 0; e < n; ++e) {
    const auto& edge = cfg.edges[static_cast<size_t>(e)];
    double next = state[static_cast<size_t>(e)] +
                  cfg.h(e) * (g_in[static_cast<size_t>(e)] - out[static_cast<size_t>(e)]);
    res.rho[static_cast<size_t>(e)] = std::clamp(next, 0.0, edge.rho_jam);
  }
  return res;
}

DensityTrajectory plant_rollout(const HighwayConfig& cfg,
                                const SpeedSchedule& u,
                                const ScenarioSample& sample) {
  validate(u, cfg);
  const int n = cfg.num_edges();
  const int T = cfg.T;
  DensityTrajectory traj;
  traj.rho.assign(static_cast<size_t>(n),
                  std::vector<double>(static_cast<size_t>(T) + 1, 0.0));
  std::vector<double> state = sample.rho0;
  for (int e = 0; e < n; ++e) traj.rho[static_cast<size_t>(e)][0] = state[static_cast<size_t>(e)];
  for (int t = 0; t < T; ++t) {
    std::vector<double> u_now(static_cast<size_t>(n));
    for (int e = 0; e < n; ++e) u_now[static_cast<size_t>(e)] = u.speed(cfg, e, t);
    state = plant_step(cfg, u_now, state, slice_at(sample, t)).rho;
    for (int e = 0; e < n; ++e)
      traj.rho[static_cast<size_t>(e)][static_cast<size_t>(t) + 1] = state[static_cast<size_t>(e)];
  }
  return traj;
}

double average_flow(const HighwayConfig& cfg, const SpeedSchedule& u,
                    const DensityTrajectory& traj) {
  const int n = cfg.num_edges();
  const int T = cfg.T;
  if (static_cast<int>(traj.rho.size()) != n)
    throw std::invalid_argument("average_flow: dimension mismatch");
  double sum = 0.0;
  for (int e = 0; e < n; ++e)
    for (int t = 0; t < T; ++t)
      sum += traj.rho[static_cast<size_t>(e)][static_cast<size_t>(t)] * u.speed(cfg, e, t);
  return sum / static_cast<double>(T);
}

bool within_critical_box(const HighwayConfig& cfg, const SpeedSchedule& u,
                         const DensityTrajectory& traj) {
  for (int e = 0; e < cfg.num_edges(); ++e) {
    const auto& edge = cfg.edges[static_cast<size_t>(e)];
    for (int t = 0; t < cfg.T; ++t) {
      const double rc = critical_density(edge, u.speed(cfg, e, t));
      if (traj.rho[static_cast<size_t>(e)][static_cast<size_t>(t)] > rc) return false;
    }
  }
  return true;
}

std::string trajectories_to_csv(const HighwayConfig& cfg,
                                const SpeedSchedule& u,
                                const std::vector<DensityTrajectory>& trajs) {
  std::ostringstream os;
  os << "sample,edge,t,rho,u,rho_crit\n";
  for (size_t l = 0; l < trajs.size(); ++l) {
    for (int e = 0; e < cfg.num_edges(); ++e) {
      const auto& edge = cfg.edges[static_cast<size_t>(e)];
      for (int t = 0; t <= cfg.T; ++t) {
        const int tu = std::min(t, cfg.T - 1);  // last slot reuses final speed
        const double ue = u.speed(cfg, e, tu);
        os << l + 1 << "," << edge.id << "," << t << ","
           << fmt9(trajs[l].rho[static_cast<size_t>(e)][static_cast<size_t>(t)]) << ","
           << fmt9(ue) << "," << fmt9(critical_density(edge, ue)) << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace vsl
