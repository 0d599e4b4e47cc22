#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vsl {

/// Static parameters of one highway segment. Units are km, hours and
/// vehicles throughout the project; flows are veh/h, densities veh/km.
struct EdgeParams {
  int id = 0;             // 1-based edge index
  double len = 0.0;       // segment length, km
  int lanes = 1;          // metadata only
  double f_cap = 0.0;     // capacity, veh/h
  double rho_jam = 0.0;   // jam density, veh/km
  double u_free = 0.0;    // free-flow speed, km/h
  bool has_onramp = false;
  bool has_offramp = false;
};

/// Highway description: ordered edges, time grid and the speed-limit menu.
struct HighwayConfig {
  std::vector<EdgeParams> edges;
  double delta = 0.0;          // time step, hours
  int T = 0;                   // horizon slots
  std::vector<double> gamma;   // speed menu, strictly increasing, km/h

  int num_edges() const { return static_cast<int>(edges.size()); }
  int menu_size() const { return static_cast<int>(gamma.size()); }
  double gamma_max() const { return gamma.empty() ? 0.0 : gamma.back(); }
  /// h_e = delta / len_e, the space-time coupling factor of edge e.
  double h(int e) const { return delta / edges[static_cast<size_t>(e)].len; }
};

/// Throws std::invalid_argument when a field violates its invariant.
void validate(const EdgeParams& edge);
void validate(const HighwayConfig& cfg);

/// tau_e = f_cap / (u_free * rho_jam - f_cap); rejects u_free*rho_jam <= f_cap.
double tau(const EdgeParams& edge);

/// Critical density at speed limit u: tau*rho_jam*u_free / (tau*u_free + u).
double critical_density(const EdgeParams& edge, double u);

/// Piecewise-linear fundamental diagram: u*rho on the free branch,
/// tau*u_free*(rho_jam - rho) on the congested branch.
double fd_flow(const EdgeParams& edge, double rho, double u);

struct StabilityViolation {
  int edge = 0;       // 1-based
  double h = 0.0;     // delta / len
  double bound = 0.0; // 1 / gamma_max
};

struct StabilityReport {
  bool ok = true;
  std::vector<StabilityViolation> violations;
};

/// Checks delta/len_e <= 1/gamma_max for every edge.
StabilityReport check_stability(const HighwayConfig& cfg);

/// Time-windowed replacement of (f_cap, rho_jam, u_free) on one edge,
/// active for closed-loop slots in [slot_begin, slot_end).
struct EventOverride {
  int edge = 0;  // 1-based
  int slot_begin = 0;
  int slot_end = 0;
  std::optional<double> f_cap;
  std::optional<double> rho_jam;
  std::optional<double> u_free;
};

/// Config with all events active at `slot` applied. Within one planning
/// horizon the returned values are constant.
HighwayConfig apply_events(const HighwayConfig& cfg,
                           const std::vector<EventOverride>& events, int slot);

}  // namespace vsl
