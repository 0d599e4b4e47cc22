#include "vsl/highway.hpp"

#include <cmath>
#include <stdexcept>

namespace vsl {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace

void validate(const EdgeParams& edge) {
  const std::string tag = "edge " + std::to_string(edge.id) + ": ";
  if (!(edge.len > 0.0)) fail(tag + "len must be > 0");
  if (!(edge.f_cap > 0.0)) fail(tag + "f_cap must be > 0");
  if (!(edge.rho_jam > 0.0)) fail(tag + "rho_jam must be > 0");
  if (!(edge.u_free > 0.0)) fail(tag + "u_free must be > 0");
  if (!(edge.u_free * edge.rho_jam > edge.f_cap))
    fail(tag + "u_free * rho_jam must exceed f_cap (tau would blow up)");
}

void validate(const HighwayConfig& cfg) {
  if (cfg.edges.empty()) fail("config: edges must be nonempty");
  if (!(cfg.delta > 0.0)) fail("config: delta must be > 0");
  if (cfg.T < 1) fail("config: horizon T must be >= 1");
  if (cfg.gamma.empty()) fail("config: speed menu must be nonempty");
  for (size_t i = 0; i < cfg.gamma.size(); ++i) {
    if (!(cfg.gamma[i] > 0.0)) fail("config: speed menu entries must be > 0");
    if (i > 0 && !(cfg.gamma[i] > cfg.gamma[i - 1]))
      fail("config: speed menu must be strictly increasing");
  }
  for (const auto& edge : cfg.edges) {
    validate(edge);
    if (cfg.gamma_max() > edge.u_free)
      fail("edge " + std::to_string(edge.id) +
           ": menu top speed exceeds free-flow speed");
  }
  const auto stability = check_stability(cfg);
  if (!stability.ok) {
    const auto& v = stability.violations.front();
    fail("edge " + std::to_string(v.edge) + ": unstable time step, h=" +
         std::to_string(v.h) + " > 1/gamma_max=" + std::to_string(v.bound));
  }
}

double tau(const EdgeParams& edge) {
  const double denom = edge.u_free * edge.rho_jam - edge.f_cap;
  if (!(denom > 0.0))
    fail("edge " + std::to_string(edge.id) +
         ": u_free * rho_jam must exceed f_cap");
  return edge.f_cap / denom;
}

double critical_density(const EdgeParams& edge, double u) {
  if (!(u > 0.0)) fail("critical_density: speed must be > 0");
  const double t = tau(edge);
  return t * edge.rho_jam * edge.u_free / (t * edge.u_free + u);
}

double fd_flow(const EdgeParams& edge, double rho, double u) {
  if (rho < 0.0 || rho > edge.rho_jam)
    fail("fd_flow: rho outside [0, rho_jam]");
  if (!(u > 0.0) || u > edge.u_free)
    fail("fd_flow: u outside (0, u_free]");
  if (rho <= critical_density(edge, u)) return u * rho;
  return tau(edge) * edge.u_free * (edge.rho_jam - rho);
}

StabilityReport check_stability(const HighwayConfig& cfg) {
  StabilityReport report;
  const double gmax = cfg.gamma_max();
  if (!(gmax > 0.0)) return report;  // bound is vacuous
  const double bound = 1.0 / gmax;
  for (int e = 0; e < cfg.num_edges(); ++e) {
    const double he = cfg.h(e);
    if (he > bound + 1e-15) {
      report.ok = false;
      report.violations.push_back({cfg.edges[static_cast<size_t>(e)].id, he, bound});
    }
  }
  return report;
}

HighwayConfig apply_events(const HighwayConfig& cfg,
                           const std::vector<EventOverride>& events,
                           int slot) {
  HighwayConfig out = cfg;
  for (const auto& ev : events) {
    if (slot < ev.slot_begin || slot >= ev.slot_end) continue;
    if (ev.edge < 1 || ev.edge > out.num_edges())
      fail("event: edge index out of range");
    auto& edge = out.edges[static_cast<size_t>(ev.edge - 1)];
    if (ev.f_cap) edge.f_cap = *ev.f_cap;
    if (ev.rho_jam) edge.rho_jam = *ev.rho_jam;
    if (ev.u_free) edge.u_free = *ev.u_free;
  }
  return out;
}

}  // namespace vsl
