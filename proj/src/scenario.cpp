#include "vsl/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vsl/rng.hpp"

namespace vsl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

void check_range(const Range& r, const std::string& name) {
  if (r.lo > r.hi) fail(name + ": lo > hi");
  if (r.lo < 0.0) fail(name + ": negative values not allowed");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Range rho0_range(const SampleSpec& spec, int e) {
  if (spec.rho0.empty()) fail("sample spec: rho0 range missing");
  if (spec.rho0.size() == 1) return spec.rho0.front();
  return spec.rho0.at(static_cast<size_t>(e));
}

void validate(const SampleSpec& spec, const HighwayConfig& cfg) {
  check_range(spec.omega, "omega range");
  check_range(spec.r_in, "r_in range");
  check_range(spec.r_out, "r_out range");
  if (spec.r_in.hi >= 1.0) fail("r_in range: fraction must be < 1");
  if (spec.r_out.hi >= 1.0) fail("r_out range: fraction must be < 1");
  if (spec.rho0.size() != 1 &&
      spec.rho0.size() != static_cast<size_t>(cfg.num_edges()))
    fail("rho0 range: need one entry or one per edge");
  for (int e = 0; e < cfg.num_edges(); ++e) {
    const Range r = rho0_range(spec, e);
    check_range(r, "rho0 range");
    if (r.hi > cfg.edges[static_cast<size_t>(e)].rho_jam)
      fail("rho0 range: exceeds jam density on edge " +
           std::to_string(cfg.edges[static_cast<size_t>(e)].id));
  }
}

void validate(const ScenarioSample& sample, const HighwayConfig& cfg) {
  const size_t n = static_cast<size_t>(cfg.num_edges());
  const size_t T = static_cast<size_t>(cfg.T);
  if (sample.omega.size() != T)
    fail("sample: omega has length " + std::to_string(sample.omega.size()) +
         ", config horizon is " + std::to_string(T));
  if (sample.rho0.size() != n)
    fail("sample: rho0 has length " + std::to_string(sample.rho0.size()) +
         ", config has " + std::to_string(n) + " edges");
  if (sample.r_in.size() != n || sample.r_out.size() != n)
    fail("sample: ramp fraction matrices must have one row per edge");
  for (double w : sample.omega)
    if (w < 0.0) fail("sample: omega must be nonnegative");
  for (size_t e = 0; e < n; ++e) {
    const auto& edge = cfg.edges[e];
    if (sample.rho0[e] < 0.0) fail("sample: rho0 must be nonnegative");
    if (sample.rho0[e] > edge.rho_jam)
      fail("sample: rho0 exceeds jam density on edge " +
           std::to_string(edge.id));
    if (sample.r_in[e].size() != T || sample.r_out[e].size() != T)
      fail("sample: ramp fraction rows must have length " + std::to_string(T) +
           ", got " + std::to_string(sample.r_in[e].size()));
    for (size_t t = 0; t < T; ++t) {
      const double rin = sample.r_in[e][t];
      const double rout = sample.r_out[e][t];
      if (rin < 0.0 || rout < 0.0) fail("sample: fractions must be >= 0");
      if (rin >= 1.0 || rout >= 1.0) fail("sample: fraction must be < 1");
      if (!edge.has_onramp && rin != 0.0)
        fail("sample: nonzero r_in on edge " + std::to_string(edge.id) +
             " which has no on-ramp");
      if (!edge.has_offramp && rout != 0.0)
        fail("sample: nonzero r_out on edge " + std::to_string(edge.id) +
             " which has no off-ramp");
    }
  }
}

std::vector<ScenarioSample> generate_samples(const HighwayConfig& cfg,
                                             const SampleSpec& spec, int count,
                                             std::uint64_t stream) {
  validate(spec, cfg);
  const int n = cfg.num_edges();
  const int T = cfg.T;
  std::vector<ScenarioSample> out;
  out.reserve(static_cast<size_t>(count));
  Rng rng(spec.seed, stream);
  for (int l = 0; l < count; ++l) {
    ScenarioSample s;
    s.omega.resize(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t)
      s.omega[static_cast<size_t>(t)] = rng.uniform(spec.omega.lo, spec.omega.hi);
    s.rho0.resize(static_cast<size_t>(n));
    for (int e = 0; e < n; ++e) {
      const Range r = rho0_range(spec, e);
      s.rho0[static_cast<size_t>(e)] = rng.uniform(r.lo, r.hi);
    }
    s.r_in.assign(static_cast<size_t>(n),
                  std::vector<double>(static_cast<size_t>(T), 0.0));
    s.r_out = s.r_in;
    for (int e = 0; e < n; ++e) {
      const auto& edge = cfg.edges[static_cast<size_t>(e)];
      for (int t = 0; t < T; ++t) {
        if (edge.has_onramp)
          s.r_in[static_cast<size_t>(e)][static_cast<size_t>(t)] =
              rng.uniform(spec.r_in.lo, spec.r_in.hi);
        if (edge.has_offramp)
          s.r_out[static_cast<size_t>(e)][static_cast<size_t>(t)] =
              rng.uniform(spec.r_out.lo, spec.r_out.hi);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScenarioSample> parse_samples(const std::string& json_text,
                                          const HighwayConfig& cfg) {
  json root = json::parse(json_text);
  if (!root.is_array()) fail("sample file: top level must be an array");
  std::vector<ScenarioSample> out;
  for (const auto& item : root) {
    ScenarioSample s;
    s.omega = item.at("omega").get<std::vector<double>>();
    s.rho0 = item.at("rho0").get<std::vector<double>>();
    s.r_in = item.at("r_in").get<std::vector<std::vector<double>>>();
    s.r_out = item.at("r_out").get<std::vector<std::vector<double>>>();
    validate(s, cfg);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScenarioSample> load_samples(const std::string& path,
                                         const HighwayConfig& cfg) {
  std::ifstream in(path);
  if (!in) fail("sample file: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_samples(buf.str(), cfg);
}

std::string samples_to_json(const std::vector<ScenarioSample>& samples) {
  json root = json::array();
  for (const auto& s : samples) {
    json item;
    item["omega"] = s.omega;
    item["rho0"] = s.rho0;
    item["r_in"] = s.r_in;
    item["r_out"] = s.r_out;
    root.push_back(std::move(item));
  }
  return root.dump(2);
}

void save_samples(const std::string& path,
                  const std::vector<ScenarioSample>& samples) {
  std::ofstream out(path);
  if (!out) fail("sample file: cannot write " + path);
  out << samples_to_json(samples) << "\n";
}

std::string samples_to_csv(const std::vector<ScenarioSample>& samples) {
  std::ostringstream os;
  const size_t T = samples.empty() ? 0 : samples.front().omega.size();
  os << "sample,edge,rho0";
  for (size_t t = 0; t < T; ++t) os << ",omega_" << t;
  for (size_t t = 0; t < T; ++t) os << ",r_in_" << t;
  for (size_t t = 0; t < T; ++t) os << ",r_out_" << t;
  os << "\n";
  for (size_t l = 0; l < samples.size(); ++l) {
    const auto& s = samples[l];
    for (size_t e = 0; e < s.rho0.size(); ++e) {
      os << l + 1 << "," << e + 1 << "," << fmt(s.rho0[e]);
      for (size_t t = 0; t < T; ++t) os << "," << fmt(s.omega[t]);
      for (size_t t = 0; t < T; ++t) os << "," << fmt(s.r_in[e][t]);
      for (size_t t = 0; t < T; ++t) os << "," << fmt(s.r_out[e][t]);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace vsl
