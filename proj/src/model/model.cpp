#include "kzxx/model/model.hpp"

#include <cmath>
#include <numbers>

#include "kzxx/errors.hpp"

namespace kzxx::model {

using sym::ChargeLeg;
using sym::cplx;
using sym::Dense;
using sym::Dir;
using sym::Sector;
using sym::SymTensor;

double ModelParams::dt_cap_tau() const {
  // 2 pi * j_r_mhz [MHz] * 0.001 us
  return 2.0 * std::numbers::pi * j_r_mhz * 1e-3;
}

RampShape ramp_shape_from_string(const std::string& s) {
  if (s == "linear") return RampShape::Linear;
  if (s == "smooth-start") return RampShape::SmoothStart;
  throw ConfigError("unknown ramp shape '" + s + "' (use linear | smooth-start)");
}

std::string to_string(RampShape s) {
  return s == RampShape::Linear ? "linear" : "smooth-start";
}

double smooth_s(double t, double t_r) {
  double u = t / t_r;
  return u * (1.0 - std::exp(-40.0 * u));
}

double time_step_us(double t_r_us) {
  if (!(t_r_us > 0.0)) throw ConfigError("time_step: t_r must be > 0");
  return std::min(0.001, 0.005 * t_r_us);
}

double time_step_tau(double tau_r, const ModelParams& params) {
  if (!(tau_r > 0.0)) throw ConfigError("time_step: t_r must be > 0");
  return std::min(params.dt_cap_tau(), 0.005 * tau_r);
}

double RampSchedule::s_of(double t) const {
  if (t < -1e-12 || t > tau_r * (1.0 + 1e-12))
    throw ConfigError("RampSchedule: t outside [0, t_r]");
  t = std::clamp(t, 0.0, tau_r);
  if (shape == RampShape::Linear) return t / tau_r;
  return smooth_s(t, tau_r);
}

double RampSchedule::t_of_s(double s) const {
  if (s < 0.0 || s > 1.0) throw ConfigError("RampSchedule: s outside [0, 1]");
  if (shape == RampShape::Linear) return s * tau_r;
  // monotone on [0, t_r]: bisection
  double lo = 0.0, hi = tau_r;
  double s_hi = smooth_s(hi, tau_r);
  if (s >= s_hi) return tau_r;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (smooth_s(mid, tau_r) < s)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * tau_r) break;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> ramp_values(const RampSchedule&, const ModelParams& params,
                                      double s) {
  if (s < 0.0 || s > 1.0)
    throw ConfigError("ramp_values: s outside [0, 1]");
  return {s * params.j_r(), (1.0 - s) * params.g_r()};
}

ChargeLeg phys_leg(Dir dir) {
  return ChargeLeg(dir, {{-1, 1}, {+1, 1}});
}

Gate two_site_gate(double J, double dt) {
  Gate g;
  g.n_sites = 2;
  SymTensor u({phys_leg(Dir::Out), phys_leg(Dir::Out), phys_leg(Dir::In), phys_leg(Dir::In)}, 0);
  const double theta = J * dt;
  const cplx c(std::cos(theta), 0.0);
  const cplx ms(0.0, -std::sin(theta));
  auto put = [&](sym::Charge a, sym::Charge b, sym::Charge c0, sym::Charge c1, cplx val) {
    Dense d({1, 1, 1, 1});
    d.v[0] = val;
    u.set_block({a, b, c0, c1}, std::move(d));
  };
  put(+1, +1, +1, +1, 1.0);
  put(-1, -1, -1, -1, 1.0);
  put(+1, -1, +1, -1, c);
  put(-1, +1, -1, +1, c);
  put(-1, +1, +1, -1, ms);
  put(+1, -1, -1, +1, ms);
  g.u = std::move(u);
  return g;
}

Gate field_gate(double G, int h, double dt) {
  if (h != 1 && h != -1)
    throw ConfigError("field_gate: invalid staggering h (must be +-1)");
  Gate g;
  g.n_sites = 1;
  SymTensor u({phys_leg(Dir::Out), phys_leg(Dir::In)}, 0);
  // phase exp(-i (G/2) h sz dt) on sz = +-1
  auto phase = [&](int sz) {
    double arg = -0.5 * G * h * sz * dt;
    return cplx(std::cos(arg), std::sin(arg));
  };
  {
    Dense d({1, 1});
    d.v[0] = phase(+1);
    u.set_block({+1, +1}, std::move(d));
  }
  {
    Dense d({1, 1});
    d.v[0] = phase(-1);
    u.set_block({-1, -1}, std::move(d));
  }
  g.u = std::move(u);
  return g;
}

TrotterPlan trotter_plan(const Lattice& lat, const RampSchedule& sched,
                         const ModelParams& params, double t, double dt) {
  if (!(dt > 0.0)) throw ConfigError("trotter_plan: dt must be > 0");
  TrotterPlan plan;
  plan.t0 = t;
  plan.dt = dt;
  plan.s_mid = sched.s_of(std::min(t + 0.5 * dt, sched.tau_r));
  auto [J, G] = ramp_values(sched, params, plan.s_mid);
  plan.J = J;
  plan.G = G;

  if (lat.infinite) {
    plan.groups = {{"h-ab", {}}, {"h-ba", {}}, {"v-ab", {}}, {"v-ba", {}}};
  } else {
    BondGroup he{"h-even", {}}, ho{"h-odd", {}}, ve{"v-even", {}}, vo{"v-odd", {}};
    for (const auto& b : lat.bonds()) {
      if (b.horizontal)
        (b.j0 % 2 == 0 ? he : ho).bonds.push_back(b);
      else
        (b.i0 % 2 == 0 ? ve : vo).bonds.push_back(b);
    }
    for (auto& g : {he, ho, ve, vo})
      if (!g.bonds.empty()) plan.groups.push_back(g);
  }

  const int k = static_cast<int>(plan.groups.size());
  plan.layers.push_back({TrotterLayer::Kind::Field, -1, 0.5 * dt});
  for (int g = 0; g < k - 1; ++g)
    plan.layers.push_back({TrotterLayer::Kind::Bond, g, 0.5 * dt});
  if (k > 0) plan.layers.push_back({TrotterLayer::Kind::Bond, k - 1, dt});
  for (int g = k - 2; g >= 0; --g)
    plan.layers.push_back({TrotterLayer::Kind::Bond, g, 0.5 * dt});
  plan.layers.push_back({TrotterLayer::Kind::Field, -1, 0.5 * dt});
  return plan;
}

}  // namespace kzxx::model
