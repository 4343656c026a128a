#pragma once

#include <string>
#include <vector>

#include "kzxx/model/lattice.hpp"
#include "kzxx/symtensor/symtensor.hpp"

namespace kzxx::model {

// H = (J/2) sum_<ij> (sx sx + sy sy) + (G/2) sum_j h_j sz_j  with h_j = (-1)^(i+j).
// The engine works in dimensionless time tau = J_r t, so J_r == 1 internally
// and only the ratio G_r/J_r enters the dynamics. The physical magnitudes are
// kept for the time-step rule, which caps dt at 0.001 us in physical units.
struct ModelParams {
  double j_r_mhz = 20.0;  // J_r / 2pi in MHz
  double g_r_mhz = 30.0;  // G_r / 2pi in MHz

  double j_r() const { return 1.0; }
  double g_r() const { return g_r_mhz / j_r_mhz; }
  // J_r * 0.001 us, the dimensionless value of the fixed time-step cap
  double dt_cap_tau() const;
};

enum class RampShape { Linear, SmoothStart };

RampShape ramp_shape_from_string(const std::string& s);
std::string to_string(RampShape s);

// s = (t/t_r)[1 - exp(-40 t/t_r)]; starts with zero slope.
double smooth_s(double t, double t_r);

// dt = min(0.001 us, 0.005 t_r), both arguments in microseconds.
double time_step_us(double t_r_us);
// the same rule in dimensionless time: min(J_r * 0.001us, 0.005 * tau_r)
double time_step_tau(double tau_r, const ModelParams& params);

struct RampSchedule {
  double tau_r = 1.0;  // J_r t_r
  RampShape shape = RampShape::Linear;
  double s_c = 0.45;

  double tau_q() const { return tau_r; }       // tau_Q = t_r for both shapes
  double t_c() const { return s_c * tau_r; }   // linearization point
  double s_of(double t) const;
  double t_of_s(double s) const;               // monotone inverse
  double epsilon(double t) const { return (t - t_c()) / tau_q(); }
};

// (J, G) at ramp parameter s: J = s J_r, G = (1-s) G_r. Throws outside [0,1].
std::pair<double, double> ramp_values(const RampSchedule& sched,
                                      const ModelParams& params, double s);

// physical leg: sz eigenvalue maps to charge, sectors {-1:1, +1:1}
sym::ChargeLeg phys_leg(sym::Dir dir);

struct Gate {
  sym::SymTensor u;   // 2-site: [p0' Out, p1' Out, p0 In, p1 In]; 1-site: [p' Out, p In]
  int n_sites = 2;
  double time_tag = 0.0;
};

// exp(-i dt (J/2)(XX+YY)): identity on aligned spins, cos/-i sin mixing on
// the flip sector.
Gate two_site_gate(double J, double dt);
// exp(-i dt (G/2) h sz): diagonal phases, h must be +-1.
Gate field_gate(double G, int h, double dt);

struct BondGroup {
  std::string name;
  std::vector<Lattice::Bond> bonds;  // empty for the infinite lattice
};

struct TrotterLayer {
  enum class Kind { Field, Bond } kind;
  int group = -1;  // index into groups for Kind::Bond
  double dt = 0.0;
};

// One symmetric second-order step. Couplings are frozen at s(t + dt/2); the
// layer sequence is palindromic: F(dt/2) g0(dt/2) ... g_last(dt) ... g0(dt/2) F(dt/2).
struct TrotterPlan {
  double t0 = 0.0;
  double dt = 0.0;
  double s_mid = 0.0;
  double J = 0.0;
  double G = 0.0;
  std::vector<BondGroup> groups;
  std::vector<TrotterLayer> layers;
};

TrotterPlan trotter_plan(const Lattice& lat, const RampSchedule& sched,
                         const ModelParams& params, double t, double dt);

}  // namespace kzxx::model
