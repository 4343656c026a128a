#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "kzxx/model/model.hpp"

namespace kzxx::exact {

// Computational basis of one magnetization sector, bit j = 1 <=> sz_j = +1.
// Configurations are stored in ascending (lexicographic) order. Hard capacity
// cap at 16 spins; this backend is an oracle, not a production path.
struct SectorBasis {
  model::Lattice lat;
  int magnetization = 0;           // sum_j sz_j
  std::vector<uint32_t> configs;

  static constexpr int kMaxSites = 16;
  static SectorBasis make(const model::Lattice& lat, int magnetization);

  long dim() const { return static_cast<long>(configs.size()); }
  long index_of(uint32_t c) const;
  static int sz(uint32_t c, int site) { return (c >> site) & 1u ? +1 : -1; }
};

struct StateVector {
  std::shared_ptr<const SectorBasis> basis;
  Eigen::VectorXcd amp;

  double norm() const { return amp.norm(); }
  long dim() const { return amp.size(); }
};

// magnetization of the Neel state sz_j = -h_j
int neel_magnetization(const model::Lattice& lat);
// product ground state of the field term at s=0
StateVector neel_state(const model::Lattice& lat);

// Sparse-free application of H(J, G) within the sector: precomputed flip
// partners per bond plus the staggered-field diagonal.
class SectorHam {
 public:
  SectorHam(std::shared_ptr<const SectorBasis> basis);
  void apply(double J, double G, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply(double J, double G, const Eigen::VectorXcd& in) const;

  const std::shared_ptr<const SectorBasis>& basis() const { return basis_; }
  const std::vector<int>& field_sum() const { return field_sum_; }
  // flip partner index per (bond, config); -1 when the bond spins align
  const std::vector<std::vector<long>>& partners() const { return partners_; }
  const std::vector<model::Lattice::Bond>& bonds() const { return bonds_; }

 private:
  std::shared_ptr<const SectorBasis> basis_;
  std::vector<model::Lattice::Bond> bonds_;
  std::vector<int> field_sum_;
  std::vector<std::vector<long>> partners_;
};

enum class EvolveMethod { Trotter, KrylovPropagator };

struct EvolveOptions {
  double dt_override = 0.0;   // 0: the paper's time-step rule
  double krylov_tol = 1e-12;
};

using Observer = std::function<void(double t, const StateVector&)>;

// Ramp evolution from t0 to t1. Couplings are frozen at s(t + dt/2) within
// each step for both methods, so the two trajectories differ only by the
// Trotter splitting error.
StateVector evolve(StateVector psi, const model::RampSchedule& sched,
                   const model::ModelParams& params, double t0, double t1,
                   EvolveMethod method, const EvolveOptions& opts = {},
                   const Observer& observer = nullptr);

// Evolution at frozen couplings (s held fixed) for duration tau.
StateVector evolve_held(StateVector psi, double s, const model::ModelParams& params,
                        double duration, double dt, EvolveMethod method,
                        const EvolveOptions& opts = {}, const Observer& observer = nullptr);

struct EigenPair {
  double energy = 0.0;
  StateVector state;
};

// k lowest eigenpairs of H(s) in the Neel magnetization sector (deflated
// Lanczos; dense diagonalization below dim 512).
std::vector<EigenPair> ground_state(double s, const model::ModelParams& params,
                                    const model::Lattice& lat, int k,
                                    double tol = 1e-10);

double energy(const StateVector& psi, double J, double G);
double sz_site(const StateVector& psi, int site);
// <sx_a sx_b + sy_a sy_b>, real for Hermitian states
double xx_plus_yy(const StateVector& psi, int a, int b);
// <sx_j> vanishes identically on a sector state (selection rule)
double sigma_x(const StateVector& psi, int site);
// staggered connected correlator C(R), R = 1..cols-1, averaged over pairs
// in the given row
std::vector<double> row_correlator(const StateVector& psi, int row);
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace kzxx::exact
