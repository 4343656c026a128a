#include <cmath>
#include <complex>

#include "kzxx/errors.hpp"
#include "kzxx/exact/exact.hpp"
#include "kzxx/krylov.hpp"

namespace kzxx::exact {

using cplx = std::complex<double>;

namespace {

void apply_field_layer(StateVector& psi, double G, double dt) {
  const auto& lat = psi.basis->lat;
  const long dim = psi.basis->dim();
  for (long x = 0; x < dim; ++x) {
    uint32_t c = psi.basis->configs[static_cast<size_t>(x)];
    int f = 0;
    for (int i = 0; i < lat.rows; ++i)
      for (int j = 0; j < lat.cols; ++j)
        f += lat.stagger(i, j) * SectorBasis::sz(c, lat.site(i, j));
    double arg = -0.5 * G * f * dt;
    psi.amp(x) *= cplx(std::cos(arg), std::sin(arg));
  }
}

void apply_bond_gate(StateVector& psi, const model::Lattice::Bond& bd, double theta) {
  const auto& lat = psi.basis->lat;
  const auto& basis = *psi.basis;
  const int sa = lat.site(bd.i0, bd.j0);
  const int sb = lat.site(bd.i1, bd.j1);
  const uint32_t ma = 1u << sa, mb = 1u << sb;
  const double c = std::cos(theta);
  const cplx ms(0.0, -std::sin(theta));
  const long dim = basis.dim();
  for (long x = 0; x < dim; ++x) {
    uint32_t cf = basis.configs[static_cast<size_t>(x)];
    // visit each anti-aligned pair once, from the (up at a, down at b) member
    if ((cf & ma) == 0 || (cf & mb) != 0) continue;
    long y = basis.index_of(cf ^ ma ^ mb);
    cplx va = psi.amp(x), vb = psi.amp(y);
    psi.amp(x) = c * va + ms * vb;
    psi.amp(y) = c * vb + ms * va;
  }
}

void apply_trotter_plan(StateVector& psi, const model::TrotterPlan& plan) {
  for (const auto& layer : plan.layers) {
    if (layer.kind == model::TrotterLayer::Kind::Field) {
      apply_field_layer(psi, plan.G, layer.dt);
    } else {
      const auto& group = plan.groups[static_cast<size_t>(layer.group)];
      const double theta = plan.J * layer.dt;
      for (const auto& bd : group.bonds) apply_bond_gate(psi, bd, theta);
    }
  }
}

void krylov_step(StateVector& psi, const SectorHam& ham, double J, double G,
                 double dt, double tol) {
  auto apply = [&](const Eigen::VectorXcd& v) { return ham.apply(J, G, v); };
  psi.amp = krylov_expm(apply, psi.amp, cplx(0.0, -dt), tol,
                        static_cast<int>(std::min<long>(psi.dim(), 90)));
}

}  // namespace

StateVector evolve(StateVector psi, const model::RampSchedule& sched,
                   const model::ModelParams& params, double t0, double t1,
                   EvolveMethod method, const EvolveOptions& opts,
                   const Observer& observer) {
  if (t1 < t0) throw ConfigError("evolve: t1 < t0");
  if (t1 == t0) return psi;
  const double dt_max =
      opts.dt_override > 0.0 ? opts.dt_override : model::time_step_tau(sched.tau_r, params);
  const long n = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt_max - 1e-12)));
  const double dt = (t1 - t0) / static_cast<double>(n);

  SectorHam ham(psi.basis);
  for (long step = 0; step < n; ++step) {
    const double t = t0 + step * dt;
    if (method == EvolveMethod::Trotter) {
      model::TrotterPlan plan = model::trotter_plan(psi.basis->lat, sched, params, t, dt);
      apply_trotter_plan(psi, plan);
    } else {
      const double s_mid = sched.s_of(std::min(t + 0.5 * dt, sched.tau_r));
      auto [J, G] = model::ramp_values(sched, params, s_mid);
      krylov_step(psi, ham, J, G, dt, opts.krylov_tol);
    }
    if (observer) observer(t + dt, psi);
  }
  return psi;
}

StateVector evolve_held(StateVector psi, double s, const model::ModelParams& params,
                        double duration, double dt, EvolveMethod method,
                        const EvolveOptions& opts, const Observer& observer) {
  auto [J, G] = model::ramp_values(model::RampSchedule{}, params, s);
  const long n = std::max<long>(1, static_cast<long>(std::ceil(duration / dt - 1e-12)));
  const double dt_eff = duration / static_cast<double>(n);
  SectorHam ham(psi.basis);
  for (long step = 0; step < n; ++step) {
    if (method == EvolveMethod::Trotter) {
      // frozen couplings: reuse the plan machinery with a constant schedule
      model::RampSchedule hold{1.0, model::RampShape::Linear, 0.45};
      model::TrotterPlan plan = model::trotter_plan(psi.basis->lat, hold, params, 0.0, dt_eff);
      plan.J = J;
      plan.G = G;
      apply_trotter_plan(psi, plan);
    } else {
      krylov_step(psi, ham, J, G, dt_eff, opts.krylov_tol);
    }
    if (observer) observer((step + 1) * dt_eff, psi);
  }
  return psi;
}

std::vector<EigenPair> ground_state(double s, const model::ModelParams& params,
                                    const model::Lattice& lat, int k, double tol) {
  if (k < 1) throw ConfigError("ground_state: k must be >= 1");
  auto basis = std::make_shared<SectorBasis>(SectorBasis::make(lat, neel_magnetization(lat)));
  SectorHam ham(basis);
  auto [J, G] = model::ramp_values(model::RampSchedule{}, params, s);
  const long dim = basis->dim();

  std::vector<EigenPair> out;
  if (dim <= 512) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    for (long x = 0; x < dim; ++x) {
      e.setZero();
      e(x) = 1.0;
      H.col(x) = ham.apply(J, G, e);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    for (int i = 0; i < k && i < dim; ++i) {
      StateVector psi;
      psi.basis = basis;
      psi.amp = es.eigenvectors().col(i);
      out.push_back({es.eigenvalues()(i), std::move(psi)});
    }
    return out;
  }

  // deflated Lanczos: push found states up by a spectral-range shift
  double bound = 0.5 * G * lat.n_sites() + 2.0 * J * static_cast<double>(lat.bonds().size()) + 10.0;
  std::vector<Eigen::VectorXcd> found;
  std::mt19937_64 rng(20240617);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int n = 0; n < k; ++n) {
    auto apply = [&](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd w = ham.apply(J, G, v);
      for (const auto& f : found) w += (2.0 * bound) * f * f.dot(v);
      return w;
    };
    Eigen::VectorXcd init(dim);
    for (long i = 0; i < dim; ++i) init(i) = cplx(dist(rng), dist(rng));
    for (const auto& f : found) init -= f * f.dot(init);
    auto [energy_n, vec] = lanczos_lowest(apply, init, tol, 140, 16);
    for (const auto& f : found) vec -= f * f.dot(vec);
    vec.normalize();
    found.push_back(vec);
    StateVector psi;
    psi.basis = basis;
    psi.amp = std::move(vec);
    out.push_back({energy_n, std::move(psi)});
  }
  return out;
}

double energy(const StateVector& psi, double J, double G) {
  SectorHam ham(psi.basis);
  return ham.apply(J, G, psi.amp).dot(psi.amp).real();
}

double sz_site(const StateVector& psi, int site) {
  double v = 0.0;
  for (long x = 0; x < psi.dim(); ++x)
    v += SectorBasis::sz(psi.basis->configs[static_cast<size_t>(x)], site) *
         std::norm(psi.amp(x));
  return v;
}

double xx_plus_yy(const StateVector& psi, int a, int b) {
  const auto& basis = *psi.basis;
  const uint32_t mask = (1u << a) | (1u << b);
  cplx v(0.0);
  for (long x = 0; x < psi.dim(); ++x) {
    uint32_t c = basis.configs[static_cast<size_t>(x)];
    uint32_t m = c & mask;
    if (m == 0 || m == mask) continue;
    long y = basis.index_of(c ^ mask);
    v += 2.0 * std::conj(psi.amp(y)) * psi.amp(x);
  }
  return v.real();
}

double sigma_x(const StateVector&, int) {
  // sx changes the sector magnetization by +-2: the overlap with the original
  // sector state vanishes identically
  return 0.0;
}

std::vector<double> row_correlator(const StateVector& psi, int row) {
  const auto& lat = psi.basis->lat;
  std::vector<double> c;
  for (int r = 1; r < lat.cols; ++r) {
    double acc = 0.0;
    int count = 0;
    for (int j = 0; j + r < lat.cols; ++j) {
      double xxyy = xx_plus_yy(psi, lat.site(row, j), lat.site(row, j + r));
      double sx0 = sigma_x(psi, lat.site(row, j));
      double sxr = sigma_x(psi, lat.site(row, j + r));
      acc += 0.5 * ((r % 2 == 0) ? 1.0 : -1.0) * (xxyy - 2.0 * sx0 * sxr);
      ++count;
    }
    c.push_back(acc / count);
  }
  return c;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.basis->configs != b.basis->configs)
    throw StructureError("fidelity: states live in different bases");
  return std::norm(a.amp.dot(b.amp));
}

}  // namespace kzxx::exact
