#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "kzxx/errors.hpp"
#include "kzxx/symtensor/symtensor.hpp"

namespace kzxx {

// Minimal vector-space interface so the Krylov routines run on both flat
// Eigen vectors and block tensors.
template <class V>
struct VecOps;

template <>
struct VecOps<Eigen::VectorXcd> {
  static std::complex<double> dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return a.dot(b);  // conjugates a
  }
  static double norm(const Eigen::VectorXcd& a) { return a.norm(); }
  static void axpy(Eigen::VectorXcd& y, std::complex<double> alpha, const Eigen::VectorXcd& x) {
    y += alpha * x;
  }
  static void scale(Eigen::VectorXcd& y, std::complex<double> alpha) { y *= alpha; }
};

template <>
struct VecOps<sym::SymTensor> {
  static std::complex<double> dot(const sym::SymTensor& a, const sym::SymTensor& b) {
    return sym::dot(a, b);
  }
  static double norm(const sym::SymTensor& a) { return a.norm(); }
  static void axpy(sym::SymTensor& y, std::complex<double> alpha, const sym::SymTensor& x) {
    y.add_scaled_in_place(x, alpha);
  }
  static void scale(sym::SymTensor& y, std::complex<double> alpha) { y.scale_in_place(alpha); }
};

// w = exp(z H) v by a Lanczos Krylov expansion with full reorthogonalization.
// H must be Hermitian (applied through `apply`); the a-posteriori error
// estimate |beta_m * [exp(z T)]_{m,1}| controls the expansion order.
template <class V, class Apply>
V krylov_expm(Apply&& apply, const V& v, std::complex<double> z,
              double tol = 1e-12, int m_max = 80) {
  using Ops = VecOps<V>;
  const double beta0 = Ops::norm(v);
  if (beta0 == 0.0) return v;

  std::vector<V> basis;
  basis.push_back(v);
  Ops::scale(basis[0], 1.0 / beta0);

  std::vector<double> alpha, beta;  // tridiagonal T
  Eigen::VectorXcd u;
  int m = 0;
  while (true) {
    V w = apply(basis[static_cast<size_t>(m)]);
    // full reorthogonalization, twice for numerical safety
    for (int pass = 0; pass < 2; ++pass)
      for (size_t i = 0; i < basis.size(); ++i) {
        std::complex<double> c = Ops::dot(basis[i], w);
        if (pass == 0 && static_cast<int>(i) == m) alpha.push_back(c.real());
        Ops::axpy(w, -c, basis[i]);
      }
    double b = Ops::norm(w);
    ++m;

    // exponential of the current tridiagonal
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i) phases(i) = std::exp(z * es.eigenvalues()(i));
    u = es.eigenvectors().cast<std::complex<double>>() *
        (phases.array() * es.eigenvectors().row(0).transpose().cast<std::complex<double>>().array()).matrix();

    double err = b * std::abs(u(m - 1));
    if (err < tol || b < 1e-14 * beta0 || m >= m_max) break;
    beta.push_back(b);
    Ops::scale(w, 1.0 / b);
    basis.push_back(std::move(w));
  }

  V out = basis[0];
  Ops::scale(out, beta0 * u(0));
  for (int i = 1; i < m; ++i) Ops::axpy(out, beta0 * u(i), basis[static_cast<size_t>(i)]);
  return out;
}

// Lowest Ritz pair of a Hermitian operator, Lanczos with full
// reorthogonalization and restarts. Returns (eigenvalue, eigenvector).
template <class V, class Apply>
std::pair<double, V> lanczos_lowest(Apply&& apply, const V& init, double tol = 1e-10,
                                    int m_max = 120, int restarts = 12) {
  using Ops = VecOps<V>;
  V v0 = init;
  double e = 0.0;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    double n0 = Ops::norm(v0);
    if (n0 == 0.0) throw ConvergenceError("lanczos: zero start vector", 0.0);
    Ops::scale(v0, 1.0 / n0);
    std::vector<V> basis{v0};
    std::vector<double> alpha, beta;
    int m = 0;
    bool breakdown = false;
    while (m < m_max) {
      V w = apply(basis[static_cast<size_t>(m)]);
      for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < basis.size(); ++i) {
          std::complex<double> c = Ops::dot(basis[i], w);
          if (pass == 0 && static_cast<int>(i) == m) alpha.push_back(c.real());
          Ops::axpy(w, -c, basis[i]);
        }
      double b = Ops::norm(w);
      ++m;
      if (b < 1e-13) {
        breakdown = true;  // exact invariant subspace
        break;
      }
      beta.push_back(b);
      Ops::scale(w, 1.0 / b);
      basis.push_back(std::move(w));
    }
    int dim = m;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      T(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    e = es.eigenvalues()(0);
    Eigen::VectorXd y = es.eigenvectors().col(0);
    V psi = basis[0];
    Ops::scale(psi, y(0));
    for (int i = 1; i < dim; ++i) Ops::axpy(psi, y(i), basis[static_cast<size_t>(i)]);
    double pn = Ops::norm(psi);
    Ops::scale(psi, 1.0 / pn);
    // explicit residual ||H psi - e psi||
    V r = apply(psi);
    Ops::axpy(r, -e, psi);
    double resid = Ops::norm(r);
    v0 = psi;
    if (resid < tol || breakdown) return {e, std::move(v0)};
  }
  return {e, std::move(v0)};  // best effort after restarts
}

}  // namespace kzxx
