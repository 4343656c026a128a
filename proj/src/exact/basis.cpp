#include <algorithm>
#include <bit>
#include <string>

#include "kzxx/errors.hpp"
#include "kzxx/exact/exact.hpp"

namespace kzxx::exact {

SectorBasis SectorBasis::make(const model::Lattice& lat, int magnetization) {
  if (lat.infinite)
    throw ConfigError("SectorBasis: finite lattice required");
  const int n = lat.n_sites();
  if (n > kMaxSites)
    throw CapacityError("exact backend capacity exceeded: requested " +
                        std::to_string(n) + " spins, cap is " +
                        std::to_string(kMaxSites));
  if ((n + magnetization) % 2 != 0 || std::abs(magnetization) > n)
    throw ConfigError("SectorBasis: magnetization " + std::to_string(magnetization) +
                      " impossible on " + std::to_string(n) + " sites");
  const int n_up = (n + magnetization) / 2;
  SectorBasis b;
  b.lat = lat;
  b.magnetization = magnetization;
  for (uint32_t c = 0; c < (1u << n); ++c)
    if (std::popcount(c) == n_up) b.configs.push_back(c);
  return b;
}

long SectorBasis::index_of(uint32_t c) const {
  auto it = std::lower_bound(configs.begin(), configs.end(), c);
  if (it == configs.end() || *it != c) return -1;
  return static_cast<long>(it - configs.begin());
}

int neel_magnetization(const model::Lattice& lat) {
  int m = 0;
  for (int i = 0; i < lat.rows; ++i)
    for (int j = 0; j < lat.cols; ++j) m -= lat.stagger(i, j);
  return m;
}

StateVector neel_state(const model::Lattice& lat) {
  auto basis = std::make_shared<SectorBasis>(SectorBasis::make(lat, neel_magnetization(lat)));
  uint32_t config = 0;
  for (int i = 0; i < lat.rows; ++i)
    for (int j = 0; j < lat.cols; ++j)
      if (lat.stagger(i, j) < 0) config |= 1u << lat.site(i, j);  // sz = -h
  StateVector psi;
  psi.amp = Eigen::VectorXcd::Zero(basis->dim());
  long idx = basis->index_of(config);
  psi.basis = std::move(basis);
  psi.amp(idx) = 1.0;
  return psi;
}

SectorHam::SectorHam(std::shared_ptr<const SectorBasis> basis)
    : basis_(std::move(basis)), bonds_(basis_->lat.bonds()) {
  const auto& lat = basis_->lat;
  const long dim = basis_->dim();
  field_sum_.resize(static_cast<size_t>(dim));
  for (long x = 0; x < dim; ++x) {
    uint32_t c = basis_->configs[static_cast<size_t>(x)];
    int f = 0;
    for (int i = 0; i < lat.rows; ++i)
      for (int j = 0; j < lat.cols; ++j)
        f += lat.stagger(i, j) * SectorBasis::sz(c, lat.site(i, j));
    field_sum_[static_cast<size_t>(x)] = f;
  }
  partners_.resize(bonds_.size());
  for (size_t b = 0; b < bonds_.size(); ++b) {
    const auto& bd = bonds_[b];
    const uint32_t mask = (1u << lat.site(bd.i0, bd.j0)) | (1u << lat.site(bd.i1, bd.j1));
    partners_[b].assign(static_cast<size_t>(dim), -1);
    for (long x = 0; x < dim; ++x) {
      uint32_t c = basis_->configs[static_cast<size_t>(x)];
      uint32_t masked = c & mask;
      if (masked == 0 || masked == mask) continue;  // aligned spins
      partners_[b][static_cast<size_t>(x)] = basis_->index_of(c ^ mask);
    }
  }
}

void SectorHam::apply(double J, double G, const Eigen::VectorXcd& in,
                      Eigen::VectorXcd& out) const {
  const long dim = basis_->dim();
  out.resize(dim);
  for (long x = 0; x < dim; ++x)
    out(x) = 0.5 * G * field_sum_[static_cast<size_t>(x)] * in(x);
  if (J != 0.0) {
    for (const auto& part : partners_) {
      for (long x = 0; x < dim; ++x) {
        long y = part[static_cast<size_t>(x)];
        if (y >= 0) out(x) += J * in(y);
      }
    }
  }
}

Eigen::VectorXcd SectorHam::apply(double J, double G, const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out;
  apply(J, G, in, out);
  return out;
}

}  // namespace kzxx::exact
