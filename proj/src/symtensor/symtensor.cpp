#include "kzxx/symtensor/symtensor.hpp"

#include <cmath>
#include <sstream>

#include "kzxx/errors.hpp"

namespace kzxx::sym {

namespace {

std::string key_str(const BlockKey& k) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ")";
  return os.str();
}

}  // namespace

SymTensor::SymTensor(std::vector<ChargeLeg> legs, Charge total_charge)
    : legs_(std::move(legs)), total_charge_(total_charge) {}

bool SymTensor::key_allowed(const BlockKey& k) const {
  if (k.size() != legs_.size()) return false;
  Charge s = 0;
  for (size_t i = 0; i < k.size(); ++i) {
    if (legs_[i].sector_index(k[i]) < 0) return false;
    s += sign(legs_[i].dir()) * k[i];
  }
  return s == total_charge_;
}

std::vector<long> SymTensor::block_shape(const BlockKey& k) const {
  std::vector<long> shape(k.size());
  for (size_t i = 0; i < k.size(); ++i) shape[i] = legs_[i].sector_dim(k[i]);
  return shape;
}

const Dense& SymTensor::block(const BlockKey& k) const {
  auto it = blocks_.find(k);
  if (it == blocks_.end())
    throw StructureError("SymTensor: block " + key_str(k) + " not present");
  return it->second;
}

void SymTensor::set_block(const BlockKey& k, Dense d) {
  if (!key_allowed(k))
    throw StructureError("SymTensor: block " + key_str(k) +
                         " violates the charge selection rule");
  if (d.shape != block_shape(k))
    throw StructureError("SymTensor: block " + key_str(k) + " has wrong shape");
  blocks_[k] = std::move(d);
}

Dense& SymTensor::ensure_block(const BlockKey& k) {
  auto it = blocks_.find(k);
  if (it != blocks_.end()) return it->second;
  if (!key_allowed(k))
    throw StructureError("SymTensor: block " + key_str(k) +
                         " violates the charge selection rule");
  return blocks_.emplace(k, Dense(block_shape(k))).first->second;
}

std::vector<BlockKey> SymTensor::allowed_keys() const {
  std::vector<BlockKey> out;
  if (legs_.empty()) {
    if (total_charge_ == 0) out.push_back({});
    return out;
  }
  BlockKey cur(legs_.size(), 0);
  std::function<void(size_t, Charge)> rec = [&](size_t i, Charge acc) {
    if (i == legs_.size()) {
      if (acc == total_charge_) out.push_back(cur);
      return;
    }
    for (const Sector& s : legs_[i].sectors()) {
      cur[i] = s.charge;
      rec(i + 1, acc + sign(legs_[i].dir()) * s.charge);
    }
  };
  rec(0, 0);
  return out;
}

SymTensor SymTensor::random(std::vector<ChargeLeg> legs, Charge total_charge,
                            std::mt19937_64& rng, bool complex_entries) {
  SymTensor t(std::move(legs), total_charge);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (const BlockKey& k : t.allowed_keys()) {
    Dense& d = t.ensure_block(k);
    for (cplx& x : d.v)
      x = complex_entries ? cplx(dist(rng), dist(rng)) : cplx(dist(rng), 0.0);
  }
  return t;
}

SymTensor SymTensor::identity(const ChargeLeg& leg) {
  SymTensor t({leg, leg.flipped()}, 0);
  for (const Sector& s : leg.sectors()) {
    Dense& d = t.ensure_block({s.charge, s.charge});
    for (long i = 0; i < s.dim; ++i) d.v[static_cast<size_t>(i * s.dim + i)] = 1.0;
  }
  return t;
}

double SymTensor::norm_sq() const {
  double s = 0.0;
  for (const auto& [k, d] : blocks_) s += d.norm_sq();
  return s;
}

double SymTensor::norm() const { return std::sqrt(norm_sq()); }

long SymTensor::n_elements() const {
  long n = 0;
  for (const auto& [k, d] : blocks_) n += d.size();
  return n;
}

SymTensor SymTensor::permuted(std::span<const int> perm) const {
  if (perm.size() != legs_.size())
    throw StructureError("permuted: permutation size mismatch");
  std::vector<ChargeLeg> new_legs(legs_.size());
  for (size_t k = 0; k < perm.size(); ++k) new_legs[k] = legs_[static_cast<size_t>(perm[k])];
  SymTensor out(std::move(new_legs), total_charge_);
  BlockKey nk(legs_.size());
  for (const auto& [k, d] : blocks_) {
    for (size_t i = 0; i < perm.size(); ++i) nk[i] = k[static_cast<size_t>(perm[i])];
    out.blocks_.emplace(nk, permute(d, perm));
  }
  return out;
}

SymTensor SymTensor::conj() const {
  std::vector<ChargeLeg> new_legs;
  new_legs.reserve(legs_.size());
  for (const ChargeLeg& l : legs_) new_legs.push_back(l.flipped());
  SymTensor out(std::move(new_legs), -total_charge_);
  for (const auto& [k, d] : blocks_) {
    Dense nd = d;
    for (cplx& x : nd.v) x = std::conj(x);
    out.blocks_.emplace(k, std::move(nd));
  }
  return out;
}

SymTensor SymTensor::scaled(cplx factor) const {
  SymTensor out = *this;
  out.scale_in_place(factor);
  return out;
}

void SymTensor::scale_in_place(cplx factor) {
  for (auto& [k, d] : blocks_)
    for (cplx& x : d.v) x *= factor;
}

void SymTensor::add_scaled_in_place(const SymTensor& other, cplx factor) {
  if (legs_ != other.legs_ || total_charge_ != other.total_charge_)
    throw StructureError("add_scaled: tensors have different structure");
  for (const auto& [k, d] : other.blocks_) {
    Dense& mine = ensure_block(k);
    for (long i = 0; i < d.size(); ++i) mine.v[static_cast<size_t>(i)] += factor * d.v[static_cast<size_t>(i)];
  }
}

bool SymTensor::allclose(const SymTensor& other, double tol) const {
  if (legs_ != other.legs_ || total_charge_ != other.total_charge_) return false;
  auto check = [&](const SymTensor& x, const SymTensor& y) {
    for (const auto& [k, d] : x.blocks_) {
      auto it = y.blocks_.find(k);
      if (it == y.blocks_.end()) {
        for (const cplx& v : d.v)
          if (std::abs(v) > tol) return false;
      } else {
        for (long i = 0; i < d.size(); ++i)
          if (std::abs(d.v[static_cast<size_t>(i)] - it->second.v[static_cast<size_t>(i)]) > tol) return false;
      }
    }
    return true;
  };
  return check(*this, other) && check(other, *this);
}

cplx SymTensor::as_scalar() const {
  if (!legs_.empty()) throw StructureError("as_scalar: tensor has rank > 0");
  auto it = blocks_.find(BlockKey{});
  if (it == blocks_.end()) return cplx(0.0);
  return it->second.v.at(0);
}

void SymTensor::prune(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    double mx = 0.0;
    for (const cplx& x : it->second.v) mx = std::max(mx, std::abs(x));
    if (mx <= tol)
      it = blocks_.erase(it);
    else
      ++it;
  }
}

cplx dot(const SymTensor& a, const SymTensor& b) {
  if (a.legs() != b.legs())
    throw StructureError("dot: tensors have different leg structure");
  if (a.total_charge() != b.total_charge()) return cplx(0.0);
  cplx s(0.0);
  for (const auto& [k, d] : a.blocks()) {
    if (!b.has_block(k)) continue;
    const Dense& e = b.block(k);
    for (long i = 0; i < d.size(); ++i)
      s += std::conj(d.v[static_cast<size_t>(i)]) * e.v[static_cast<size_t>(i)];
  }
  return s;
}

SymTensor add(const SymTensor& a, const SymTensor& b, cplx bfactor) {
  SymTensor out = a;
  out.add_scaled_in_place(b, bfactor);
  return out;
}

}  // namespace kzxx::sym
