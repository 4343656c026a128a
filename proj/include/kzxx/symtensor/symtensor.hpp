#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kzxx/symtensor/charge_leg.hpp"
#include "kzxx/symtensor/dense.hpp"

namespace kzxx::sym {

using BlockKey = std::vector<Charge>;  // one charge per leg

// U(1)-symmetric block-sparse tensor. A block keyed by per-leg charges may
// exist only if sum_i sign(dir_i) * q_i == total_charge. Values are treated
// as immutable once constructed; all operations return new tensors.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(std::vector<ChargeLeg> legs, Charge total_charge);

  static SymTensor zeros(std::vector<ChargeLeg> legs, Charge total_charge) {
    return SymTensor(std::move(legs), total_charge);
  }
  // fills every charge-allowed block with normal(0,1) entries
  static SymTensor random(std::vector<ChargeLeg> legs, Charge total_charge,
                          std::mt19937_64& rng, bool complex_entries = true);
  // identity matrix on `leg`: legs are [leg, leg.flipped()], total charge 0
  static SymTensor identity(const ChargeLeg& leg);

  int rank() const { return static_cast<int>(legs_.size()); }
  const std::vector<ChargeLeg>& legs() const { return legs_; }
  const ChargeLeg& leg(int i) const { return legs_.at(static_cast<size_t>(i)); }
  Charge total_charge() const { return total_charge_; }

  const std::map<BlockKey, Dense>& blocks() const { return blocks_; }
  bool has_block(const BlockKey& k) const { return blocks_.count(k) > 0; }
  const Dense& block(const BlockKey& k) const;
  // inserts or overwrites; validates the selection rule and the shape
  void set_block(const BlockKey& k, Dense d);
  // returns a zeroed block of the right shape if absent
  Dense& ensure_block(const BlockKey& k);

  bool key_allowed(const BlockKey& k) const;
  std::vector<long> block_shape(const BlockKey& k) const;
  std::vector<BlockKey> allowed_keys() const;

  double norm_sq() const;
  double norm() const;
  long n_elements() const;  // stored elements over all blocks

  SymTensor permuted(std::span<const int> perm) const;
  SymTensor conj() const;  // conjugate blocks, flip leg dirs, negate charge
  SymTensor scaled(cplx factor) const;

  // value equality: same legs/charge, blocks compared with absent == zero
  bool allclose(const SymTensor& other, double tol = 0.0) const;

  void scale_in_place(cplx factor);
  // *this += factor * other (identical leg structure and total charge)
  void add_scaled_in_place(const SymTensor& other, cplx factor);

  // scalar value of a rank-0 tensor (0 when no block survived selection)
  cplx as_scalar() const;

  // drops blocks whose max |entry| is below `tol` (0 keeps exact zeros out)
  void prune(double tol = 0.0);

 private:
  std::vector<ChargeLeg> legs_;
  Charge total_charge_ = 0;
  std::map<BlockKey, Dense> blocks_;
};

// <a|b> = sum conj(a) .* b over matching blocks. Requires identical legs;
// returns 0 when the total charges differ (selection rule).
cplx dot(const SymTensor& a, const SymTensor& b);

SymTensor add(const SymTensor& a, const SymTensor& b, cplx bfactor = cplx(1.0));

}  // namespace kzxx::sym
