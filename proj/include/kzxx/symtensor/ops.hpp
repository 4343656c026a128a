#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kzxx/symtensor/symtensor.hpp"

namespace kzxx::sym {

// Tensor contraction over the given (a-leg, b-leg) pairs. Paired legs must
// have identical sector lists and opposite directions. Internally permutes,
// fuses to block matrices and multiplies sector by sector.
SymTensor contract(const SymTensor& a, const SymTensor& b,
                   std::span<const std::pair<int, int>> axes);

inline SymTensor contract(const SymTensor& a, const SymTensor& b,
                          std::initializer_list<std::pair<int, int>> axes) {
  return contract(a, b, std::span<const std::pair<int, int>>(axes.begin(), axes.size()));
}

// Fuses consecutive groups of legs into single legs. `groups` must partition
// 0..rank-1 in order. Each fused leg adopts the direction of its first
// constituent and carries a FuseInfo so split_legs can undo the operation.
// Single-leg groups pass through unchanged.
SymTensor fuse_legs(const SymTensor& t, std::span<const std::vector<int>> groups);
SymTensor fuse_legs(const SymTensor& t, std::initializer_list<std::vector<int>> groups);

// Splits every fused leg (one carrying a FuseInfo) back into its parts.
// split_legs(fuse_legs(t, g)) == t up to zero blocks.
SymTensor split_legs(const SymTensor& t);
// Splits only the listed legs.
SymTensor split_legs(const SymTensor& t, std::span<const int> which);

struct SvdOptions {
  long max_dim = -1;        // <0: keep everything above the cutoff
  double cutoff = 1e-14;    // discard s with s/s_max < cutoff
};

struct SvdResult {
  SymTensor U;   // [row legs..., bond(Out)]
  SymTensor S;   // diagonal [bond(In), bond(Out)]
  SymTensor V;   // [bond(In), col legs...]
  double rel_err = 0.0;          // sqrt(sum discarded s^2) / |t|
  std::vector<double> kept;      // kept singular values, globally sorted
  long kept_dim = 0;
};

// Truncated SVD of t viewed as a matrix between row_legs and col_legs.
// Singular values are kept by descending value, ties broken by ascending
// sector charge then lowest within-sector index. Throws on a zero tensor.
SvdResult truncated_svd(const SymTensor& t, std::span<const int> row_legs,
                        std::span<const int> col_legs, const SvdOptions& opts = {});
SvdResult truncated_svd(const SymTensor& t, std::initializer_list<int> row_legs,
                        std::initializer_list<int> col_legs, const SvdOptions& opts = {});

// QR-like factorization via SVD: t = Q * R with Q isometric (Q^dag Q = 1)
// over the row legs. No truncation beyond numerically zero singular values.
struct QrResult {
  SymTensor Q;  // [row legs..., bond(Out)]
  SymTensor R;  // [bond(In), col legs...]
};
QrResult qr_via_svd(const SymTensor& t, std::span<const int> row_legs,
                    std::span<const int> col_legs);

// Vector that closes a fused (ket,bra) double leg with the identity:
// contracting it against the double leg traces ket against bra.
SymTensor identity_cap(const ChargeLeg& fused_double_leg);

}  // namespace kzxx::sym
