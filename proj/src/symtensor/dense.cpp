#include "kzxx/symtensor/dense.hpp"

namespace kzxx::sym {

Dense permute(const Dense& in, std::span<const int> perm) {
  const int r = in.rank();
  std::vector<long> out_shape(static_cast<size_t>(r));
  for (int k = 0; k < r; ++k)
    out_shape[static_cast<size_t>(k)] = in.shape[static_cast<size_t>(perm[static_cast<size_t>(k)])];
  Dense out(out_shape);
  if (in.v.empty()) return out;
  if (r == 0) {
    out.v = in.v;
    return out;
  }

  const std::vector<long> in_st = Dense::strides_of(in.shape);
  // stride of the input when stepping each output axis
  std::vector<long> step(static_cast<size_t>(r));
  for (int k = 0; k < r; ++k)
    step[static_cast<size_t>(k)] = in_st[static_cast<size_t>(perm[static_cast<size_t>(k)])];

  std::vector<long> idx(static_cast<size_t>(r), 0);
  const long inner = out_shape[static_cast<size_t>(r - 1)];
  const long inner_step = step[static_cast<size_t>(r - 1)];
  long src = 0;
  long dst = 0;
  const long total = in.size();
  while (dst < total) {
    long s = src;
    for (long i = 0; i < inner; ++i, s += inner_step) out.v[static_cast<size_t>(dst++)] = in.v[static_cast<size_t>(s)];
    // advance the multi-index excluding the innermost axis
    int k = r - 2;
    for (; k >= 0; --k) {
      idx[static_cast<size_t>(k)]++;
      src += step[static_cast<size_t>(k)];
      if (idx[static_cast<size_t>(k)] < out_shape[static_cast<size_t>(k)]) break;
      src -= step[static_cast<size_t>(k)] * out_shape[static_cast<size_t>(k)];
      idx[static_cast<size_t>(k)] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

}  // namespace kzxx::sym
