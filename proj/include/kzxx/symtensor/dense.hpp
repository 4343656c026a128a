#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace kzxx::sym {

using cplx = std::complex<double>;

// Row-major dense array, the payload of one symmetry block.
struct Dense {
  std::vector<long> shape;
  std::vector<cplx> v;

  Dense() = default;
  explicit Dense(std::vector<long> s) : shape(std::move(s)) {
    v.assign(static_cast<size_t>(count(shape)), cplx(0.0, 0.0));
  }

  static long count(std::span<const long> s) {
    long n = 1;
    for (long d : s) n *= d;
    return n;
  }

  long size() const { return static_cast<long>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }

  static std::vector<long> strides_of(std::span<const long> shape) {
    std::vector<long> st(shape.size(), 1);
    for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i)
      st[i] = st[i + 1] * shape[i + 1];
    return st;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return s;
  }
};

// out[idx] = in[perm applied to idx]; out axis k corresponds to in axis perm[k].
Dense permute(const Dense& in, std::span<const int> perm);

}  // namespace kzxx::sym
