#include "kzxx/symtensor/ops.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kzxx/errors.hpp"

namespace kzxx::sym {

namespace {

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<Mat>;
using CMatMap = Eigen::Map<const Mat>;

FuseInfo make_fuse_info(std::vector<ChargeLeg> parts) {
  FuseInfo info;
  info.fused_dir = parts.front().dir();
  info.parts = std::move(parts);
  const size_t k = info.parts.size();
  std::vector<size_t> idx(k, 0);
  std::map<Charge, long> cursor;  // running offset per fused charge
  // iterate combos with the first leg outermost: lexicographic ascending
  while (true) {
    FuseInfo::Combo combo;
    combo.charges.resize(k);
    long extent = 1;
    Charge flow = 0;
    for (size_t i = 0; i < k; ++i) {
      const Sector& s = info.parts[i].sectors()[idx[i]];
      combo.charges[i] = s.charge;
      extent *= s.dim;
      flow += sign(info.parts[i].dir()) * s.charge;
    }
    Charge fused_q = sign(info.fused_dir) * flow;
    combo.extent = extent;
    combo.offset = cursor[fused_q];
    cursor[fused_q] += extent;
    info.layout[fused_q].push_back(std::move(combo));
    // advance odometer, last index fastest
    size_t i = k;
    while (i > 0) {
      --i;
      if (++idx[i] < info.parts[i].sectors().size()) break;
      idx[i] = 0;
      if (i == 0) return info;
    }
  }
}

ChargeLeg leg_from_info(const FuseInfo& info) {
  std::vector<Sector> sectors;
  for (const auto& [q, combos] : info.layout) {
    long dim = 0;
    for (const auto& c : combos) dim += c.extent;
    sectors.push_back({q, dim});
  }
  ChargeLeg leg(info.fused_dir, std::move(sectors));
  return leg;
}

// dst[dst_base + sum_k idx_k * dst_strides_k] = src row-major over shape
void scatter(const cplx* src, std::span<const long> shape, cplx* dst,
             long dst_base, std::span<const long> dst_strides) {
  const int r = static_cast<int>(shape.size());
  if (r == 0) {
    dst[dst_base] = src[0];
    return;
  }
  long total = 1;
  for (long d : shape) total *= d;
  if (total == 0) return;
  std::vector<long> idx(static_cast<size_t>(r), 0);
  const long inner = shape[static_cast<size_t>(r - 1)];
  const long inner_st = dst_strides[static_cast<size_t>(r - 1)];
  long s = 0;
  long doff = dst_base;
  while (s < total) {
    long dd = doff;
    for (long i = 0; i < inner; ++i, dd += inner_st) dst[dd] = src[s++];
    int k = r - 2;
    for (; k >= 0; --k) {
      idx[static_cast<size_t>(k)]++;
      doff += dst_strides[static_cast<size_t>(k)];
      if (idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)]) break;
      doff -= dst_strides[static_cast<size_t>(k)] * shape[static_cast<size_t>(k)];
      idx[static_cast<size_t>(k)] = 0;
    }
    if (k < 0) break;
  }
}

// dst row-major over shape = src[src_base + sum_k idx_k * src_strides_k]
// returns max |entry| seen
double gather(cplx* dst, std::span<const long> shape, const cplx* src,
              long src_base, std::span<const long> src_strides) {
  const int r = static_cast<int>(shape.size());
  double mx = 0.0;
  if (r == 0) {
    dst[0] = src[src_base];
    return std::abs(dst[0]);
  }
  long total = 1;
  for (long d : shape) total *= d;
  if (total == 0) return 0.0;
  std::vector<long> idx(static_cast<size_t>(r), 0);
  const long inner = shape[static_cast<size_t>(r - 1)];
  const long inner_st = src_strides[static_cast<size_t>(r - 1)];
  long dpos = 0;
  long soff = src_base;
  while (dpos < total) {
    long ss = soff;
    for (long i = 0; i < inner; ++i, ss += inner_st) {
      dst[dpos] = src[ss];
      mx = std::max(mx, std::abs(dst[dpos]));
      ++dpos;
    }
    int k = r - 2;
    for (; k >= 0; --k) {
      idx[static_cast<size_t>(k)]++;
      soff += src_strides[static_cast<size_t>(k)];
      if (idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)]) break;
      soff -= src_strides[static_cast<size_t>(k)] * shape[static_cast<size_t>(k)];
      idx[static_cast<size_t>(k)] = 0;
    }
    if (k < 0) break;
  }
  return mx;
}

}  // namespace

SymTensor fuse_legs(const SymTensor& t, std::span<const std::vector<int>> groups) {
  // validate: groups partition 0..rank-1 in order
  {
    int expect = 0;
    for (const auto& g : groups) {
      if (g.empty()) throw StructureError("fuse_legs: empty group");
      for (int leg : g)
        if (leg != expect++)
          throw StructureError("fuse_legs: groups must partition the legs in order");
    }
    if (expect != t.rank())
      throw StructureError("fuse_legs: groups do not cover all legs");
  }

  std::vector<ChargeLeg> new_legs;
  std::vector<std::shared_ptr<const FuseInfo>> infos(groups.size());
  // per source axis: which output axis it belongs to
  std::vector<int> axis_group(static_cast<size_t>(t.rank()));
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int leg : groups[g]) axis_group[static_cast<size_t>(leg)] = static_cast<int>(g);
    if (groups[g].size() == 1) {
      new_legs.push_back(t.leg(groups[g][0]));
    } else {
      std::vector<ChargeLeg> parts;
      for (int leg : groups[g]) parts.push_back(t.leg(leg));
      auto info = std::make_shared<FuseInfo>(make_fuse_info(std::move(parts)));
      ChargeLeg leg = leg_from_info(*info);
      leg.set_fuse_info(info);
      infos[g] = std::move(info);
      new_legs.push_back(std::move(leg));
    }
  }

  SymTensor out(new_legs, t.total_charge());
  if (t.blocks().empty()) return out;

  // lookup: combo charges -> (fused charge, offset) per fused group
  std::vector<std::map<BlockKey, std::pair<Charge, long>>> lookup(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    if (!infos[g]) continue;
    for (const auto& [q, combos] : infos[g]->layout)
      for (const auto& c : combos) lookup[g][c.charges] = {q, c.offset};
  }

  BlockKey out_key(groups.size());
  for (const auto& [key, d] : t.blocks()) {
    std::vector<long> group_offset(groups.size(), 0);
    for (size_t g = 0; g < groups.size(); ++g) {
      if (!infos[g]) {
        out_key[g] = key[static_cast<size_t>(groups[g][0])];
      } else {
        BlockKey sub;
        for (int leg : groups[g]) sub.push_back(key[static_cast<size_t>(leg)]);
        const auto& [q, off] = lookup[g].at(sub);
        out_key[g] = q;
        group_offset[g] = off;
      }
    }
    Dense& dst = out.ensure_block(out_key);
    const std::vector<long> dst_strides_axis = Dense::strides_of(dst.shape);
    // per source axis: stride and base inside the destination block
    std::vector<long> sstr(static_cast<size_t>(t.rank()));
    long base = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
      base += group_offset[g] * dst_strides_axis[g];
      long within = 1;
      for (auto it = groups[g].rbegin(); it != groups[g].rend(); ++it) {
        sstr[static_cast<size_t>(*it)] = within * dst_strides_axis[g];
        within *= d.shape[static_cast<size_t>(*it)];
      }
    }
    scatter(d.v.data(), d.shape, dst.v.data(), base, sstr);
  }
  return out;
}

SymTensor fuse_legs(const SymTensor& t, std::initializer_list<std::vector<int>> groups) {
  std::vector<std::vector<int>> g(groups);
  return fuse_legs(t, std::span<const std::vector<int>>(g));
}

SymTensor split_legs(const SymTensor& t) {
  std::vector<int> which;
  for (int i = 0; i < t.rank(); ++i)
    if (t.leg(i).fuse_info()) which.push_back(i);
  return split_legs(t, which);
}

SymTensor split_legs(const SymTensor& t, std::span<const int> which) {
  if (which.empty()) return t;
  std::vector<bool> split_axis(static_cast<size_t>(t.rank()), false);
  for (int i : which) {
    if (!t.leg(i).fuse_info())
      throw StructureError("split_legs: leg carries no fusion record");
    split_axis[static_cast<size_t>(i)] = true;
  }

  std::vector<ChargeLeg> new_legs;
  std::vector<int> first_new_axis(static_cast<size_t>(t.rank()));
  for (int i = 0; i < t.rank(); ++i) {
    first_new_axis[static_cast<size_t>(i)] = static_cast<int>(new_legs.size());
    if (split_axis[static_cast<size_t>(i)]) {
      for (const ChargeLeg& p : t.leg(i).fuse_info()->parts) new_legs.push_back(p);
    } else {
      new_legs.push_back(t.leg(i));
    }
  }
  SymTensor out(new_legs, t.total_charge());

  for (const auto& [key, d] : t.blocks()) {
    const std::vector<long> src_strides_axis = Dense::strides_of(d.shape);
    // enumerate the cartesian product of combos over the split axes
    std::vector<const std::vector<FuseInfo::Combo>*> combo_lists;
    std::vector<int> split_list;
    for (int i = 0; i < t.rank(); ++i) {
      if (!split_axis[static_cast<size_t>(i)]) continue;
      const auto& layout = t.leg(i).fuse_info()->layout;
      auto it = layout.find(key[static_cast<size_t>(i)]);
      if (it == layout.end() || it->second.empty()) {
        combo_lists.clear();
        break;
      }
      combo_lists.push_back(&it->second);
      split_list.push_back(i);
    }
    if (static_cast<int>(split_list.size()) !=
        std::count(split_axis.begin(), split_axis.end(), true))
      continue;  // a fused sector with no combos: nothing stored here

    std::vector<size_t> pick(combo_lists.size(), 0);
    while (true) {
      BlockKey out_key;
      std::vector<long> out_shape;
      long src_base = 0;
      std::vector<long> src_str;
      for (int i = 0; i < t.rank(); ++i) {
        if (!split_axis[static_cast<size_t>(i)]) {
          out_key.push_back(key[static_cast<size_t>(i)]);
          out_shape.push_back(d.shape[static_cast<size_t>(i)]);
          src_str.push_back(src_strides_axis[static_cast<size_t>(i)]);
          continue;
        }
        size_t sl = static_cast<size_t>(
            std::find(split_list.begin(), split_list.end(), i) - split_list.begin());
        const FuseInfo::Combo& c = (*combo_lists[sl])[pick[sl]];
        const FuseInfo& info = *t.leg(i).fuse_info();
        src_base += c.offset * src_strides_axis[static_cast<size_t>(i)];
        long within = c.extent;
        for (size_t m = 0; m < info.parts.size(); ++m) {
          long dim = info.parts[m].sector_dim(c.charges[m]);
          within /= dim;
          out_key.push_back(c.charges[m]);
          out_shape.push_back(dim);
          src_str.push_back(within * src_strides_axis[static_cast<size_t>(i)]);
        }
      }
      Dense nd(out_shape);
      double mx = gather(nd.v.data(), out_shape, d.v.data(), src_base, src_str);
      if (mx > 0.0) out.set_block(out_key, std::move(nd));
      // advance
      size_t k = pick.size();
      bool done = pick.empty();
      while (k > 0) {
        --k;
        if (++pick[k] < combo_lists[k]->size()) break;
        pick[k] = 0;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }
  return out;
}

SymTensor contract(const SymTensor& a, const SymTensor& b,
                   std::span<const std::pair<int, int>> axes) {
  if (axes.empty()) throw StructureError("contract: no axes given");
  std::vector<bool> a_used(static_cast<size_t>(a.rank()), false);
  std::vector<bool> b_used(static_cast<size_t>(b.rank()), false);
  for (auto [ia, ib] : axes) {
    if (ia < 0 || ia >= a.rank() || ib < 0 || ib >= b.rank())
      throw StructureError("contract: axis index out of range");
    if (a_used[static_cast<size_t>(ia)] || b_used[static_cast<size_t>(ib)])
      throw StructureError("contract: axis used twice");
    a_used[static_cast<size_t>(ia)] = b_used[static_cast<size_t>(ib)] = true;
    if (!a.leg(ia).contractable_with(b.leg(ib))) {
      std::ostringstream os;
      os << "contract: leg mismatch on pair (a leg " << ia << ", b leg " << ib
         << "): need identical sectors and opposite directions";
      throw StructureError(os.str());
    }
  }

  std::vector<int> a_perm, b_perm;
  for (int i = 0; i < a.rank(); ++i)
    if (!a_used[static_cast<size_t>(i)]) a_perm.push_back(i);
  const int a_free = static_cast<int>(a_perm.size());
  for (auto [ia, ib] : axes) a_perm.push_back(ia);
  for (auto [ia, ib] : axes) b_perm.push_back(ib);
  const int b_free = b.rank() - static_cast<int>(axes.size());
  for (int i = 0; i < b.rank(); ++i)
    if (!b_used[static_cast<size_t>(i)]) b_perm.push_back(i);

  SymTensor ap = a.permuted(a_perm);
  SymTensor bp = b.permuted(b_perm);

  // fuse into at most [F, C] / [C, F]
  std::vector<std::vector<int>> ga, gb;
  if (a_free > 0) {
    std::vector<int> g(static_cast<size_t>(a_free));
    std::iota(g.begin(), g.end(), 0);
    ga.push_back(std::move(g));
  }
  {
    std::vector<int> g(axes.size());
    std::iota(g.begin(), g.end(), a_free);
    ga.push_back(std::move(g));
  }
  {
    std::vector<int> g(axes.size());
    std::iota(g.begin(), g.end(), 0);
    gb.push_back(std::move(g));
  }
  if (b_free > 0) {
    std::vector<int> g(static_cast<size_t>(b_free));
    std::iota(g.begin(), g.end(), static_cast<int>(axes.size()));
    gb.push_back(std::move(g));
  }
  SymTensor af = fuse_legs(ap, std::span<const std::vector<int>>(ga));
  SymTensor bf = fuse_legs(bp, std::span<const std::vector<int>>(gb));

  const int ac = a_free > 0 ? 1 : 0;  // index of contracted leg in af
  std::vector<ChargeLeg> out_legs;
  if (a_free > 0) out_legs.push_back(af.leg(0));
  if (b_free > 0) out_legs.push_back(bf.leg(1));
  SymTensor rf(out_legs, a.total_charge() + b.total_charge());

  // index b blocks by contracted charge
  std::map<Charge, const std::pair<const BlockKey, Dense>*> b_by_c;
  for (const auto& kv : bf.blocks()) b_by_c[kv.first[0]] = &kv;

  for (const auto& [ka, da] : af.blocks()) {
    Charge qc = ka[static_cast<size_t>(ac)];
    auto it = b_by_c.find(qc);
    if (it == b_by_c.end()) continue;
    const BlockKey& kb = it->second->first;
    const Dense& db = it->second->second;
    const long m = a_free > 0 ? da.shape[0] : 1;
    const long k = a_free > 0 ? da.shape[1] : da.shape[0];
    const long n = b_free > 0 ? db.shape[1] : 1;
    BlockKey ko;
    if (a_free > 0) ko.push_back(ka[0]);
    if (b_free > 0) ko.push_back(kb[1]);
    Dense& dout = rf.ensure_block(ko);
    CMatMap A(da.v.data(), m, k);
    CMatMap B(db.v.data(), k, n);
    MatMap O(dout.v.data(), m, n);
    O.noalias() += A * B;
  }

  // split the fused free legs back
  std::vector<int> to_split;
  for (int i = 0; i < rf.rank(); ++i)
    if (rf.leg(i).fuse_info()) to_split.push_back(i);
  SymTensor result = split_legs(rf, to_split);
  return result;
}

SvdResult truncated_svd(const SymTensor& t, std::span<const int> row_legs,
                        std::span<const int> col_legs, const SvdOptions& opts) {
  if (t.rank() != static_cast<int>(row_legs.size() + col_legs.size()))
    throw StructureError("truncated_svd: row/col legs must cover the tensor");
  const double tnorm = t.norm();
  if (!(tnorm > 0.0)) throw StructureError("cannot factor zero tensor");

  std::vector<int> perm(row_legs.begin(), row_legs.end());
  perm.insert(perm.end(), col_legs.begin(), col_legs.end());
  SymTensor tp = t.permuted(perm);
  std::vector<int> rr(row_legs.size());
  std::iota(rr.begin(), rr.end(), 0);
  std::vector<int> cc(col_legs.size());
  std::iota(cc.begin(), cc.end(), static_cast<int>(row_legs.size()));
  SymTensor tf = fuse_legs(tp, {rr, cc});

  const Dir col_dir = tf.leg(1).dir();

  struct SectorSvd {
    Charge qr, qc, qb;
    Mat U, V;                  // V = V^dagger rows
    std::vector<double> s;
  };
  std::vector<SectorSvd> secs;
  for (const auto& [key, d] : tf.blocks()) {
    CMatMap M(d.v.data(), d.shape[0], d.shape[1]);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SectorSvd ss;
    ss.qr = key[0];
    ss.qc = key[1];
    ss.qb = sign(col_dir) * key[1];  // bond carries the column flow
    ss.U = svd.matrixU();
    ss.V = svd.matrixV().adjoint();
    Eigen::VectorXd sv = svd.singularValues();
    ss.s.assign(sv.data(), sv.data() + sv.size());
    secs.push_back(std::move(ss));
  }

  struct Trip {
    double s;
    Charge qr;  // tie-break label: ascending row-sector charge
    Charge qb;
    long idx;
    size_t sec;
  };
  std::vector<Trip> trips;
  double smax = 0.0;
  for (size_t i = 0; i < secs.size(); ++i)
    for (size_t j = 0; j < secs[i].s.size(); ++j) {
      trips.push_back({secs[i].s[j], secs[i].qr, secs[i].qb, static_cast<long>(j), i});
      smax = std::max(smax, secs[i].s[j]);
    }
  std::sort(trips.begin(), trips.end(), [](const Trip& x, const Trip& y) {
    if (x.s != y.s) return x.s > y.s;
    if (x.qr != y.qr) return x.qr < y.qr;
    return x.idx < y.idx;
  });

  SvdResult out;
  std::map<Charge, long> kept_per_sector;
  double discarded_sq = 0.0;
  long kept = 0;
  for (const Trip& tr : trips) {
    bool keep = tr.s / smax >= opts.cutoff && tr.s > 0.0;
    if (keep && opts.max_dim >= 0 && kept >= opts.max_dim) keep = false;
    if (keep) {
      ++kept;
      kept_per_sector[tr.qb]++;
      out.kept.push_back(tr.s);
    } else {
      discarded_sq += tr.s * tr.s;
    }
  }
  if (kept == 0) throw StructureError("truncated_svd: all singular values discarded");
  out.kept_dim = kept;
  out.rel_err = std::sqrt(discarded_sq) / tnorm;

  std::vector<Sector> bond_sectors;
  for (const auto& [q, n] : kept_per_sector) bond_sectors.push_back({q, n});
  ChargeLeg bond_out(Dir::Out, bond_sectors);
  ChargeLeg bond_in(Dir::In, bond_sectors);

  SymTensor U({tf.leg(0), bond_out}, t.total_charge());
  SymTensor S({bond_in, bond_out}, 0);
  SymTensor V({bond_in, tf.leg(1)}, 0);
  for (const SectorSvd& ss : secs) {
    auto itk = kept_per_sector.find(ss.qb);
    if (itk == kept_per_sector.end()) continue;
    // global selection keeps a within-sector prefix (descending s, tie by idx)
    const long kq = std::min<long>(itk->second, static_cast<long>(ss.s.size()));
    if (kq <= 0) continue;
    {
      Dense d({ss.U.rows(), kq});
      MatMap(d.v.data(), ss.U.rows(), kq) = ss.U.leftCols(kq);
      U.set_block({ss.qr, ss.qb}, std::move(d));
    }
    {
      Dense d({kq, kq});
      for (long i = 0; i < kq; ++i) d.v[static_cast<size_t>(i * kq + i)] = ss.s[static_cast<size_t>(i)];
      S.set_block({ss.qb, ss.qb}, std::move(d));
    }
    {
      Dense d({kq, ss.V.cols()});
      MatMap(d.v.data(), kq, ss.V.cols()) = ss.V.topRows(kq);
      V.set_block({ss.qb, ss.qc}, std::move(d));
    }
  }

  const std::vector<int> split_u{0}, split_v{1};
  out.U = U.leg(0).fuse_info() ? split_legs(U, std::span<const int>(split_u)) : U;
  out.S = S;
  out.V = V.leg(1).fuse_info() ? split_legs(V, std::span<const int>(split_v)) : V;
  return out;
}

SvdResult truncated_svd(const SymTensor& t, std::initializer_list<int> row_legs,
                        std::initializer_list<int> col_legs, const SvdOptions& opts) {
  std::vector<int> r(row_legs), c(col_legs);
  return truncated_svd(t, std::span<const int>(r), std::span<const int>(c), opts);
}

QrResult qr_via_svd(const SymTensor& t, std::span<const int> row_legs,
                    std::span<const int> col_legs) {
  SvdOptions opts;
  opts.max_dim = -1;
  opts.cutoff = 1e-14;
  SvdResult svd = truncated_svd(t, row_legs, col_legs, opts);
  QrResult qr;
  qr.Q = std::move(svd.U);
  qr.R = contract(svd.S, svd.V, {{1, 0}});
  return qr;
}

SymTensor identity_cap(const ChargeLeg& fused_double_leg) {
  const auto& info = fused_double_leg.fuse_info();
  if (!info || info->parts.size() != 2)
    throw StructureError("identity_cap: leg is not a fused (ket,bra) pair");
  SymTensor cap({fused_double_leg.flipped()}, 0);
  for (const auto& [q, combos] : info->layout) {
    for (const FuseInfo::Combo& c : combos) {
      if (c.charges[0] != c.charges[1]) continue;
      long d0 = info->parts[0].sector_dim(c.charges[0]);
      long d1 = info->parts[1].sector_dim(c.charges[1]);
      if (d0 != d1)
        throw StructureError("identity_cap: ket/bra dimensions differ");
      Dense& blk = cap.ensure_block({q});
      for (long i = 0; i < d0; ++i) blk.v[static_cast<size_t>(c.offset + i * d1 + i)] = 1.0;
    }
  }
  return cap;
}

}  // namespace kzxx::sym
