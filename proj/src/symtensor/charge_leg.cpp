#include "kzxx/symtensor/charge_leg.hpp"

#include <string>

namespace kzxx::sym {

ChargeLeg::ChargeLeg(Dir dir, std::vector<Sector> sectors)
    : dir_(dir), sectors_(std::move(sectors)) {
  if (sectors_.empty()) throw StructureError("ChargeLeg: empty sector list");
  for (size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].dim < 1)
      throw StructureError("ChargeLeg: degeneracy must be >= 1, got " +
                           std::to_string(sectors_[i].dim));
    if (i > 0 && sectors_[i].charge <= sectors_[i - 1].charge)
      throw StructureError("ChargeLeg: charges must be strictly increasing");
  }
}

long ChargeLeg::total_dim() const {
  long n = 0;
  for (const Sector& s : sectors_) n += s.dim;
  return n;
}

long ChargeLeg::sector_index(Charge q) const {
  long lo = 0, hi = static_cast<long>(sectors_.size()) - 1;
  while (lo <= hi) {
    long mid = (lo + hi) / 2;
    if (sectors_[static_cast<size_t>(mid)].charge == q) return mid;
    if (sectors_[static_cast<size_t>(mid)].charge < q)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

long ChargeLeg::sector_dim(Charge q) const {
  long i = sector_index(q);
  return i < 0 ? 0 : sectors_[static_cast<size_t>(i)].dim;
}

ChargeLeg ChargeLeg::flipped() const {
  ChargeLeg out(flip(dir_), sectors_);
  out.fuse_info_ = fuse_info_;
  return out;
}

bool ChargeLeg::contractable_with(const ChargeLeg& other) const {
  return dir_ != other.dir_ && sectors_ == other.sectors_;
}

}  // namespace kzxx::sym
