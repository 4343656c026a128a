#pragma once

#include <cstdint>
#include <memory>
#include <map>
#include <vector>

#include "kzxx/errors.hpp"

namespace kzxx::sym {

using Charge = long;

enum class Dir : int8_t { In = -1, Out = +1 };

inline Dir flip(Dir d) { return d == Dir::In ? Dir::Out : Dir::In; }
inline int sign(Dir d) { return static_cast<int>(d); }

struct Sector {
  Charge charge = 0;
  long dim = 0;
  friend bool operator==(const Sector&, const Sector&) = default;
};

struct FuseInfo;  // fusion record, attached to legs produced by fuse_legs

// One tensor leg: a direction plus an ordered list of charge sectors.
// Charges are strictly increasing and every degeneracy is >= 1.
class ChargeLeg {
 public:
  ChargeLeg() = default;
  ChargeLeg(Dir dir, std::vector<Sector> sectors);

  Dir dir() const { return dir_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  long n_sectors() const { return static_cast<long>(sectors_.size()); }
  long total_dim() const;
  // index into sectors(), or -1 when the charge is absent
  long sector_index(Charge q) const;
  long sector_dim(Charge q) const;

  ChargeLeg flipped() const;
  // true when `other` can be contracted against this leg:
  // identical sector list, opposite direction
  bool contractable_with(const ChargeLeg& other) const;

  const std::shared_ptr<const FuseInfo>& fuse_info() const { return fuse_info_; }
  void set_fuse_info(std::shared_ptr<const FuseInfo> fi) { fuse_info_ = std::move(fi); }

  bool same_sectors(const ChargeLeg& other) const { return sectors_ == other.sectors_; }
  friend bool operator==(const ChargeLeg& a, const ChargeLeg& b) {
    return a.dir_ == b.dir_ && a.sectors_ == b.sectors_;
  }

 private:
  Dir dir_ = Dir::Out;
  std::vector<Sector> sectors_;
  std::shared_ptr<const FuseInfo> fuse_info_;  // set only on fused legs
};

// Layout of a fused leg: for each fused charge, the ordered list of
// constituent charge combinations and their offsets inside the fused sector.
struct FuseInfo {
  struct Combo {
    std::vector<Charge> charges;  // one charge per constituent leg
    long offset = 0;              // offset inside the fused sector
    long extent = 0;              // product of constituent sector dims
  };
  std::vector<ChargeLeg> parts;
  Dir fused_dir = Dir::Out;
  std::map<Charge, std::vector<Combo>> layout;  // combos sorted lexicographically
};

}  // namespace kzxx::sym
