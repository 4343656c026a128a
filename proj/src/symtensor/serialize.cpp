#include "kzxx/symtensor/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kzxx/errors.hpp"

namespace kzxx::sym {

namespace {

constexpr uint32_t kMagic = 0x31545A4B;  // "KZT1"
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&v);
    std::reverse(p, p + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw StructureError("tensor stream: unexpected end of data");
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&v);
    std::reverse(p, p + sizeof(T));
  }
  return v;
}

}  // namespace

void write_tensor(std::ostream& os, const SymTensor& t) {
  put<uint32_t>(os, kMagic);
  put<uint32_t>(os, kVersion);
  put<int64_t>(os, t.total_charge());
  put<uint32_t>(os, static_cast<uint32_t>(t.rank()));
  for (const ChargeLeg& l : t.legs()) {
    put<int8_t>(os, static_cast<int8_t>(sign(l.dir())));
    put<uint32_t>(os, static_cast<uint32_t>(l.n_sectors()));
    for (const Sector& s : l.sectors()) {
      put<int64_t>(os, s.charge);
      put<uint64_t>(os, static_cast<uint64_t>(s.dim));
    }
  }
  put<uint64_t>(os, static_cast<uint64_t>(t.blocks().size()));
  for (const auto& [key, d] : t.blocks()) {
    for (Charge q : key) put<int64_t>(os, q);
    for (const cplx& x : d.v) {
      put<double>(os, x.real());
      put<double>(os, x.imag());
    }
  }
}

SymTensor read_tensor(std::istream& is) {
  if (get<uint32_t>(is) != kMagic)
    throw StructureError("tensor stream: bad magic");
  uint32_t version = get<uint32_t>(is);
  if (version != kVersion)
    throw StructureError("tensor stream: unsupported version " + std::to_string(version));
  Charge total = get<int64_t>(is);
  uint32_t n_legs = get<uint32_t>(is);
  std::vector<ChargeLeg> legs;
  for (uint32_t i = 0; i < n_legs; ++i) {
    int8_t d = get<int8_t>(is);
    uint32_t ns = get<uint32_t>(is);
    std::vector<Sector> sectors(ns);
    for (uint32_t j = 0; j < ns; ++j) {
      sectors[j].charge = get<int64_t>(is);
      sectors[j].dim = static_cast<long>(get<uint64_t>(is));
    }
    legs.emplace_back(d > 0 ? Dir::Out : Dir::In, std::move(sectors));
  }
  SymTensor t(std::move(legs), total);
  uint64_t n_blocks = get<uint64_t>(is);
  for (uint64_t b = 0; b < n_blocks; ++b) {
    BlockKey key(n_legs);
    for (uint32_t i = 0; i < n_legs; ++i) key[i] = get<int64_t>(is);
    Dense& d = t.ensure_block(key);
    for (cplx& x : d.v) {
      double re = get<double>(is);
      double im = get<double>(is);
      x = cplx(re, im);
    }
  }
  return t;
}

void save_tensor(const std::string& path, const SymTensor& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw StructureError("cannot open " + path + " for writing");
  write_tensor(os, t);
}

SymTensor load_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructureError("cannot open " + path);
  return read_tensor(is);
}

}  // namespace kzxx::sym
