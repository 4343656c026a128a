#pragma once

#include <iosfwd>
#include <string>

#include "kzxx/symtensor/symtensor.hpp"

namespace kzxx::sym {

// Binary SymTensor format "KZT1", version 1, little-endian throughout.
// Layout (all integers little-endian):
//   magic   u32  = 'K','Z','T','1'
//   version u32  = 1
//   total_charge i64
//   n_legs  u32
//   per leg: dir i8 (-1 in, +1 out), n_sectors u32,
//            per sector: charge i64, dim u64
//   n_blocks u64
//   per block (sorted by key): charges i64 x n_legs,
//            data (re f64, im f64) x block_size, row-major
// Fusion records are not serialized; fused legs round-trip as plain legs.
void write_tensor(std::ostream& os, const SymTensor& t);
SymTensor read_tensor(std::istream& is);

void save_tensor(const std::string& path, const SymTensor& t);
SymTensor load_tensor(const std::string& path);

}  // namespace kzxx::sym
