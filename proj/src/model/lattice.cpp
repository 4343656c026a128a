#include "kzxx/model/lattice.hpp"

#include "kzxx/errors.hpp"

namespace kzxx::model {

Lattice Lattice::finite(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw ConfigError("Lattice: rows and cols must be >= 1");
  Lattice l;
  l.rows = rows;
  l.cols = cols;
  return l;
}

Lattice Lattice::infinite_checkerboard() {
  Lattice l;
  l.infinite = true;
  return l;
}

std::vector<Lattice::Bond> Lattice::bonds() const {
  std::vector<Bond> out;
  if (infinite) return out;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols) out.push_back({i, j, i, j + 1, true});
      if (i + 1 < rows) out.push_back({i, j, i + 1, j, false});
    }
  return out;
}

}  // namespace kzxx::model
