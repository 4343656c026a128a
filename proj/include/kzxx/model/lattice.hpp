#pragma once

#include <string>
#include <vector>

namespace kzxx::model {

// Square-lattice geometry. Finite lattices are rows x cols with open
// boundaries; the infinite lattice is the two-sublattice checkerboard.
// The staggered field is h(i,j) = (-1)^(i+j): +1 on the A sublattice.
struct Lattice {
  int rows = 0;
  int cols = 0;
  bool infinite = false;

  static Lattice finite(int rows, int cols);
  static Lattice infinite_checkerboard();

  int n_sites() const { return rows * cols; }
  int site(int i, int j) const { return i * cols + j; }
  int stagger(int i, int j) const { return ((i + j) % 2 == 0) ? +1 : -1; }
  int sublattice(int i, int j) const { return (i + j) % 2; }  // 0 = A, 1 = B

  struct Bond {
    int i0, j0, i1, j1;
    bool horizontal;
  };
  // all nearest-neighbor bonds, rows-major, horizontal first within a site
  std::vector<Bond> bonds() const;
};

}  // namespace kzxx::model
