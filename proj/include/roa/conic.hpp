#pragma once

#include <string>
#include <vector>

namespace roa {

// Linear conic program over free scalars and symmetric PSD matrix blocks:
//
//   min/max  <objective, vars>
//   s.t.     <row_i, vars> = rhs_i          for every row
//            X_j PSD                        for every block
//
// A Term with block >= 0 addresses the unordered entry (row, col) of that
// block; its coefficient multiplies X[row][col] of the symmetric matrix and
// covers the mirrored entry as well (a single Term, not two, per pair).
// A Term with block == kFree addresses free scalar `row`.
struct ConicProgram {
  static constexpr int kFree = -1;

  struct Term {
    int block = kFree;
    int row = 0;
    int col = 0;
    double coef = 0.0;
  };

  struct Row {
    std::vector<Term> terms;
    double rhs = 0.0;
  };

  int num_free = 0;
  std::vector<int> block_orders;
  std::vector<Row> rows;
  std::vector<Term> objective;
  bool maximize = false;

  int add_free(int count = 1) {
    int first = num_free;
    num_free += count;
    return first;
  }

  int add_block(int order) {
    block_orders.push_back(order);
    return static_cast<int>(block_orders.size()) - 1;
  }

  static Term free_term(int index, double coef) { return {kFree, index, 0, coef}; }

  static Term block_term(int block, int r, int c, double coef) {
    if (r < c) std::swap(r, c);
    return {block, r, c, coef};
  }

  void validate() const;
};

// Writes the program in SDPA sparse format (free scalars split into a
// diagonal LP block) so third-party SDP solvers can cross-check it. The
// header comment in the emitted file documents the sign conventions.
void write_sdpa_sparse(const ConicProgram& p, const std::string& path);

}  // namespace roa
