#include "roa/conic.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace roa {

void ConicProgram::validate() const {
  auto check_term = [&](const Term& t) {
    if (t.block == kFree) {
      if (t.row < 0 || t.row >= num_free)
        throw std::invalid_argument("ConicProgram: free index out of range");
      return;
    }
    if (t.block < 0 || t.block >= static_cast<int>(block_orders.size()))
      throw std::invalid_argument("ConicProgram: block index out of range");
    int n = block_orders[static_cast<std::size_t>(t.block)];
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("ConicProgram: block entry out of range");
  };
  for (int order : block_orders) {
    if (order < 1) throw std::invalid_argument("ConicProgram: block order < 1");
  }
  for (const Row& r : rows) {
    for (const Term& t : r.terms) check_term(t);
  }
  for (const Term& t : objective) check_term(t);
}

void write_sdpa_sparse(const ConicProgram& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "\"conic program dump, SDPA sparse format\n";
  os << "\"objective sense: " << (p.maximize ? "maximize" : "minimize")
     << " (file encodes the equivalent SDPA problem; SDPA-dual objective\n";
  os << "\" tr(F0 Y) equals minus this program's optimal value)\n";
  os << "\"free scalars are split into a +/- diagonal LP block appended last\n";
  int m = static_cast<int>(p.rows.size());
  int nblocks = static_cast<int>(p.block_orders.size()) + (p.num_free > 0 ? 1 : 0);
  os << m << " = mDIM\n";
  os << nblocks << " = nBLOCK\n";
  for (std::size_t j = 0; j < p.block_orders.size(); ++j) {
    os << p.block_orders[j] << (j + 1 < p.block_orders.size() || p.num_free > 0 ? " " : "");
  }
  if (p.num_free > 0) os << -2 * p.num_free;
  os << " = bLOCKsTRUCT\n";
  for (int i = 0; i < m; ++i)
    os << p.rows[static_cast<std::size_t>(i)].rhs << (i + 1 < m ? " " : "");
  os << "\n";

  double sense = p.maximize ? 1.0 : -1.0;  // F0 holds -C for a minimize program
  char buf[160];
  auto emit = [&](int mat, const ConicProgram::Term& t, double scale) {
    int blk, r, c;
    double v = t.coef * scale;
    if (t.block == ConicProgram::kFree) {
      blk = static_cast<int>(p.block_orders.size()) + 1;
      r = c = t.row + 1;
      std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", mat, blk, r, c, v);
      os << buf;
      r = c = p.num_free + t.row + 1;
      std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", mat, blk, r, c, -v);
      os << buf;
      return;
    }
    blk = t.block + 1;
    r = std::min(t.row, t.col) + 1;
    c = std::max(t.row, t.col) + 1;
    if (r != c) v *= 0.5;  // SDPA stores the upper triangle of a symmetric matrix
    std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", mat, blk, r, c, v);
    os << buf;
  };

  for (const ConicProgram::Term& t : p.objective) emit(0, t, sense);
  for (int i = 0; i < m; ++i) {
    for (const ConicProgram::Term& t : p.rows[static_cast<std::size_t>(i)].terms)
      emit(i + 1, t, 1.0);
  }
}

}  // namespace roa
