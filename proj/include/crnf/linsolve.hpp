#pragma once

#include <gmpxx.h>

#include <vector>

namespace crnf {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

struct LinearSolution {
  bool consistent = false;
  QVec x;  // free variables pinned to zero
};

// Exact row-echelon factorization of a rational matrix, reusable across many
// right-hand sides.  Elimination happens once; solving replays the recorded
// row operations on the right-hand side.
class EchelonSystem {
 public:
  explicit EchelonSystem(QMat a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int rank() const { return static_cast<int>(pivot_col_.size()); }
  int kernel_dim() const { return cols_ - rank(); }

  // Solves A x = b with free variables set to zero.  consistent == false
  // when b is outside the column span.
  LinearSolution solve(const QVec& b) const;

 private:
  struct RowOp {
    enum Kind { Swap, Scale, Axpy } kind;
    int i = 0, j = 0;
    mpq_class c;
  };

  int rows_ = 0, cols_ = 0;
  QMat r_;                      // reduced row-echelon form
  std::vector<int> pivot_col_;  // pivot column of each leading row
  std::vector<RowOp> ops_;      // elimination log, replayed on each rhs
};

}  // namespace crnf
