#include "crnf/linsolve.hpp"

#include <stdexcept>
#include <utility>

namespace crnf {

EchelonSystem::EchelonSystem(QMat a) : r_(std::move(a)) {
  rows_ = static_cast<int>(r_.size());
  cols_ = rows_ ? static_cast<int>(r_[0].size()) : 0;
  for (const auto& row : r_) {
    if (static_cast<int>(row.size()) != cols_) {
      throw std::invalid_argument("EchelonSystem: ragged matrix");
    }
  }

  int lead = 0;
  for (int c = 0; c < cols_ && lead < rows_; ++c) {
    // Prefer a unit pivot to keep intermediate entries small.
    int piv = -1;
    for (int r = lead; r < rows_; ++r) {
      if (r_[r][c] == 0) continue;
      if (piv < 0) piv = r;
      if (r_[r][c] == 1 || r_[r][c] == -1) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;

    if (piv != lead) {
      std::swap(r_[piv], r_[lead]);
      ops_.push_back({RowOp::Swap, piv, lead, mpq_class()});
    }
    if (r_[lead][c] != 1) {
      mpq_class inv = 1 / r_[lead][c];
      for (int j = c; j < cols_; ++j) r_[lead][j] *= inv;
      ops_.push_back({RowOp::Scale, lead, 0, inv});
    }
    for (int r = 0; r < rows_; ++r) {
      if (r == lead || r_[r][c] == 0) continue;
      mpq_class f = r_[r][c];
      for (int j = c; j < cols_; ++j) r_[r][j] -= f * r_[lead][j];
      ops_.push_back({RowOp::Axpy, r, lead, f});
    }
    pivot_col_.push_back(c);
    ++lead;
  }
}

LinearSolution EchelonSystem::solve(const QVec& b) const {
  if (static_cast<int>(b.size()) != rows_) {
    throw std::invalid_argument("EchelonSystem::solve: rhs size mismatch");
  }
  QVec tb = b;
  for (const auto& op : ops_) {
    switch (op.kind) {
      case RowOp::Swap: std::swap(tb[op.i], tb[op.j]); break;
      case RowOp::Scale: tb[op.i] *= op.c; break;
      case RowOp::Axpy: tb[op.i] -= op.c * tb[op.j]; break;
    }
  }

  LinearSolution sol;
  for (int r = rank(); r < rows_; ++r) {
    if (tb[r] != 0) return sol;  // inconsistent
  }
  sol.consistent = true;
  sol.x.assign(cols_, mpq_class());
  for (int r = 0; r < rank(); ++r) sol.x[pivot_col_[r]] = tb[r];
  return sol;
}

}  // namespace crnf
