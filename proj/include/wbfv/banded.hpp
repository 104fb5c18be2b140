#pragma once

#include <vector>

#include "wbfv/state.hpp"

namespace wbfv {

/// Square band matrix with kl sub- and ku super-diagonals.
///
/// Row-major band storage; with pivoting enabled the LU factors need kl extra
/// super-diagonals, which are allocated up front.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int size() const noexcept { return n_; }
  int lower() const noexcept { return kl_; }
  int upper() const noexcept { return ku_; }

  bool in_band(int i, int j) const noexcept { return j - i <= ku_ && i - j <= kl_; }
  Real& operator()(int i, int j);
  Real operator()(int i, int j) const;

  /// Gaussian elimination restricted to the band. Without pivoting a zero
  /// pivot throws SingularMatrixError; with partial pivoting only an
  /// all-zero column does.
  std::vector<Real> solve(std::vector<Real> rhs, bool pivoting = false) const;

 private:
  int width() const noexcept { return kl_ + ku_ + kl_ + 1; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(width()) + static_cast<std::size_t>(j - i + kl_);
  }

  int n_;
  int kl_;
  int ku_;
  std::vector<Real> a_;
};

/// Symmetric-bandwidth solve from diagonals: diagonals[d] holds the entries
/// of offset d - bandwidth (so diagonals[bandwidth] is the main diagonal),
/// each of length n, indexed by row. Entries that fall outside the matrix are
/// ignored. No pivoting.
std::vector<Real> solve_banded(int bandwidth, const std::vector<std::vector<Real>>& diagonals, std::vector<Real> rhs);

}  // namespace wbfv
