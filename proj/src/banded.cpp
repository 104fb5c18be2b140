#include "wbfv/banded.hpp"

#include <cmath>
#include <string>

#include "wbfv/errors.hpp"

namespace wbfv {

BandedMatrix::BandedMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
  if (n < 1 || kl < 0 || ku < 0) throw ConfigError("banded matrix: bad dimensions");
  a_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(width()), 0.0);
}

Real& BandedMatrix::operator()(int i, int j) {
  if (!in_band(i, j)) throw ConfigError("banded matrix: entry outside band");
  return a_[index(i, j)];
}

Real BandedMatrix::operator()(int i, int j) const { return in_band(i, j) ? a_[index(i, j)] : 0.0; }

std::vector<Real> BandedMatrix::solve(std::vector<Real> b, bool pivoting) const {
  if (static_cast<int>(b.size()) != n_) throw ConfigError("banded solve: rhs size mismatch");
  std::vector<Real> a = a_;
  auto at = [&](int i, int j) -> Real& { return a[index(i, j)]; };
  // Fill-in from row swaps reaches kl + ku above the diagonal.
  const int ku_eff = pivoting ? kl_ + ku_ : ku_;
  for (int k = 0; k < n_; ++k) {
    const int last_row = std::min(n_ - 1, k + kl_);
    const int last_col = std::min(n_ - 1, k + ku_eff);
    if (pivoting) {
      int p = k;
      for (int i = k + 1; i <= last_row; ++i)
        if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
      if (p != k) {
        for (int j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
        std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(p)]);
      }
    }
    const Real piv = at(k, k);
    if (piv == 0.0 || !std::isfinite(piv))
      throw SingularMatrixError("banded solve: zero pivot at row " + std::to_string(k));
    for (int i = k + 1; i <= last_row; ++i) {
      const Real m = at(i, k) / piv;
      if (m == 0.0) continue;
      at(i, k) = 0.0;
      for (int j = k + 1; j <= last_col; ++j) at(i, j) -= m * at(k, j);
      b[static_cast<std::size_t>(i)] -= m * b[static_cast<std::size_t>(k)];
    }
  }
  for (int k = n_ - 1; k >= 0; --k) {
    Real s = b[static_cast<std::size_t>(k)];
    const int last_col = std::min(n_ - 1, k + ku_eff);
    for (int j = k + 1; j <= last_col; ++j) s -= at(k, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(k)] = s / at(k, k);
  }
  return b;
}

std::vector<Real> solve_banded(int bandwidth, const std::vector<std::vector<Real>>& diagonals, std::vector<Real> rhs) {
  if (bandwidth < 1 || bandwidth > 2) throw ConfigError("solve_banded: bandwidth must be 1 or 2");
  if (static_cast<int>(diagonals.size()) != 2 * bandwidth + 1)
    throw ConfigError("solve_banded: expected " + std::to_string(2 * bandwidth + 1) + " diagonals");
  const int n = static_cast<int>(rhs.size());
  BandedMatrix m(n, bandwidth, bandwidth);
  for (int d = -bandwidth; d <= bandwidth; ++d) {
    const auto& diag = diagonals[static_cast<std::size_t>(d + bandwidth)];
    if (static_cast<int>(diag.size()) != n) throw ConfigError("solve_banded: diagonal length mismatch");
    for (int i = 0; i < n; ++i) {
      const int j = i + d;
      if (j >= 0 && j < n) m(i, j) = diag[static_cast<std::size_t>(i)];
    }
  }
  return m.solve(std::move(rhs), false);
}

}  // namespace wbfv
