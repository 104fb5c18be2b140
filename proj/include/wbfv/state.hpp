#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace wbfv {

using Real = double;

inline constexpr std::size_t kMaxComponents = 2;

/// Conserved state with one (scalar models) or two (shallow water) components.
///
/// Storage is fixed-size; slots beyond size() are kept at zero so that
/// arithmetic never needs to branch on the component count.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Real u) : n_(1), v_{u, 0.0} {}
  StateVector(Real a, Real b) : n_(2), v_{a, b} {}

  static StateVector zeros(std::size_t n) {
    assert(n >= 1 && n <= kMaxComponents);
    StateVector s;
    s.n_ = n;
    return s;
  }

  std::size_t size() const noexcept { return n_; }

  Real& operator[](std::size_t i) {
    assert(i < n_);
    return v_[i];
  }
  Real operator[](std::size_t i) const {
    assert(i < n_);
    return v_[i];
  }

  StateVector& operator+=(const StateVector& o) {
    v_[0] += o.v_[0];
    v_[1] += o.v_[1];
    return *this;
  }
  StateVector& operator-=(const StateVector& o) {
    v_[0] -= o.v_[0];
    v_[1] -= o.v_[1];
    return *this;
  }
  StateVector& operator*=(Real s) {
    v_[0] *= s;
    v_[1] *= s;
    return *this;
  }

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(StateVector a, Real s) { return a *= s; }
  friend StateVector operator*(Real s, StateVector a) { return a *= s; }
  friend StateVector operator-(StateVector a) { return a *= -1.0; }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    return a.n_ == b.n_ && a.v_ == b.v_;
  }

  /// Componentwise product.
  friend StateVector hadamard(StateVector a, const StateVector& b) {
    a.v_[0] *= b.v_[0];
    a.v_[1] *= b.v_[1];
    return a;
  }

  Real max_abs() const noexcept {
    Real m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
    return m;
  }

  bool all_finite() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      if (!std::isfinite(v_[i])) return false;
    return true;
  }

 private:
  std::size_t n_ = 1;
  std::array<Real, kMaxComponents> v_{};
};

}  // namespace wbfv
