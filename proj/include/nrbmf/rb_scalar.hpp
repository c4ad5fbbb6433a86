#pragma once

/**
 * @file rb_scalar.hpp
 * @brief Reduced biquaternion numbers q0 + q1 i + q2 j + q3 k.
 *
 * The units obey i^2 = k^2 = -1, j^2 = +1, ij = ji = k, jk = kj = i,
 * ki = ik = -j, so multiplication is commutative. The algebra has zero
 * divisors (any multiple of e1 = (1+j)/2 or e2 = (1-j)/2), which is why no
 * scalar division is offered.
 */

#include <cmath>
#include <complex>
#include <iosfwd>

#include "nrbmf/errors.hpp"

namespace nrbmf {

/// Coefficients of q = c_plus * e1 + c_minus * e2.
struct E1E2Scalar {
  std::complex<double> c_plus;
  std::complex<double> c_minus;
};

class RBScalar {
 public:
  constexpr RBScalar() noexcept = default;

  /// Throws NonFiniteError if any component is NaN or infinite.
  RBScalar(double q0, double q1 = 0.0, double q2 = 0.0, double q3 = 0.0)
      : q0_(q0), q1_(q1), q2_(q2), q3_(q3) {
    if (!(std::isfinite(q0) && std::isfinite(q1) && std::isfinite(q2) &&
          std::isfinite(q3))) {
      throw NonFiniteError("RBScalar: non-finite component");
    }
  }

  /// Idempotent (1 + j) / 2.
  static RBScalar e1() noexcept { return unchecked(0.5, 0.0, 0.5, 0.0); }
  /// Idempotent (1 - j) / 2.
  static RBScalar e2() noexcept { return unchecked(0.5, 0.0, -0.5, 0.0); }

  double real() const noexcept { return q0_; }
  double i() const noexcept { return q1_; }
  double j() const noexcept { return q2_; }
  double k() const noexcept { return q3_; }

  friend bool operator==(const RBScalar&, const RBScalar&) = default;

  friend RBScalar operator+(const RBScalar& a, const RBScalar& b) noexcept {
    return unchecked(a.q0_ + b.q0_, a.q1_ + b.q1_, a.q2_ + b.q2_,
                     a.q3_ + b.q3_);
  }

  friend RBScalar operator-(const RBScalar& a, const RBScalar& b) noexcept {
    return unchecked(a.q0_ - b.q0_, a.q1_ - b.q1_, a.q2_ - b.q2_,
                     a.q3_ - b.q3_);
  }

  friend RBScalar operator-(const RBScalar& a) noexcept {
    return unchecked(-a.q0_, -a.q1_, -a.q2_, -a.q3_);
  }

  friend RBScalar operator*(double s, const RBScalar& a) noexcept {
    return unchecked(s * a.q0_, s * a.q1_, s * a.q2_, s * a.q3_);
  }

  // Every component is a sum of pairs (x_a y_b + x_b y_a) or symmetric
  // products, so swapping the operands yields bit-identical results.
  friend RBScalar operator*(const RBScalar& a, const RBScalar& b) noexcept {
    const double re = (a.q0_ * b.q0_ + a.q2_ * b.q2_) -
                      (a.q1_ * b.q1_ + a.q3_ * b.q3_);
    const double im_i = (a.q0_ * b.q1_ + a.q1_ * b.q0_) +
                        (a.q2_ * b.q3_ + a.q3_ * b.q2_);
    const double im_j = (a.q0_ * b.q2_ + a.q2_ * b.q0_) -
                        (a.q1_ * b.q3_ + a.q3_ * b.q1_);
    const double im_k = (a.q0_ * b.q3_ + a.q3_ * b.q0_) +
                        (a.q1_ * b.q2_ + a.q2_ * b.q1_);
    return unchecked(re, im_i, im_j, im_k);
  }

  RBScalar& operator+=(const RBScalar& b) noexcept { return *this = *this + b; }
  RBScalar& operator*=(const RBScalar& b) noexcept { return *this = *this * b; }

 private:
  static RBScalar unchecked(double q0, double q1, double q2,
                            double q3) noexcept {
    RBScalar r;
    r.q0_ = q0;
    r.q1_ = q1;
    r.q2_ = q2;
    r.q3_ = q3;
    return r;
  }

  double q0_ = 0.0;
  double q1_ = 0.0;
  double q2_ = 0.0;
  double q3_ = 0.0;
};

/// q0 - q1 i + q2 j - q3 k.
inline RBScalar conj(const RBScalar& a) {
  return RBScalar(a.real(), -a.i(), a.j(), -a.k());
}

/// sqrt(q0^2 + q1^2 + q2^2 + q3^2).
inline double modulus(const RBScalar& a) noexcept {
  return std::sqrt(a.real() * a.real() + a.i() * a.i() + a.j() * a.j() +
                   a.k() * a.k());
}

inline E1E2Scalar to_e1e2(const RBScalar& a) noexcept {
  return {{a.real() + a.j(), a.i() + a.k()}, {a.real() - a.j(), a.i() - a.k()}};
}

/// Inverse of to_e1e2. Throws NonFiniteError on non-finite input.
RBScalar from_e1e2(const E1E2Scalar& s);

std::ostream& operator<<(std::ostream& os, const RBScalar& a);

}  // namespace nrbmf
