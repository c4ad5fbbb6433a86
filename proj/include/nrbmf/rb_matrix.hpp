#pragma once

/**
 * @file rb_matrix.hpp
 * @brief Dense reduced biquaternion matrices Q = Q0 + Q1 i + Q2 j + Q3 k.
 *
 * Storage is four real column-major blocks. The e1-e2 view
 * Q = M1 e1 + M2 e2 with M1 = (Q0+Q2) + (Q1+Q3)i and M2 = (Q0-Q2) + (Q1-Q3)i
 * turns products and inverses into pairs of independent complex operations.
 */

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>

#include "nrbmf/errors.hpp"
#include "nrbmf/rb_scalar.hpp"

namespace nrbmf {

using Index = Eigen::Index;

/// Component block of an RB matrix.
enum class Part : int { kReal = 0, kI = 1, kJ = 2, kK = 3 };

struct E1E2Matrix {
  Eigen::MatrixXcd m1;
  Eigen::MatrixXcd m2;
};

class RBMatrix {
 public:
  /// 0 x 0.
  RBMatrix() = default;

  /// rows x cols of zeros.
  RBMatrix(Index rows, Index cols);

  /// Throws ShapeError if the blocks disagree in shape and NonFiniteError on
  /// NaN/Inf entries.
  RBMatrix(Eigen::MatrixXd q0, Eigen::MatrixXd q1, Eigen::MatrixXd q2,
           Eigen::MatrixXd q3);

  static RBMatrix identity(Index n);
  /// Real-valued matrix (imaginary blocks zero).
  static RBMatrix from_real(const Eigen::MatrixXd& q0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index size() const noexcept { return rows_ * cols_; }

  const Eigen::MatrixXd& block(Part p) const noexcept {
    return blocks_[static_cast<std::size_t>(p)];
  }
  const Eigen::MatrixXd& block(int p) const noexcept {
    return blocks_[static_cast<std::size_t>(p)];
  }
  const Eigen::MatrixXd& q0() const noexcept { return blocks_[0]; }
  const Eigen::MatrixXd& q1() const noexcept { return blocks_[1]; }
  const Eigen::MatrixXd& q2() const noexcept { return blocks_[2]; }
  const Eigen::MatrixXd& q3() const noexcept { return blocks_[3]; }

  RBScalar operator()(Index r, Index c) const;

  /// True when the i and k blocks are identically zero.
  bool is_j_structured() const noexcept;

  friend bool operator==(const RBMatrix& a, const RBMatrix& b);

  /// Builds from blocks already known to be finite and conforming. Internal
  /// kernels use this to skip revalidation.
  static RBMatrix from_blocks_unchecked(std::array<Eigen::MatrixXd, 4> blocks);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::array<Eigen::MatrixXd, 4> blocks_;
};

/// Route for RB matrix products.
enum class MulRoute {
  kAuto,    ///< structure-aware choice (see multiply)
  kDirect,  ///< real 4-block expansion of the multiplication table
  kE1E2,    ///< two complex products in the e1-e2 form
};

/// Inner dimension at which kAuto switches from the direct expansion to the
/// e1-e2 route.
inline constexpr Index kE1E2Crossover = 8;

RBMatrix operator+(const RBMatrix& a, const RBMatrix& b);
RBMatrix operator-(const RBMatrix& a, const RBMatrix& b);
RBMatrix operator*(double s, const RBMatrix& a);

/// Matrix product. kAuto uses the direct expansion, restricted to the
/// non-zero blocks, whenever either operand is j-structured (so products of
/// non-negative factors stay exactly non-negative); otherwise the e1-e2 route
/// for inner dimension >= kE1E2Crossover and the direct expansion below.
RBMatrix multiply(const RBMatrix& a, const RBMatrix& b,
                  MulRoute route = MulRoute::kAuto);
inline RBMatrix operator*(const RBMatrix& a, const RBMatrix& b) {
  return multiply(a, b);
}

RBMatrix transpose(const RBMatrix& q);
/// Entrywise conjugate (Q0, -Q1, Q2, -Q3).
RBMatrix conj(const RBMatrix& q);
/// Conjugate transpose.
RBMatrix hermitian(const RBMatrix& q);

/// <Q, P> = sum over entries of conj(q_mn) p_mn.
RBScalar inner(const RBMatrix& q, const RBMatrix& p);
/// Re<Q, P>, i.e. the real Euclidean inner product of the stacked blocks.
double re_inner(const RBMatrix& q, const RBMatrix& p);
double fro_norm(const RBMatrix& q);

/// Column-major stacking into an (rows*cols) x 1 matrix.
RBMatrix vec(const RBMatrix& q);
/// Inverse of vec.
RBMatrix unvec(const RBMatrix& v, Index rows, Index cols);

/// Column c as an rows x 1 matrix.
RBMatrix column(const RBMatrix& q, Index c);
/// Horizontal concatenation; every part must have the same row count.
RBMatrix hstack(std::span<const RBMatrix> parts);

E1E2Matrix to_e1e2(const RBMatrix& q);
RBMatrix from_e1e2(const E1E2Matrix& e);

/// Pivot magnitude below which a complex LU factor counts as singular.
inline constexpr double kSingularPivot = 1e-300;

/// Inverse through M1^{-1} e1 + M2^{-1} e2. Throws SingularComponentError
/// naming the component whose LU meets a pivot below kSingularPivot.
RBMatrix inverse(const RBMatrix& a);

/// 2-norm condition numbers of the two complex components.
struct ComponentCond {
  double m1;
  double m2;
  double max() const noexcept { return m1 > m2 ? m1 : m2; }
};

/// Singular-value condition numbers; +inf for an exactly singular component.
ComponentCond cond(const RBMatrix& a);

}  // namespace nrbmf
