#include "nrbmf/rb_matrix.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace nrbmf {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

bool all_zero(const MatrixXd& m) { return (m.array() == 0.0).all(); }

std::string shape_str(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_same_shape(const RBMatrix& a, const RBMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(b.rows(), b.cols()));
  }
}

void require_square(const RBMatrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(op) + ": matrix is " +
                     shape_str(a.rows(), a.cols()) + ", expected square");
  }
}

// Unit product table: kUnitProduct[a][b] = {sign, target} with
// e_a * e_b = sign * e_target for the units (1, i, j, k).
struct UnitTerm {
  double sign;
  int target;
};
constexpr UnitTerm kUnitProduct[4][4] = {
    {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
    {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
    {{1, 2}, {1, 3}, {1, 0}, {1, 1}},
    {{1, 3}, {-1, 2}, {1, 1}, {-1, 0}},
};

RBMatrix multiply_direct(const RBMatrix& a, const RBMatrix& b) {
  std::array<bool, 4> a_zero{}, b_zero{};
  for (int p = 0; p < 4; ++p) {
    a_zero[p] = all_zero(a.block(p));
    b_zero[p] = all_zero(b.block(p));
  }
  std::array<MatrixXd, 4> c;
  for (auto& blk : c) blk = MatrixXd::Zero(a.rows(), b.cols());
  // Positive terms first so that for non-negative operands every partial
  // sum stays non-negative.
  for (double pass_sign : {1.0, -1.0}) {
    for (int pa = 0; pa < 4; ++pa) {
      if (a_zero[pa]) continue;
      for (int pb = 0; pb < 4; ++pb) {
        if (b_zero[pb]) continue;
        const UnitTerm t = kUnitProduct[pa][pb];
        if (t.sign != pass_sign) continue;
        if (t.sign > 0) {
          c[t.target].noalias() += a.block(pa) * b.block(pb);
        } else {
          c[t.target].noalias() -= a.block(pa) * b.block(pb);
        }
      }
    }
  }
  return RBMatrix::from_blocks_unchecked(std::move(c));
}

RBMatrix multiply_e1e2(const RBMatrix& a, const RBMatrix& b) {
  const E1E2Matrix ea = to_e1e2(a);
  const E1E2Matrix eb = to_e1e2(b);
  E1E2Matrix prod;
  prod.m1.noalias() = ea.m1 * eb.m1;
  prod.m2.noalias() = ea.m2 * eb.m2;
  return from_e1e2(prod);
}

// A zero pivot poisons the trailing factor with NaN, so the comparison is
// written to treat NaN as singular.
bool has_singular_pivot(const Eigen::PartialPivLU<MatrixXcd>& lu) {
  const auto& u = lu.matrixLU();
  for (Index i = 0; i < u.rows(); ++i) {
    if (!(std::abs(u(i, i)) >= kSingularPivot)) return true;
  }
  return false;
}

double component_cond(const MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace

RBMatrix::RBMatrix(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ShapeError("RBMatrix: negative dimension");
  for (auto& b : blocks_) b = MatrixXd::Zero(rows, cols);
}

RBMatrix::RBMatrix(MatrixXd q0, MatrixXd q1, MatrixXd q2, MatrixXd q3)
    : rows_(q0.rows()), cols_(q0.cols()),
      blocks_{std::move(q0), std::move(q1), std::move(q2), std::move(q3)} {
  for (const auto& b : blocks_) {
    if (b.rows() != rows_ || b.cols() != cols_) {
      throw ShapeError("RBMatrix: component blocks differ in shape");
    }
    if (!b.allFinite()) throw NonFiniteError("RBMatrix: non-finite entry");
  }
}

RBMatrix RBMatrix::identity(Index n) {
  RBMatrix r(n, n);
  r.blocks_[0].setIdentity();
  return r;
}

RBMatrix RBMatrix::from_real(const MatrixXd& q0) {
  const MatrixXd z = MatrixXd::Zero(q0.rows(), q0.cols());
  return RBMatrix(q0, z, z, z);
}

RBMatrix RBMatrix::from_blocks_unchecked(std::array<MatrixXd, 4> blocks) {
  RBMatrix r;
  r.rows_ = blocks[0].rows();
  r.cols_ = blocks[0].cols();
  r.blocks_ = std::move(blocks);
  return r;
}

RBScalar RBMatrix::operator()(Index r, Index c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw ShapeError("RBMatrix: index out of range");
  }
  return RBScalar(blocks_[0](r, c), blocks_[1](r, c), blocks_[2](r, c),
                  blocks_[3](r, c));
}

bool RBMatrix::is_j_structured() const noexcept {
  return all_zero(blocks_[1]) && all_zero(blocks_[3]);
}

bool operator==(const RBMatrix& a, const RBMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (int p = 0; p < 4; ++p) {
    if (a.blocks_[p] != b.blocks_[p]) return false;
  }
  return true;
}

RBMatrix operator+(const RBMatrix& a, const RBMatrix& b) {
  require_same_shape(a, b, "operator+");
  return RBMatrix::from_blocks_unchecked(
      {a.q0() + b.q0(), a.q1() + b.q1(), a.q2() + b.q2(), a.q3() + b.q3()});
}

RBMatrix operator-(const RBMatrix& a, const RBMatrix& b) {
  require_same_shape(a, b, "operator-");
  return RBMatrix::from_blocks_unchecked(
      {a.q0() - b.q0(), a.q1() - b.q1(), a.q2() - b.q2(), a.q3() - b.q3()});
}

RBMatrix operator*(double s, const RBMatrix& a) {
  if (!std::isfinite(s)) throw NonFiniteError("RBMatrix: non-finite scale");
  return RBMatrix::from_blocks_unchecked(
      {s * a.q0(), s * a.q1(), s * a.q2(), s * a.q3()});
}

RBMatrix multiply(const RBMatrix& a, const RBMatrix& b, MulRoute route) {
  if (a.cols() != b.rows()) {
    throw ShapeError("multiply: inner dimensions differ (" +
                     shape_str(a.rows(), a.cols()) + " * " +
                     shape_str(b.rows(), b.cols()) + ")");
  }
  switch (route) {
    case MulRoute::kDirect:
      return multiply_direct(a, b);
    case MulRoute::kE1E2:
      return multiply_e1e2(a, b);
    case MulRoute::kAuto:
      break;
  }
  if (a.is_j_structured() || b.is_j_structured() ||
      a.cols() < kE1E2Crossover) {
    return multiply_direct(a, b);
  }
  return multiply_e1e2(a, b);
}

RBMatrix transpose(const RBMatrix& q) {
  return RBMatrix::from_blocks_unchecked({q.q0().transpose(),
                                          q.q1().transpose(),
                                          q.q2().transpose(),
                                          q.q3().transpose()});
}

RBMatrix conj(const RBMatrix& q) {
  return RBMatrix::from_blocks_unchecked({q.q0(), -q.q1(), q.q2(), -q.q3()});
}

RBMatrix hermitian(const RBMatrix& q) {
  return RBMatrix::from_blocks_unchecked(
      {q.q0().transpose(), -q.q1().transpose(), q.q2().transpose(),
       -q.q3().transpose()});
}

RBScalar inner(const RBMatrix& q, const RBMatrix& p) {
  require_same_shape(q, p, "inner");
  auto dot = [](const MatrixXd& x, const MatrixXd& y) {
    return x.cwiseProduct(y).sum();
  };
  const double re = dot(q.q0(), p.q0()) + dot(q.q1(), p.q1()) +
                    dot(q.q2(), p.q2()) + dot(q.q3(), p.q3());
  const double im_i = dot(q.q0(), p.q1()) - dot(q.q1(), p.q0()) +
                      dot(q.q2(), p.q3()) - dot(q.q3(), p.q2());
  const double im_j = dot(q.q0(), p.q2()) + dot(q.q2(), p.q0()) +
                      dot(q.q1(), p.q3()) + dot(q.q3(), p.q1());
  const double im_k = dot(q.q0(), p.q3()) - dot(q.q3(), p.q0()) -
                      dot(q.q1(), p.q2()) + dot(q.q2(), p.q1());
  return RBScalar(re, im_i, im_j, im_k);
}

double re_inner(const RBMatrix& q, const RBMatrix& p) {
  require_same_shape(q, p, "re_inner");
  double s = 0.0;
  for (int b = 0; b < 4; ++b) s += q.block(b).cwiseProduct(p.block(b)).sum();
  return s;
}

double fro_norm(const RBMatrix& q) {
  double s = 0.0;
  for (int b = 0; b < 4; ++b) s += q.block(b).squaredNorm();
  return std::sqrt(s);
}

RBMatrix vec(const RBMatrix& q) {
  std::array<MatrixXd, 4> out;
  for (int b = 0; b < 4; ++b) {
    out[b] = q.block(b).reshaped(q.size(), 1);
  }
  return RBMatrix::from_blocks_unchecked(std::move(out));
}

RBMatrix unvec(const RBMatrix& v, Index rows, Index cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) {
    throw ShapeError("unvec: expected a " + shape_str(rows * cols, 1) +
                     " column, got " + shape_str(v.rows(), v.cols()));
  }
  std::array<MatrixXd, 4> out;
  for (int b = 0; b < 4; ++b) out[b] = v.block(b).reshaped(rows, cols);
  return RBMatrix::from_blocks_unchecked(std::move(out));
}

RBMatrix column(const RBMatrix& q, Index c) {
  if (c < 0 || c >= q.cols()) throw ShapeError("column: index out of range");
  std::array<MatrixXd, 4> out;
  for (int b = 0; b < 4; ++b) out[b] = q.block(b).col(c);
  return RBMatrix::from_blocks_unchecked(std::move(out));
}

RBMatrix hstack(std::span<const RBMatrix> parts) {
  if (parts.empty()) return RBMatrix();
  const Index rows = parts.front().rows();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeError("hstack: row counts differ");
    cols += p.cols();
  }
  std::array<MatrixXd, 4> out;
  for (int b = 0; b < 4; ++b) {
    out[b].resize(rows, cols);
    Index at = 0;
    for (const auto& p : parts) {
      out[b].middleCols(at, p.cols()) = p.block(b);
      at += p.cols();
    }
  }
  return RBMatrix::from_blocks_unchecked(std::move(out));
}

E1E2Matrix to_e1e2(const RBMatrix& q) {
  E1E2Matrix e;
  e.m1.resize(q.rows(), q.cols());
  e.m2.resize(q.rows(), q.cols());
  e.m1.real() = q.q0() + q.q2();
  e.m1.imag() = q.q1() + q.q3();
  e.m2.real() = q.q0() - q.q2();
  e.m2.imag() = q.q1() - q.q3();
  return e;
}

RBMatrix from_e1e2(const E1E2Matrix& e) {
  if (e.m1.rows() != e.m2.rows() || e.m1.cols() != e.m2.cols()) {
    throw ShapeError("from_e1e2: components differ in shape");
  }
  const MatrixXd p_re = e.m1.real(), p_im = e.m1.imag();
  const MatrixXd m_re = e.m2.real(), m_im = e.m2.imag();
  return RBMatrix(0.5 * (p_re + m_re), 0.5 * (p_im + m_im),
                  0.5 * (p_re - m_re), 0.5 * (p_im - m_im));
}

RBMatrix inverse(const RBMatrix& a) {
  require_square(a, "inverse");
  const E1E2Matrix e = to_e1e2(a);
  E1E2Matrix inv;
  for (int comp : {1, 2}) {
    const MatrixXcd& m = comp == 1 ? e.m1 : e.m2;
    Eigen::PartialPivLU<MatrixXcd> lu(m);
    if (has_singular_pivot(lu)) {
      throw SingularComponentError(
          comp, "inverse: component M" + std::to_string(comp) +
                    " is singular");
    }
    (comp == 1 ? inv.m1 : inv.m2) = lu.inverse();
  }
  return from_e1e2(inv);
}

ComponentCond cond(const RBMatrix& a) {
  require_square(a, "cond");
  const E1E2Matrix e = to_e1e2(a);
  return {component_cond(e.m1), component_cond(e.m2)};
}

}  // namespace nrbmf
