#include "nrbmf/gradcheck.hpp"

#include <algorithm>
#include <random>

#include "nrbmf/solver.hpp"

namespace nrbmf {

using Eigen::MatrixXd;

namespace {

RBMatrix random_signed(Index rows, Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<MatrixXd, 4> b;
  for (auto& m : b) m = MatrixXd::NullaryExpr(rows, cols, [&] { return u(rng); });
  return RBMatrix(b[0], b[1], b[2], b[3]);
}

RBMatrix with_entry(const RBMatrix& q, int block, Index idx, double value) {
  std::array<MatrixXd, 4> b{q.q0(), q.q1(), q.q2(), q.q3()};
  b[block].data()[idx] = value;
  return RBMatrix(b[0], b[1], b[2], b[3]);
}

template <typename F>
RBMatrix central_difference(const RBMatrix& at, double eps, F f) {
  std::array<MatrixXd, 4> g;
  for (int b = 0; b < 4; ++b) {
    g[b].resize(at.rows(), at.cols());
    for (Index i = 0; i < at.size(); ++i) {
      const double v = at.block(b).data()[i];
      const double fp = f(with_entry(at, b, i, v + eps));
      const double fm = f(with_entry(at, b, i, v - eps));
      g[b].data()[i] = (fp - fm) / (2.0 * eps);
    }
  }
  return RBMatrix(g[0], g[1], g[2], g[3]);
}

double rel_error(const RBMatrix& analytic, const RBMatrix& numeric) {
  return fro_norm(analytic - numeric) / std::max(fro_norm(numeric), 1.0);
}

}  // namespace

GradCheckResult gradient_check(std::uint64_t seed, double eps) {
  if (!(eps > 0.0)) throw ConfigError("gradient_check: eps must be positive");
  std::mt19937_64 rng(seed);
  GradCheckResult r;
  r.seed = seed;
  r.rows = std::uniform_int_distribution<Index>(2, 8)(rng);
  r.cols = std::uniform_int_distribution<Index>(2, 6)(rng);
  r.rank = std::uniform_int_distribution<Index>(1, 4)(rng);
  const RBMatrix X = random_signed(r.rows, r.cols, rng);
  const RBMatrix W = random_signed(r.rows, r.rank, rng);
  const RBMatrix H = random_signed(r.rank, r.cols, rng);

  const RBMatrix fd_w = central_difference(
      W, eps, [&](const RBMatrix& w) { return objective(X, w, H); });
  const RBMatrix fd_h = central_difference(
      H, eps, [&](const RBMatrix& h) { return objective(X, W, h); });
  r.error_w = rel_error(grad_w(X, W, H), fd_w);
  r.error_h = rel_error(grad_h(X, W, H), fd_h);
  return r;
}

}  // namespace nrbmf
