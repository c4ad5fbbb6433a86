#include "nrbmf/real_nmf.hpp"

#include <random>

#include "alternating_pg.hpp"

namespace nrbmf {

using Eigen::MatrixXd;

namespace {

struct RealTraits {
  using Matrix = MatrixXd;
  static MatrixXd product(const MatrixXd& W, const MatrixXd& H) {
    return W * H;
  }
  static MatrixXd diff(const MatrixXd& a, const MatrixXd& b) { return a - b; }
  static MatrixXd grad_w(const MatrixXd& residual, const MatrixXd& H) {
    return residual * H.transpose();
  }
  static MatrixXd grad_h(const MatrixXd& W, const MatrixXd& residual) {
    return W.transpose() * residual;
  }
  static MatrixXd project_w(const MatrixXd& m) { return m.cwiseMax(0.0); }
  static MatrixXd project_h(const MatrixXd& m) { return m.cwiseMax(0.0); }
  static MatrixXd axpy(const MatrixXd& v, double a, const MatrixXd& g) {
    return v + a * g;
  }
  static double re_inner(const MatrixXd& a, const MatrixXd& b) {
    return a.cwiseProduct(b).sum();
  }
  static double norm(const MatrixXd& a) { return a.norm(); }
};

MatrixXd uniform_block(Index rows, Index cols, std::mt19937_64& rng) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return m;
}

}  // namespace

RealNmfResult solve_real_nmf(const MatrixXd& X, const SolverConfig& config) {
  config.validate(X.rows(), X.cols());
  if (!X.allFinite()) throw NonFiniteError("real NMF input has non-finite entries");
  if ((X.array() < 0.0).any()) {
    throw FeasibilityError("real NMF input has negative entries");
  }
  std::mt19937_64 rng(config.seed);
  MatrixXd W0 = uniform_block(X.rows(), config.rank, rng);
  MatrixXd H0 = uniform_block(config.rank, X.cols(), rng);

  detail::AlternatingEngine<RealTraits> engine(
      X, detail::policy_from(config, /*warm_start=*/true));
  auto run = engine.run(std::move(W0), std::move(H0), {});
  return {std::move(run.W), std::move(run.H), std::move(run.history),
          run.status};
}

ChannelFactorization factorize_channels(const RBMatrix& X,
                                        const SolverConfig& config,
                                        Representation representation) {
  ChannelFactorization out;
  out.representation = representation;
  out.channels.resize(4);
  std::array<MatrixXd, 4> w, h;
  const int first = representation == Representation::kFull ? 0 : 1;
  for (int s = 0; s < 4; ++s) {
    if (s < first) {
      w[s] = MatrixXd::Zero(X.rows(), config.rank);
      h[s] = MatrixXd::Zero(config.rank, X.cols());
      continue;
    }
    out.channels[s] = solve_real_nmf(X.block(s), config);
    w[s] = out.channels[s].W;
    h[s] = out.channels[s].H;
  }
  out.W = RBMatrix(std::move(w[0]), std::move(w[1]), std::move(w[2]),
                   std::move(w[3]));
  out.H = RBMatrix(std::move(h[0]), std::move(h[1]), std::move(h[2]),
                   std::move(h[3]));
  return out;
}

}  // namespace nrbmf
