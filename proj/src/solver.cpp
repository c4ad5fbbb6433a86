#include "nrbmf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "alternating_pg.hpp"

namespace nrbmf {

using Eigen::MatrixXd;

namespace {

struct RBTraits {
  using Matrix = RBMatrix;
  static RBMatrix product(const RBMatrix& W, const RBMatrix& H) {
    return multiply(W, H);
  }
  static RBMatrix diff(const RBMatrix& a, const RBMatrix& b) { return a - b; }
  static RBMatrix grad_w(const RBMatrix& residual, const RBMatrix& H) {
    return multiply(residual, hermitian(H));
  }
  static RBMatrix grad_h(const RBMatrix& W, const RBMatrix& residual) {
    return multiply(hermitian(W), residual);
  }
  static RBMatrix project_w(const RBMatrix& q) { return project_nonneg(q); }
  static RBMatrix project_h(const RBMatrix& q) { return project_nonneg_j(q); }
  static RBMatrix axpy(const RBMatrix& v, double a, const RBMatrix& g) {
    return RBMatrix::from_blocks_unchecked(
        {v.q0() + a * g.q0(), v.q1() + a * g.q1(), v.q2() + a * g.q2(),
         v.q3() + a * g.q3()});
  }
  static double re_inner(const RBMatrix& a, const RBMatrix& b) {
    return nrbmf::re_inner(a, b);
  }
  static double norm(const RBMatrix& a) { return fro_norm(a); }
};

void require_product_shapes(const RBMatrix& X, const RBMatrix& W,
                            const RBMatrix& H) {
  if (W.cols() != H.rows() || X.rows() != W.rows() || X.cols() != H.cols()) {
    throw ShapeError("factor shapes do not conform to X");
  }
}

MatrixXd uniform_block(Index rows, Index cols, std::mt19937_64& rng) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return m;
}

}  // namespace

std::string to_string(Variant v) {
  return v == Variant::kRbpg ? "rbpg" : "rbipg";
}

std::string to_string(Representation r) {
  return r == Representation::kFull ? "full" : "pure";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kConverged:
      return "converged";
    case Status::kMaxIters:
      return "max_iters";
    case Status::kStagnated:
      return "stagnated";
  }
  return "unknown";
}

Variant parse_variant(const std::string& s) {
  if (s == "rbpg") return Variant::kRbpg;
  if (s == "rbipg") return Variant::kRbipg;
  throw ConfigError("unknown variant '" + s + "' (expected rbpg or rbipg)");
}

Representation parse_representation(const std::string& s) {
  if (s == "full") return Representation::kFull;
  if (s == "pure") return Representation::kPure;
  throw ConfigError("unknown representation '" + s +
                    "' (expected full or pure)");
}

void SolverConfig::validate_parameters() const {
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw ConfigError("sigma must lie in (0, 1)");
  }
  if (!(delta > 1.0) || !std::isfinite(delta)) {
    throw ConfigError("delta must be > 1");
  }
  if (armijo_cap < 1) throw ConfigError("armijo_cap must be >= 1");
  if (!(step_floor > 0.0 && step_floor < 1.0)) {
    throw ConfigError("step_floor must lie in (0, 1)");
  }
}

void SolverConfig::validate(Index rows, Index cols) const {
  validate_parameters();
  if (rank <= 0 || rank >= std::min(rows, cols)) {
    throw ConfigError("rank must satisfy 0 < rank < min(rows, cols) = " +
                      std::to_string(std::min(rows, cols)));
  }
}

long FactorizationResult::total_armijo_evals() const {
  long n = 0;
  for (const auto& r : history) n += r.armijo_evals;
  return n;
}

double objective(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H) {
  require_product_shapes(X, W, H);
  const double r = fro_norm(X - multiply(W, H));
  return 0.5 * r * r;
}

RBMatrix grad_w(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H) {
  require_product_shapes(X, W, H);
  return multiply(multiply(W, H) - X, hermitian(H));
}

RBMatrix grad_h(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H) {
  require_product_shapes(X, W, H);
  return multiply(hermitian(W), multiply(W, H) - X);
}

RBMatrix project_nonneg(const RBMatrix& q) {
  return RBMatrix::from_blocks_unchecked(
      {q.q0().cwiseMax(0.0), q.q1().cwiseMax(0.0), q.q2().cwiseMax(0.0),
       q.q3().cwiseMax(0.0)});
}

RBMatrix project_nonneg_j(const RBMatrix& q) {
  const MatrixXd zero = MatrixXd::Zero(q.rows(), q.cols());
  return RBMatrix::from_blocks_unchecked(
      {q.q0().cwiseMax(0.0), zero, q.q2().cwiseMax(0.0), zero});
}

bool is_nonneg(const RBMatrix& q) {
  for (int b = 0; b < 4; ++b) {
    if ((q.block(b).array() < 0.0).any()) return false;
  }
  return true;
}

bool is_nonneg_j(const RBMatrix& q) {
  return q.is_j_structured() && (q.q0().array() >= 0.0).all() &&
         (q.q2().array() >= 0.0).all();
}

bool armijo_condition_w(const RBMatrix& W_new, const RBMatrix& W_old,
                        const RBMatrix& H, const RBMatrix& X, double sigma) {
  const double lhs = objective(X, W_new, H) - objective(X, W_old, H);
  const double rhs = sigma * re_inner(grad_w(X, W_old, H), W_new - W_old);
  return lhs <= rhs;
}

bool armijo_condition_h(const RBMatrix& H_new, const RBMatrix& H_old,
                        const RBMatrix& W, const RBMatrix& X, double sigma) {
  const double lhs = objective(X, W, H_new) - objective(X, W, H_old);
  const double rhs = sigma * re_inner(grad_h(X, W, H_old), H_new - H_old);
  return lhs <= rhs;
}

std::pair<RBMatrix, RBMatrix> initial_factors(Index rows, Index cols,
                                              const SolverConfig& config) {
  std::mt19937_64 rng(config.seed);
  const Index l = config.rank;
  MatrixXd w0 = uniform_block(rows, l, rng);
  MatrixXd w1 = uniform_block(rows, l, rng);
  MatrixXd w2 = uniform_block(rows, l, rng);
  MatrixXd w3 = uniform_block(rows, l, rng);
  MatrixXd h0 = uniform_block(l, cols, rng);
  MatrixXd h2 = uniform_block(l, cols, rng);
  const MatrixXd hz = MatrixXd::Zero(l, cols);
  return {RBMatrix(std::move(w0), std::move(w1), std::move(w2), std::move(w3)),
          RBMatrix(std::move(h0), hz, std::move(h2), hz)};
}

FactorizationResult solve_from(const RBMatrix& X, const SolverConfig& config,
                               RBMatrix W0, RBMatrix H0,
                               const IterationObserver& observer) {
  config.validate_parameters();
  require_product_shapes(X, W0, H0);
  if (!is_nonneg(X)) throw FeasibilityError("X is not in RB+");
  if (!is_nonneg(W0)) throw FeasibilityError("initial W is not in RB+");
  if (!is_nonneg_j(H0)) throw FeasibilityError("initial H is not in RB+j");

  detail::AlternatingEngine<RBTraits> engine(
      X, detail::policy_from(config, config.variant == Variant::kRbipg));
  auto run = engine.run(std::move(W0), std::move(H0), observer);
  FactorizationResult out;
  out.W = std::move(run.W);
  out.H = std::move(run.H);
  out.history = std::move(run.history);
  out.status = run.status;
  return out;
}

FactorizationResult solve(const RBMatrix& X, const SolverConfig& config,
                          const IterationObserver& observer) {
  config.validate(X.rows(), X.cols());
  auto [W0, H0] = initial_factors(X.rows(), X.cols(), config);
  return solve_from(X, config, std::move(W0), std::move(H0), observer);
}

FactorizationResult solve_rbpg(const RBMatrix& X, const SolverConfig& config,
                               const IterationObserver& observer) {
  SolverConfig c = config;
  c.variant = Variant::kRbpg;
  return solve(X, c, observer);
}

FactorizationResult solve_rbipg(const RBMatrix& X, const SolverConfig& config,
                                const IterationObserver& observer) {
  SolverConfig c = config;
  c.variant = Variant::kRbipg;
  return solve(X, c, observer);
}

double kkt_residual(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H) {
  require_product_shapes(X, W, H);
  if (!is_nonneg(W)) throw FeasibilityError("kkt_residual: W is not in RB+");
  if (!is_nonneg_j(H)) throw FeasibilityError("kkt_residual: H is not in RB+j");
  const RBMatrix residual = multiply(W, H) - X;
  const RBMatrix gw = multiply(residual, hermitian(H));
  const RBMatrix gh = multiply(hermitian(W), residual);

  double worst = 0.0;
  auto visit = [&](const MatrixXd& factor, const MatrixXd& grad) {
    if (grad.size() == 0) return;
    worst = std::max(worst, -grad.minCoeff());
    worst = std::max(worst, factor.cwiseProduct(grad).cwiseAbs().maxCoeff());
  };
  for (int b = 0; b < 4; ++b) visit(W.block(b), gw.block(b));
  visit(H.q0(), gh.q0());
  visit(H.q2(), gh.q2());
  return worst;
}

}  // namespace nrbmf
