#pragma once

/**
 * @file solver.hpp
 * @brief Non-negative RB matrix factorization X ~ W H.
 *
 * W is constrained to RB+ (all four blocks entrywise >= 0) and H to RB+j
 * (real and j blocks >= 0, i and k blocks zero). Under that structure the
 * product W H is itself non-negative in every block.
 *
 * The objective f(W, H) = 1/2 ||X - W H||_F^2 is minimized by alternating
 * projected gradient steps whose sizes are chosen by an Armijo search:
 *
 *   - RBPG tries mu^0, mu^1, ... afresh each iteration and keeps the first
 *     step that passes.
 *   - RBIPG starts from the previous step. If it passes, the step is grown by
 *     delta while it keeps passing; otherwise it is shrunk by delta until it
 *     passes.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrbmf/rb_matrix.hpp"

namespace nrbmf {

enum class Variant { kRbpg, kRbipg };
enum class Representation { kFull, kPure };
enum class Status { kConverged, kMaxIters, kStagnated };

std::string to_string(Variant v);
std::string to_string(Representation r);
std::string to_string(Status s);
/// Accepts "rbpg"/"rbipg". Throws ConfigError otherwise.
Variant parse_variant(const std::string& s);
/// Accepts "full"/"pure". Throws ConfigError otherwise.
Representation parse_representation(const std::string& s);

struct SolverConfig {
  Index rank = 1;
  double tol = 1e-4;
  int max_iters = 1000;
  double mu = 0.1;
  double sigma = 0.001;
  double delta = 10.0;
  std::uint64_t seed = 0;
  int armijo_cap = 50;
  double step_floor = 1e-20;
  Variant variant = Variant::kRbipg;
  Representation representation = Representation::kFull;

  /// Checks the parameter ranges and 0 < rank < min(rows, cols).
  /// Throws ConfigError.
  void validate(Index rows, Index cols) const;
  /// Parameter ranges only; the rank check is left to the caller.
  void validate_parameters() const;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double res = 0.0;         ///< ||X - W H||_F
  double alpha = 0.0;       ///< accepted W step
  double beta = 0.0;        ///< accepted H step, 0 when the H search failed
  double rel_change = 0.0;  ///< ||W_t H_t - W_{t-1} H_{t-1}|| / ||W_{t-1} H_{t-1}||
  int armijo_evals = 0;     ///< objective evaluations spent in both searches
};

struct FactorizationResult {
  RBMatrix W;
  RBMatrix H;
  std::vector<IterationRecord> history;
  Status status = Status::kMaxIters;

  /// Total objective evaluations spent in step searches.
  long total_armijo_evals() const;
};

/// Invoked synchronously after every iteration with the new iterate.
using IterationObserver = std::function<void(
    const IterationRecord&, const RBMatrix& W, const RBMatrix& H)>;

// --- objective, gradients, projections -------------------------------------

double objective(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H);

/// (W H - X) H^H.
RBMatrix grad_w(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H);
/// W^H (W H - X).
RBMatrix grad_h(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H);

/// Clamps all four blocks at zero.
RBMatrix project_nonneg(const RBMatrix& q);
/// Clamps the real and j blocks at zero and zeroes the i and k blocks.
RBMatrix project_nonneg_j(const RBMatrix& q);

bool is_nonneg(const RBMatrix& q);
bool is_nonneg_j(const RBMatrix& q);

/// f(W_new, H) - f(W_old, H) <= sigma * Re<grad_w(X, W_old, H), W_new - W_old>.
bool armijo_condition_w(const RBMatrix& W_new, const RBMatrix& W_old,
                        const RBMatrix& H, const RBMatrix& X, double sigma);
/// f(W, H_new) - f(W, H_old) <= sigma * Re<grad_h(X, W, H_old), H_new - H_old>.
bool armijo_condition_h(const RBMatrix& H_new, const RBMatrix& H_old,
                        const RBMatrix& W, const RBMatrix& X, double sigma);

// --- solvers ----------------------------------------------------------------

/// Random feasible starting point: every W block and the real and j blocks
/// of H drawn from Uniform[0, 1) with a generator seeded by config.seed.
std::pair<RBMatrix, RBMatrix> initial_factors(Index rows, Index cols,
                                              const SolverConfig& config);

FactorizationResult solve_rbpg(const RBMatrix& X, const SolverConfig& config,
                               const IterationObserver& observer = {});
FactorizationResult solve_rbipg(const RBMatrix& X, const SolverConfig& config,
                                const IterationObserver& observer = {});
/// Dispatches on config.variant.
FactorizationResult solve(const RBMatrix& X, const SolverConfig& config,
                          const IterationObserver& observer = {});

/// Runs config.variant from the given feasible starting point. Only the
/// parameter ranges of config are validated; the rank is taken from W0.
/// Throws FeasibilityError unless X, W0 and H0 are non-negative with H0 in
/// RB+j.
FactorizationResult solve_from(const RBMatrix& X, const SolverConfig& config,
                               RBMatrix W0, RBMatrix H0,
                               const IterationObserver& observer = {});

/// Worst violation of the first-order stationarity system: the most negative
/// gradient entry over the W blocks and the real/j blocks of the H gradient,
/// and the largest |factor * gradient| complementarity product over the same
/// blocks. Throws FeasibilityError if W or H is infeasible.
double kkt_residual(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H);

}  // namespace nrbmf
