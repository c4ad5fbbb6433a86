#pragma once

// Real-valued projected-gradient NMF used as the per-channel baseline. It
// shares the warm-started Armijo step policy of solve_rbipg.

#include <Eigen/Dense>
#include <vector>

#include "nrbmf/solver.hpp"

namespace nrbmf {

struct RealNmfResult {
  Eigen::MatrixXd W;
  Eigen::MatrixXd H;
  std::vector<IterationRecord> history;
  Status status = Status::kMaxIters;
};

/// Throws FeasibilityError if X has a negative entry, ConfigError on an
/// invalid config. config.variant is ignored.
RealNmfResult solve_real_nmf(const Eigen::MatrixXd& X,
                             const SolverConfig& config);

/// Independent real NMF of each colour channel of X: blocks 0..3 for the full
/// representation, 1..3 for the pure one. Channel s factors are stored in
/// block s of W and H; unused blocks stay zero.
struct ChannelFactorization {
  RBMatrix W;
  RBMatrix H;
  std::vector<RealNmfResult> channels;  ///< indexed by block
  Representation representation = Representation::kFull;
};

ChannelFactorization factorize_channels(const RBMatrix& X,
                                        const SolverConfig& config,
                                        Representation representation);

}  // namespace nrbmf
