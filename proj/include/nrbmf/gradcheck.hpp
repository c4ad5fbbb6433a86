#pragma once

// Central finite-difference check of grad_w and grad_h.

#include <cstdint>

#include "nrbmf/rb_matrix.hpp"

namespace nrbmf {

struct GradCheckResult {
  std::uint64_t seed = 0;
  Index rows = 0;
  Index cols = 0;
  Index rank = 0;
  double error_w = 0.0;  ///< ||G - G_fd||_F / max(||G_fd||_F, 1)
  double error_h = 0.0;
  double max_error() const noexcept {
    return error_w > error_h ? error_w : error_h;
  }
};

/// Random instance with rows in [2, 8], cols in [2, 6], rank in [1, 4] and
/// general (signed) X, W, H. Every real component of W and H is perturbed by
/// +-eps.
GradCheckResult gradient_check(std::uint64_t seed, double eps = 1e-6);

}  // namespace nrbmf
