#pragma once

// Alternating projected-gradient engine shared by the RB solvers and the
// real-valued NMF baseline. A Traits type supplies the matrix type and the
// handful of kernels the iteration needs.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "nrbmf/solver.hpp"

namespace nrbmf::detail {

struct StepPolicy {
  double tol;
  int max_iters;
  double mu;
  double sigma;
  double delta;
  int armijo_cap;
  double step_floor;
  bool warm_start;  // RBIPG-style search when true
};

inline StepPolicy policy_from(const SolverConfig& c, bool warm_start) {
  return {c.tol,   c.max_iters,  c.mu,       c.sigma,
          c.delta, c.armijo_cap, c.step_floor, warm_start};
}

template <class Matrix>
struct EngineResult {
  Matrix W;
  Matrix H;
  std::vector<IterationRecord> history;
  Status status = Status::kMaxIters;
};

template <class Traits>
class AlternatingEngine {
 public:
  using Matrix = typename Traits::Matrix;
  using Observer = std::function<void(const IterationRecord&, const Matrix&,
                                      const Matrix&)>;

  AlternatingEngine(const Matrix& X, const StepPolicy& policy)
      : X_(X), p_(policy) {}

  EngineResult<Matrix> run(Matrix W, Matrix H, const Observer& observer) {
    EngineResult<Matrix> out;
    Matrix prev_product = Traits::product(W, H);
    double alpha = 1.0;
    double beta = 1.0;
    out.status = Status::kMaxIters;

    for (int t = 1; t <= p_.max_iters; ++t) {
      IterationRecord rec;
      rec.iter = t;

      // W update with H fixed.
      const Matrix residual_w = Traits::diff(prev_product, X_);
      const double f_old = half_sq_norm(residual_w);
      const Matrix gw = Traits::grad_w(residual_w, H);
      Search sw = search(W, gw, f_old, alpha, &Traits::project_w,
                         [&](const Matrix& Wt) { return Traits::product(Wt, H); });
      rec.armijo_evals += sw.evals;
      if (!sw.ok) {
        out.status = Status::kStagnated;
        break;
      }
      W = std::move(sw.next);
      alpha = sw.step;
      rec.alpha = alpha;

      // H update with the new W.
      const Matrix residual_h = Traits::diff(sw.product, X_);
      const Matrix gh = Traits::grad_h(W, residual_h);
      Search sh = search(H, gh, sw.f_next, beta, &Traits::project_h,
                         [&](const Matrix& Ht) { return Traits::product(W, Ht); });
      rec.armijo_evals += sh.evals;
      Matrix product;
      if (sh.ok) {
        H = std::move(sh.next);
        beta = sh.step;
        rec.beta = beta;
        product = std::move(sh.product);
      } else {
        rec.beta = 0.0;
        product = std::move(sw.product);
      }

      rec.res = Traits::norm(Traits::diff(X_, product));
      rec.objective = 0.5 * rec.res * rec.res;
      const double num = Traits::norm(Traits::diff(product, prev_product));
      const double den = Traits::norm(prev_product);
      if (den == 0.0) {
        rec.rel_change = num == 0.0 ? 0.0 : INFINITY;
      } else {
        rec.rel_change = num / den;
      }
      out.history.push_back(rec);
      if (observer) observer(rec, W, H);

      if (!sh.ok) {
        out.status = Status::kStagnated;
        break;
      }
      if (rec.rel_change < p_.tol) {
        out.status = Status::kConverged;
        break;
      }
      prev_product = std::move(product);
    }
    out.W = std::move(W);
    out.H = std::move(H);
    return out;
  }

 private:
  struct Search {
    bool ok = false;
    double step = 0.0;
    int evals = 0;
    Matrix next;
    Matrix product;
    double f_next = 0.0;
  };

  static double half_sq_norm(const Matrix& r) {
    const double n = Traits::norm(r);
    return 0.5 * n * n;
  }

  // Armijo search along the projected path V(s) = P(V - s G).
  template <class ProductFn>
  Search search(const Matrix& V, const Matrix& G, double f_old, double start,
                Matrix (*project)(const Matrix&), ProductFn&& product_of) {
    Search s;
    struct Trial {
      Matrix point;
      Matrix product;
      double f;
      bool pass;
    };
    auto try_step = [&](double step) {
      Trial tr;
      tr.point = project(Traits::axpy(V, -step, G));
      tr.product = product_of(tr.point);
      tr.f = half_sq_norm(Traits::diff(X_, tr.product));
      ++s.evals;
      const double decrease_bound =
          p_.sigma * Traits::re_inner(G, Traits::diff(tr.point, V));
      tr.pass = tr.f - f_old <= decrease_bound;
      return tr;
    };
    auto accept = [&](Trial&& tr, double step) {
      s.ok = true;
      s.step = step;
      s.next = std::move(tr.point);
      s.product = std::move(tr.product);
      s.f_next = tr.f;
    };

    if (!p_.warm_start) {
      double step = 1.0;
      for (int d = 0; d <= p_.armijo_cap; ++d, step *= p_.mu) {
        if (step < p_.step_floor) break;
        Trial tr = try_step(step);
        if (tr.pass) {
          accept(std::move(tr), step);
          return s;
        }
      }
      return s;
    }

    double step = start;
    Trial tr = try_step(step);
    if (tr.pass) {
      const double ceiling = 1.0 / p_.step_floor;
      for (int n = 0; n < p_.armijo_cap; ++n) {
        const double bigger = step * p_.delta;
        if (bigger > ceiling) break;
        Trial next = try_step(bigger);
        // Once the projection saturates, growing the step changes nothing.
        if (!next.pass || next.point == tr.point) break;
        step = bigger;
        tr = std::move(next);
      }
      accept(std::move(tr), step);
      return s;
    }
    for (int n = 0; n < p_.armijo_cap; ++n) {
      step /= p_.delta;
      if (step < p_.step_floor) break;
      tr = try_step(step);
      if (tr.pass) {
        accept(std::move(tr), step);
        return s;
      }
    }
    return s;
  }

  const Matrix& X_;
  StepPolicy p_;
};

}  // namespace nrbmf::detail
