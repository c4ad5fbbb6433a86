#include "nrbmf/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nrbmf {

using Eigen::MatrixXd;

std::string to_string(Split s) { return s == Split::kTrain ? "train" : "test"; }

Split parse_split(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw ConfigError("unknown split '" + s + "' (expected train or test)");
}

void ColorSample::validate() const {
  if (green.rows() != red.rows() || green.cols() != red.cols() ||
      blue.rows() != red.rows() || blue.cols() != red.cols()) {
    throw ShapeError("colour sample '" + path + "': channels differ in shape");
  }
  for (const MatrixXd* ch : {&red, &green, &blue}) {
    if (!ch->allFinite() || (ch->array() < 0.0).any() ||
        (ch->array() > 1.0).any()) {
      throw ConfigError("colour sample '" + path +
                        "': intensities must lie in [0, 1]");
    }
  }
}

RBMatrix encode_face(const ColorSample& sample, Representation mode) {
  sample.validate();
  MatrixXd real = mode == Representation::kFull
                      ? MatrixXd((sample.red + sample.green + sample.blue) / 3.0)
                      : MatrixXd::Zero(sample.rows(), sample.cols());
  return RBMatrix(std::move(real), sample.red, sample.green, sample.blue);
}

// --- Encoder ------------------------------------------------------------------

Encoder::Encoder(RBMatrix W, EncodingOptions options)
    : W_(std::move(W)), W_herm_(hermitian(W_)), options_(options) {
  const RBMatrix normal = multiply(W_herm_, W_);
  cond_ = cond(normal);
  if (cond_.max() <= options_.cond_threshold) {
    try {
      normal_inverse_ = inverse(normal);
    } catch (const SingularComponentError&) {
      normal_inverse_.reset();
    }
  }
}

Encoding Encoder::encode(const RBMatrix& t) const {
  if (t.rows() != W_.rows() || t.cols() != 1) {
    throw ShapeError("encode: expected a column of length " +
                     std::to_string(W_.rows()));
  }
  if (normal_inverse_) {
    return {multiply(*normal_inverse_, multiply(W_herm_, t)),
            EncodingPath::kDirect, 0};
  }
  return descend(t);
}

RBMatrix Encoder::encode_columns(const RBMatrix& T) const {
  if (T.rows() != W_.rows()) {
    throw ShapeError("encode_columns: row count differs from the basis");
  }
  if (normal_inverse_) return multiply(*normal_inverse_, multiply(W_herm_, T));
  std::vector<RBMatrix> cols;
  cols.reserve(static_cast<std::size_t>(T.cols()));
  for (Index c = 0; c < T.cols(); ++c) cols.push_back(descend(column(T, c)).h);
  return hstack(cols);
}

// Gradient descent on phi(h) = 1/2 ||t - W h||^2 with backtracking from a
// unit step: accept the first mu^d with
//   phi(h - a g) - phi(h) <= -sigma a ||g||^2.
Encoding Encoder::descend(const RBMatrix& t) const {
  Encoding out;
  out.path = EncodingPath::kGradientDescent;
  out.h = RBMatrix(W_.cols(), 1);
  const RBMatrix wt = multiply(W_herm_, t);
  const double g0 = fro_norm(wt);
  if (g0 == 0.0) return out;

  auto phi = [&](const RBMatrix& residual) {
    const double n = fro_norm(residual);
    return 0.5 * n * n;
  };
  RBMatrix residual = multiply(W_, out.h) - t;
  double f = phi(residual);
  for (int it = 0; it < options_.max_iters; ++it) {
    const RBMatrix g = multiply(W_herm_, residual);
    const double gnorm = fro_norm(g);
    if (gnorm <= options_.rel_grad_tol * g0) break;

    bool accepted = false;
    double step = 1.0;
    for (int d = 0; d <= options_.armijo_cap; ++d, step *= options_.mu) {
      RBMatrix trial = out.h - step * g;
      if (trial == out.h) break;  // step below the resolution of h
      RBMatrix trial_residual = multiply(W_, trial) - t;
      const double f_trial = phi(trial_residual);
      if (f_trial - f <= -options_.sigma * step * gnorm * gnorm) {
        out.h = std::move(trial);
        residual = std::move(trial_residual);
        f = f_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (out.iterations == 0) {
        throw EncodingFailedError(
            "encoding fallback made no progress from h = 0");
      }
      break;
    }
    ++out.iterations;
  }
  return out;
}

Encoding solve_encoding(const RBMatrix& W, const RBMatrix& t,
                        double cond_threshold) {
  EncodingOptions opts;
  opts.cond_threshold = cond_threshold;
  return Encoder(W, opts).encode(t);
}

// --- gallery ----------------------------------------------------------------

Gallery build_gallery(std::span<const ColorSample> samples,
                      const SolverConfig& config, double cond_threshold) {
  if (samples.empty()) throw ConfigError("build_gallery: no training samples");
  const Index rows = samples.front().rows();
  const Index cols = samples.front().cols();
  std::vector<RBMatrix> columns;
  columns.reserve(samples.size());
  Gallery g;
  g.mode = config.representation;
  g.image_rows = rows;
  g.image_cols = cols;
  for (const auto& s : samples) {
    if (s.rows() != rows || s.cols() != cols) {
      throw ShapeError("build_gallery: sample '" + s.path + "' is " +
                       std::to_string(s.rows()) + "x" +
                       std::to_string(s.cols()) + ", expected " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
    columns.push_back(vec(encode_face(s, g.mode)));
    g.labels.push_back(s.label);
  }
  g.X = hstack(columns);

  config.validate_parameters();
  const Index k = g.X.cols();
  if (config.rank < 1 || config.rank > std::min(g.X.rows(), k)) {
    throw ConfigError("build_gallery: rank must satisfy 1 <= rank <= " +
                      std::to_string(std::min(g.X.rows(), k)));
  }
  auto [W0, H0] = initial_factors(g.X.rows(), k, config);
  FactorizationResult fr = solve_from(g.X, config, std::move(W0), std::move(H0));
  g.W = std::move(fr.W);
  g.H_factor = std::move(fr.H);
  g.history = std::move(fr.history);
  g.status = fr.status;

  EncodingOptions opts;
  opts.cond_threshold = cond_threshold;
  g.encoder = std::make_shared<Encoder>(g.W, opts);
  g.H_train = g.encoder->encode_columns(g.X);
  return g;
}

double cosine_similarity(const RBMatrix& a, const RBMatrix& b) {
  const double na = fro_norm(a);
  const double nb = fro_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw ZeroEncodingError("cosine similarity of a zero encoding");
  }
  return re_inner(a, b) / (na * nb);
}

Prediction classify_encoding(const Gallery& gallery, const RBMatrix& h_test) {
  if (gallery.size() == 0) throw ConfigError("classify: empty gallery");
  if (gallery.H_train.cols() != gallery.size()) {
    throw ShapeError("classify: gallery encodings and labels disagree");
  }
  Prediction best;
  best.score = -INFINITY;
  for (Index k = 0; k < gallery.size(); ++k) {
    const double d = cosine_similarity(column(gallery.H_train, k), h_test);
    if (d > best.score) {
      best.score = d;
      best.index = k;
    }
  }
  best.label = gallery.labels[static_cast<std::size_t>(best.index)];
  return best;
}

Prediction classify(const Gallery& gallery, const ColorSample& sample) {
  if (!gallery.encoder) throw ConfigError("classify: gallery has no encoder");
  if (sample.rows() != gallery.image_rows ||
      sample.cols() != gallery.image_cols) {
    throw ShapeError("classify: sample '" + sample.path +
                     "' does not match the gallery image size");
  }
  const RBMatrix t = vec(encode_face(sample, gallery.mode));
  return classify_encoding(gallery, gallery.encoder->encode(t).h);
}

RecognitionReport evaluate(const Gallery& gallery,
                           std::span<const ColorSample> tests,
                           std::optional<Representation> mode) {
  if (mode && *mode != gallery.mode) {
    throw ConfigError("representation '" + to_string(*mode) +
                      "' differs from the gallery's '" +
                      to_string(gallery.mode) + "'");
  }
  RecognitionReport report;
  std::size_t correct = 0;
  for (const auto& s : tests) {
    const Prediction p = classify(gallery, s);
    report.samples.push_back({s.path, s.label, p.label, p.score});
    ++report.confusion[s.label][p.label];
    if (p.label == s.label) ++correct;
  }
  report.accuracy = tests.empty() ? 0.0
                                  : static_cast<double>(correct) /
                                        static_cast<double>(tests.size());
  return report;
}

// --- metrics ----------------------------------------------------------------

namespace {

std::vector<int> sec_blocks(MethodKind kind) {
  switch (kind) {
    case MethodKind::kRb:
      return {0, 2};
    case MethodKind::kRealFull:
      return {0, 1, 2, 3};
    case MethodKind::kRealPure:
      return {1, 2, 3};
  }
  return {};
}

double percent_below(const RBMatrix& q, const std::vector<int>& blocks) {
  Index below = 0;
  Index total = 0;
  for (int b : blocks) {
    below += (q.block(b).array() < kSparsityThreshold).count();
    total += q.block(b).size();
  }
  return total == 0 ? 0.0
                    : 100.0 * static_cast<double>(below) /
                          static_cast<double>(total);
}

}  // namespace

double compute_sec(const RBMatrix& H, MethodKind kind) {
  return percent_below(H, sec_blocks(kind));
}

double compute_basis_sparsity(const RBMatrix& W) {
  return percent_below(W, {0, 1, 2, 3});
}

double compute_res(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H,
                   MethodKind kind) {
  if (W.cols() != H.rows() || X.rows() != W.rows() || X.cols() != H.cols()) {
    throw ShapeError("compute_res: factor shapes do not conform to X");
  }
  if (kind == MethodKind::kRb) return fro_norm(X - multiply(W, H));
  double sq = 0.0;
  for (int s : sec_blocks(kind)) {
    sq += (X.block(s) - W.block(s) * H.block(s)).squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace nrbmf
