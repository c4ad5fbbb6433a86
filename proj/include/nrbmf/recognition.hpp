#pragma once

/**
 * @file recognition.hpp
 * @brief Colour face recognition on top of the NRBMF basis.
 *
 * A face with channels R, G, B becomes the RB matrix
 * (R+G+B)/3 + R i + G j + B k (full) or 0 + R i + G j + B k (pure).
 * Training faces are vectorized into the columns of X, X ~ W H is factorized,
 * and every face t is then encoded by the least-squares solution
 * h = (W^H W)^{-1} W^H t. A test face takes the label of the training face
 * whose encoding has the largest cosine similarity Re<h_k, h> / (|h_k| |h|).
 */

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrbmf/rb_matrix.hpp"
#include "nrbmf/solver.hpp"

namespace nrbmf {

enum class Split { kTrain, kTest };

std::string to_string(Split s);
/// Accepts "train"/"test". Throws ConfigError otherwise.
Split parse_split(const std::string& s);

struct ColorSample {
  std::string label;
  Eigen::MatrixXd red;    ///< rows x cols, entries in [0, 1]
  Eigen::MatrixXd green;
  Eigen::MatrixXd blue;
  Split split = Split::kTrain;
  std::string path;  ///< source file, informational

  Index rows() const noexcept { return red.rows(); }
  Index cols() const noexcept { return red.cols(); }

  /// Throws ShapeError on mismatched channels and ConfigError on values
  /// outside [0, 1].
  void validate() const;
};

RBMatrix encode_face(const ColorSample& sample, Representation mode);

// --- least-squares encodings ------------------------------------------------

enum class EncodingPath { kDirect, kGradientDescent };

struct EncodingOptions {
  double cond_threshold = 1e15;
  double rel_grad_tol = 1e-8;
  int max_iters = 5000;
  double mu = 0.1;
  double sigma = 0.001;
  int armijo_cap = 50;
};

struct Encoding {
  RBMatrix h;  ///< rank x 1
  EncodingPath path = EncodingPath::kDirect;
  int iterations = 0;  ///< gradient-descent iterations, 0 on the direct path
};

/// Least-squares encoder for a fixed basis W. The normal matrix W^H W is
/// inverted once when both complex components have condition number at most
/// cond_threshold; otherwise every encoding falls back to gradient descent on
/// ||t - W h||^2 with Armijo backtracking, started from h = 0.
class Encoder {
 public:
  explicit Encoder(RBMatrix W, EncodingOptions options = {});

  /// t is (W.rows()) x 1. Throws EncodingFailedError when the fallback makes
  /// no progress from h = 0.
  Encoding encode(const RBMatrix& t) const;
  /// Encodes every column of T.
  RBMatrix encode_columns(const RBMatrix& T) const;

  EncodingPath path() const noexcept {
    return normal_inverse_ ? EncodingPath::kDirect
                           : EncodingPath::kGradientDescent;
  }
  const ComponentCond& normal_cond() const noexcept { return cond_; }
  const RBMatrix& basis() const noexcept { return W_; }

 private:
  Encoding descend(const RBMatrix& t) const;

  RBMatrix W_;
  RBMatrix W_herm_;
  EncodingOptions options_;
  ComponentCond cond_{};
  std::optional<RBMatrix> normal_inverse_;
};

Encoding solve_encoding(const RBMatrix& W, const RBMatrix& t,
                        double cond_threshold = 1e15);

// --- gallery and classification ---------------------------------------------

struct Gallery {
  Representation mode = Representation::kFull;
  Index image_rows = 0;
  Index image_cols = 0;
  std::vector<std::string> labels;  ///< one per training column
  RBMatrix X;                       ///< (rows*cols) x K, may be empty when loaded
  RBMatrix W;                       ///< basis, (rows*cols) x rank
  RBMatrix H_factor;                ///< factor from the solver, rank x K
  RBMatrix H_train;                 ///< least-squares encodings, rank x K
  std::vector<IterationRecord> history;
  Status status = Status::kMaxIters;
  std::shared_ptr<const Encoder> encoder;

  Index size() const noexcept { return static_cast<Index>(labels.size()); }
};

/// Factorizes the stacked training faces with config.variant and encodes each
/// of them against the basis. Requires 1 <= rank <= min(rows*cols, K).
Gallery build_gallery(std::span<const ColorSample> samples,
                      const SolverConfig& config,
                      double cond_threshold = 1e15);

/// Re<a, b> / (|a|_F |b|_F). Throws ZeroEncodingError on a zero operand.
double cosine_similarity(const RBMatrix& a, const RBMatrix& b);

struct Prediction {
  std::string label;
  double score = 0.0;  ///< best similarity
  Index index = 0;     ///< training column of the best match
};

/// Arg-max of the cosine similarity over the training encodings; ties go to
/// the lowest training index.
Prediction classify_encoding(const Gallery& gallery, const RBMatrix& h_test);
Prediction classify(const Gallery& gallery, const ColorSample& sample);

struct SampleOutcome {
  std::string path;
  std::string truth;
  std::string predicted;
  double score = 0.0;
};

struct RecognitionReport {
  double accuracy = 0.0;
  std::vector<SampleOutcome> samples;
  /// confusion[truth][predicted] = count
  std::map<std::string, std::map<std::string, int>> confusion;
};

/// Classifies every test sample. When mode is given it must equal the
/// gallery's representation, otherwise ConfigError.
RecognitionReport evaluate(const Gallery& gallery,
                           std::span<const ColorSample> tests,
                           std::optional<Representation> mode = {});

// --- metrics ----------------------------------------------------------------

/// Entries below this count as zero for the sparsity measures.
inline constexpr double kSparsityThreshold = 1e-5;

enum class MethodKind {
  kRb,        ///< NRBMF: real and j blocks of H
  kRealFull,  ///< per-channel NMF over blocks 0..3
  kRealPure,  ///< per-channel NMF over blocks 1..3
};

/// Percentage of encoding entries below kSparsityThreshold.
double compute_sec(const RBMatrix& H, MethodKind kind);
/// Percentage of entries below kSparsityThreshold over all four W blocks.
double compute_basis_sparsity(const RBMatrix& W);
/// ||X - W H||_F for kRb; sqrt(sum_s ||X_s - W_s H_s||^2) over the channel
/// blocks for the per-channel kinds.
double compute_res(const RBMatrix& X, const RBMatrix& W, const RBMatrix& H,
                   MethodKind kind);

}  // namespace nrbmf
