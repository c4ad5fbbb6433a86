#pragma once

// Seeded synthetic inputs: exact non-negative RB products and a two-cluster
// colour corpus.

#include <cstdint>
#include <vector>

#include "nrbmf/recognition.hpp"

namespace nrbmf {

/// X = W H with every W block and the real and j blocks of H drawn from
/// Uniform[0, 1). The generator stream is independent of initial_factors, so
/// a solver run with the same seed does not start at the ground truth.
struct SyntheticProduct {
  RBMatrix W;
  RBMatrix H;
  RBMatrix X;
};

SyntheticProduct synthetic_product(Index rows, Index cols, Index rank,
                                   std::uint64_t seed);

struct TwoClusterOptions {
  Index rows = 8;
  Index cols = 8;
  int train_per_class = 5;
  int test_per_class = 20;
  double noise = 0.02;  ///< per-pixel uniform amplitude
  std::uint64_t seed = 0;
};

struct TwoClusterCorpus {
  /// Training samples first (class "a" then "b"), then test samples.
  std::vector<ColorSample> samples;
  /// ||center_a - center_b||_F over the largest ||sample - its center||_F.
  double separation_ratio = 0.0;

  std::vector<ColorSample> split(Split s) const;
};

/// Two random prototype faces with channels in [0.1, 0.9] plus bounded
/// uniform noise. Values are rounded to multiples of 1/255 so the corpus
/// survives an 8-bit round trip unchanged.
TwoClusterCorpus two_cluster_corpus(const TwoClusterOptions& options);

}  // namespace nrbmf
