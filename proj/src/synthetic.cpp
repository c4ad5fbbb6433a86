#include "nrbmf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nrbmf {

using Eigen::MatrixXd;

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

MatrixXd uniform_block(Index rows, Index cols, std::mt19937_64& rng,
                       double lo = 0.0, double hi = 1.0) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = lo + (hi - lo) * uniform01(rng);
  }
  return m;
}

double quantize(double v) {
  return std::lround(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
}

}  // namespace

SyntheticProduct synthetic_product(Index rows, Index cols, Index rank,
                                   std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seq);
  SyntheticProduct p;
  std::array<MatrixXd, 4> w;
  for (auto& b : w) b = uniform_block(rows, rank, rng);
  MatrixXd h0 = uniform_block(rank, cols, rng);
  MatrixXd h2 = uniform_block(rank, cols, rng);
  p.W = RBMatrix(w[0], w[1], w[2], w[3]);
  p.H = RBMatrix(h0, MatrixXd::Zero(rank, cols), h2,
                 MatrixXd::Zero(rank, cols));
  p.X = multiply(p.W, p.H);
  return p;
}

std::vector<ColorSample> TwoClusterCorpus::split(Split s) const {
  std::vector<ColorSample> out;
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
               [s](const ColorSample& c) { return c.split == s; });
  return out;
}

TwoClusterCorpus two_cluster_corpus(const TwoClusterOptions& o) {
  if (o.rows < 1 || o.cols < 1 || o.train_per_class < 1 ||
      o.test_per_class < 0 || !(o.noise >= 0.0 && o.noise <= 0.1)) {
    throw ConfigError("two_cluster_corpus: invalid options");
  }
  std::mt19937_64 rng(o.seed);
  struct Center {
    std::string label;
    std::array<MatrixXd, 3> rgb;
  };
  std::array<Center, 2> centers{Center{"a", {}}, Center{"b", {}}};
  for (auto& c : centers) {
    for (auto& ch : c.rgb) ch = uniform_block(o.rows, o.cols, rng, 0.1, 0.9);
  }

  TwoClusterCorpus corpus;
  double worst_noise = 0.0;
  auto draw = [&](const Center& c, Split split, int index) {
    ColorSample s;
    s.label = c.label;
    s.split = split;
    s.path = c.label + "_" + to_string(split) + "_" + std::to_string(index) +
             ".png";
    std::array<MatrixXd*, 3> dst{&s.red, &s.green, &s.blue};
    double sq = 0.0;
    for (int k = 0; k < 3; ++k) {
      MatrixXd noise = uniform_block(o.rows, o.cols, rng, -o.noise, o.noise);
      *dst[k] = (c.rgb[k] + noise).unaryExpr(&quantize);
      sq += (*dst[k] - c.rgb[k]).squaredNorm();
    }
    worst_noise = std::max(worst_noise, std::sqrt(sq));
    corpus.samples.push_back(std::move(s));
  };
  for (const auto& c : centers) {
    for (int i = 0; i < o.train_per_class; ++i) draw(c, Split::kTrain, i);
  }
  for (const auto& c : centers) {
    for (int i = 0; i < o.test_per_class; ++i) draw(c, Split::kTest, i);
  }

  double sep = 0.0;
  for (int k = 0; k < 3; ++k) {
    sep += (centers[0].rgb[k] - centers[1].rgb[k]).squaredNorm();
  }
  corpus.separation_ratio =
      worst_noise > 0.0 ? std::sqrt(sep) / worst_noise : INFINITY;
  return corpus;
}

}  // namespace nrbmf
