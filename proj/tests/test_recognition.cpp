#include <doctest.h>

#include <random>

#include "nrbmf/recognition.hpp"
#include "nrbmf/synthetic.hpp"
#include "oracles.hpp"

using namespace nrbmf;
using Eigen::MatrixXd;

namespace {

ColorSample pixel(double r, double g, double b, const std::string& label = "x") {
  ColorSample s;
  s.label = label;
  s.red = MatrixXd::Constant(1, 1, r);
  s.green = MatrixXd::Constant(1, 1, g);
  s.blue = MatrixXd::Constant(1, 1, b);
  return s;
}

RBMatrix scalar(double q0, double q1 = 0, double q2 = 0, double q3 = 0) {
  return RBMatrix(MatrixXd::Constant(1, 1, q0), MatrixXd::Constant(1, 1, q1),
                  MatrixXd::Constant(1, 1, q2), MatrixXd::Constant(1, 1, q3));
}

SolverConfig rank(Index l, Representation mode = Representation::kFull) {
  SolverConfig c;
  c.rank = l;
  c.representation = mode;
  return c;
}

}  // namespace

TEST_CASE("face encoding") {
  CHECK(encode_face(pixel(1, 1, 1), Representation::kFull) == scalar(1, 1, 1, 1));
  const RBMatrix red = encode_face(pixel(1, 0, 0), Representation::kFull);
  CHECK(red.q0()(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(red.q1()(0, 0) == 1.0);
  CHECK(red.q2()(0, 0) == 0.0);

  TwoClusterOptions o;
  o.seed = 3;
  const auto corpus = two_cluster_corpus(o);
  for (const auto& s : corpus.samples) {
    const RBMatrix full = encode_face(s, Representation::kFull);
    CHECK(full.q0() == (full.q1() + full.q2() + full.q3()) / 3.0);
    const RBMatrix pure = encode_face(s, Representation::kPure);
    CHECK(pure.q0().norm() == 0.0);
    CHECK(pure.q3() == s.blue);
  }

  ColorSample bad = pixel(0.5, 0.5, 1.5);
  CHECK_THROWS_AS(encode_face(bad, Representation::kFull), ConfigError);
  bad = pixel(0.5, 0.5, 0.5);
  bad.green = MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(encode_face(bad, Representation::kFull), ShapeError);
}

TEST_CASE("least-squares encodings") {
  std::mt19937_64 rng(1);
  const RBMatrix w = oracle::random_nonneg(30, 4, rng);
  const RBMatrix h_true = oracle::random_rb(4, 1, rng);
  const RBMatrix t = multiply(w, h_true);
  const Encoding e = solve_encoding(w, t);
  CHECK(e.path == EncodingPath::kDirect);
  CHECK(fro_norm(e.h - h_true) <= 1e-8 * fro_norm(h_true));

  const Encoding zero = solve_encoding(w, RBMatrix(30, 1));
  CHECK(fro_norm(zero.h) == 0.0);
  CHECK_THROWS_AS(solve_encoding(w, RBMatrix(29, 1)), ShapeError);

  // forcing the fallback on the same well-posed system
  const Encoding gd = solve_encoding(w, t, 1.0);
  CHECK(gd.path == EncodingPath::kGradientDescent);
  CHECK(gd.iterations > 0);
  CHECK(fro_norm(t - multiply(w, gd.h)) <= 1e-6 * fro_norm(t));
}

TEST_CASE("singular basis falls back to gradient descent") {
  std::mt19937_64 rng(2);
  const RBMatrix w_good = oracle::random_nonneg(20, 3, rng);
  const RBMatrix h_sub = oracle::random_rb(3, 1, rng);
  const RBMatrix t = multiply(w_good, h_sub);
  const RBMatrix zero_col(20, 1);
  const RBMatrix parts[] = {column(w_good, 0), zero_col, column(w_good, 1),
                            column(w_good, 2)};
  const RBMatrix w = hstack(parts);

  const Encoder enc(w);
  CHECK(enc.path() == EncodingPath::kGradientDescent);
  CHECK(enc.normal_cond().max() > 1e15);
  const Encoding e = enc.encode(t);
  const double direct_res = fro_norm(t - multiply(w_good, solve_encoding(w_good, t).h));
  CHECK(fro_norm(t - multiply(w, e.h)) <= direct_res + 1e-6 * fro_norm(t));
  // the zero column receives no gradient and stays at its start value
  CHECK(modulus(e.h(1, 0)) == 0.0);
}

TEST_CASE("cosine similarity") {
  std::mt19937_64 rng(3);
  const RBMatrix h = oracle::random_rb(5, 1, rng);
  CHECK(cosine_similarity(h, h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(h, 2.0 * h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(scalar(1), scalar(0, 1)) == 0.0);
  CHECK(cosine_similarity(h, -1.0 * h) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cosine_similarity(h, RBMatrix(5, 1)), ZeroEncodingError);
}

TEST_CASE("gallery construction") {
  const ColorSample one = pixel(0.2, 0.6, 0.9, "solo");
  const ColorSample samples1[] = {one};
  const Gallery g1 = build_gallery(samples1, rank(1));
  CHECK(g1.size() == 1);
  CHECK(g1.X.cols() == 1);
  CHECK(g1.W.cols() == 1);
  CHECK(classify(g1, pixel(0.9, 0.1, 0.1)).label == "solo");

  TwoClusterOptions o;
  o.seed = 4;
  const auto corpus = two_cluster_corpus(o);
  const auto train = corpus.split(Split::kTrain);
  const Gallery g = build_gallery(train, rank(2));
  CHECK(g.W.cols() == 2);
  CHECK(g.H_train.rows() == 2);
  CHECK(g.H_train.cols() == 10);
  for (Index k = 0; k < g.size(); ++k) {
    CHECK(column(g.X, k) ==
          vec(encode_face(train[static_cast<std::size_t>(k)], g.mode)));
  }
  CHECK(oracle::rel_diff(g.H_train, g.encoder->encode_columns(g.X)) == 0.0);
  CHECK_FALSE(g.H_train == g.H_factor);

  auto mixed = train;
  mixed[3].red = MatrixXd::Zero(9, 8);
  mixed[3].green = MatrixXd::Zero(9, 8);
  mixed[3].blue = MatrixXd::Zero(9, 8);
  CHECK_THROWS_AS(build_gallery(mixed, rank(2)), ShapeError);
  CHECK_THROWS_AS(build_gallery(train, rank(11)), ConfigError);
  CHECK_THROWS_AS(build_gallery(std::vector<ColorSample>{}, rank(1)), ConfigError);
}

TEST_CASE("classification") {
  TwoClusterOptions o;
  o.seed = 5;
  const auto corpus = two_cluster_corpus(o);
  CHECK(corpus.separation_ratio >= 5.0);
  const auto train = corpus.split(Split::kTrain);
  const auto test = corpus.split(Split::kTest);
  for (Representation mode : {Representation::kFull, Representation::kPure}) {
    const Gallery g = build_gallery(train, rank(2, mode));
    const auto report = evaluate(g, test);
    CHECK(test.size() == 40);
    CHECK(report.accuracy >= 0.9);
    const auto self = evaluate(g, train);
    CHECK(self.accuracy == 1.0);
    for (std::size_t k = 0; k < train.size(); ++k) {
      CHECK(classify(g, train[k]).index == static_cast<Index>(k));
    }
    int total = 0;
    for (const auto& [truth, row] : report.confusion) {
      for (const auto& [pred, n] : row) total += n;
    }
    CHECK(total == 40);
  }

  const Gallery g = build_gallery(train, rank(2));
  CHECK_THROWS_AS(evaluate(g, test, Representation::kPure), ConfigError);

  // rescaling one stored encoding leaves every prediction unchanged
  Gallery scaled = g;
  std::vector<RBMatrix> cols;
  for (Index k = 0; k < g.size(); ++k) {
    cols.push_back(k == 3 ? 7.0 * column(g.H_train, k) : column(g.H_train, k));
  }
  scaled.H_train = hstack(cols);
  for (const auto& s : test) {
    CHECK(classify(scaled, s).label == classify(g, s).label);
    CHECK(classify(scaled, s).index == classify(g, s).index);
  }
}

TEST_CASE("ties go to the lowest training index") {
  Gallery g;
  g.labels = {"first", "second"};
  const RBMatrix cols[] = {scalar(1, 0, 1), scalar(2, 0, 2)};
  g.H_train = hstack(cols);
  const Prediction p = classify_encoding(g, scalar(3, 0, 3));
  CHECK(p.label == "first");
  CHECK(p.index == 0);
}

TEST_CASE("sparsity measures") {
  CHECK(compute_sec(RBMatrix(3, 4), MethodKind::kRb) == 100.0);
  const RBMatrix ones(MatrixXd::Ones(2, 3), MatrixXd::Zero(2, 3),
                      MatrixXd::Ones(2, 3), MatrixXd::Zero(2, 3));
  CHECK(compute_sec(ones, MethodKind::kRb) == 0.0);
  MatrixXd q0(2, 2), q2(2, 2);
  q0 << 0, 1, 0, 1;
  q2 << 1, 1, 0, 0;
  const RBMatrix h(q0, MatrixXd::Zero(2, 2), q2, MatrixXd::Zero(2, 2));
  CHECK(compute_sec(h, MethodKind::kRb) == 50.0);

  std::mt19937_64 rng(6);
  std::bernoulli_distribution sparse(0.4);
  for (int t = 0; t < 50; ++t) {
    RBMatrix w = oracle::random_nonneg(7, 3, rng);
    RBMatrix hh = oracle::random_nonneg(3, 5, rng);
    auto thin = [&](const RBMatrix& q) {
      std::array<MatrixXd, 4> b{q.q0(), q.q1(), q.q2(), q.q3()};
      for (auto& m : b) {
        for (Index i = 0; i < m.size(); ++i) {
          if (sparse(rng)) m.data()[i] *= 1e-6;
        }
      }
      return RBMatrix(b[0], b[1], b[2], b[3]);
    };
    w = thin(w);
    hh = thin(hh);
    CHECK(compute_basis_sparsity(w) == oracle::brute_percent_below(w, {0, 1, 2, 3}));
    CHECK(compute_sec(hh, MethodKind::kRb) == oracle::brute_percent_below(hh, {0, 2}));
    CHECK(compute_sec(hh, MethodKind::kRealFull) ==
          oracle::brute_percent_below(hh, {0, 1, 2, 3}));
    CHECK(compute_sec(hh, MethodKind::kRealPure) ==
          oracle::brute_percent_below(hh, {1, 2, 3}));
  }
}

TEST_CASE("reconstruction residual") {
  std::mt19937_64 rng(7);
  const RBMatrix w = oracle::random_nonneg(6, 2, rng);
  const RBMatrix h = oracle::random_nonneg_j(2, 4, rng);
  CHECK(compute_res(multiply(w, h), w, h, MethodKind::kRb) == 0.0);
  CHECK(compute_res(scalar(2), scalar(1), scalar(1), MethodKind::kRb) == 1.0);
  CHECK_THROWS_AS(compute_res(scalar(2), w, h, MethodKind::kRb), ShapeError);

  // With a real-only H, every RB product block is W_s H_0, which is the
  // per-channel product when every channel shares the encoding H_0.
  const RBMatrix x = oracle::random_nonneg(6, 4, rng);
  const MatrixXd h0 = h.q0();
  const RBMatrix h_real(h0, MatrixXd::Zero(2, 4), MatrixXd::Zero(2, 4),
                        MatrixXd::Zero(2, 4));
  const RBMatrix h_shared(h0, h0, h0, h0);
  CHECK(compute_res(x, w, h_shared, MethodKind::kRealFull) ==
        doctest::Approx(compute_res(x, w, h_real, MethodKind::kRb)).epsilon(1e-14));
}
