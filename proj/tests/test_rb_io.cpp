#include <doctest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nrbmf/rb_io.hpp"
#include "oracles.hpp"

using namespace nrbmf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nrbmf_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("RBM1 round trip is bit exact") {
  std::mt19937_64 rng(1);
  const RBMatrix q = oracle::random_rb(4, 3, rng, -1e3, 1e3);
  std::stringstream ss;
  write_rbm(ss, q);
  CHECK(read_rbm(ss) == q);

  std::stringstream empty;
  write_rbm(empty, RBMatrix());
  CHECK(read_rbm(empty).size() == 0);
}

TEST_CASE("RBM1 byte layout") {
  Eigen::MatrixXd q0(2, 1), z = Eigen::MatrixXd::Zero(2, 1);
  q0 << 1.0, -2.5;
  std::stringstream ss;
  write_rbm(ss, RBMatrix(q0, z, z, z));
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == 4 + 8 + 8 + 4 * 2 * 8);
  CHECK(bytes.substr(0, 4) == "RBM1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 2);  // rows, little-endian
  for (int i = 5; i < 12; ++i) CHECK(bytes[i] == 0);
  CHECK(static_cast<unsigned char>(bytes[12]) == 1);  // cols
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= std::uint64_t(static_cast<unsigned char>(bytes[20 + 8 + b])) << (8 * b);
  }
  CHECK(std::bit_cast<double>(bits) == -2.5);
}

TEST_CASE("malformed RBM1 input") {
  std::stringstream bad_magic("RBM2xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_rbm(bad_magic), IoError);
  std::mt19937_64 rng(2);
  std::stringstream ss;
  write_rbm(ss, oracle::random_rb(3, 3, rng));
  std::stringstream truncated(ss.str().substr(0, 60));
  CHECK_THROWS_AS(read_rbm(truncated), IoError);
  CHECK_THROWS_AS(load_rbm("/nonexistent/x.rbm"), IoError);
}

TEST_CASE("file save and CSV export") {
  const fs::path dir = temp_dir("files");
  std::mt19937_64 rng(3);
  const RBMatrix q = oracle::random_rb(2, 3, rng);
  save_rbm(dir / "q.rbm", q);
  CHECK(load_rbm(dir / "q.rbm") == q);

  const auto files = export_csv(dir / "q", q);
  for (int b = 0; b < 4; ++b) {
    std::ifstream in(files[static_cast<std::size_t>(b)]);
    REQUIRE(in);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      std::stringstream ls(line);
      std::string cell;
      int c = 0;
      while (std::getline(ls, cell, ',')) {
        CHECK(std::stod(cell) == q.block(b)(rows, c));
        ++c;
      }
      CHECK(c == 3);
      ++rows;
    }
    CHECK(rows == 2);
  }
}
