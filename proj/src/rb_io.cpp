#include "nrbmf/rb_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "nrbmf/text_format.hpp"

namespace nrbmf {

namespace {

constexpr char kMagic[4] = {'R', 'B', 'M', '1'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  const T le = to_little(v);
  os.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError("RBM1: truncated stream");
  }
  return to_little(v);
}

}  // namespace

void write_rbm(std::ostream& os, const RBMatrix& q) {
  os.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(q.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(q.cols()));
  for (int b = 0; b < 4; ++b) {
    const Eigen::MatrixXd& blk = q.block(b);
    for (Index i = 0; i < blk.size(); ++i) put<double>(os, blk.data()[i]);
  }
  if (!os) throw IoError("RBM1: write failed");
}

RBMatrix read_rbm(std::istream& is) {
  char magic[4];
  if (!is.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("RBM1: bad magic");
  }
  const auto rows = get<std::uint64_t>(is);
  const auto cols = get<std::uint64_t>(is);
  constexpr auto kMaxDim =
      static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max());
  if (rows > kMaxDim || cols > kMaxDim) throw IoError("RBM1: implausible shape");
  std::array<Eigen::MatrixXd, 4> blocks;
  for (auto& blk : blocks) {
    blk.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index i = 0; i < blk.size(); ++i) blk.data()[i] = get<double>(is);
  }
  try {
    return RBMatrix(std::move(blocks[0]), std::move(blocks[1]),
                    std::move(blocks[2]), std::move(blocks[3]));
  } catch (const NonFiniteError& e) {
    throw IoError(std::string("RBM1: ") + e.what());
  }
}

void save_rbm(const std::filesystem::path& path, const RBMatrix& q) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_rbm(os, q);
}

RBMatrix load_rbm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return read_rbm(is);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::array<std::filesystem::path, 4> export_csv(
    const std::filesystem::path& prefix, const RBMatrix& q) {
  std::array<std::filesystem::path, 4> paths;
  for (int b = 0; b < 4; ++b) {
    paths[b] = prefix;
    paths[b] += "_Q" + std::to_string(b) + ".csv";
    std::ofstream os(paths[b], std::ios::trunc);
    if (!os) throw IoError("cannot open " + paths[b].string());
    const Eigen::MatrixXd& blk = q.block(b);
    for (Index r = 0; r < blk.rows(); ++r) {
      for (Index c = 0; c < blk.cols(); ++c) {
        if (c) os << ',';
        os << format_double(blk(r, c));
      }
      os << '\n';
    }
    if (!os) throw IoError("write failed for " + paths[b].string());
  }
  return paths;
}

}  // namespace nrbmf
