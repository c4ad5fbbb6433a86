#pragma once

/**
 * @file rb_io.hpp
 * @brief RBM1 container and CSV export for RB matrices.
 *
 * RBM1 layout (all little-endian):
 *   bytes 0..3   magic "RBM1"
 *   bytes 4..11  rows, uint64
 *   bytes 12..19 cols, uint64
 *   then Q0, Q1, Q2, Q3, each rows*cols float64 in column-major order.
 */

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "nrbmf/rb_matrix.hpp"

namespace nrbmf {

void write_rbm(std::ostream& os, const RBMatrix& q);
RBMatrix read_rbm(std::istream& is);

/// Throws IoError when the file cannot be opened or is malformed.
void save_rbm(const std::filesystem::path& path, const RBMatrix& q);
RBMatrix load_rbm(const std::filesystem::path& path);

/// Writes <prefix>_Q0.csv .. <prefix>_Q3.csv, one row per matrix row, values
/// printed in shortest round-trip form. Returns the four file paths.
std::array<std::filesystem::path, 4> export_csv(
    const std::filesystem::path& prefix, const RBMatrix& q);

}  // namespace nrbmf
