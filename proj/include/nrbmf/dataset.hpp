#pragma once

// Image datasets described by a manifest CSV with the header
//
//   path,label,split
//
// Paths are resolved relative to the manifest's directory, split is "train"
// or "test". Images are read as 8-bit RGB and scaled to [0, 1].

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nrbmf/recognition.hpp"

namespace nrbmf {

struct ManifestEntry {
  std::filesystem::path path;  ///< as written in the manifest
  std::string label;
  Split split = Split::kTrain;
};

/// Throws IoError when the file is missing or malformed.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);
void write_manifest(const std::filesystem::path& manifest,
                    const std::vector<ManifestEntry>& entries);

struct ImageSize {
  int width = 0;
  int height = 0;
};

/// Reads one image. With a size given the image is bilinearly resized to it.
ColorSample load_image(const std::filesystem::path& file,
                       const std::optional<ImageSize>& size = {});

/// Loads every manifest entry, or only those of one split. All images must
/// share dimensions after the optional resize, otherwise ShapeError.
std::vector<ColorSample> load_dataset(const std::filesystem::path& manifest,
                                      const std::optional<Split>& only = {},
                                      const std::optional<ImageSize>& size = {});

/// Writes the sample as an 8-bit PNG (values rounded to the nearest 1/255).
void save_image(const std::filesystem::path& file, const ColorSample& sample);

}  // namespace nrbmf
