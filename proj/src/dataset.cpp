#include "nrbmf/dataset.hpp"

#include <cmath>
#include <fstream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <sstream>

namespace nrbmf {

namespace fs = std::filesystem;
using Eigen::MatrixXd;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest " + manifest.string());
  std::string line;
  if (!std::getline(in, line) ||
      split_fields(line) != std::vector<std::string>{"path", "label", "split"}) {
    throw IoError(manifest.string() + ": header must be 'path,label,split'");
  }
  std::vector<ManifestEntry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 3 || f[0].empty() || f[1].empty()) {
      throw IoError(manifest.string() + ":" + std::to_string(line_no) +
                    ": expected path,label,split");
    }
    ManifestEntry e;
    e.path = f[0];
    e.label = f[1];
    try {
      e.split = parse_split(f[2]);
    } catch (const ConfigError& err) {
      throw IoError(manifest.string() + ":" + std::to_string(line_no) + ": " +
                    err.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const fs::path& manifest,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + manifest.string());
  out << "path,label,split\n";
  for (const auto& e : entries) {
    out << e.path.generic_string() << ',' << e.label << ','
        << to_string(e.split) << '\n';
  }
  if (!out) throw IoError("failed writing manifest " + manifest.string());
}

ColorSample load_image(const fs::path& file,
                       const std::optional<ImageSize>& size) {
  cv::Mat bgr = cv::imread(file.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("cannot read image " + file.string());
  if (size) {
    if (size->width <= 0 || size->height <= 0) {
      throw ConfigError("resize dimensions must be positive");
    }
    cv::Mat resized;
    cv::resize(bgr, resized, cv::Size(size->width, size->height), 0, 0,
               cv::INTER_LINEAR);
    bgr = resized;
  }
  ColorSample s;
  s.path = file.string();
  s.red.resize(bgr.rows, bgr.cols);
  s.green.resize(bgr.rows, bgr.cols);
  s.blue.resize(bgr.rows, bgr.cols);
  for (int r = 0; r < bgr.rows; ++r) {
    const auto* px = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      s.blue(r, c) = px[c][0] / 255.0;
      s.green(r, c) = px[c][1] / 255.0;
      s.red(r, c) = px[c][2] / 255.0;
    }
  }
  return s;
}

std::vector<ColorSample> load_dataset(const fs::path& manifest,
                                      const std::optional<Split>& only,
                                      const std::optional<ImageSize>& size) {
  const auto entries = read_manifest(manifest);
  const fs::path base = manifest.parent_path();
  std::vector<ColorSample> samples;
  for (const auto& e : entries) {
    if (only && e.split != *only) continue;
    ColorSample s = load_image(e.path.is_absolute() ? e.path : base / e.path, size);
    s.label = e.label;
    s.split = e.split;
    s.path = e.path.generic_string();
    if (!samples.empty() && (s.rows() != samples.front().rows() ||
                             s.cols() != samples.front().cols())) {
      throw ShapeError("image " + s.path + " is " + std::to_string(s.cols()) +
                       "x" + std::to_string(s.rows()) + ", expected " +
                       std::to_string(samples.front().cols()) + "x" +
                       std::to_string(samples.front().rows()) +
                       " (use --width/--height to resize)");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_image(const fs::path& file, const ColorSample& sample) {
  sample.validate();
  cv::Mat bgr(static_cast<int>(sample.rows()), static_cast<int>(sample.cols()),
              CV_8UC3);
  auto to_byte = [](double v) {
    return static_cast<unsigned char>(std::lround(v * 255.0));
  };
  for (int r = 0; r < bgr.rows; ++r) {
    auto* px = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      px[c][0] = to_byte(sample.blue(r, c));
      px[c][1] = to_byte(sample.green(r, c));
      px[c][2] = to_byte(sample.red(r, c));
    }
  }
  if (!cv::imwrite(file.string(), bgr)) {
    throw IoError("cannot write image " + file.string());
  }
}

}  // namespace nrbmf
