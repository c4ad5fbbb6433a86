#pragma once

// File formats produced by the command-line tools: iteration histories,
// recognition reports and saved galleries.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nrbmf/recognition.hpp"

namespace nrbmf {

/// Header iter,objective,res,alpha,beta,rel_change,armijo_evals.
void write_history_csv(std::ostream& os,
                       const std::vector<IterationRecord>& history);
void save_history_csv(const std::filesystem::path& path,
                      const std::vector<IterationRecord>& history);
/// Parses the format written by write_history_csv. Throws IoError.
std::vector<IterationRecord> load_history_csv(const std::filesystem::path& path);

struct ReportMetrics {
  double sec = 0.0;             ///< percent
  double basis_sparsity = 0.0;  ///< percent
  double res = 0.0;
};

/// {accuracy, per_sample: [{path, true, pred, score}], sec, basis_sparsity,
/// res}.
void save_report_json(const std::filesystem::path& path,
                      const RecognitionReport& report,
                      const ReportMetrics& metrics);
/// Header path,true,pred,score.
void save_report_csv(const std::filesystem::path& path,
                     const RecognitionReport& report);

/// A gallery directory holds W.rbm, H.rbm (solver factor), encodings.rbm
/// (least-squares training encodings), history.csv and gallery.json with the
/// mode, image size, labels, encoder threshold and training metrics.
struct GalleryInfo {
  double cond_threshold = 1e15;
  ReportMetrics metrics;
};

void save_gallery(const std::filesystem::path& dir, const Gallery& gallery,
                  const GalleryInfo& info);
/// The training matrix X is not stored; the loaded gallery has an empty X.
Gallery load_gallery(const std::filesystem::path& dir, GalleryInfo* info = nullptr);

}  // namespace nrbmf
