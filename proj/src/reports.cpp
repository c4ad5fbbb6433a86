#include "nrbmf/reports.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nrbmf/rb_io.hpp"
#include "nrbmf/text_format.hpp"

namespace nrbmf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

constexpr const char* kHistoryHeader =
    "iter,objective,res,alpha,beta,rel_change,armijo_evals";

Status parse_status(const std::string& s) {
  if (s == "converged") return Status::kConverged;
  if (s == "max_iters") return Status::kMaxIters;
  if (s == "stagnated") return Status::kStagnated;
  throw IoError("unknown status '" + s + "'");
}

}  // namespace

void write_history_csv(std::ostream& os,
                       const std::vector<IterationRecord>& history) {
  os << kHistoryHeader << '\n';
  for (const auto& r : history) {
    os << r.iter << ',' << format_double(r.objective) << ','
       << format_double(r.res) << ',' << format_double(r.alpha) << ','
       << format_double(r.beta) << ',' << format_double(r.rel_change) << ','
       << r.armijo_evals << '\n';
  }
}

void save_history_csv(const fs::path& path,
                      const std::vector<IterationRecord>& history) {
  auto out = open_out(path);
  write_history_csv(out, history);
  finish(out, path);
}

std::vector<IterationRecord> load_history_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHistoryHeader) {
    throw IoError(path.string() + ": unexpected history header");
  }
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[7];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) {
        throw IoError(path.string() + ": short history row");
      }
    }
    try {
      IterationRecord r;
      r.iter = std::stoi(f[0]);
      r.objective = std::stod(f[1]);
      r.res = std::stod(f[2]);
      r.alpha = std::stod(f[3]);
      r.beta = std::stod(f[4]);
      r.rel_change = std::stod(f[5]);
      r.armijo_evals = std::stoi(f[6]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw IoError(path.string() + ": malformed history row '" + line + "'");
    }
  }
  return out;
}

void save_report_json(const fs::path& path, const RecognitionReport& report,
                      const ReportMetrics& metrics) {
  json per_sample = json::array();
  for (const auto& s : report.samples) {
    per_sample.push_back(
        {{"path", s.path}, {"true", s.truth}, {"pred", s.predicted},
         {"score", s.score}});
  }
  json doc = {{"accuracy", report.accuracy},
              {"per_sample", per_sample},
              {"sec", metrics.sec},
              {"basis_sparsity", metrics.basis_sparsity},
              {"res", metrics.res}};
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

void save_report_csv(const fs::path& path, const RecognitionReport& report) {
  auto out = open_out(path);
  out << "path,true,pred,score\n";
  for (const auto& s : report.samples) {
    out << s.path << ',' << s.truth << ',' << s.predicted << ','
        << format_double(s.score) << '\n';
  }
  finish(out, path);
}

void save_gallery(const fs::path& dir, const Gallery& g,
                  const GalleryInfo& info) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_rbm(dir / "W.rbm", g.W);
  save_rbm(dir / "H.rbm", g.H_factor);
  save_rbm(dir / "encodings.rbm", g.H_train);
  save_history_csv(dir / "history.csv", g.history);
  json doc = {{"mode", to_string(g.mode)},
              {"image_rows", g.image_rows},
              {"image_cols", g.image_cols},
              {"rank", g.W.cols()},
              {"labels", g.labels},
              {"status", to_string(g.status)},
              {"cond_threshold", info.cond_threshold},
              {"sec", info.metrics.sec},
              {"basis_sparsity", info.metrics.basis_sparsity},
              {"res", info.metrics.res}};
  auto out = open_out(dir / "gallery.json");
  out << doc.dump(2) << '\n';
  finish(out, dir / "gallery.json");
}

Gallery load_gallery(const fs::path& dir, GalleryInfo* info) {
  std::ifstream in(dir / "gallery.json");
  if (!in) throw IoError("cannot open " + (dir / "gallery.json").string());
  Gallery g;
  GalleryInfo gi;
  try {
    const json doc = json::parse(in);
    g.mode = parse_representation(doc.at("mode").get<std::string>());
    g.image_rows = doc.at("image_rows").get<Index>();
    g.image_cols = doc.at("image_cols").get<Index>();
    g.labels = doc.at("labels").get<std::vector<std::string>>();
    g.status = parse_status(doc.at("status").get<std::string>());
    gi.cond_threshold = doc.at("cond_threshold").get<double>();
    gi.metrics.sec = doc.at("sec").get<double>();
    gi.metrics.basis_sparsity = doc.at("basis_sparsity").get<double>();
    gi.metrics.res = doc.at("res").get<double>();
  } catch (const json::exception& e) {
    throw IoError("malformed gallery.json: " + std::string(e.what()));
  } catch (const ConfigError& e) {
    throw IoError("malformed gallery.json: " + std::string(e.what()));
  }
  g.W = load_rbm(dir / "W.rbm");
  g.H_factor = load_rbm(dir / "H.rbm");
  g.H_train = load_rbm(dir / "encodings.rbm");
  g.history = load_history_csv(dir / "history.csv");
  if (g.W.rows() != g.image_rows * g.image_cols ||
      g.H_train.rows() != g.W.cols() || g.H_train.cols() != g.size()) {
    throw IoError("gallery files in " + dir.string() + " are inconsistent");
  }
  EncodingOptions opts;
  opts.cond_threshold = gi.cond_threshold;
  g.encoder = std::make_shared<Encoder>(g.W, opts);
  if (info) *info = gi;
  return g;
}

}  // namespace nrbmf
