#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nrbmf/dataset.hpp"
#include "nrbmf/reports.hpp"
#include "nrbmf/synthetic.hpp"

using namespace nrbmf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nrbmf_fmt_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("history CSV round trip") {
  std::vector<IterationRecord> h = {{1, 10.5, 4.58, 1.0, 0.1, 0.5, 4},
                                    {2, 3.25, 2.5495, 10.0, 0.0, 1e-5, 7}};
  std::ostringstream os;
  write_history_csv(os, h);
  CHECK(os.str().rfind("iter,objective,res,alpha,beta,rel_change,armijo_evals\n", 0) == 0);
  const fs::path dir = temp_dir("history");
  save_history_csv(dir / "h.csv", h);
  const auto back = load_history_csv(dir / "h.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].rel_change == 1e-5);
  CHECK(back[1].armijo_evals == 7);
  CHECK(back[0].res == 4.58);
}

TEST_CASE("images, manifests and datasets") {
  const fs::path dir = temp_dir("dataset");
  TwoClusterOptions o;
  o.rows = 6;
  o.cols = 5;
  o.train_per_class = 2;
  o.test_per_class = 1;
  const auto corpus = two_cluster_corpus(o);
  std::vector<ManifestEntry> entries;
  for (const auto& s : corpus.samples) {
    save_image(dir / s.path, s);
    entries.push_back({s.path, s.label, s.split});
  }
  write_manifest(dir / "manifest.csv", entries);
  CHECK(read_manifest(dir / "manifest.csv").size() == 6);

  const auto train = load_dataset(dir / "manifest.csv", Split::kTrain);
  REQUIRE(train.size() == 4);
  // values on the 1/255 grid survive the PNG round trip exactly
  CHECK(train[0].red == corpus.samples[0].red);
  CHECK(train[0].blue == corpus.samples[0].blue);
  CHECK(train[0].label == "a");
  CHECK(train[0].rows() == 6);
  CHECK(train[0].cols() == 5);

  const auto resized = load_dataset(dir / "manifest.csv", Split::kTest, ImageSize{4, 3});
  REQUIRE(resized.size() == 2);
  CHECK(resized[0].rows() == 3);
  CHECK(resized[0].cols() == 4);

  TwoClusterOptions big = o;
  big.rows = 7;
  save_image(dir / "odd.png", two_cluster_corpus(big).samples[0]);
  entries.push_back({"odd.png", "a", Split::kTrain});
  write_manifest(dir / "manifest2.csv", entries);
  CHECK_THROWS_AS(load_dataset(dir / "manifest2.csv"), ShapeError);
  CHECK(load_dataset(dir / "manifest2.csv", {}, ImageSize{5, 5}).size() == 7);

  std::ofstream(dir / "bad.csv") << "file,label,split\nx.png,a,train\n";
  CHECK_THROWS_AS(read_manifest(dir / "bad.csv"), IoError);
  std::ofstream(dir / "bad2.csv") << "path,label,split\nx.png,a,validation\n";
  CHECK_THROWS_AS(read_manifest(dir / "bad2.csv"), IoError);
  std::ofstream(dir / "missing.csv") << "path,label,split\nnope.png,a,train\n";
  CHECK_THROWS_AS(load_dataset(dir / "missing.csv"), IoError);
  CHECK_THROWS_AS(read_manifest(dir / "absent.csv"), IoError);
}

TEST_CASE("reports and galleries") {
  const fs::path dir = temp_dir("gallery");
  TwoClusterOptions o;
  o.seed = 8;
  const auto corpus = two_cluster_corpus(o);
  SolverConfig c;
  c.rank = 2;
  const Gallery g = build_gallery(corpus.split(Split::kTrain), c);
  save_gallery(dir / "g", g, {1e15, {12.5, 3.0, 0.25}});
  GalleryInfo info;
  const Gallery back = load_gallery(dir / "g", &info);
  CHECK(back.W == g.W);
  CHECK(back.H_train == g.H_train);
  CHECK(back.labels == g.labels);
  CHECK(back.mode == g.mode);
  CHECK(back.history.size() == g.history.size());
  CHECK(info.metrics.sec == 12.5);

  const auto tests = corpus.split(Split::kTest);
  const auto r1 = evaluate(g, tests), r2 = evaluate(back, tests);
  REQUIRE(r1.samples.size() == r2.samples.size());
  for (std::size_t i = 0; i < r1.samples.size(); ++i) {
    CHECK(r1.samples[i].predicted == r2.samples[i].predicted);
  }

  save_report_json(dir / "r.json", r1, info.metrics);
  save_report_csv(dir / "r.csv", r1);
  const auto doc = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(doc.at("accuracy").get<double>() == r1.accuracy);
  CHECK(doc.at("per_sample").size() == tests.size());
  CHECK(doc.at("per_sample")[0].contains("true"));
  CHECK(doc.at("basis_sparsity").get<double>() == 3.0);
  CHECK(slurp(dir / "r.csv").rfind("path,true,pred,score\n", 0) == 0);

  fs::remove(dir / "g" / "encodings.rbm");
  CHECK_THROWS_AS(load_gallery(dir / "g"), IoError);
}
