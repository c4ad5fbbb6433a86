#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>

#include "nrbmf/dataset.hpp"
#include "nrbmf/gradcheck.hpp"
#include "nrbmf/rb_io.hpp"
#include "nrbmf/real_nmf.hpp"
#include "nrbmf/recognition.hpp"
#include "nrbmf/reports.hpp"
#include "nrbmf/solver.hpp"
#include "nrbmf/synthetic.hpp"
#include "nrbmf/text_format.hpp"

namespace nrbmf::cli {

namespace fs = std::filesystem;

namespace {

// --- solver flags and config files -----------------------------------------

struct SolverFlags {
  std::optional<Index> rank;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::optional<int> armijo_cap;
  std::optional<double> step_floor;
  std::optional<std::string> variant;
  std::optional<std::string> mode;
  std::optional<std::string> config;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("-l,--rank", f.rank, "factorization rank l");
  cmd->add_option("--tol", f.tol, "stopping tolerance on the relative change");
  cmd->add_option("--max-iters", f.max_iters, "iteration budget");
  cmd->add_option("--mu", f.mu, "backtracking factor (RBPG)");
  cmd->add_option("--sigma", f.sigma, "Armijo sufficient-decrease constant");
  cmd->add_option("--delta", f.delta, "step scaling factor (RBIPG)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--armijo-cap", f.armijo_cap, "step search limit");
  cmd->add_option("--step-floor", f.step_floor, "smallest admissible step");
  cmd->add_option("--variant", f.variant, "rbpg, rbipg or real-nmf")
      ->check(CLI::IsMember({"rbpg", "rbipg", "real-nmf"}));
  cmd->add_option("--mode", f.mode, "full or pure representation")
      ->check(CLI::IsMember({"full", "pure"}));
  cmd->add_option("--config", f.config, "key=value file with solver settings");
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: bad value '" + text + "' for " + key);
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Solver settings after defaults, config file and flags have been merged.
struct Settings {
  SolverConfig cfg;
  bool real_nmf = false;
};

void set_variant(Settings& s, const std::string& v) {
  s.real_nmf = v == "real-nmf";
  if (!s.real_nmf) s.cfg.variant = parse_variant(v);
}

void apply_config_file(Settings& s, const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file " + file.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto& c = s.cfg;
    if (key == "rank") c.rank = parse_value<Index>(key, val);
    else if (key == "tol") c.tol = parse_value<double>(key, val);
    else if (key == "max_iters") c.max_iters = parse_value<int>(key, val);
    else if (key == "mu") c.mu = parse_value<double>(key, val);
    else if (key == "sigma") c.sigma = parse_value<double>(key, val);
    else if (key == "delta") c.delta = parse_value<double>(key, val);
    else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, val);
    else if (key == "armijo_cap") c.armijo_cap = parse_value<int>(key, val);
    else if (key == "step_floor") c.step_floor = parse_value<double>(key, val);
    else if (key == "variant") set_variant(s, val);
    else if (key == "representation") c.representation = parse_representation(val);
    else throw ConfigError(file.string() + ": unknown key '" + key + "'");
  }
}

Settings resolve(const SolverFlags& f) {
  Settings s;
  if (f.config) apply_config_file(s, *f.config);
  auto& c = s.cfg;
  if (f.rank) c.rank = *f.rank;
  if (f.tol) c.tol = *f.tol;
  if (f.max_iters) c.max_iters = *f.max_iters;
  if (f.mu) c.mu = *f.mu;
  if (f.sigma) c.sigma = *f.sigma;
  if (f.delta) c.delta = *f.delta;
  if (f.seed) c.seed = *f.seed;
  if (f.armijo_cap) c.armijo_cap = *f.armijo_cap;
  if (f.step_floor) c.step_floor = *f.step_floor;
  if (f.variant) set_variant(s, *f.variant);
  if (f.mode) c.representation = parse_representation(*f.mode);
  c.validate_parameters();
  return s;
}

std::optional<ImageSize> image_size(const std::optional<int>& w,
                                    const std::optional<int>& h) {
  if (w.has_value() != h.has_value()) {
    throw ConfigError("--width and --height must be given together");
  }
  if (!w) return std::nullopt;
  if (*w <= 0 || *h <= 0) throw ConfigError("--width/--height must be positive");
  return ImageSize{*w, *h};
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// --- commands ----------------------------------------------------------------

struct SynthArgs {
  std::string kind = "matrix";
  std::string out;
  Index rows = 20;
  Index cols = 15;
  Index rank = 4;
  std::uint64_t seed = 0;
  int width = 8;
  int height = 8;
  int train_per_class = 5;
  int test_per_class = 20;
  double noise = 0.02;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  make_dir(a.out);
  const fs::path dir = a.out;
  if (a.kind == "matrix") {
    if (a.rows < 1 || a.cols < 1 || a.rank < 1) {
      throw ConfigError("synth: --M, --N and --rank must be positive");
    }
    const auto p = synthetic_product(a.rows, a.cols, a.rank, a.seed);
    save_rbm(dir / "X.rbm", p.X);
    save_rbm(dir / "W_true.rbm", p.W);
    save_rbm(dir / "H_true.rbm", p.H);
    out << "wrote " << (dir / "X.rbm").string() << " (" << a.rows << "x"
        << a.cols << ", rank " << a.rank << ")\n";
    return kOk;
  }
  TwoClusterOptions o;
  o.rows = a.height;
  o.cols = a.width;
  o.train_per_class = a.train_per_class;
  o.test_per_class = a.test_per_class;
  o.noise = a.noise;
  o.seed = a.seed;
  const auto corpus = two_cluster_corpus(o);
  std::vector<ManifestEntry> entries;
  for (const auto& s : corpus.samples) {
    save_image(dir / s.path, s);
    entries.push_back({s.path, s.label, s.split});
  }
  write_manifest(dir / "manifest.csv", entries);
  out << "wrote " << entries.size() << " images and "
      << (dir / "manifest.csv").string() << "\n"
      << "separation ratio: " << format_double(corpus.separation_ratio) << "\n";
  return kOk;
}

struct FactorizeArgs {
  SolverFlags solver;
  std::optional<std::string> input;
  bool synthetic = false;
  Index rows = 20;
  Index cols = 15;
  std::optional<Index> true_rank;
  std::string out;
};

int cmd_factorize(const FactorizeArgs& a, std::ostream& out) {
  if (a.input.has_value() == a.synthetic) {
    throw ConfigError("factorize: give exactly one of --input or --synthetic");
  }
  const Settings s = resolve(a.solver);
  RBMatrix X;
  if (a.input) {
    X = load_rbm(*a.input);
  } else {
    X = synthetic_product(a.rows, a.cols, a.true_rank.value_or(s.cfg.rank),
                          s.cfg.seed)
            .X;
  }
  make_dir(a.out);
  const fs::path dir = a.out;

  if (s.real_nmf) {
    const auto fc = factorize_channels(X, s.cfg, s.cfg.representation);
    save_rbm(dir / "W.rbm", fc.W);
    save_rbm(dir / "H.rbm", fc.H);
    const int first = s.cfg.representation == Representation::kFull ? 0 : 1;
    for (int b = first; b < 4; ++b) {
      const auto& ch = fc.channels[static_cast<std::size_t>(b)];
      save_history_csv(dir / ("history_q" + std::to_string(b) + ".csv"),
                       ch.history);
      out << "channel Q" << b << ": iterations " << ch.history.size()
          << ", status " << to_string(ch.status) << "\n";
    }
    const MethodKind kind = first == 0 ? MethodKind::kRealFull
                                       : MethodKind::kRealPure;
    out << "RES: " << format_double(compute_res(X, fc.W, fc.H, kind)) << "\n";
    return kOk;
  }

  const FactorizationResult r = solve(X, s.cfg);
  save_rbm(dir / "W.rbm", r.W);
  save_rbm(dir / "H.rbm", r.H);
  save_history_csv(dir / "history.csv", r.history);
  const double res = fro_norm(X - multiply(r.W, r.H));
  out << "variant: " << to_string(s.cfg.variant) << "\n"
      << "iterations: " << r.history.size() << "\n"
      << "objective: " << format_double(0.5 * res * res) << "\n"
      << "RES: " << format_double(res) << "\n"
      << "KKT residual: " << format_double(kkt_residual(X, r.W, r.H)) << "\n"
      << "status: " << to_string(r.status) << "\n";
  return kOk;
}

struct TrainArgs {
  SolverFlags solver;
  std::string manifest;
  std::string out;
  std::optional<int> width;
  std::optional<int> height;
  double cond_threshold = 1e15;
  std::vector<Index> sec_sweep;
};

ReportMetrics training_metrics(const Gallery& g) {
  return {compute_sec(g.H_factor, MethodKind::kRb),
          compute_basis_sparsity(g.W),
          compute_res(g.X, g.W, g.H_factor, MethodKind::kRb)};
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const Settings s = resolve(a.solver);
  if (s.real_nmf) {
    throw ConfigError("train: --variant must be rbpg or rbipg");
  }
  const auto samples =
      load_dataset(a.manifest, Split::kTrain, image_size(a.width, a.height));
  if (samples.empty()) throw ConfigError("train: manifest has no train samples");
  const Gallery g = build_gallery(samples, s.cfg, a.cond_threshold);
  const ReportMetrics m = training_metrics(g);
  save_gallery(a.out, g, {a.cond_threshold, m});
  out << "gallery: " << g.size() << " faces, " << g.image_rows << "x"
      << g.image_cols << ", rank " << g.W.cols() << ", mode "
      << to_string(g.mode) << "\n"
      << "iterations: " << g.history.size() << ", status "
      << to_string(g.status) << "\n"
      << "encoding path: "
      << (g.encoder->path() == EncodingPath::kDirect ? "direct"
                                                     : "gradient-descent")
      << "\n"
      << "RES: " << format_double(m.res) << "\n"
      << "SEC: " << format_double(m.sec) << "%\n"
      << "basis sparsity: " << format_double(m.basis_sparsity) << "%\n";

  if (!a.sec_sweep.empty()) {
    const fs::path csv = fs::path(a.out) / "sec_vs_rank.csv";
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw IoError("cannot write " + csv.string());
    f << "rank,sec,basis_sparsity,res,iterations,status\n";
    for (Index rank : a.sec_sweep) {
      SolverConfig cfg = s.cfg;
      cfg.rank = rank;
      const Index cap = std::min(g.X.rows(), g.X.cols());
      if (rank < 1 || rank > cap) {
        throw ConfigError("--sec-sweep: rank " + std::to_string(rank) +
                          " outside [1, " + std::to_string(cap) + "]");
      }
      auto [W0, H0] = initial_factors(g.X.rows(), g.X.cols(), cfg);
      const auto r = solve_from(g.X, cfg, std::move(W0), std::move(H0));
      f << rank << ',' << format_double(compute_sec(r.H, MethodKind::kRb))
        << ',' << format_double(compute_basis_sparsity(r.W)) << ','
        << format_double(compute_res(g.X, r.W, r.H, MethodKind::kRb)) << ','
        << r.history.size() << ',' << to_string(r.status) << '\n';
    }
    if (!f) throw IoError("failed writing " + csv.string());
    out << "wrote " << csv.string() << "\n";
  }
  return kOk;
}

struct EvaluateArgs {
  std::string gallery;
  std::string manifest;
  std::string out;
  std::optional<std::string> mode;
  std::string split = "test";
  std::optional<int> width;
  std::optional<int> height;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  GalleryInfo info;
  const Gallery g = load_gallery(a.gallery, &info);
  std::optional<Representation> mode;
  if (a.mode) mode = parse_representation(*a.mode);
  if (mode && *mode != g.mode) {
    throw ConfigError("--mode " + *a.mode + " differs from the gallery mode " +
                      to_string(g.mode));
  }
  const Split split = parse_split(a.split);
  const auto samples =
      load_dataset(a.manifest, split, image_size(a.width, a.height));
  if (samples.empty()) {
    throw ConfigError("evaluate: manifest has no " + a.split + " samples");
  }
  const RecognitionReport report = evaluate(g, samples, mode);
  make_dir(a.out);
  const fs::path dir = a.out;
  save_report_json(dir / "report.json", report, info.metrics);
  save_report_csv(dir / "report.csv", report);
  out << "accuracy: " << format_double(report.accuracy) << " ("
      << report.samples.size() << " samples)\n"
      << "wrote " << (dir / "report.json").string() << "\n";
  return kOk;
}

struct GradcheckArgs {
  int seeds = 10;
  std::uint64_t seed = 0;
  double eps = 1e-6;
  double threshold = 1e-5;
};

int cmd_gradcheck(const GradcheckArgs& a, std::ostream& out) {
  if (a.seeds < 1) throw ConfigError("--seeds must be positive");
  if (!(a.eps > 0.0)) throw ConfigError("--eps must be positive");
  double worst = 0.0;
  out << "seed,rows,cols,rank,error_w,error_h\n";
  for (int i = 0; i < a.seeds; ++i) {
    const auto r = gradient_check(a.seed + static_cast<std::uint64_t>(i), a.eps);
    out << r.seed << ',' << r.rows << ',' << r.cols << ',' << r.rank << ','
        << format_double(r.error_w) << ',' << format_double(r.error_h) << "\n";
    worst = std::max(worst, r.max_error());
  }
  const bool ok = worst <= a.threshold;
  out << "max relative error: " << format_double(worst) << " (threshold "
      << format_double(a.threshold) << ") " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kSolver;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Non-negative reduced biquaternion matrix factorization", "nrbmf"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate synthetic data");
  c_synth->add_option("--kind", synth.kind, "matrix or faces")
      ->check(CLI::IsMember({"matrix", "faces"}));
  c_synth->add_option("--out", synth.out, "output directory")->required();
  c_synth->add_option("--M", synth.rows, "rows of X (matrix)");
  c_synth->add_option("--N", synth.cols, "columns of X (matrix)");
  c_synth->add_option("-l,--rank", synth.rank, "rank of X (matrix)");
  c_synth->add_option("--seed", synth.seed, "random seed");
  c_synth->add_option("--width", synth.width, "image width (faces)");
  c_synth->add_option("--height", synth.height, "image height (faces)");
  c_synth->add_option("--train-per-class", synth.train_per_class);
  c_synth->add_option("--test-per-class", synth.test_per_class);
  c_synth->add_option("--noise", synth.noise, "per-pixel noise amplitude");

  FactorizeArgs fact;
  auto* c_fact = app.add_subcommand("factorize", "factorize an RB matrix");
  add_solver_flags(c_fact, fact.solver);
  c_fact->add_option("--input", fact.input, "RBM1 file holding X");
  c_fact->add_flag("--synthetic", fact.synthetic,
                   "factorize a seeded synthetic product instead");
  c_fact->add_option("--M", fact.rows, "rows of the synthetic X");
  c_fact->add_option("--N", fact.cols, "columns of the synthetic X");
  c_fact->add_option("--true-rank", fact.true_rank,
                     "rank of the synthetic X (default: --rank)");
  c_fact->add_option("--out", fact.out, "output directory")->required();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "build a recognition gallery");
  add_solver_flags(c_train, train.solver);
  c_train->add_option("--manifest", train.manifest, "dataset manifest")->required();
  c_train->add_option("--out", train.out, "gallery directory")->required();
  c_train->add_option("--width", train.width, "resize width");
  c_train->add_option("--height", train.height, "resize height");
  c_train->add_option("--cond-threshold", train.cond_threshold,
                      "largest condition number for direct encodings");
  c_train->add_option("--sec-sweep", train.sec_sweep,
                      "comma-separated ranks for sec_vs_rank.csv")
      ->delimiter(',');

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "classify faces against a gallery");
  c_eval->add_option("--gallery", eval.gallery, "gallery directory")->required();
  c_eval->add_option("--manifest", eval.manifest, "dataset manifest")->required();
  c_eval->add_option("--out", eval.out, "report directory")->required();
  c_eval->add_option("--mode", eval.mode, "expected gallery mode")
      ->check(CLI::IsMember({"full", "pure"}));
  c_eval->add_option("--split", eval.split, "manifest split to classify")
      ->check(CLI::IsMember({"train", "test"}));
  c_eval->add_option("--width", eval.width, "resize width");
  c_eval->add_option("--height", eval.height, "resize height");

  GradcheckArgs grad;
  auto* c_grad = app.add_subcommand("gradcheck", "finite-difference gradient check");
  c_grad->add_option("--seeds", grad.seeds, "number of random instances");
  c_grad->add_option("--seed", grad.seed, "first seed");
  c_grad->add_option("--eps", grad.eps, "finite-difference step");
  c_grad->add_option("--threshold", grad.threshold, "largest accepted error");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*c_synth) return cmd_synth(synth, out);
    if (*c_fact) return cmd_factorize(fact, out);
    if (*c_train) return cmd_train(train, out);
    if (*c_eval) return cmd_evaluate(eval, out);
    if (*c_grad) return cmd_gradcheck(grad, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kUsage;
}

}  // namespace nrbmf::cli
