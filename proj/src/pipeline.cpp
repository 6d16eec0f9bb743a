#include "hyphc/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyphc/baselines.hpp"
#include "hyphc/codec.hpp"
#include "hyphc/rng.hpp"

namespace hyphc {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_double(std::string_view cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::vector<std::string>> read_csv_cells(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.emplace_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

Eigen::MatrixXd parse_numeric_table(const std::string& path, int min_rows) {
  auto rows = read_csv_cells(path);
  if (rows.empty()) throw std::runtime_error(path + ": empty file");

  // Header detection: any non-numeric cell in the first row.
  size_t first = 0;
  {
    double tmp;
    for (const auto& cell : rows[0])
      if (!parse_double(cell, tmp)) {
        first = 1;
        break;
      }
  }
  const size_t n_rows = rows.size() - first;
  if (static_cast<int>(n_rows) < min_rows)
    throw std::runtime_error(path + ": needs at least " + std::to_string(min_rows) + " data rows");
  const size_t n_cols = rows[first].size();

  Eigen::MatrixXd m(n_rows, n_cols);
  for (size_t r = 0; r < n_rows; ++r) {
    const auto& cells = rows[first + r];
    if (cells.size() != n_cols)
      throw std::runtime_error(path + ": ragged row " + std::to_string(first + r + 1));
    for (size_t c = 0; c < n_cols; ++c) {
      double v;
      if (!parse_double(cells[c], v))
        throw std::runtime_error(path + ": non-numeric cell '" + cells[c] + "' at row " +
                                 std::to_string(first + r + 1));
      m(r, c) = v;
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd load_features(const std::string& path) { return parse_numeric_table(path, 3); }

std::vector<int> load_labels(const std::string& path) {
  const Eigen::MatrixXd m = parse_numeric_table(path, 1);
  if (m.cols() != 1) throw std::runtime_error(path + ": labels must be a single column");
  std::vector<int> labels(m.rows());
  for (int i = 0; i < m.rows(); ++i) labels[i] = static_cast<int>(std::lround(m(i, 0)));
  return labels;
}

StandardizeResult standardize(const Eigen::MatrixXd& features) {
  const int n = static_cast<int>(features.rows());
  const int d = static_cast<int>(features.cols());
  StandardizeResult out;
  std::vector<int> kept;
  for (int c = 0; c < d; ++c) {
    const double mean = features.col(c).mean();
    const double var = (features.col(c).array() - mean).square().sum() / n;
    if (var < 1e-24)
      out.dropped_columns.push_back(c);
    else
      kept.push_back(c);
  }
  out.features.resize(n, static_cast<int>(kept.size()));
  for (size_t idx = 0; idx < kept.size(); ++idx) {
    const int c = kept[idx];
    const double mean = features.col(c).mean();
    const double sd = std::sqrt((features.col(c).array() - mean).square().sum() / n);
    out.features.col(static_cast<int>(idx)) = (features.col(c).array() - mean) / sd;
  }
  return out;
}

SimilarityMatrix cosine_similarity(const Eigen::MatrixXd& features) {
  const int n = static_cast<int>(features.rows());
  if (features.cols() == 0) throw std::invalid_argument("no feature columns left");
  Eigen::MatrixXd unit = features;
  for (int i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (norm < 1e-12)
      throw std::invalid_argument("zero-norm feature row " + std::to_string(i));
    unit.row(i) /= norm;
  }
  SimilarityMatrix w = unit * unit.transpose();
  w.diagonal().setZero();
  return w;
}

SimilarityMatrix similarity_from_features(const Eigen::MatrixXd& features, Affinity affinity,
                                          std::vector<int>* dropped_columns) {
  StandardizeResult std_res = standardize(features);
  if (dropped_columns) *dropped_columns = std_res.dropped_columns;
  SimilarityMatrix w = cosine_similarity(std_res.features);
  if (affinity == Affinity::shifted_cosine) {
    w.array() += 1.0;
    w.diagonal().setZero();
  }
  return w;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

SimilarityMatrix load_similarity(const std::string& path, std::vector<std::string>* warnings) {
  Eigen::MatrixXd m = parse_numeric_table(path, 3);
  if (m.rows() != m.cols()) throw std::runtime_error(path + ": similarity matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    if (!warnings) throw std::runtime_error(path + ": similarity matrix is not symmetric");
    warnings->push_back("similarity matrix asymmetric by " + format_double(asym) +
                        "; symmetrized");
  }
  SimilarityMatrix w = 0.5 * (m + m.transpose());
  w.diagonal().setZero();
  return w;
}

std::uint64_t matrix_checksum(const Eigen::MatrixXd& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  };
  mix(std::to_string(m.rows()));
  mix("x");
  mix(std::to_string(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      mix(",");
      mix(format_double(m(i, j)));
    }
  return h;
}

Method method_from_string(const std::string& name) {
  if (name == "hyphc") return Method::hyphc;
  if (name == "sl") return Method::sl;
  if (name == "al") return Method::al;
  if (name == "cl") return Method::cl;
  if (name == "wl") return Method::wl;
  if (name == "bkm") return Method::bkm;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::hyphc: return "hyphc";
    case Method::sl: return "sl";
    case Method::al: return "al";
    case Method::cl: return "cl";
    case Method::wl: return "wl";
    case Method::bkm: return "bkm";
  }
  return "?";
}

namespace {

std::string decoder_name(DecoderKind d) { return d == DecoderKind::exact ? "exact" : "greedy"; }

std::string strategy_name(TripletStrategy s) {
  switch (s) {
    case TripletStrategy::all: return "all";
    case TripletStrategy::quadratic: return "quadratic";
    case TripletStrategy::fixed_count: return "fixed_count";
  }
  return "?";
}

TripletBatch sample_for_epoch(const RunConfig& cfg, int n, int epoch) {
  const std::uint64_t epoch_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch));
  switch (cfg.triplets) {
    case TripletStrategy::all: return sample_all_triplets(n);
    case TripletStrategy::quadratic: return sample_quadratic_triplets(n, epoch_seed);
    case TripletStrategy::fixed_count:
      return sample_fixed_count_triplets(n, cfg.triplet_count, epoch_seed);
  }
  throw std::logic_error("unreachable");
}

struct TrainOutput {
  Embedding z;
  OptimizerState state;
  std::vector<double> epoch_losses;
  int skipped_steps = 0;
};

TrainOutput train_hyphc(const SimilarityMatrix& w, const RunConfig& cfg,
                        const std::string& snapshot_dir) {
  const int n = static_cast<int>(w.rows());
  TrainOutput out;
  out.z = init_embedding(n, cfg.seed, cfg.init_scale);
  rescale_to_common_norm(out.z);
  AdamParams params;
  params.lr = cfg.lr;
  out.state = make_optimizer(out.z, params);

  auto snapshot = [&](int epoch) {
    if (snapshot_dir.empty()) return;
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_epoch_%04d.csv", epoch);
    write_snapshot_csv(snapshot_dir + "/" + name, out.z);
  };
  snapshot(0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const TripletBatch batch = sample_for_epoch(cfg, n, epoch);
    out.epoch_losses.push_back(hyphc_loss(out.z, w, batch, cfg.tau, false));
    const int bs = cfg.batch_size > 0 ? cfg.batch_size : static_cast<int>(batch.size());
    for (size_t start = 0; start < batch.size(); start += bs) {
      const size_t stop = std::min(batch.size(), start + bs);
      const TripletBatch chunk(batch.begin() + start, batch.begin() + stop);
      const Coords grad = hyphc_loss_grad(out.z, w, chunk, cfg.tau);
      if (!adam_step(out.state, out.z, grad)) ++out.skipped_steps;
    }
    if (cfg.checkpoint_every > 0 && (epoch + 1) % cfg.checkpoint_every == 0) snapshot(epoch + 1);
  }
  return out;
}

}  // namespace

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  out << "dataset " << cfg.dataset_path << '\n';
  out << "input_kind " << (cfg.input_kind == InputKind::features ? "features" : "similarities")
      << '\n';
  out << "method " << method_name(cfg.method) << '\n';
  out << "labels " << cfg.labels_path << '\n';
  out << "seed " << cfg.seed << '\n';
  out << "lr " << format_double(cfg.lr) << '\n';
  out << "tau " << format_double(cfg.tau) << '\n';
  out << "epochs " << cfg.epochs << '\n';
  out << "batch_size " << cfg.batch_size << '\n';
  out << "init_scale " << format_double(cfg.init_scale) << '\n';
  out << "triplets " << strategy_name(cfg.triplets) << '\n';
  out << "triplet_count " << cfg.triplet_count << '\n';
  out << "decoder " << decoder_name(cfg.decoder) << '\n';
  out << "affinity " << (cfg.affinity == Affinity::cosine ? "cosine" : "shifted_cosine") << '\n';
  out << "checkpoint_every " << cfg.checkpoint_every << '\n';
  out << "restarts " << cfg.restarts << '\n';
  return out.str();
}

RunArtifacts run(const RunConfig& cfg) {
  if (!(cfg.lr > 0) || !(cfg.tau > 0) || cfg.epochs < 0 || !(cfg.init_scale > 0))
    throw std::invalid_argument("numeric hyperparameters must be positive");
  if (cfg.method == Method::hyphc &&
      !(cfg.init_scale > kScaleMin && cfg.init_scale < 1.0 - kBoundaryEps))
    throw std::invalid_argument(
        "init_scale must lie inside the trainable scale range (kScaleMin, 1 - kBoundaryEps)");

  RunArtifacts art;

  SimilarityMatrix w;
  if (cfg.input_kind == InputKind::features) {
    const Eigen::MatrixXd features = load_features(cfg.dataset_path);
    std::vector<int> dropped;
    w = similarity_from_features(features, cfg.affinity, &dropped);
    for (const int c : dropped)
      art.warnings.push_back("dropped constant feature column " + std::to_string(c));
  } else {
    w = load_similarity(cfg.dataset_path, &art.warnings);
  }
  const int n = static_cast<int>(w.rows());
  art.similarity_checksum = matrix_checksum(w);

  std::string out_dir = cfg.output_dir;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  const auto t_train = Clock::now();
  if (cfg.method == Method::hyphc) {
    TrainOutput trained = train_hyphc(w, cfg, out_dir);
    art.train_seconds = seconds_since(t_train);
    art.epoch_losses = trained.epoch_losses;
    if (trained.skipped_steps > 0)
      art.warnings.push_back(std::to_string(trained.skipped_steps) +
                             " optimizer steps skipped on non-finite gradients");
    const auto t_decode = Clock::now();
    art.tree = cfg.decoder == DecoderKind::exact ? exact_decode(trained.z)
                                                 : greedy_decode(trained.z);
    art.decode_seconds = seconds_since(t_decode);
    art.embedding = std::move(trained.z);
    if (!out_dir.empty())
      save_checkpoint(out_dir + "/checkpoint_final.txt", *art.embedding, trained.state);
  } else if (cfg.method == Method::bkm) {
    art.tree = bisecting_kmeans(w, cfg.seed, cfg.restarts);
    art.train_seconds = seconds_since(t_train);
  } else {
    LinkageMethod lm;
    switch (cfg.method) {
      case Method::sl: lm = LinkageMethod::single; break;
      case Method::al: lm = LinkageMethod::average; break;
      case Method::cl: lm = LinkageMethod::complete; break;
      default: lm = LinkageMethod::ward; break;
    }
    art.tree = linkage(w, lm);
    art.train_seconds = seconds_since(t_train);
  }

  art.cost = dasgupta_cost(art.tree, w);
  art.bounds = n <= 500 ? cost_bounds(w)
                        : cost_bounds_sampled(w, static_cast<std::int64_t>(n) * n, cfg.seed);
  art.newick = to_newick(art.tree);
  if (!cfg.labels_path.empty()) {
    const std::vector<int> labels = load_labels(cfg.labels_path);
    art.purity = dendrogram_purity(art.tree, labels);
  }

  std::ostringstream metrics;
  metrics << "method " << method_name(cfg.method) << '\n';
  metrics << "seed " << cfg.seed << '\n';
  metrics << "n " << n << '\n';
  metrics << "similarity_checksum " << art.similarity_checksum << '\n';
  metrics << "cost " << format_double(art.cost) << '\n';
  metrics << "lower_bound " << format_double(art.bounds.lower) << '\n';
  metrics << "upper_bound " << format_double(art.bounds.upper) << '\n';
  if (art.purity) metrics << "purity " << format_double(*art.purity) << '\n';
  if (cfg.method == Method::hyphc) {
    metrics << "decoder " << decoder_name(cfg.decoder) << '\n';
    metrics << "final_scale " << format_double(art.embedding->scale) << '\n';
  }
  art.metrics_text = metrics.str();

  if (!out_dir.empty()) {
    std::ofstream(out_dir + "/config.txt") << config_echo(cfg);
    std::ofstream(out_dir + "/metrics.txt") << art.metrics_text;
    std::ofstream(out_dir + "/tree.nwk") << art.newick << '\n';
    std::ostringstream timings;
    timings << "train_seconds " << format_double(art.train_seconds) << '\n';
    timings << "decode_seconds " << format_double(art.decode_seconds) << '\n';
    std::ofstream(out_dir + "/timings.txt") << timings.str();
    for (const std::string& msg : art.warnings)
      std::ofstream(out_dir + "/warnings.txt", std::ios::app) << msg << '\n';
  }
  return art;
}

void save_checkpoint(const std::string& path, const Embedding& z, const OptimizerState& state) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "hyphc-checkpoint 1\n";
  out << "n " << z.n() << '\n';
  out << "scale " << format_double(z.scale) << '\n';
  out << "step " << state.step << '\n';
  out << "scale_raw " << format_double(state.scale_raw) << '\n';
  out << "scale_m " << format_double(state.scale_m) << '\n';
  out << "scale_v " << format_double(state.scale_v) << '\n';
  out << "lr " << format_double(state.params.lr) << '\n';
  out << "beta1 " << format_double(state.params.beta1) << '\n';
  out << "beta2 " << format_double(state.params.beta2) << '\n';
  out << "eps " << format_double(state.params.eps) << '\n';
  for (int i = 0; i < z.n(); ++i)
    out << format_double(z.coords(i, 0)) << ' ' << format_double(z.coords(i, 1)) << ' '
        << format_double(state.m(i, 0)) << ' ' << format_double(state.m(i, 1)) << ' '
        << format_double(state.v(i, 0)) << ' ' << format_double(state.v(i, 1)) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "hyphc-checkpoint" || version != 1)
    throw std::runtime_error(path + ": not a hyphc checkpoint");
  Checkpoint ck;
  std::string key;
  int n = 0;
  in >> key >> n;
  in >> key >> ck.z.scale;
  in >> key >> ck.state.step;
  in >> key >> ck.state.scale_raw;
  in >> key >> ck.state.scale_m;
  in >> key >> ck.state.scale_v;
  in >> key >> ck.state.params.lr;
  in >> key >> ck.state.params.beta1;
  in >> key >> ck.state.params.beta2;
  in >> key >> ck.state.params.eps;
  ck.z.coords.resize(n, 2);
  ck.state.m.resize(n, 2);
  ck.state.v.resize(n, 2);
  for (int i = 0; i < n; ++i)
    in >> ck.z.coords(i, 0) >> ck.z.coords(i, 1) >> ck.state.m(i, 0) >> ck.state.m(i, 1) >>
        ck.state.v(i, 0) >> ck.state.v(i, 1);
  if (!in) throw std::runtime_error(path + ": truncated checkpoint");
  return ck;
}

void write_snapshot_csv(const std::string& path, const Embedding& z) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "leaf,x,y,norm\n";
  for (int i = 0; i < z.n(); ++i)
    out << i << ',' << format_double(z.coords(i, 0)) << ',' << format_double(z.coords(i, 1)) << ','
        << format_double(z.coords.row(i).norm()) << '\n';
}

}  // namespace hyphc
