#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyphc/dasgupta.hpp"
#include "hyphc/loss.hpp"
#include "hyphc/optim.hpp"
#include "hyphc/tree.hpp"

// Data ingestion, preprocessing, experiment orchestration and run artifacts.

namespace hyphc {

// Rectangular numeric CSV; a first row that fails numeric parsing is treated
// as a header. Throws on ragged rows, non-numeric cells, or fewer than 3
// data rows.
Eigen::MatrixXd load_features(const std::string& path);

// Single-column CSV of integer class ids (optional header).
std::vector<int> load_labels(const std::string& path);

struct StandardizeResult {
  Eigen::MatrixXd features;
  std::vector<int> dropped_columns;  // constant columns removed
};

// Per-column z-scoring; constant columns are dropped and reported.
StandardizeResult standardize(const Eigen::MatrixXd& features);

// w_ij = <f_i, f_j> / (|f_i| |f_j|), diagonal zero.
SimilarityMatrix cosine_similarity(const Eigen::MatrixXd& features);

// Affinity fed to costs and training. `shifted_cosine` maps cosine into
// [0, 2] via w = 1 + cos, which keeps similarities nonnegative as the
// Dasgupta objective expects; `cosine` passes the raw value through.
enum class Affinity { cosine, shifted_cosine };

SimilarityMatrix similarity_from_features(const Eigen::MatrixXd& features, Affinity affinity,
                                          std::vector<int>* dropped_columns = nullptr);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

// Loads a square similarity matrix; asymmetry beyond 1e-8 is symmetrized
// with a warning pushed to `warnings` (or rejected if warnings is null).
SimilarityMatrix load_similarity(const std::string& path, std::vector<std::string>* warnings);

// FNV-1a over the canonical text form of the entries.
std::uint64_t matrix_checksum(const Eigen::MatrixXd& m);

enum class Method { hyphc, sl, al, cl, wl, bkm };
enum class DecoderKind { exact, greedy };
enum class TripletStrategy { all, quadratic, fixed_count };
enum class InputKind { features, similarities };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct RunConfig {
  std::string dataset_path;
  InputKind input_kind = InputKind::features;
  Method method = Method::hyphc;
  std::string labels_path;  // optional
  std::string output_dir;   // optional; artifacts written when set

  std::uint64_t seed = 0;
  double lr = 5e-4;
  double tau = kDefaultTau;
  int epochs = 50;
  int batch_size = 256;
  double init_scale = 0.5;
  TripletStrategy triplets = TripletStrategy::quadratic;
  std::int64_t triplet_count = 0;  // fixed_count only
  DecoderKind decoder = DecoderKind::greedy;
  Affinity affinity = Affinity::shifted_cosine;
  int checkpoint_every = 10;
  int restarts = 5;  // bkm only
};

struct RunArtifacts {
  Dendrogram tree = Dendrogram::from_merges(2, {{0, 1}});
  double cost = 0.0;
  CostBounds bounds;
  std::optional<double> purity;
  std::string newick;
  std::uint64_t similarity_checksum = 0;
  double train_seconds = 0.0;
  double decode_seconds = 0.0;
  std::optional<Embedding> embedding;  // hyphc only
  std::vector<double> epoch_losses;    // hyphc only, batch loss per epoch
  std::vector<std::string> warnings;
  std::string metrics_text;  // deterministic key=value record
};

// Executes the configured method end to end. When output_dir is set, writes
// config echo, metrics, Newick tree, timings, and (for hyphc) embedding
// snapshots and a final checkpoint.
RunArtifacts run(const RunConfig& config);

// Training checkpoint: coordinates, scale, optimizer state, step counter.
void save_checkpoint(const std::string& path, const Embedding& z, const OptimizerState& state);
struct Checkpoint {
  Embedding z;
  OptimizerState state;
};
Checkpoint load_checkpoint(const std::string& path);

// Per-checkpoint embedding snapshot: leaf id, x, y, norm.
void write_snapshot_csv(const std::string& path, const Embedding& z);

std::string config_echo(const RunConfig& config);

}  // namespace hyphc
