#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "hyphc/baselines.hpp"
#include "hyphc/codec.hpp"
#include "hyphc/dasgupta.hpp"
#include "hyphc/pipeline.hpp"

namespace {

using namespace hyphc;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& msg : warnings) std::cerr << "warning: " << msg << '\n';
}

void print_run(const RunArtifacts& art) {
  print_warnings(art.warnings);
  std::cout << art.metrics_text;
  std::cout << "train_seconds " << art.train_seconds << '\n';
  std::cout << "decode_seconds " << art.decode_seconds << '\n';
}

Affinity parse_affinity(const std::string& name) {
  if (name == "cosine") return Affinity::cosine;
  if (name == "shifted-cosine") return Affinity::shifted_cosine;
  throw CLI::ValidationError("--affinity must be cosine or shifted-cosine");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-based hierarchical clustering in the Poincare disk"};
  app.require_subcommand(1);

  // similarity: features -> similarity matrix CSV
  std::string sim_input, sim_output, sim_affinity = "shifted-cosine";
  auto* sim = app.add_subcommand("similarity", "Build a similarity matrix from a feature CSV");
  sim->add_option("--input", sim_input, "feature CSV")->required();
  sim->add_option("--output", sim_output, "output matrix CSV")->required();
  sim->add_option("--affinity", sim_affinity, "cosine | shifted-cosine (default)");

  // bounds
  std::string bounds_input;
  std::int64_t bounds_samples = 0;
  std::uint64_t bounds_seed = 0;
  auto* bounds_cmd = app.add_subcommand("bounds", "Dasgupta cost bounds of a similarity matrix");
  bounds_cmd->add_option("--similarities", bounds_input, "similarity matrix CSV")->required();
  bounds_cmd->add_option("--samples", bounds_samples, "sampled mode with this many triplets");
  bounds_cmd->add_option("--seed", bounds_seed, "sampling seed");

  // train
  RunConfig train_cfg;
  std::string train_features, train_similarities, train_affinity = "shifted-cosine";
  std::string train_triplets = "quadratic", train_decoder = "greedy";
  int best_of_seeds = 0;
  auto* train = app.add_subcommand("train", "Optimize hyperbolic embeddings and decode a tree");
  train->add_option("--features", train_features, "feature CSV input");
  train->add_option("--similarities", train_similarities, "similarity matrix CSV input");
  train->add_option("--labels", train_cfg.labels_path, "single-column class CSV");
  train->add_option("--out", train_cfg.output_dir, "artifact directory");
  train->add_option("--seed", train_cfg.seed, "random seed (default 0)");
  train->add_option("--lr", train_cfg.lr, "learning rate (default 5e-4)");
  train->add_option("--tau", train_cfg.tau, "softmax temperature (default 0.05)");
  train->add_option("--epochs", train_cfg.epochs, "training epochs (default 50)");
  train->add_option("--batch-size", train_cfg.batch_size, "triplets per optimizer step");
  train->add_option("--init-scale", train_cfg.init_scale, "initial common norm (default 0.5)");
  train->add_option("--triplets", train_triplets, "all | quadratic | fixed:<count>");
  train->add_option("--decoder", train_decoder, "exact | greedy");
  train->add_option("--affinity", train_affinity, "cosine | shifted-cosine");
  train->add_option("--checkpoint-every", train_cfg.checkpoint_every, "epochs between snapshots");
  train->add_option("--best-of-seeds", best_of_seeds,
                    "run seeds 0..k-1 and report the lowest-cost run");

  // baseline
  RunConfig base_cfg;
  std::string base_method, base_features, base_similarities, base_affinity = "shifted-cosine";
  auto* baseline = app.add_subcommand("baseline", "Run a discrete baseline (sl|al|cl|wl|bkm)");
  baseline->add_option("--method", base_method, "sl | al | cl | wl | bkm")->required();
  baseline->add_option("--features", base_features, "feature CSV input");
  baseline->add_option("--similarities", base_similarities, "similarity matrix CSV input");
  baseline->add_option("--labels", base_cfg.labels_path, "single-column class CSV");
  baseline->add_option("--out", base_cfg.output_dir, "artifact directory");
  baseline->add_option("--seed", base_cfg.seed, "seed (bkm)");
  baseline->add_option("--restarts", base_cfg.restarts, "local-search restarts (bkm)");
  baseline->add_option("--affinity", base_affinity, "cosine | shifted-cosine");

  // decode
  std::string decode_ckpt, decode_out, decode_kind = "exact";
  auto* decode_cmd = app.add_subcommand("decode", "Decode a checkpoint into a Newick tree");
  decode_cmd->add_option("--checkpoint", decode_ckpt, "checkpoint file")->required();
  decode_cmd->add_option("--decoder", decode_kind, "exact | greedy");
  decode_cmd->add_option("--out", decode_out, "output Newick file (default stdout)");

  // eval
  std::string eval_tree, eval_sims, eval_labels, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score a Newick tree against a similarity matrix");
  eval_cmd->add_option("--tree", eval_tree, "Newick file")->required();
  eval_cmd->add_option("--similarities", eval_sims, "similarity matrix CSV")->required();
  eval_cmd->add_option("--labels", eval_labels, "single-column class CSV");
  eval_cmd->add_option("--out", eval_out, "metrics output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const Eigen::MatrixXd features = load_features(sim_input);
      std::vector<int> dropped;
      const SimilarityMatrix w =
          similarity_from_features(features, parse_affinity(sim_affinity), &dropped);
      for (const int c : dropped)
        std::cerr << "warning: dropped constant feature column " << c << '\n';
      write_matrix_csv(sim_output, w);
      std::cout << "n " << w.rows() << "\nchecksum " << matrix_checksum(w) << '\n';
    } else if (*bounds_cmd) {
      std::vector<std::string> warnings;
      const SimilarityMatrix w = load_similarity(bounds_input, &warnings);
      print_warnings(warnings);
      const CostBounds b = bounds_samples > 0
                               ? cost_bounds_sampled(w, bounds_samples, bounds_seed)
                               : cost_bounds(w);
      std::cout << "lower_bound " << b.lower << "\nupper_bound " << b.upper << '\n';
    } else if (*train) {
      if (train_features.empty() == train_similarities.empty())
        throw std::runtime_error("pass exactly one of --features / --similarities");
      train_cfg.method = Method::hyphc;
      train_cfg.input_kind =
          train_features.empty() ? InputKind::similarities : InputKind::features;
      train_cfg.dataset_path = train_features.empty() ? train_similarities : train_features;
      train_cfg.affinity = parse_affinity(train_affinity);
      train_cfg.decoder = train_decoder == "exact" ? DecoderKind::exact : DecoderKind::greedy;
      if (train_triplets == "all") {
        train_cfg.triplets = TripletStrategy::all;
      } else if (train_triplets == "quadratic") {
        train_cfg.triplets = TripletStrategy::quadratic;
      } else if (train_triplets.rfind("fixed:", 0) == 0) {
        train_cfg.triplets = TripletStrategy::fixed_count;
        train_cfg.triplet_count = std::stoll(train_triplets.substr(6));
      } else {
        throw std::runtime_error("--triplets must be all, quadratic, or fixed:<count>");
      }

      if (best_of_seeds > 0) {
        const std::string base_dir = train_cfg.output_dir;
        RunArtifacts best;
        std::uint64_t best_seed = 0;
        bool have = false;
        for (int s = 0; s < best_of_seeds; ++s) {
          RunConfig cfg = train_cfg;
          cfg.seed = static_cast<std::uint64_t>(s);
          if (!base_dir.empty()) cfg.output_dir = base_dir + "/seed_" + std::to_string(s);
          RunArtifacts art = run(cfg);
          std::cerr << "seed " << s << " cost " << art.cost << '\n';
          if (!have || art.cost < best.cost) {
            best = std::move(art);
            best_seed = cfg.seed;
            have = true;
          }
        }
        std::cout << "best_seed " << best_seed << '\n';
        print_run(best);
      } else {
        print_run(run(train_cfg));
      }
    } else if (*baseline) {
      if (base_features.empty() == base_similarities.empty())
        throw std::runtime_error("pass exactly one of --features / --similarities");
      base_cfg.method = method_from_string(base_method);
      if (base_cfg.method == Method::hyphc)
        throw std::runtime_error("use the train subcommand for hyphc");
      base_cfg.input_kind = base_features.empty() ? InputKind::similarities : InputKind::features;
      base_cfg.dataset_path = base_features.empty() ? base_similarities : base_features;
      base_cfg.affinity = parse_affinity(base_affinity);
      print_run(run(base_cfg));
    } else if (*decode_cmd) {
      const Checkpoint ck = load_checkpoint(decode_ckpt);
      const Dendrogram tree =
          decode_kind == "greedy" ? greedy_decode(ck.z) : exact_decode(ck.z);
      const std::string newick = to_newick(tree);
      if (decode_out.empty())
        std::cout << newick << '\n';
      else
        std::ofstream(decode_out) << newick << '\n';
    } else if (*eval_cmd) {
      std::ifstream tree_in(eval_tree);
      if (!tree_in) throw std::runtime_error("cannot open " + eval_tree);
      std::string newick((std::istreambuf_iterator<char>(tree_in)),
                         std::istreambuf_iterator<char>());
      const Dendrogram tree = from_newick(newick);
      std::vector<std::string> warnings;
      const SimilarityMatrix w = load_similarity(eval_sims, &warnings);
      print_warnings(warnings);
      const CostBounds b = w.rows() <= 500
                               ? cost_bounds(w)
                               : cost_bounds_sampled(w, static_cast<std::int64_t>(w.rows()) *
                                                            w.rows(), 0);
      std::ostringstream metrics;
      metrics << "n " << w.rows() << '\n';
      metrics << "cost " << dasgupta_cost(tree, w) << '\n';
      metrics << "lower_bound " << b.lower << '\n';
      metrics << "upper_bound " << b.upper << '\n';
      if (!eval_labels.empty())
        metrics << "purity " << dendrogram_purity(tree, load_labels(eval_labels)) << '\n';
      if (eval_out.empty())
        std::cout << metrics.str();
      else
        std::ofstream(eval_out) << metrics.str();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
