#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgc/edge_eval.hpp"
#include "qgc/graph.hpp"
#include "qgc/training.hpp"
#include "qgc/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace qgc;

namespace {

struct ExperimentConfig {
  TrainingConfig base;
  std::vector<AnsatzKind> ansatzes{AnsatzKind::PermutationInvariant,
                                   AnsatzKind::CyclicInvariant,
                                   AnsatzKind::Standard};
  std::string out_dir = ".";
  double cutoff = 0.01;
  int workers = 0;  // 0 = runtime default
};

std::vector<AnsatzKind> parse_ansatz_list(const std::string& spec) {
  if (spec == "all") {
    return {AnsatzKind::PermutationInvariant, AnsatzKind::CyclicInvariant,
            AnsatzKind::Standard};
  }
  std::vector<AnsatzKind> kinds;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) kinds.push_back(parse_ansatz_kind(item));
  if (kinds.empty()) throw std::invalid_argument("empty ansatz list");
  return kinds;
}

// Flat key=value config file; '#' starts a comment. CLI flags override.
void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "ansatz") cfg.ansatzes = parse_ansatz_list(value);
    else if (key == "n_qubits") cfg.base.n_qubits = std::stoi(value);
    else if (key == "layers") cfg.base.layers = std::stoi(value);
    else if (key == "standard_sub_blocks")
      cfg.base.standard_sub_blocks = std::stoi(value);
    else if (key == "epochs") cfg.base.epochs = std::stoi(value);
    else if (key == "batch_per_epoch") cfg.base.batch_per_epoch = std::stoi(value);
    else if (key == "validation_size")
      cfg.base.validation_size = std::stoi(value);
    else if (key == "runs") cfg.base.runs = std::stoi(value);
    else if (key == "mini_batch") cfg.base.mini_batch = std::stoi(value);
    else if (key == "shared_validation")
      cfg.base.shared_validation = (value == "true" || value == "1");
    else if (key == "fixed_edge_p") cfg.base.fixed_edge_p = std::stod(value);
    else if (key == "uniform_edge_p")
      cfg.base.uniform_edge_p = (value == "true" || value == "1");
    else if (key == "optimizer")
      cfg.base.optimizer.kind = parse_optimizer_kind(value);
    else if (key == "learning_rate")
      cfg.base.optimizer.learning_rate = std::stod(value);
    else if (key == "beta1") cfg.base.optimizer.beta1 = std::stod(value);
    else if (key == "beta2") cfg.base.optimizer.beta2 = std::stod(value);
    else if (key == "epsilon") cfg.base.optimizer.epsilon = std::stod(value);
    else if (key == "seed") cfg.base.master_seed = std::stoull(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "cutoff") cfg.cutoff = std::stod(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key " + key);
  }
}

void apply_workers(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int cmd_curve(int n, int points, std::uint64_t seed, const std::string& out) {
  if (points < 2) throw std::invalid_argument("curve: need at least 2 points");
  std::ostringstream csv;
  csv << "# qgc version=" << kVersion << "\n";
  csv << "# n=" << n << " points=" << points << " seed=" << seed << "\n";
  csv << "p,connected\n";
  char buf[64];
  for (int i = 0; i < points; ++i) {
    const double p = static_cast<double>(i) / (points - 1);
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", p,
                  connectedness_probability(n, p));
    csv << buf;
  }
  write_file(out, csv.str());
  std::cout << "wrote " << out << "\n";
  return 0;
}

ExperimentResult train_one(const ExperimentConfig& cfg, AnsatzKind kind) {
  TrainingConfig tc = cfg.base;
  tc.ansatz = kind;
  std::cout << "training " << ansatz_name(kind) << " ansatz (" << tc.runs
            << " runs, " << tc.epochs << " epochs)...\n";
  ExperimentResult result = run_experiment(tc);
  std::cout << "  final mean accuracy: " << result.metrics.mean.back() << "\n";
  return result;
}

void persist_result(const ExperimentConfig& cfg, const ExperimentResult& res) {
  const std::string name = ansatz_name(res.config.ansatz);
  const fs::path dir(cfg.out_dir);

  std::ostringstream csv;
  const auto prov = config_provenance(res.config);
  write_metrics_csv(csv, res.metrics, prov);
  write_file(dir / ("metrics_" + name + ".csv"), csv.str());

  std::ostringstream json;
  write_metrics_json(json, res);
  write_file(dir / ("metrics_" + name + ".json"), json.str());

  for (std::size_t r = 0; r < res.final_params.size(); ++r) {
    SavedModel saved{res.config.ansatz, res.config.n_qubits, res.config.layers,
                     res.config.ansatz == AnsatzKind::Standard
                         ? res.config.standard_sub_blocks
                         : 0,
                     res.run_seeds[r], res.final_params[r]};
    if (saved.layers <= 0) saved.layers = default_layers(res.config.ansatz);
    std::ostringstream model;
    save_model(model, saved);
    write_file(dir / ("model_" + name + "_run" + std::to_string(r) + ".txt"),
               model.str());
  }
}

int cmd_train(const ExperimentConfig& cfg) {
  apply_workers(cfg.workers);
  fs::create_directories(cfg.out_dir);

  std::vector<ExperimentResult> results;
  for (AnsatzKind kind : cfg.ansatzes) {
    results.push_back(train_one(cfg, kind));
    persist_result(cfg, results.back());
  }

  // combined table when exactly the three standard families were trained
  if (cfg.ansatzes.size() == 3) {
    const ExperimentResult* perm = nullptr;
    const ExperimentResult* cyclic = nullptr;
    const ExperimentResult* standard = nullptr;
    for (const auto& r : results) {
      switch (r.config.ansatz) {
        case AnsatzKind::PermutationInvariant: perm = &r; break;
        case AnsatzKind::CyclicInvariant: cyclic = &r; break;
        case AnsatzKind::Standard: standard = &r; break;
      }
    }
    if (perm && cyclic && standard) {
      std::ostringstream csv;
      const auto prov = config_provenance(cfg.base);
      write_combined_csv(csv, perm->metrics, cyclic->metrics,
                         standard->metrics, prov);
      write_file(fs::path(cfg.out_dir) / "graph-connectedness-8.csv",
                 csv.str());
    }
  }
  return 0;
}

int cmd_edge_cases(const ExperimentConfig& cfg,
                   const std::vector<std::string>& model_files, bool fresh_train,
                   const std::vector<std::string>& graph_files,
                   const std::string& out_json) {
  apply_workers(cfg.workers);

  std::vector<NamedModel> models;
  if (fresh_train) {
    for (AnsatzKind kind : cfg.ansatzes) {
      ExperimentResult res = train_one(cfg, kind);
      SavedModel saved{kind, cfg.base.n_qubits, res.config.layers,
                       kind == AnsatzKind::Standard
                           ? res.config.standard_sub_blocks
                           : 0,
                       res.run_seeds[0], res.final_params[0]};
      if (saved.layers <= 0) saved.layers = default_layers(kind);
      models.push_back({ansatz_name(kind), saved.instantiate()});
    }
  } else {
    if (model_files.empty()) {
      throw std::runtime_error(
          "edge-cases: pass --model files or --fresh-train");
    }
    for (const auto& path : model_files) {
      SavedModel saved = load_model_file(path);
      models.push_back({ansatz_name(saved.kind), saved.instantiate()});
    }
  }

  std::vector<NamedGraph> extra;
  for (const auto& path : graph_files) {
    Graph g = load_edge_list(path);
    extra.push_back(
        {fs::path(path).filename().string(), g, is_connected(g)});
  }

  const auto report = edge_case_report(models, cfg.cutoff, extra);
  std::cout << render_report_table(report);

  if (!out_json.empty()) {
    nlohmann::json wrapped;
    wrapped["version"] = kVersion;
    wrapped["cutoff"] = cfg.cutoff;
    wrapped["seed"] = cfg.base.master_seed;
    wrapped["report"] = nlohmann::json::parse(report_to_json(report));
    write_file(out_json, wrapped.dump(2) + "\n");
    std::cout << "wrote " << out_json << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum graph-connectedness classifier"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, ansatz_spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", cfg.base.master_seed, "master seed");
    sub->add_option("--ansatz", ansatz_spec, "perm|cyclic|standard|all");
    sub->add_option("--workers", cfg.workers, "worker thread count");
  };

  // curve
  auto* curve = app.add_subcommand(
      "curve", "exact connectedness-probability curve as CSV");
  int curve_n = 8, curve_points = 101;
  std::string curve_out = "connected-probability.csv";
  curve->add_option("--n", curve_n, "node count");
  curve->add_option("--points", curve_points, "grid points over [0, 1]");
  curve->add_option("--out", curve_out, "output CSV path");
  curve->add_option("--seed", cfg.base.master_seed, "master seed");

  // train
  auto* train = app.add_subcommand(
      "train", "train ansatzes and export metrics + model parameters");
  add_common(train);
  train->add_option("--epochs", cfg.base.epochs, "epochs per run");
  train->add_option("--runs", cfg.base.runs, "independent runs");
  train->add_option("--batch", cfg.base.batch_per_epoch, "graphs per epoch");
  train->add_option("--validation", cfg.base.validation_size,
                    "validation set size");
  train->add_option("--layers", cfg.base.layers, "ansatz layers (0 = default)");
  train->add_option("--lr", cfg.base.optimizer.learning_rate, "learning rate");
  std::string optimizer_spec;
  train->add_option("--optimizer", optimizer_spec, "sgd|adam");
  train->add_option("--mini-batch", cfg.base.mini_batch,
                    "examples averaged per optimizer step");
  double edge_p_flag = -1.0;
  bool uniform_p_flag = false;
  train->add_option("--edge-p", edge_p_flag,
                    "fixed edge probability (default: ln(n)/n threshold)");
  train->add_flag("--uniform-edge-p", uniform_p_flag,
                  "draw a fresh uniform edge probability per graph");
  train->add_option("--out", cfg.out_dir, "output directory");

  // edge-cases
  auto* edge = app.add_subcommand(
      "edge-cases", "evaluate trained models on the audit graph catalog");
  add_common(edge);
  std::vector<std::string> model_files, graph_files;
  bool fresh_train = false;
  std::string edge_out;
  edge->add_option("--model", model_files, "saved model file (repeatable)");
  edge->add_flag("--fresh-train", fresh_train, "train models first");
  edge->add_option("--graph", graph_files,
                   "extra edge-list graph file (repeatable)");
  edge->add_option("--cutoff", cfg.cutoff, "confidence cutoff");
  edge->add_option("--epochs", cfg.base.epochs, "epochs (with --fresh-train)");
  edge->add_option("--runs", cfg.base.runs, "runs (with --fresh-train)");
  edge->add_option("--validation", cfg.base.validation_size,
                   "validation size (with --fresh-train)");
  edge->add_option("--out", edge_out, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  try {
    // config file first, then explicit flags on top
    if (!config_path.empty()) {
      ExperimentConfig from_file;
      load_config_file(config_path, from_file);
      // re-apply CLI values over the file contents
      ExperimentConfig merged = from_file;
      for (const auto* sub : app.get_subcommands()) {
        for (const auto* opt : sub->get_options()) {
          if (opt->count() == 0) continue;
          const std::string n = opt->get_name();
          if (n == "--seed") merged.base.master_seed = cfg.base.master_seed;
          else if (n == "--workers") merged.workers = cfg.workers;
          else if (n == "--epochs") merged.base.epochs = cfg.base.epochs;
          else if (n == "--runs") merged.base.runs = cfg.base.runs;
          else if (n == "--batch")
            merged.base.batch_per_epoch = cfg.base.batch_per_epoch;
          else if (n == "--validation")
            merged.base.validation_size = cfg.base.validation_size;
          else if (n == "--layers") merged.base.layers = cfg.base.layers;
          else if (n == "--lr")
            merged.base.optimizer.learning_rate = cfg.base.optimizer.learning_rate;
          else if (n == "--mini-batch")
            merged.base.mini_batch = cfg.base.mini_batch;
          else if (n == "--out") merged.out_dir = cfg.out_dir;
          else if (n == "--cutoff") merged.cutoff = cfg.cutoff;
        }
      }
      if (!ansatz_spec.empty()) merged.ansatzes = parse_ansatz_list(ansatz_spec);
      cfg = merged;
    } else if (!ansatz_spec.empty()) {
      cfg.ansatzes = parse_ansatz_list(ansatz_spec);
    }
    if (!optimizer_spec.empty()) {
      cfg.base.optimizer.kind = parse_optimizer_kind(optimizer_spec);
    }
    if (edge_p_flag >= 0.0) cfg.base.fixed_edge_p = edge_p_flag;
    if (uniform_p_flag) cfg.base.uniform_edge_p = true;

    if (curve->parsed()) {
      return cmd_curve(curve_n, curve_points, cfg.base.master_seed, curve_out);
    }
    if (train->parsed()) return cmd_train(cfg);
    if (edge->parsed()) {
      return cmd_edge_cases(cfg, model_files, fresh_train, graph_files,
                            edge_out);
    }
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
