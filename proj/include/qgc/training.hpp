#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgc/ansatz.hpp"
#include "qgc/circuit.hpp"
#include "qgc/graph.hpp"

namespace qgc {

enum class OptimizerKind { Sgd, Adam };

std::string optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Sgd;
  double learning_rate = 0.01;
  // Adam moment settings, ignored for plain SGD
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Plain SGD or Adam with bias-corrected moments.
class Optimizer {
 public:
  explicit Optimizer(std::size_t dim, OptimizerConfig cfg = {});
  void step(ParameterVector& params, std::span<const double> grad);
  long step_count() const { return t_; }

 private:
  OptimizerConfig cfg_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct Model {
  CircuitIR circuit;  // ansatz only; the graph embedding is prepended per input
  ParameterVector params;
};

/// Squared error against the ±1 target.
double loss(double prediction, int label);

/// Readout of the embedded graph through the ansatz, in [-1, +1]. Negative
/// sign means disconnected.
double predict(const Model& m, const Graph& g);

std::vector<double> predict_many(const Model& m, std::span<const Graph> graphs,
                                 bool parallel = true);
/// Serial reference path, kept for crosschecking the OpenMP fan-out.
std::vector<double> predict_many_serial(const Model& m,
                                        std::span<const Graph> graphs);

/// Fraction with sign(prediction) equal to the label; 0 counts as incorrect.
double accuracy_from_predictions(std::span<const double> predictions,
                                 std::span<const LabeledGraph> labeled);
double evaluate_accuracy(const Model& m,
                         std::span<const LabeledGraph> validation,
                         bool parallel = true);

/// One optimizer step per `mini_batch` examples, visited in batch order.
/// Returns the mean loss over the batch (measured before each update).
double train_epoch(Model& m, Optimizer& opt,
                   std::span<const LabeledGraph> batch, int mini_batch = 1);

struct TrainingConfig {
  AnsatzKind ansatz = AnsatzKind::PermutationInvariant;
  int n_qubits = 8;
  int layers = 0;               // 0 = kind default
  int standard_sub_blocks = 0;  // 0 = two per drawn layer
  int epochs = 50;
  int batch_per_epoch = 100;
  int validation_size = 2900;
  int runs = 10;
  int mini_batch = 10;
  bool shared_validation = false;  // one validation set for all runs
  // Edge probability for sampled graphs. Default is the connectedness
  // threshold ln(n)/n, where disconnection comes from isolated nodes rather
  // than low edge count; uniform_edge_p draws a fresh p per graph instead,
  // and fixed_edge_p pins an explicit value (it wins over uniform_edge_p).
  std::optional<double> fixed_edge_p;
  bool uniform_edge_p = false;
  OptimizerConfig optimizer;
  std::uint64_t master_seed = 20250823;
  bool parallel = true;

  /// Resolved edge probability; nullopt means uniform per draw.
  std::optional<double> edge_p() const;

  void validate() const;  // throws std::invalid_argument
};

struct RunMetrics {
  std::vector<std::vector<double>> per_run;  // [run][epoch] validation accuracy
  std::vector<double> mean;                  // per epoch, across runs
  std::vector<double> three_sigma;           // 3x sample stddev; 0 for one run
};

struct ExperimentResult {
  TrainingConfig config;
  RunMetrics metrics;
  std::vector<ParameterVector> final_params;  // one per run
  std::vector<std::uint64_t> run_seeds;
};

CircuitIR build_for_config(const TrainingConfig& cfg);

/// Full protocol: per run, seed-derived initialization and data streams,
/// fresh (or shared) validation set, one accuracy sample per epoch;
/// aggregates mean and 3-sigma across runs.
ExperimentResult run_experiment(const TrainingConfig& cfg);

// --- persistence ---

/// `provenance` lines are emitted as leading '#' comments.
void write_metrics_csv(std::ostream& out, const RunMetrics& metrics,
                       std::span<const std::string> provenance);
/// Combined three-ansatz table: epochs,Sn,sn-error,Cn2,cn2-error,entanglement,en-error.
void write_combined_csv(std::ostream& out, const RunMetrics& perm,
                        const RunMetrics& cyclic, const RunMetrics& standard,
                        std::span<const std::string> provenance);
void write_metrics_json(std::ostream& out, const ExperimentResult& result);

struct SavedModel {
  AnsatzKind kind;
  int n_qubits;
  int layers;
  int sub_blocks;  // 0 unless the standard sub-block override was used
  std::uint64_t seed;
  ParameterVector params;

  Model instantiate() const;
};

void save_model(std::ostream& out, const SavedModel& m);
SavedModel load_model(std::istream& in);  // checks the version header
SavedModel load_model_file(const std::string& path);

std::vector<std::string> config_provenance(const TrainingConfig& cfg);

}  // namespace qgc
