#include "qgc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qgc/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgc {

namespace {

// Fixed-width printf formatting so identical configs produce byte-identical
// files regardless of locale or stream state.
std::string fmt(double x, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

StateVector embedded_state(const Graph& g) {
  static const ParameterVector kNoParams{};
  StateVector s(g.n_nodes());
  const CircuitIR prefix = embed_graph(g);
  for (const Gate& gate : prefix.gates) apply_gate_inplace(s, gate, kNoParams);
  return s;
}

}  // namespace

std::string optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Adam: return "adam";
  }
  throw std::invalid_argument("unknown optimizer kind");
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw std::invalid_argument("unknown optimizer: " + name);
}

Optimizer::Optimizer(std::size_t dim, OptimizerConfig cfg)
    : cfg_(cfg), m_(dim, 0.0), v_(dim, 0.0) {}

void Optimizer::step(ParameterVector& params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Optimizer: dimension mismatch");
  }
  ++t_;
  if (cfg_.kind == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= cfg_.learning_rate * grad[i];
    }
    return;
  }
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }
}

double loss(double prediction, int label) {
  if (label != 1 && label != -1) {
    throw std::invalid_argument("loss: label must be +1 or -1");
  }
  const double d = prediction - label;
  return d * d;
}

double predict(const Model& m, const Graph& g) {
  return run_circuit(m.circuit, m.params, embedded_state(g));
}

std::vector<double> predict_many_serial(const Model& m,
                                        std::span<const Graph> graphs) {
  std::vector<double> out(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    out[i] = predict(m, graphs[i]);
  }
  return out;
}

std::vector<double> predict_many(const Model& m, std::span<const Graph> graphs,
                                 bool parallel) {
  if (!parallel) return predict_many_serial(m, graphs);
  std::vector<double> out(graphs.size());
  const std::int64_t count = static_cast<std::int64_t>(graphs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        predict(m, graphs[static_cast<std::size_t>(i)]);
  }
  return out;
}

double accuracy_from_predictions(std::span<const double> predictions,
                                 std::span<const LabeledGraph> labeled) {
  if (labeled.empty()) {
    throw std::invalid_argument("accuracy: empty validation set");
  }
  if (predictions.size() != labeled.size()) {
    throw std::invalid_argument("accuracy: size mismatch");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const double p = predictions[i];
    // p == 0 carries no sign and counts as incorrect
    if ((p > 0 && labeled[i].label == 1) || (p < 0 && labeled[i].label == -1)) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(labeled.size());
}

double evaluate_accuracy(const Model& m,
                         std::span<const LabeledGraph> validation,
                         bool parallel) {
  std::vector<Graph> graphs;
  graphs.reserve(validation.size());
  for (const auto& lg : validation) graphs.push_back(lg.graph);
  return accuracy_from_predictions(predict_many(m, graphs, parallel),
                                   validation);
}

double train_epoch(Model& m, Optimizer& opt,
                   std::span<const LabeledGraph> batch, int mini_batch) {
  if (batch.empty()) throw std::invalid_argument("train_epoch: empty batch");
  if (mini_batch < 1) throw std::invalid_argument("train_epoch: mini_batch < 1");

  double loss_sum = 0.0;
  std::vector<double> grad_acc(m.params.size(), 0.0);
  std::vector<double> grad;
  int pending = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& example = batch[i];
    const double pred = gradient_with_value(
        m.circuit, m.params, embedded_state(example.graph), grad);
    loss_sum += loss(pred, example.label);
    const double dloss = 2.0 * (pred - example.label);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      grad_acc[k] += dloss * grad[k];
    }
    ++pending;
    if (pending == mini_batch || i + 1 == batch.size()) {
      for (double& gk : grad_acc) gk /= pending;
      opt.step(m.params, grad_acc);
      std::fill(grad_acc.begin(), grad_acc.end(), 0.0);
      pending = 0;
    }
  }
  return loss_sum / static_cast<double>(batch.size());
}

std::optional<double> TrainingConfig::edge_p() const {
  if (fixed_edge_p) return fixed_edge_p;
  if (uniform_edge_p) return std::nullopt;
  return connectedness_threshold(n_qubits);
}

void TrainingConfig::validate() const {
  if (n_qubits < 2 || n_qubits > StateVector::kMaxQubits) {
    throw std::invalid_argument("config: n_qubits out of range");
  }
  if (epochs < 1) throw std::invalid_argument("config: epochs < 1");
  if (runs < 1) throw std::invalid_argument("config: runs < 1");
  if (batch_per_epoch < 2 || batch_per_epoch % 2 != 0) {
    throw std::invalid_argument("config: batch_per_epoch must be even");
  }
  if (validation_size < 2 || validation_size % 2 != 0) {
    throw std::invalid_argument("config: validation_size must be even");
  }
  if (mini_batch < 1) throw std::invalid_argument("config: mini_batch < 1");
  if (fixed_edge_p && (*fixed_edge_p < 0.0 || *fixed_edge_p > 1.0)) {
    throw std::invalid_argument("config: fixed_edge_p outside [0, 1]");
  }
}

CircuitIR build_for_config(const TrainingConfig& cfg) {
  return build_ansatz(cfg.ansatz, cfg.n_qubits, cfg.layers,
                      cfg.ansatz == AnsatzKind::Standard
                          ? cfg.standard_sub_blocks
                          : 0);
}

namespace {

// Substream tags for derive_seed
enum : std::uint64_t { kInitStream = 1, kDataStream = 2, kValStream = 3 };

void aggregate(RunMetrics& m) {
  const std::size_t runs = m.per_run.size();
  const std::size_t epochs = runs ? m.per_run[0].size() : 0;
  m.mean.assign(epochs, 0.0);
  m.three_sigma.assign(epochs, 0.0);
  for (std::size_t e = 0; e < epochs; ++e) {
    double sum = 0.0;
    for (const auto& run : m.per_run) sum += run[e];
    const double mean = sum / static_cast<double>(runs);
    m.mean[e] = mean;
    if (runs > 1) {
      double ss = 0.0;
      for (const auto& run : m.per_run) {
        ss += (run[e] - mean) * (run[e] - mean);
      }
      m.three_sigma[e] = 3.0 * std::sqrt(ss / static_cast<double>(runs - 1));
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const TrainingConfig& cfg) {
  cfg.validate();
  const CircuitIR circuit = build_for_config(cfg);
  circuit.validate();

  std::vector<LabeledGraph> shared_val;
  if (cfg.shared_validation) {
    Rng val_rng(derive_seed(cfg.master_seed, 0, kValStream));
    shared_val = sample_balanced_batch(cfg.n_qubits, cfg.validation_size,
                                       val_rng, cfg.edge_p());
  }

  ExperimentResult result;
  result.config = cfg;
  result.metrics.per_run.resize(static_cast<std::size_t>(cfg.runs));
  result.final_params.resize(static_cast<std::size_t>(cfg.runs));
  result.run_seeds.resize(static_cast<std::size_t>(cfg.runs));

  for (int r = 0; r < cfg.runs; ++r) {
    const std::uint64_t run_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r) + 1);
    result.run_seeds[r] = run_seed;

    Rng init_rng(derive_seed(run_seed, kInitStream));
    Rng data_rng(derive_seed(run_seed, kDataStream));

    Model model{circuit, ParameterVector(circuit.slot_count)};
    for (double& p : model.params) {
      p = init_rng.uniform(-std::numbers::pi, std::numbers::pi);
    }

    std::vector<LabeledGraph> validation;
    if (cfg.shared_validation) {
      validation = shared_val;
    } else {
      Rng val_rng(derive_seed(run_seed, kValStream));
      validation = sample_balanced_batch(cfg.n_qubits, cfg.validation_size,
                                         val_rng, cfg.edge_p());
    }

    Optimizer opt(model.params.size(), cfg.optimizer);
    auto& accuracy = result.metrics.per_run[r];
    accuracy.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int e = 0; e < cfg.epochs; ++e) {
      const auto batch = sample_balanced_batch(
          cfg.n_qubits, cfg.batch_per_epoch, data_rng, cfg.edge_p());
      train_epoch(model, opt, batch, cfg.mini_batch);
      accuracy.push_back(evaluate_accuracy(model, validation, cfg.parallel));
    }
    result.final_params[r] = std::move(model.params);
  }

  aggregate(result.metrics);
  return result;
}

std::vector<std::string> config_provenance(const TrainingConfig& cfg) {
  std::vector<std::string> lines;
  lines.push_back(std::string("qgc version=") + kVersion);
  lines.push_back("ansatz=" + ansatz_name(cfg.ansatz));
  lines.push_back("n_qubits=" + std::to_string(cfg.n_qubits));
  lines.push_back("layers=" + std::to_string(cfg.layers));
  lines.push_back("standard_sub_blocks=" +
                  std::to_string(cfg.standard_sub_blocks));
  lines.push_back("epochs=" + std::to_string(cfg.epochs));
  lines.push_back("batch_per_epoch=" + std::to_string(cfg.batch_per_epoch));
  lines.push_back("validation_size=" + std::to_string(cfg.validation_size));
  lines.push_back("runs=" + std::to_string(cfg.runs));
  lines.push_back("mini_batch=" + std::to_string(cfg.mini_batch));
  lines.push_back(std::string("shared_validation=") +
                  (cfg.shared_validation ? "true" : "false"));
  const auto edge_p = cfg.edge_p();
  lines.push_back("edge_p=" + (edge_p ? fmt(*edge_p) : std::string("uniform")));
  lines.push_back("optimizer=" + optimizer_name(cfg.optimizer.kind));
  lines.push_back("learning_rate=" + fmt(cfg.optimizer.learning_rate));
  lines.push_back("beta1=" + fmt(cfg.optimizer.beta1));
  lines.push_back("beta2=" + fmt(cfg.optimizer.beta2));
  lines.push_back("epsilon=" + fmt(cfg.optimizer.epsilon));
  lines.push_back("master_seed=" + std::to_string(cfg.master_seed));
  return lines;
}

void write_metrics_csv(std::ostream& out, const RunMetrics& metrics,
                       std::span<const std::string> provenance) {
  for (const auto& line : provenance) out << "# " << line << "\n";
  out << "epochs,mean,three_sigma\n";
  for (std::size_t e = 0; e < metrics.mean.size(); ++e) {
    out << (e + 1) << "," << fmt(metrics.mean[e]) << ","
        << fmt(metrics.three_sigma[e]) << "\n";
  }
}

void write_combined_csv(std::ostream& out, const RunMetrics& perm,
                        const RunMetrics& cyclic, const RunMetrics& standard,
                        std::span<const std::string> provenance) {
  if (perm.mean.size() != cyclic.mean.size() ||
      perm.mean.size() != standard.mean.size()) {
    throw std::invalid_argument("combined CSV: epoch count mismatch");
  }
  for (const auto& line : provenance) out << "# " << line << "\n";
  out << "epochs,Sn,sn-error,Cn2,cn2-error,entanglement,en-error\n";
  for (std::size_t e = 0; e < perm.mean.size(); ++e) {
    out << (e + 1) << "," << fmt(perm.mean[e]) << ","
        << fmt(perm.three_sigma[e]) << "," << fmt(cyclic.mean[e]) << ","
        << fmt(cyclic.three_sigma[e]) << "," << fmt(standard.mean[e]) << ","
        << fmt(standard.three_sigma[e]) << "\n";
  }
}

void write_metrics_json(std::ostream& out, const ExperimentResult& result) {
  const TrainingConfig& cfg = result.config;
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = {
      {"ansatz", ansatz_name(cfg.ansatz)},
      {"n_qubits", cfg.n_qubits},
      {"layers", cfg.layers},
      {"standard_sub_blocks", cfg.standard_sub_blocks},
      {"epochs", cfg.epochs},
      {"batch_per_epoch", cfg.batch_per_epoch},
      {"validation_size", cfg.validation_size},
      {"runs", cfg.runs},
      {"mini_batch", cfg.mini_batch},
      {"shared_validation", cfg.shared_validation},
      {"optimizer", optimizer_name(cfg.optimizer.kind)},
      {"learning_rate", cfg.optimizer.learning_rate},
      {"beta1", cfg.optimizer.beta1},
      {"beta2", cfg.optimizer.beta2},
      {"epsilon", cfg.optimizer.epsilon},
      {"master_seed", cfg.master_seed},
  };
  if (const auto edge_p = cfg.edge_p()) {
    j["config"]["edge_p"] = *edge_p;
  } else {
    j["config"]["edge_p"] = "uniform";
  }
  j["run_seeds"] = result.run_seeds;
  j["per_run_accuracy"] = result.metrics.per_run;
  j["mean"] = result.metrics.mean;
  j["three_sigma"] = result.metrics.three_sigma;
  out << j.dump(2) << "\n";
}

Model SavedModel::instantiate() const {
  CircuitIR circuit = build_ansatz(kind, n_qubits, layers,
                                   kind == AnsatzKind::Standard ? sub_blocks
                                                                : 0);
  if (static_cast<int>(params.size()) != circuit.slot_count) {
    throw std::runtime_error("model file: parameter count mismatch");
  }
  return Model{std::move(circuit), params};
}

void save_model(std::ostream& out, const SavedModel& m) {
  out << "qgc-model v1\n";
  out << "ansatz " << ansatz_name(m.kind) << "\n";
  out << "n_qubits " << m.n_qubits << "\n";
  out << "layers " << m.layers << "\n";
  out << "sub_blocks " << m.sub_blocks << "\n";
  out << "seed " << m.seed << "\n";
  out << "slot_count " << m.params.size() << "\n";
  for (double p : m.params) out << fmt(p, "%.17g") << "\n";
}

SavedModel load_model(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "qgc-model" || version != "v1") {
    throw std::runtime_error("model file: missing or unsupported version header");
  }
  SavedModel m{};
  std::string key, kind_name_str;
  std::size_t slot_count = 0;
  for (int i = 0; i < 6; ++i) {
    if (!(in >> key)) throw std::runtime_error("model file: truncated header");
    if (key == "ansatz") {
      in >> kind_name_str;
    } else if (key == "n_qubits") {
      in >> m.n_qubits;
    } else if (key == "layers") {
      in >> m.layers;
    } else if (key == "sub_blocks") {
      in >> m.sub_blocks;
    } else if (key == "seed") {
      in >> m.seed;
    } else if (key == "slot_count") {
      in >> slot_count;
    } else {
      throw std::runtime_error("model file: unknown header key " + key);
    }
    if (!in) throw std::runtime_error("model file: malformed header value");
  }
  m.kind = parse_ansatz_kind(kind_name_str);
  m.params.resize(slot_count);
  for (std::size_t i = 0; i < slot_count; ++i) {
    if (!(in >> m.params[i])) {
      throw std::runtime_error("model file: truncated parameter list");
    }
  }
  return m;
}

SavedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return load_model(in);
}

}  // namespace qgc
