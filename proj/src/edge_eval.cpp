#include "qgc/edge_eval.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qgc {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Connected: return "connected";
    case Verdict::Disconnected: return "disconnected";
    case Verdict::Undecided: return "undecided";
  }
  throw std::invalid_argument("unknown verdict");
}

Verdict classify_with_confidence(double m, double cutoff) {
  if (m < -1.0 || m > 1.0) {
    throw std::invalid_argument("classify: measurement outside [-1, 1]");
  }
  if (cutoff < 0.0) throw std::invalid_argument("classify: negative cutoff");
  if (std::abs(m) < cutoff) return Verdict::Undecided;
  return m >= 0 ? Verdict::Connected : Verdict::Disconnected;
}

std::vector<EdgeCaseVerdict> edge_case_report(std::span<const NamedModel> models,
                                              double cutoff,
                                              std::span<const NamedGraph> extra) {
  std::vector<NamedGraph> graphs = edge_case_catalog();
  graphs.insert(graphs.end(), extra.begin(), extra.end());

  std::vector<EdgeCaseVerdict> report;
  report.reserve(graphs.size() * models.size());
  for (const NamedGraph& g : graphs) {
    for (const NamedModel& m : models) {
      if (m.model.circuit.n_qubits != g.graph.n_nodes()) {
        throw std::invalid_argument(
            "edge_case_report: model/graph qubit mismatch");
      }
      const double raw = predict(m.model, g.graph);
      const Verdict verdict = classify_with_confidence(raw, cutoff);
      std::optional<bool> correct;
      if (verdict != Verdict::Undecided) {
        correct = (verdict == Verdict::Connected) == g.connected;
      }
      report.push_back({g.name, m.name, raw, verdict, g.connected, correct});
    }
  }
  return report;
}

std::string render_report_table(std::span<const EdgeCaseVerdict> report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %-10s %12s %-13s %-13s %s\n",
                "graph", "circuit", "raw", "verdict", "truth", "correct");
  out << line;
  for (const auto& v : report) {
    std::snprintf(line, sizeof(line), "%-22s %-10s %12.4g %-13s %-13s %s\n",
                  v.graph_name.c_str(), v.circuit_name.c_str(), v.raw,
                  verdict_name(v.verdict).c_str(),
                  v.truth_connected ? "connected" : "disconnected",
                  v.correct ? (*v.correct ? "yes" : "no") : "n/a");
    out << line;
  }
  return out.str();
}

std::string report_to_json(std::span<const EdgeCaseVerdict> report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& v : report) {
    nlohmann::json row = {
        {"graph", v.graph_name},
        {"circuit", v.circuit_name},
        {"raw", v.raw},
        {"verdict", verdict_name(v.verdict)},
        {"truth", v.truth_connected ? "connected" : "disconnected"},
    };
    if (v.correct) {
      row["correct"] = *v.correct;
    } else {
      row["correct"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

}  // namespace qgc
