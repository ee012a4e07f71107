#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgc/graph.hpp"
#include "qgc/training.hpp"

namespace qgc {

enum class Verdict { Connected, Disconnected, Undecided };

std::string verdict_name(Verdict v);

/// Maps a readout to a class with a confidence cutoff: |m| < cutoff is
/// undecided, otherwise the sign decides.
Verdict classify_with_confidence(double m, double cutoff = 0.01);

struct EdgeCaseVerdict {
  std::string graph_name;
  std::string circuit_name;
  double raw;  // readout in [-1, 1]
  Verdict verdict;
  bool truth_connected;
  std::optional<bool> correct;  // empty when undecided
};

struct NamedModel {
  std::string name;
  Model model;
};

/// One verdict per (catalog graph, model), graph-major. `extra` graphs are
/// appended after the fixed catalog.
std::vector<EdgeCaseVerdict> edge_case_report(
    std::span<const NamedModel> models, double cutoff = 0.01,
    std::span<const NamedGraph> extra = {});

std::string render_report_table(std::span<const EdgeCaseVerdict> report);
std::string report_to_json(std::span<const EdgeCaseVerdict> report);

}  // namespace qgc
