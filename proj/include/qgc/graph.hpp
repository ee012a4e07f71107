#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgc/rng.hpp"

namespace qgc {

/// Undirected simple graph on labeled nodes. Adjacency is one 64-bit mask per
/// node, so edge queries are O(1) and equality is structural. Node count is
/// capped to the simulator's qubit cap.
class Graph {
 public:
  static constexpr int kMaxNodes = 14;

  explicit Graph(int n_nodes);
  Graph(int n_nodes, std::initializer_list<std::pair<int, int>> edges);
  Graph(int n_nodes, std::span<const std::pair<int, int>> edges);

  int n_nodes() const { return n_; }
  bool has_edge(int i, int j) const;
  void add_edge(int i, int j);
  int edge_count() const;

  /// Edge list in canonical (i < j) lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  std::uint64_t adjacency_row(int i) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_pair(int i, int j) const;

  int n_;
  std::array<std::uint64_t, kMaxNodes> adj_{};
};

struct LabeledGraph {
  Graph graph;
  int label;  // +1 connected, -1 disconnected
};

/// True iff every node is reachable from node 0. A single node counts as
/// connected; n = 0 is rejected.
bool is_connected(const Graph& g);

/// Relabels nodes: node i of g becomes node perm[i].
Graph relabel(const Graph& g, std::span<const int> perm);

/// Erdős–Rényi G(n, p): each of the C(n,2) pairs drawn independently.
Graph sample_er(int n, double p, Rng& rng);

/// Rejection-samples `count` graphs split exactly 50/50 between connected and
/// disconnected. Per draw the edge probability is uniform in (0,1) unless
/// `fixed_p` pins it.
std::vector<LabeledGraph> sample_balanced_batch(
    int n, int count, Rng& rng, std::optional<double> fixed_p = std::nullopt);

/// Exact probability that G(n, p) is connected, via the standard recurrence
/// over the component containing node 1.
double connectedness_probability(int n, double p);

// Edge probability above which G(n, p) is almost surely connected.
double connectedness_threshold(int n);  // ln(n) / n

struct NamedGraph {
  std::string name;
  Graph graph;
  bool connected;
};

/// The seven fixed audit graphs on 8 nodes, with ground-truth labels.
std::vector<NamedGraph> edge_case_catalog(int n = 8);

// Edge-list text format: node count on line 1, one "i j" pair per line.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);
Graph load_edge_list(const std::string& path);

}  // namespace qgc
