#include "qgc/graph.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qgc {

Graph::Graph(int n_nodes) : n_(n_nodes) {
  if (n_nodes < 0 || n_nodes > kMaxNodes) {
    throw std::invalid_argument("Graph: node count out of range [0, 14]");
  }
}

Graph::Graph(int n_nodes, std::initializer_list<std::pair<int, int>> edges)
    : Graph(n_nodes) {
  for (auto [i, j] : edges) add_edge(i, j);
}

Graph::Graph(int n_nodes, std::span<const std::pair<int, int>> edges)
    : Graph(n_nodes) {
  for (auto [i, j] : edges) add_edge(i, j);
}

void Graph::check_pair(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::invalid_argument("Graph: node index out of range");
  }
  if (i == j) throw std::invalid_argument("Graph: self-loops not allowed");
}

bool Graph::has_edge(int i, int j) const {
  check_pair(i, j);
  return (adj_[i] >> j) & 1u;
}

void Graph::add_edge(int i, int j) {
  check_pair(i, j);
  adj_[i] |= std::uint64_t{1} << j;
  adj_[j] |= std::uint64_t{1} << i;
}

int Graph::edge_count() const {
  int deg_sum = 0;
  for (int i = 0; i < n_; ++i) deg_sum += std::popcount(adj_[i]);
  return deg_sum / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if ((adj_[i] >> j) & 1u) out.emplace_back(i, j);
    }
  }
  return out;
}

std::uint64_t Graph::adjacency_row(int i) const {
  if (i < 0 || i >= n_) {
    throw std::invalid_argument("Graph: node index out of range");
  }
  return adj_[i];
}

bool is_connected(const Graph& g) {
  const int n = g.n_nodes();
  if (n == 0) throw std::invalid_argument("is_connected: empty graph");
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  std::uint64_t reached = 1;  // node 0
  std::uint64_t frontier = 1;
  while (frontier != 0) {
    std::uint64_t next = 0;
    for (int i = 0; i < n; ++i) {
      if ((frontier >> i) & 1u) next |= g.adjacency_row(i);
    }
    frontier = next & ~reached;
    reached |= next;
  }
  return reached == all;
}

Graph relabel(const Graph& g, std::span<const int> perm) {
  const int n = g.n_nodes();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("relabel: permutation size mismatch");
  }
  Graph out(n);
  for (auto [i, j] : g.edges()) out.add_edge(perm[i], perm[j]);
  return out;
}

Graph sample_er(int n, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("sample_er: p outside [0, 1]");
  }
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) g.add_edge(i, j);
    }
  }
  return g;
}

std::vector<LabeledGraph> sample_balanced_batch(int n, int count, Rng& rng,
                                                std::optional<double> fixed_p) {
  if (count < 0 || count % 2 != 0) {
    throw std::invalid_argument("sample_balanced_batch: count must be even");
  }
  std::vector<LabeledGraph> batch;
  batch.reserve(static_cast<std::size_t>(count));
  int quota_connected = count / 2;
  int quota_disconnected = count / 2;
  while (quota_connected > 0 || quota_disconnected > 0) {
    const double p = fixed_p ? *fixed_p : rng.uniform();
    Graph g = sample_er(n, p, rng);
    const bool connected = is_connected(g);
    int& quota = connected ? quota_connected : quota_disconnected;
    if (quota > 0) {
      --quota;
      batch.push_back({std::move(g), connected ? +1 : -1});
    }
  }
  return batch;
}

double connectedness_probability(int n, double p) {
  if (n < 1 || n > Graph::kMaxNodes) {
    throw std::invalid_argument("connectedness_probability: n out of range");
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("connectedness_probability: p outside [0, 1]");
  }
  // binomial table up to n
  std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    choose[i][0] = 1;
    for (int j = 1; j <= i; ++j) {
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }
  }
  // P(m) = 1 - sum_{k=1}^{m-1} C(m-1, k-1) P(k) (1-p)^{k(m-k)}
  std::vector<double> prob(n + 1, 0.0);
  prob[1] = 1.0;
  for (int m = 2; m <= n; ++m) {
    double acc = 0.0;
    for (int k = 1; k < m; ++k) {
      acc += choose[m - 1][k - 1] * prob[k] * std::pow(1.0 - p, k * (m - k));
    }
    prob[m] = 1.0 - acc;
  }
  return prob[n];
}

double connectedness_threshold(int n) {
  if (n < 1) throw std::invalid_argument("connectedness_threshold: n < 1");
  return std::log(static_cast<double>(n)) / n;
}

std::vector<NamedGraph> edge_case_catalog(int n) {
  if (n != 8) {
    throw std::invalid_argument("edge_case_catalog: fixed to n = 8");
  }
  std::vector<NamedGraph> catalog;

  Graph k7_isolated(8);
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) k7_isolated.add_edge(i, j);
  }
  catalog.push_back({"K7+isolated", k7_isolated, false});

  Graph k7_pendant = k7_isolated;
  k7_pendant.add_edge(6, 7);
  catalog.push_back({"K7+pendant", k7_pendant, true});

  Graph two_k4(8);
  for (int base : {0, 4}) {
    for (int i = base; i < base + 4; ++i) {
      for (int j = i + 1; j < base + 4; ++j) two_k4.add_edge(i, j);
    }
  }
  catalog.push_back({"two-K4", two_k4, false});

  Graph path(8);
  for (int i = 0; i < 7; ++i) path.add_edge(i, i + 1);
  catalog.push_back({"path-8", path, true});

  // 7-node path with a chord, last node isolated
  Graph chord_path(8);
  for (int i = 0; i < 6; ++i) chord_path.add_edge(i, i + 1);
  chord_path.add_edge(3, 5);
  catalog.push_back({"chord-path+isolated", chord_path, false});

  Graph star(8);
  for (int i = 0; i < 7; ++i) star.add_edge(i, 7);
  catalog.push_back({"star", star, true});

  // depth-2 tree: root 7 with children 0, 3, 6; 0 carries 1, 2; 6 carries 4, 5
  Graph tree(8, {{7, 0}, {0, 1}, {0, 2}, {7, 6}, {6, 5}, {6, 4}, {7, 3}});
  catalog.push_back({"tree-depth-2", tree, true});

  return catalog;
}

Graph read_edge_list(std::istream& in) {
  int n = -1;
  if (!(in >> n)) {
    throw std::runtime_error("read_edge_list: missing node count");
  }
  Graph g(n);
  int i, j;
  while (in >> i >> j) g.add_edge(i, j);
  if (!in.eof() && in.fail()) {
    throw std::runtime_error("read_edge_list: malformed edge line");
  }
  return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.n_nodes() << "\n";
  for (auto [i, j] : g.edges()) out << i << " " << j << "\n";
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_edge_list(in);
}

}  // namespace qgc
