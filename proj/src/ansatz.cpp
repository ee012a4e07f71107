#include "qgc/ansatz.hpp"

#include <stdexcept>

namespace qgc {

std::string ansatz_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::PermutationInvariant: return "perm";
    case AnsatzKind::CyclicInvariant: return "cyclic";
    case AnsatzKind::Standard: return "standard";
  }
  throw std::invalid_argument("unknown ansatz kind");
}

AnsatzKind parse_ansatz_kind(const std::string& name) {
  if (name == "perm") return AnsatzKind::PermutationInvariant;
  if (name == "cyclic") return AnsatzKind::CyclicInvariant;
  if (name == "standard") return AnsatzKind::Standard;
  throw std::invalid_argument("unknown ansatz kind: " + name);
}

int default_layers(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::PermutationInvariant: return 40;
    case AnsatzKind::CyclicInvariant: return 30;
    case AnsatzKind::Standard: return 3;
  }
  throw std::invalid_argument("unknown ansatz kind");
}

CircuitIR embed_graph(const Graph& g) {
  const int n = g.n_nodes();
  CircuitIR c{n, {}, 0};
  c.gates.reserve(static_cast<std::size_t>(2 * n + g.edge_count()));
  for (int q = 0; q < n; ++q) c.gates.push_back(Gate::h(q));
  for (auto [i, j] : g.edges()) c.gates.push_back(Gate::cz(i, j));
  for (int q = 0; q < n; ++q) c.gates.push_back(Gate::h(q));
  return c;
}

CircuitIR build_permutation_invariant(int n, int layers) {
  if (n < 2) throw std::invalid_argument("permutation ansatz needs n >= 2");
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  CircuitIR c{n, {}, 3 * layers};
  for (int l = 0; l < layers; ++l) {
    const int base = 3 * l;
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::rx(q, base));
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::ry(q, base + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        c.gates.push_back(Gate::rzz(i, j, base + 2));
      }
    }
  }
  return c;
}

CircuitIR build_cyclic_invariant(int n, int layers) {
  if (n < 3) throw std::invalid_argument("cyclic ansatz needs n >= 3");
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  CircuitIR c{n, {}, 4 * layers};
  for (int l = 0; l < layers; ++l) {
    const int base = 4 * l;
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::rx(q, base));
    for (int q = 0; q < n; ++q) c.gates.push_back(Gate::ry(q, base + 1));
    for (int dist : {1, 2}) {
      const int slot = base + 1 + dist;
      for (int i = 0; i < n; ++i) {
        c.gates.push_back(Gate::rzz(i, (i + dist) % n, slot));
      }
    }
  }
  return c;
}

namespace {

// One sub-block: a column of per-qubit U3 gates with fresh slots, then a
// CNOT ring with control i and target (i + range) mod n.
void append_sub_block(CircuitIR& c, int n, int range, int& next_slot) {
  for (int q = 0; q < n; ++q) {
    c.gates.push_back(Gate::u3(q, next_slot, next_slot + 1, next_slot + 2));
    next_slot += 3;
  }
  for (int i = 0; i < n; ++i) {
    c.gates.push_back(Gate::cnot(i, (i + range) % n));
  }
}

}  // namespace

CircuitIR build_standard(int n, int drawn_layers) {
  if (drawn_layers < 1) throw std::invalid_argument("layers must be >= 1");
  return build_standard_sub_blocks(n, 2 * drawn_layers);
}

CircuitIR build_standard_sub_blocks(int n, int sub_blocks) {
  if (n < 3) throw std::invalid_argument("standard ansatz needs n >= 3");
  if (sub_blocks < 1) throw std::invalid_argument("sub_blocks must be >= 1");
  CircuitIR c{n, {}, 3 * n * sub_blocks};
  int next_slot = 0;
  for (int b = 0; b < sub_blocks; ++b) {
    append_sub_block(c, n, (b % 2) + 1, next_slot);
  }
  return c;
}

CircuitIR build_ansatz(AnsatzKind kind, int n, int layers, int sub_blocks) {
  if (layers <= 0) layers = default_layers(kind);
  switch (kind) {
    case AnsatzKind::PermutationInvariant:
      return build_permutation_invariant(n, layers);
    case AnsatzKind::CyclicInvariant:
      return build_cyclic_invariant(n, layers);
    case AnsatzKind::Standard:
      return sub_blocks > 0 ? build_standard_sub_blocks(n, sub_blocks)
                            : build_standard(n, layers);
  }
  throw std::invalid_argument("unknown ansatz kind");
}

CircuitIR compose(const CircuitIR& embedding, const CircuitIR& ansatz) {
  if (embedding.n_qubits != ansatz.n_qubits) {
    throw std::invalid_argument("compose: qubit count mismatch");
  }
  if (embedding.slot_count != 0) {
    throw std::invalid_argument("compose: embedding must be parameter-free");
  }
  CircuitIR c{embedding.n_qubits, embedding.gates, ansatz.slot_count};
  c.gates.insert(c.gates.end(), ansatz.gates.begin(), ansatz.gates.end());
  return c;
}

}  // namespace qgc
