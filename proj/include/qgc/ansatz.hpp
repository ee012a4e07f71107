#pragma once

#include <string>

#include "qgc/circuit.hpp"
#include "qgc/graph.hpp"

namespace qgc {

enum class AnsatzKind { PermutationInvariant, CyclicInvariant, Standard };

std::string ansatz_name(AnsatzKind kind);
AnsatzKind parse_ansatz_kind(const std::string& name);  // perm|cyclic|standard
int default_layers(AnsatzKind kind);                    // 40 / 30 / 3

/// Parameter-free state-preparation prefix for a graph: H on every qubit,
/// one CZ per edge, H on every qubit.
CircuitIR embed_graph(const Graph& g);

/// Per layer: one shared RX slot on all qubits, one shared RY slot, one
/// shared RZZ slot on all C(n,2) pairs. 3 slots per layer.
CircuitIR build_permutation_invariant(int n, int layers);

/// Per layer: shared RX and RY columns, one RZZ slot on the n distance-1
/// ring pairs, one on the n distance-2 ring pairs. 4 slots per layer.
CircuitIR build_cyclic_invariant(int n, int layers);

/// Strongly-entangling template: each drawn layer is two sub-blocks, each a
/// column of per-qubit U3 gates with fresh slots followed by a CNOT ring of
/// range 1 then range 2. No parameter sharing; 6n slots per drawn layer.
CircuitIR build_standard(int n, int drawn_layers);

/// Same template at sub-block granularity (ring ranges cycle 1, 2, 1, ...),
/// for parameter counts that are not a multiple of 6n.
CircuitIR build_standard_sub_blocks(int n, int sub_blocks);

/// layers <= 0 selects the kind's default. For Standard, `sub_blocks`
/// overrides the drawn-layer count when positive.
CircuitIR build_ansatz(AnsatzKind kind, int n, int layers = 0,
                       int sub_blocks = 0);

/// Concatenates a parameter-free embedding with an ansatz.
CircuitIR compose(const CircuitIR& embedding, const CircuitIR& ansatz);

}  // namespace qgc
