#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qgc {

using ParameterVector = std::vector<double>;

enum class GateKind { H, CZ, CNOT, RX, RY, RZZ, U3 };

/// A gate references shared parameter slots by index, never raw angles;
/// gates reading the same slot stay tied during training.
///
/// Conventions: RX(t) = exp(-i t X/2), RY(t) = exp(-i t Y/2),
/// RZZ(t) = exp(-i t Z(x)Z/2), U3(a,b,c) = RZ(a)·RY(b)·RZ(c) applied
/// right-to-left (RZ(c) acts first).
struct Gate {
  GateKind kind;
  int w0 = -1, w1 = -1;      // wires; w1 unused for 1-qubit gates
  int s0 = -1, s1 = -1, s2 = -1;  // parameter slots

  static Gate h(int q) { return Gate{GateKind::H, q}; }
  static Gate cz(int a, int b) { return Gate{GateKind::CZ, a, b}; }
  static Gate cnot(int control, int target) {
    return Gate{GateKind::CNOT, control, target};
  }
  static Gate rx(int q, int slot) { return Gate{GateKind::RX, q, -1, slot}; }
  static Gate ry(int q, int slot) { return Gate{GateKind::RY, q, -1, slot}; }
  static Gate rzz(int a, int b, int slot) {
    return Gate{GateKind::RZZ, a, b, slot};
  }
  static Gate u3(int q, int slot_a, int slot_b, int slot_c) {
    return Gate{GateKind::U3, q, -1, slot_a, slot_b, slot_c};
  }

  int n_wires() const;
  int n_slots() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct CircuitIR {
  int n_qubits = 0;
  std::vector<Gate> gates;
  int slot_count = 0;

  /// Throws std::invalid_argument on out-of-range wires/slots or on a slot
  /// referenced by no gate.
  void validate() const;

  friend bool operator==(const CircuitIR&, const CircuitIR&) = default;
};

/// One gate per line: KIND, wires, slots. Used in golden-file tests.
std::string dump_circuit(const CircuitIR& c);

/// Dense 2^n complex amplitude vector. Qubit 0 is the least significant bit
/// of the basis-state index.
class StateVector {
 public:
  static constexpr int kMaxQubits = 14;

  explicit StateVector(int n_qubits);  // |0...0>

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const std::complex<double>> amplitudes() const { return amps_; }
  std::complex<double>& amp(std::uint64_t basis) { return amps_[basis]; }
  const std::complex<double>& amp(std::uint64_t basis) const {
    return amps_[basis];
  }

  double norm_sq() const;

  // In-place kernels. Rotation conventions as documented on Gate.
  void apply_h(int q);
  void apply_cz(int a, int b);
  void apply_cnot(int control, int target);
  void apply_rx(int q, double theta);
  void apply_ry(int q, double theta);
  void apply_rz(int q, double theta);
  void apply_rzz(int a, int b, double theta);

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  void check_wire(int q) const;
  void check_pair(int a, int b) const;

  int n_;
  std::vector<std::complex<double>> amps_;
};

/// Value-semantics gate application; the in-place variant mutates `state`.
StateVector apply_gate(const StateVector& state, const Gate& g,
                       const ParameterVector& params);
void apply_gate_inplace(StateVector& state, const Gate& g,
                        const ParameterVector& params);

/// <Z(x)...(x)Z> = sum_b |amp_b|^2 (-1)^popcount(b). Exact, no sampling.
double expectation_z_all(const StateVector& state);

/// Applies all gates in order to a copy of `state`.
StateVector run_circuit_state(const CircuitIR& c, const ParameterVector& params,
                              StateVector state);
double run_circuit(const CircuitIR& c, const ParameterVector& params,
                   const StateVector& input);

/// Exact partials of run_circuit with respect to each parameter slot,
/// accumulated over all gate occurrences sharing that slot. Computed by a
/// reverse (adjoint) sweep, one backward pass per circuit evaluation.
std::vector<double> gradient(const CircuitIR& c, const ParameterVector& params,
                             const StateVector& input);

/// Same sweep, but also returns the forward expectation value so callers do
/// not need a separate run_circuit.
double gradient_with_value(const CircuitIR& c, const ParameterVector& params,
                           const StateVector& input,
                           std::vector<double>& grad_out);

}  // namespace qgc
