#include "qgc/circuit.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qgc {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZZ: return "RZZ";
    case GateKind::U3: return "U3";
  }
  return "?";
}

}  // namespace

int Gate::n_wires() const {
  switch (kind) {
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::RZZ:
      return 2;
    default:
      return 1;
  }
}

int Gate::n_slots() const {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZZ:
      return 1;
    case GateKind::U3:
      return 3;
    default:
      return 0;
  }
}

void CircuitIR::validate() const {
  std::vector<bool> referenced(static_cast<std::size_t>(slot_count), false);
  for (const Gate& g : gates) {
    const int wires[2] = {g.w0, g.w1};
    for (int w = 0; w < g.n_wires(); ++w) {
      if (wires[w] < 0 || wires[w] >= n_qubits) {
        throw std::invalid_argument("CircuitIR: wire out of range");
      }
    }
    if (g.n_wires() == 2 && g.w0 == g.w1) {
      throw std::invalid_argument("CircuitIR: duplicate wires on 2-qubit gate");
    }
    const int slots[3] = {g.s0, g.s1, g.s2};
    for (int s = 0; s < g.n_slots(); ++s) {
      if (slots[s] < 0 || slots[s] >= slot_count) {
        throw std::invalid_argument("CircuitIR: slot out of range");
      }
      referenced[static_cast<std::size_t>(slots[s])] = true;
    }
  }
  for (bool r : referenced) {
    if (!r) throw std::invalid_argument("CircuitIR: unreferenced slot");
  }
}

std::string dump_circuit(const CircuitIR& c) {
  std::ostringstream out;
  for (const Gate& g : c.gates) {
    out << kind_name(g.kind) << " " << g.w0;
    if (g.n_wires() == 2) out << " " << g.w1;
    const int slots[3] = {g.s0, g.s1, g.s2};
    for (int s = 0; s < g.n_slots(); ++s) out << " " << slots[s];
    out << "\n";
  }
  return out.str();
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: qubit count out of range [1, 14]");
  }
  amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
  amps_[0] = 1.0;
}

void StateVector::check_wire(int q) const {
  if (q < 0 || q >= n_) {
    throw std::invalid_argument("StateVector: wire out of range");
  }
}

void StateVector::check_pair(int a, int b) const {
  check_wire(a);
  check_wire(b);
  if (a == b) throw std::invalid_argument("StateVector: wires must differ");
}

double StateVector::norm_sq() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void StateVector::apply_h(int q) {
  check_wire(q);
  const std::size_t step = std::size_t{1} << q;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t base = 0; base < amps_.size(); base += 2 * step) {
    for (std::size_t off = 0; off < step; ++off) {
      auto& a0 = amps_[base + off];
      auto& a1 = amps_[base + off + step];
      const auto t0 = (a0 + a1) * inv_sqrt2;
      const auto t1 = (a0 - a1) * inv_sqrt2;
      a0 = t0;
      a1 = t1;
    }
  }
}

void StateVector::apply_cz(int a, int b) {
  check_pair(a, b);
  const std::uint64_t mask =
      (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == mask) amps_[i] = -amps_[i];
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_pair(control, target);
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

void StateVector::apply_rx(int q, double theta) {
  check_wire(q);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const std::size_t step = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * step) {
    for (std::size_t off = 0; off < step; ++off) {
      auto& a0 = amps_[base + off];
      auto& a1 = amps_[base + off + step];
      const auto t0 = c * a0 - kI * s * a1;
      const auto t1 = -kI * s * a0 + c * a1;
      a0 = t0;
      a1 = t1;
    }
  }
}

void StateVector::apply_ry(int q, double theta) {
  check_wire(q);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const std::size_t step = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * step) {
    for (std::size_t off = 0; off < step; ++off) {
      auto& a0 = amps_[base + off];
      auto& a1 = amps_[base + off + step];
      const auto t0 = c * a0 - s * a1;
      const auto t1 = s * a0 + c * a1;
      a0 = t0;
      a1 = t1;
    }
  }
}

void StateVector::apply_rz(int q, double theta) {
  check_wire(q);
  const auto phase0 = std::exp(-kI * (theta / 2));
  const auto phase1 = std::exp(kI * (theta / 2));
  const std::uint64_t mask = std::uint64_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    amps_[i] *= (i & mask) ? phase1 : phase0;
  }
}

void StateVector::apply_rzz(int a, int b, double theta) {
  check_pair(a, b);
  const auto even = std::exp(-kI * (theta / 2));  // bits equal
  const auto odd = std::exp(kI * (theta / 2));
  const std::uint64_t amask = std::uint64_t{1} << a;
  const std::uint64_t bmask = std::uint64_t{1} << b;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const bool ba = i & amask, bb = i & bmask;
    amps_[i] *= (ba == bb) ? even : odd;
  }
}

namespace {

double slot_value(const ParameterVector& params, int slot) {
  if (slot < 0 || static_cast<std::size_t>(slot) >= params.size()) {
    throw std::invalid_argument("gate slot index out of range");
  }
  return params[static_cast<std::size_t>(slot)];
}

// Internal single-parameter form: U3 is lowered to RZ·RY·RZ so every
// parameterized gate has one slot and one Pauli generator.
struct LoweredGate {
  enum class Kind { H, CZ, CNOT, RotX, RotY, RotZ, RotZZ } kind;
  int w0 = -1, w1 = -1;
  int slot = -1;
};

std::vector<LoweredGate> lower(const CircuitIR& c) {
  std::vector<LoweredGate> out;
  out.reserve(c.gates.size());
  using K = LoweredGate::Kind;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: out.push_back({K::H, g.w0}); break;
      case GateKind::CZ: out.push_back({K::CZ, g.w0, g.w1}); break;
      case GateKind::CNOT: out.push_back({K::CNOT, g.w0, g.w1}); break;
      case GateKind::RX: out.push_back({K::RotX, g.w0, -1, g.s0}); break;
      case GateKind::RY: out.push_back({K::RotY, g.w0, -1, g.s0}); break;
      case GateKind::RZZ: out.push_back({K::RotZZ, g.w0, g.w1, g.s0}); break;
      case GateKind::U3:
        // RZ(s2) acts first
        out.push_back({K::RotZ, g.w0, -1, g.s2});
        out.push_back({K::RotY, g.w0, -1, g.s1});
        out.push_back({K::RotZ, g.w0, -1, g.s0});
        break;
    }
  }
  return out;
}

void apply_lowered(StateVector& s, const LoweredGate& g,
                   const ParameterVector& params, bool inverse) {
  using K = LoweredGate::Kind;
  const double sign = inverse ? -1.0 : 1.0;
  switch (g.kind) {
    case K::H: s.apply_h(g.w0); break;
    case K::CZ: s.apply_cz(g.w0, g.w1); break;
    case K::CNOT: s.apply_cnot(g.w0, g.w1); break;
    case K::RotX: s.apply_rx(g.w0, sign * slot_value(params, g.slot)); break;
    case K::RotY: s.apply_ry(g.w0, sign * slot_value(params, g.slot)); break;
    case K::RotZ: s.apply_rz(g.w0, sign * slot_value(params, g.slot)); break;
    case K::RotZZ:
      s.apply_rzz(g.w0, g.w1, sign * slot_value(params, g.slot));
      break;
  }
}

// <lambda| P |psi> for the rotation generator P of gate g, without
// materializing P|psi>.
std::complex<double> generator_overlap(const StateVector& lambda,
                                       const StateVector& psi,
                                       const LoweredGate& g) {
  using K = LoweredGate::Kind;
  const auto la = lambda.amplitudes();
  const auto ps = psi.amplitudes();
  std::complex<double> acc{0.0, 0.0};
  switch (g.kind) {
    case K::RotX: {
      const std::uint64_t mask = std::uint64_t{1} << g.w0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        acc += std::conj(la[i]) * ps[i ^ mask];
      }
      break;
    }
    case K::RotY: {
      const std::size_t step = std::size_t{1} << g.w0;
      for (std::size_t base = 0; base < ps.size(); base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
          const std::size_t i0 = base + off, i1 = i0 + step;
          acc += std::conj(la[i0]) * (-kI * ps[i1]);
          acc += std::conj(la[i1]) * (kI * ps[i0]);
        }
      }
      break;
    }
    case K::RotZ: {
      const std::uint64_t mask = std::uint64_t{1} << g.w0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const double z = (i & mask) ? -1.0 : 1.0;
        acc += std::conj(la[i]) * (z * ps[i]);
      }
      break;
    }
    case K::RotZZ: {
      const std::uint64_t amask = std::uint64_t{1} << g.w0;
      const std::uint64_t bmask = std::uint64_t{1} << g.w1;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const bool ba = i & amask, bb = i & bmask;
        acc += std::conj(la[i]) * ((ba == bb ? 1.0 : -1.0) * ps[i]);
      }
      break;
    }
    default:
      break;
  }
  return acc;
}

void check_circuit_inputs(const CircuitIR& c, const ParameterVector& params,
                          const StateVector& input) {
  if (c.n_qubits != input.n_qubits()) {
    throw std::invalid_argument("circuit qubit count does not match state");
  }
  if (static_cast<int>(params.size()) != c.slot_count) {
    throw std::invalid_argument("parameter count does not match slot count");
  }
}

}  // namespace

StateVector apply_gate(const StateVector& state, const Gate& g,
                       const ParameterVector& params) {
  StateVector out = state;
  apply_gate_inplace(out, g, params);
  return out;
}

void apply_gate_inplace(StateVector& state, const Gate& g,
                        const ParameterVector& params) {
  switch (g.kind) {
    case GateKind::H: state.apply_h(g.w0); break;
    case GateKind::CZ: state.apply_cz(g.w0, g.w1); break;
    case GateKind::CNOT: state.apply_cnot(g.w0, g.w1); break;
    case GateKind::RX: state.apply_rx(g.w0, slot_value(params, g.s0)); break;
    case GateKind::RY: state.apply_ry(g.w0, slot_value(params, g.s0)); break;
    case GateKind::RZZ:
      state.apply_rzz(g.w0, g.w1, slot_value(params, g.s0));
      break;
    case GateKind::U3:
      state.apply_rz(g.w0, slot_value(params, g.s2));
      state.apply_ry(g.w0, slot_value(params, g.s1));
      state.apply_rz(g.w0, slot_value(params, g.s0));
      break;
  }
}

double expectation_z_all(const StateVector& state) {
  const auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double parity = (std::popcount(i) & 1) ? -1.0 : 1.0;
    acc += parity * std::norm(amps[i]);
  }
  return acc;
}

StateVector run_circuit_state(const CircuitIR& c, const ParameterVector& params,
                              StateVector state) {
  check_circuit_inputs(c, params, state);
  for (const Gate& g : c.gates) apply_gate_inplace(state, g, params);
  return state;
}

double run_circuit(const CircuitIR& c, const ParameterVector& params,
                   const StateVector& input) {
  return expectation_z_all(run_circuit_state(c, params, input));
}

std::vector<double> gradient(const CircuitIR& c, const ParameterVector& params,
                             const StateVector& input) {
  std::vector<double> grad;
  gradient_with_value(c, params, input, grad);
  return grad;
}

double gradient_with_value(const CircuitIR& c, const ParameterVector& params,
                           const StateVector& input,
                           std::vector<double>& grad_out) {
  check_circuit_inputs(c, params, input);
  const auto lowered = lower(c);

  StateVector psi = input;
  for (const auto& g : lowered) apply_lowered(psi, g, params, false);
  const double value = expectation_z_all(psi);

  // lambda = (Z(x)...(x)Z) |psi>
  StateVector lambda = psi;
  for (std::size_t i = 0; i < lambda.dim(); ++i) {
    if (std::popcount(i) & 1) lambda.amp(i) = -lambda.amp(i);
  }

  // Reverse sweep: with psi the state after gate k and U' = (-i/2) P U,
  // dE/dtheta_k = 2 Re <lambda| U' |psi_before> = Im <lambda| P |psi>.
  grad_out.assign(params.size(), 0.0);
  for (auto it = lowered.rbegin(); it != lowered.rend(); ++it) {
    if (it->slot >= 0) {
      grad_out[static_cast<std::size_t>(it->slot)] +=
          generator_overlap(lambda, psi, *it).imag();
    }
    apply_lowered(psi, *it, params, true);
    apply_lowered(lambda, *it, params, true);
  }
  return value;
}

}  // namespace qgc
