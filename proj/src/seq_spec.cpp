#include "scsnap/seq_spec.hpp"

#include <string>

namespace scsnap {

RegisterArray initial_registers(std::size_t n) { return RegisterArray(n, 0); }

StepResult seq_step(RegisterArray state, const SeqOp& op) {
  const std::size_t n = state.size();
  if (op.proc >= n) {
    throw MalformedOp("process id " + std::to_string(op.proc) + " out of range for n=" +
                      std::to_string(n));
  }
  switch (op.kind) {
    case OpKind::Write:
      state[op.proc] = op.value;
      return {std::move(state), true};
    case OpKind::Snapshot: {
      if (op.expected.size() != n) {
        throw MalformedOp("snapshot vector has length " + std::to_string(op.expected.size()) +
                          ", expected " + std::to_string(n));
      }
      const bool legal = op.expected == state;
      return {std::move(state), legal};
    }
    case OpKind::Read: {
      if (op.target >= n) throw MalformedOp("read target out of range");
      const bool legal = state[op.target] == op.value;
      return {std::move(state), legal};
    }
  }
  throw MalformedOp("unknown op kind");
}

bool is_legal_word(std::span<const SeqOp> ops, std::size_t n) {
  RegisterArray state = initial_registers(n);
  for (const auto& op : ops) {
    auto step = seq_step(std::move(state), op);
    if (!step.legal) return false;
    state = std::move(step.state);
  }
  return true;
}

}  // namespace scsnap
