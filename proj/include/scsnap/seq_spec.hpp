#pragma once

// Sequential specification of a single-writer snapshot memory: n cells, cell p
// written only by process p, snapshots return the whole array atomically.
// Plain register reads of one cell are also supported so the same reference
// object can judge register histories.

#include <span>
#include <stdexcept>

#include "scsnap/types.hpp"

namespace scsnap {

enum class OpKind { Write, Snapshot, Read };

struct SeqOp {
  ProcId proc = 0;
  OpKind kind = OpKind::Write;
  Value value = 0;        // written value, or the value a Read returned
  ProcId target = 0;      // Read only
  RegisterArray expected; // Snapshot only

  static SeqOp write(ProcId p, Value v) { return {p, OpKind::Write, v, 0, {}}; }
  static SeqOp snapshot(ProcId p, RegisterArray expected) {
    return {p, OpKind::Snapshot, 0, 0, std::move(expected)};
  }
  static SeqOp read(ProcId p, ProcId target, Value returned) {
    return {p, OpKind::Read, returned, target, {}};
  }
};

struct StepResult {
  RegisterArray state;
  bool legal = false;
};

/// Thrown for ops that do not fit the array at all (bad process id, wrong
/// vector length). An ill-formed op is not the same thing as an illegal step.
class MalformedOp : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

RegisterArray initial_registers(std::size_t n);

StepResult seq_step(RegisterArray state, const SeqOp& op);

/// True iff folding seq_step from the all-zero array is legal at every step.
bool is_legal_word(std::span<const SeqOp> ops, std::size_t n);

}  // namespace scsnap
