#pragma once

// Operation histories as recorded by the simulator and consumed by the
// checkers, plus their line-oriented JSON trace format:
//
//   {"run_seed":S,"n":N,"object_id":O,"proc":P,"seq":I,"op":"write","value":V,
//    "t_inv":T0,"t_ret":T1}
//   {"...","op":"snapshot","result":[...],...}
//   {"...","op":"read","target":Q,"value":V,...}
//
// `t_ret` (and `result` / read `value`) are absent for operations that never
// returned. `seq` numbers each process's operations from 0 in program order,
// across all objects.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scsnap/seq_spec.hpp"
#include "scsnap/types.hpp"

namespace scsnap {

struct OpRecord {
  ProcId proc = 0;
  std::size_t seq = 0;
  OpKind kind = OpKind::Write;
  Value value = 0;        // written value, or value returned by a read
  ProcId target = 0;      // reads
  RegisterArray result;   // completed snapshots
  double t_inv = 0;
  std::optional<double> t_ret;
  ObjectId object = 0;

  bool complete() const { return t_ret.has_value(); }
  bool operator==(const OpRecord&) const = default;
};

struct History {
  std::size_t n = 0;
  std::uint64_t run_seed = 0;
  std::vector<OpRecord> ops;

  bool operator==(const History&) const = default;
};

// Names an operation inside a history.
struct OpRef {
  ObjectId object = 0;
  ProcId proc = 0;
  std::size_t seq = 0;
  auto operator<=>(const OpRef&) const = default;
};

inline OpRef ref_of(const OpRecord& op) { return {op.object, op.proc, op.seq}; }

class HistoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structural checks: proc ids in range, per-process seq contiguous from 0
/// (or merely increasing, for projections), snapshot vectors of length n,
/// only a process's last op may be incomplete. Throws HistoryError.
void validate_history(const History& h, bool contiguous_seq = true);

/// Operations of each process in program order (indices into h.ops).
std::vector<std::vector<std::size_t>> per_process_order(const History& h);

/// Sub-history of one object.
History project(const History& h, ObjectId object);

std::vector<ObjectId> objects_of(const History& h);

std::string to_jsonl(const History& h);

/// Parses a trace. `n` may be given explicitly; otherwise it is taken from the
/// records. Throws TraceParseError naming the offending line.
History parse_jsonl(std::string_view text, std::optional<std::size_t> n = std::nullopt);

std::string to_string(OpKind kind);

}  // namespace scsnap
