#pragma once

// Sequentially consistent snapshot memory over crash-prone asynchronous FIFO
// message passing. Each process runs the state machine below; every
// transition is a pure function from (state, input) to (state, effect).
//
// Writes return immediately. A process has at most one own update in flight;
// further writes are parked in `postponed` (newest wins) and broadcast once the
// in-flight update validates. Snapshots wait only until the process's own
// updates are validated, then return the local view `x`.

#include <optional>
#include <vector>

#include "scsnap/types.hpp"

namespace scsnap::scs {

// M(v, k, t, cl) as received from `sender`.
struct WireMsg {
  Value v = 0;
  ProcId writer = 0;  // k
  Stamp t = 0;        // writer's stamp
  Stamp cl = 0;       // sender's stamp
  ProcId sender = 0;

  UpdateId update() const { return {writer, t}; }
  bool operator==(const WireMsg&) const = default;
};

// A not-yet-validated update with the stamp each process gave it, as known
// locally. cl[j] == kUnknownStamp until a message for it arrives from p_j.
struct PendingEntry {
  Value v = 0;
  ProcId writer = 0;
  Stamp t = 0;
  std::vector<Stamp> cl;

  UpdateId update() const { return {writer, t}; }
  std::size_t known_stamps() const;
  bool operator==(const PendingEntry&) const = default;
};

struct ProcState {
  ProcId me = 0;
  std::size_t n = 0;
  RegisterArray x;                  // last validated value per writer
  std::vector<Stamp> vc;            // writer stamp of each x[j], 0 if none
  Stamp sc = 0;                     // local send clock
  std::vector<PendingEntry> pending;  // G, in insertion order
  std::optional<Value> postponed;     // V
  bool snapshot_pending = false;

  bool has_own_pending() const;
  bool operator==(const ProcState&) const = default;
};

enum class OpType { Write, Snapshot };

struct Completion {
  OpType type = OpType::Write;
  std::optional<RegisterArray> result;  // snapshots only
  bool operator==(const Completion&) const = default;
};

struct Effect {
  std::vector<WireMsg> outbox;        // each entry is FIFO-broadcast to all, self included
  std::vector<Completion> completions;
  std::vector<UpdateId> validated;    // updates folded into x/vc by this transition
};

struct Transition {
  ProcState state;
  Effect effect;
};

ProcState init(std::size_t n, ProcId me);

Transition invoke_write(ProcState state, Value v);

Transition invoke_snapshot(ProcState state);

Transition handle_message(ProcState state, const WireMsg& m);

/// True iff `later` must not validate before `earlier` at this process, i.e.
/// at most half of the processes are known to have stamped `later` first.
bool depends(const PendingEntry& earlier, const PendingEntry& later, std::size_t n);

/// Entries of `pending` that can be validated now: those stamped by a strict
/// majority, minus anything that depends (transitively) on an entry that
/// cannot.
std::vector<PendingEntry> compute_validable(const std::vector<PendingEntry>& pending,
                                            std::size_t n);

}  // namespace scsnap::scs
