#pragma once

// Seeded deterministic discrete-event simulator for n crash-prone processes
// connected by reliable asynchronous FIFO channels.
//
// - Each process executes its workload sequentially: an operation is invoked
//   at its scripted time or when the previous one returns, whichever is later.
// - A process receives its own broadcasts instantaneously: the self copy is
//   handled right after the sending transition, before any other event.
// - Deliveries are ordered by (time, global send sequence); per channel the
//   delivery time never goes below the previous one, so channels stay FIFO.
// - A crash at a transition index cuts that transition's broadcasts down to a
//   seeded random subset of recipients; a crash at a time stops the process
//   cleanly. Crashed processes take no further steps.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scsnap/abd.hpp"
#include "scsnap/history.hpp"
#include "scsnap/protocol.hpp"

namespace scsnap::sim {

struct Operation {
  OpKind kind = OpKind::Write;
  Value value = 0;
  ProcId target = 0;

  static Operation write(Value v) { return {OpKind::Write, v, 0}; }
  static Operation snapshot() { return {OpKind::Snapshot, 0, 0}; }
  static Operation read(ProcId target) { return {OpKind::Read, 0, target}; }
};

struct WorkloadItem {
  ProcId proc = 0;
  double time = 0;
  Operation op;
  ObjectId object = 0;
};

struct CrashSpec {
  ProcId proc = 0;
  std::optional<double> at_time;
  std::optional<std::size_t> at_transition;  // 0-based count of the process's transitions
};

using Payload = std::variant<scs::WireMsg, abd::Message>;

struct SendInfo {
  ProcId from = 0;
  ProcId to = 0;
  double time = 0;
  ObjectId object = 0;
  const Payload* payload = nullptr;
};

struct AsyncDelay {
  double lo = 0.1;
  double hi = 10.0;
};

// Delays drawn from [d - u, d].
struct SyncDelay {
  double d = 1.0;
  double u = 0.0;
};

// Returns the requested delivery time (absolute) of a message.
using ScriptedDelay = std::function<double(const SendInfo&)>;

using DelayModel = std::variant<AsyncDelay, SyncDelay, ScriptedDelay>;

enum class Protocol { Scs, Abd };

inline constexpr std::size_t kDefaultEventCap = 1'000'000;

struct SimConfig {
  std::size_t n = 1;
  std::size_t max_crashes = 0;
  std::uint64_t seed = 0;
  DelayModel delay = AsyncDelay{};
  std::vector<WorkloadItem> workload;
  std::vector<CrashSpec> crashes;
  Protocol protocol = Protocol::Scs;
  std::size_t event_cap = kDefaultEventCap;
  bool record_vc_trace = true;
  bool record_deliveries = false;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ObjUpdate {
  ObjectId object = 0;
  UpdateId update;
  auto operator<=>(const ObjUpdate&) const = default;
};

struct Metrics {
  std::size_t messages_total = 0;
  std::map<ObjUpdate, std::size_t> messages_per_update;  // protocol messages carrying each update
  std::map<OpRef, std::size_t> messages_per_op;
  std::map<OpRef, std::size_t> op_causal_depth;          // completed operations only
  std::size_t events_processed = 0;
  bool quiescent = false;
};

struct VcSample {
  ProcId proc = 0;
  ObjectId object = 0;
  double time = 0;
  std::vector<Stamp> vc;
};

struct VcTrace {
  std::vector<VcSample> samples;
};

struct ValidationEvent {
  ProcId proc = 0;
  ObjectId object = 0;
  UpdateId update;
  double time = 0;
};

// An update a writer submitted for validation, and the write op it carries.
struct InitiatedUpdate {
  ObjectId object = 0;
  UpdateId update;
  OpRef op;
  double time = 0;  // when the update was broadcast
};

struct DeliveryRecord {
  ProcId from = 0;
  ProcId to = 0;
  std::uint64_t send_seq = 0;
  double time = 0;
};

struct SimResult {
  History history;
  Metrics metrics;
  VcTrace vc_trace;
  std::vector<ValidationEvent> validations;
  std::vector<InitiatedUpdate> initiated;
  std::vector<DeliveryRecord> deliveries;
  std::vector<bool> crashed;
  std::vector<std::vector<scs::ProcState>> scs_states;  // [object][proc]
  std::vector<std::vector<abd::AbdState>> abd_states;   // [object][proc]
};

/// Throws ConfigError when the configuration is outside the model.
void validate_config(const SimConfig& config);

SimResult run_simulation(const SimConfig& config);

std::string metrics_to_json(const SimResult& r);
std::string vc_trace_to_json(const SimResult& r);

}  // namespace scsnap::sim
