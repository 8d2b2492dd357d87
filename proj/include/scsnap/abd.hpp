#pragma once

// Majority-quorum emulation of linearizable SWMR registers (one register per
// process). Writes take one round trip; reads query a majority and then write
// the freshest pair back to a majority before returning.

#include <optional>
#include <vector>

#include "scsnap/types.hpp"

namespace scsnap::abd {

struct Tag {
  std::uint64_t stamp = 0;
  ProcId writer = 0;
  auto operator<=>(const Tag&) const = default;
};

enum class MsgKind { Store, StoreAck, Query, QueryReply };

struct Message {
  MsgKind kind = MsgKind::Store;
  ProcId sender = 0;
  ProcId origin = 0;          // process running the operation
  std::uint64_t op_seq = 0;   // origin's operation index
  ProcId reg = 0;
  Value value = 0;
  Tag tag;
  bool operator==(const Message&) const = default;
};

struct Outgoing {
  std::optional<ProcId> to;  // nullopt: broadcast to all, self included
  Message msg;
};

enum class OpType { Write, Read };

struct Completion {
  OpType type = OpType::Write;
  std::optional<Value> result;  // reads only
};

struct Effect {
  std::vector<Outgoing> outbox;
  std::vector<Completion> completions;
};

struct InFlight {
  enum class Phase { Storing, Querying, WritingBack };
  OpType type = OpType::Write;
  Phase phase = Phase::Storing;
  std::uint64_t op_seq = 0;
  ProcId reg = 0;
  std::vector<bool> responded;
  Value best_value = 0;
  Tag best_tag;
};

struct AbdState {
  ProcId me = 0;
  std::size_t n = 0;
  std::vector<Value> values;
  std::vector<Tag> tags;
  std::uint64_t write_counter = 0;
  std::optional<InFlight> current;
};

struct Transition {
  AbdState state;
  Effect effect;
};

AbdState init(std::size_t n, ProcId me);

Transition abd_write(AbdState state, Value v, std::uint64_t op_seq);

Transition abd_read(AbdState state, ProcId target, std::uint64_t op_seq);

Transition handle_message(AbdState state, const Message& m);

}  // namespace scsnap::abd
