#include "scsnap/abd.hpp"

#include <algorithm>
#include <stdexcept>

namespace scsnap::abd {

AbdState init(std::size_t n, ProcId me) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (me >= n) throw std::invalid_argument("process id out of range");
  AbdState s;
  s.me = me;
  s.n = n;
  s.values.assign(n, 0);
  s.tags.assign(n, Tag{0, 0});
  for (ProcId j = 0; j < n; ++j) s.tags[j].writer = j;
  return s;
}

namespace {

void require_idle(const AbdState& s) {
  if (s.current) throw std::logic_error("operation already in flight");
}

std::size_t responses(const InFlight& op) {
  return static_cast<std::size_t>(std::count(op.responded.begin(), op.responded.end(), true));
}

Outgoing broadcast_store(const AbdState& s, const InFlight& op, Value v, Tag tag) {
  return {std::nullopt, Message{MsgKind::Store, s.me, s.me, op.op_seq, op.reg, v, tag}};
}

}  // namespace

Transition abd_write(AbdState state, Value v, std::uint64_t op_seq) {
  require_idle(state);
  InFlight op;
  op.type = OpType::Write;
  op.phase = InFlight::Phase::Storing;
  op.op_seq = op_seq;
  op.reg = state.me;
  op.responded.assign(state.n, false);
  ++state.write_counter;
  const Tag tag{state.write_counter, state.me};
  Effect fx;
  fx.outbox.push_back(broadcast_store(state, op, v, tag));
  state.current = std::move(op);
  return {std::move(state), std::move(fx)};
}

Transition abd_read(AbdState state, ProcId target, std::uint64_t op_seq) {
  require_idle(state);
  if (target >= state.n) throw std::invalid_argument("read target out of range");
  InFlight op;
  op.type = OpType::Read;
  op.phase = InFlight::Phase::Querying;
  op.op_seq = op_seq;
  op.reg = target;
  op.responded.assign(state.n, false);
  Effect fx;
  fx.outbox.push_back({std::nullopt, Message{MsgKind::Query, state.me, state.me, op_seq, target, 0, {}}});
  state.current = std::move(op);
  return {std::move(state), std::move(fx)};
}

Transition handle_message(AbdState state, const Message& m) {
  if (m.reg >= state.n || m.sender >= state.n || m.origin >= state.n) {
    throw std::invalid_argument("message process id out of range");
  }
  Effect fx;
  switch (m.kind) {
    case MsgKind::Store:
      if (m.tag > state.tags[m.reg]) {
        state.tags[m.reg] = m.tag;
        state.values[m.reg] = m.value;
      }
      fx.outbox.push_back({m.origin, Message{MsgKind::StoreAck, state.me, m.origin, m.op_seq,
                                             m.reg, 0, {}}});
      break;
    case MsgKind::Query:
      fx.outbox.push_back({m.origin, Message{MsgKind::QueryReply, state.me, m.origin, m.op_seq,
                                             m.reg, state.values[m.reg], state.tags[m.reg]}});
      break;
    case MsgKind::StoreAck:
    case MsgKind::QueryReply: {
      if (!state.current || m.origin != state.me || m.op_seq != state.current->op_seq) break;
      InFlight& op = *state.current;
      const bool ack_phase = op.phase != InFlight::Phase::Querying;
      if ((m.kind == MsgKind::StoreAck) != ack_phase) break;  // stale phase
      if (op.responded[m.sender]) break;
      op.responded[m.sender] = true;
      if (m.kind == MsgKind::QueryReply && m.tag > op.best_tag) {
        op.best_tag = m.tag;
        op.best_value = m.value;
      }
      if (!is_majority(responses(op), state.n)) break;

      if (op.phase == InFlight::Phase::Querying) {
        op.phase = InFlight::Phase::WritingBack;
        op.responded.assign(state.n, false);
        fx.outbox.push_back(broadcast_store(state, op, op.best_value, op.best_tag));
      } else if (op.type == OpType::Write) {
        fx.completions.push_back({OpType::Write, std::nullopt});
        state.current.reset();
      } else {
        fx.completions.push_back({OpType::Read, op.best_value});
        state.current.reset();
      }
      break;
    }
  }
  return {std::move(state), std::move(fx)};
}

}  // namespace scsnap::abd
