#include "scsnap/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace scsnap::scs {

std::size_t PendingEntry::known_stamps() const {
  return static_cast<std::size_t>(
      std::count_if(cl.begin(), cl.end(), [](Stamp s) { return s != kUnknownStamp; }));
}

bool ProcState::has_own_pending() const {
  return std::any_of(pending.begin(), pending.end(),
                     [this](const PendingEntry& g) { return g.writer == me; });
}

ProcState init(std::size_t n, ProcId me) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (me >= n) throw std::invalid_argument("process id out of range");
  ProcState s;
  s.me = me;
  s.n = n;
  s.x.assign(n, 0);
  s.vc.assign(n, 0);
  return s;
}

namespace {

WireMsg own_broadcast(ProcState& s, Value v) {
  ++s.sc;
  return WireMsg{v, s.me, s.sc, s.sc, s.me};
}

bool snapshot_ready(const ProcState& s) { return !s.postponed && !s.has_own_pending(); }

}  // namespace

Transition invoke_write(ProcState state, Value v) {
  Effect fx;
  if (!state.has_own_pending()) {
    fx.outbox.push_back(own_broadcast(state, v));
  } else {
    state.postponed = v;
  }
  fx.completions.push_back({OpType::Write, std::nullopt});
  return {std::move(state), std::move(fx)};
}

Transition invoke_snapshot(ProcState state) {
  Effect fx;
  if (snapshot_ready(state)) {
    fx.completions.push_back({OpType::Snapshot, state.x});
  } else {
    state.snapshot_pending = true;
  }
  return {std::move(state), std::move(fx)};
}

bool depends(const PendingEntry& earlier, const PendingEntry& later, std::size_t n) {
  std::size_t later_first = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (later.cl[j] < earlier.cl[j]) ++later_first;
  }
  return !is_majority(later_first, n);
}

std::vector<PendingEntry> compute_validable(const std::vector<PendingEntry>& pending,
                                            std::size_t n) {
  std::vector<bool> in(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    in[i] = is_majority(pending[i].known_stamps(), n);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < pending.size(); ++a) {
      if (in[a]) continue;
      for (std::size_t b = 0; b < pending.size(); ++b) {
        if (in[b] && depends(pending[a], pending[b], n)) {
          in[b] = false;
          changed = true;
        }
      }
    }
  }
  std::vector<PendingEntry> out;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (in[i]) out.push_back(pending[i]);
  }
  return out;
}

Transition handle_message(ProcState state, const WireMsg& m) {
  if (m.writer >= state.n || m.sender >= state.n) {
    throw std::invalid_argument("message process id out of range");
  }
  Effect fx;

  if (m.t > state.vc[m.writer]) {
    auto it = std::find_if(state.pending.begin(), state.pending.end(), [&](const PendingEntry& g) {
      return g.writer == m.writer && g.t == m.t;
    });
    if (it != state.pending.end()) {
      it->cl[m.sender] = m.cl;
    } else {
      if (m.writer != state.me) {
        ++state.sc;
        fx.outbox.push_back(WireMsg{m.v, m.writer, m.t, state.sc, state.me});
      }
      PendingEntry g{m.v, m.writer, m.t, std::vector<Stamp>(state.n, kUnknownStamp)};
      g.cl[m.sender] = m.cl;
      state.pending.push_back(std::move(g));
    }
  }

  const auto validable = compute_validable(state.pending, state.n);
  if (!validable.empty()) {
    std::erase_if(state.pending, [&](const PendingEntry& g) {
      return std::any_of(validable.begin(), validable.end(),
                         [&](const PendingEntry& v) { return v.update() == g.update(); });
    });
    for (const auto& g : validable) {
      if (state.vc[g.writer] < g.t) {
        state.vc[g.writer] = g.t;
        state.x[g.writer] = g.v;
      }
      fx.validated.push_back(g.update());
    }
  }

  bool released = false;
  if (state.postponed && !state.has_own_pending()) {
    fx.outbox.push_back(own_broadcast(state, *state.postponed));
    state.postponed.reset();
    released = true;
  }

  // A released update reaches its own entry in G only when the self copy is
  // received, which happens before any other event; until then it is still
  // this process's non-validated update.
  if (state.snapshot_pending && !released && snapshot_ready(state)) {
    state.snapshot_pending = false;
    fx.completions.push_back({OpType::Snapshot, state.x});
  }
  return {std::move(state), std::move(fx)};
}

}  // namespace scsnap::scs
