#include "scsnap/sim.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <random>

#include <json.hpp>

namespace scsnap::sim {

void validate_config(const SimConfig& c) {
  if (c.n == 0) throw ConfigError("n must be positive");
  if (2 * c.max_crashes >= c.n) {
    throw ConfigError("max_crashes=" + std::to_string(c.max_crashes) +
                      " violates t < n/2 for n=" + std::to_string(c.n));
  }
  if (c.crashes.size() > c.max_crashes) throw ConfigError("more crashes scheduled than max_crashes");
  std::vector<bool> seen(c.n, false);
  for (const auto& cr : c.crashes) {
    if (cr.proc >= c.n) throw ConfigError("crash references process out of range");
    if (seen[cr.proc]) throw ConfigError("process crashes twice");
    seen[cr.proc] = true;
    if (cr.at_time.has_value() == cr.at_transition.has_value()) {
      throw ConfigError("crash needs exactly one of at_time / at_transition");
    }
  }
  for (const auto& item : c.workload) {
    if (item.proc >= c.n) throw ConfigError("workload references process out of range");
    if (item.time < 0) throw ConfigError("negative invocation time");
    if (c.protocol == Protocol::Scs && item.op.kind == OpKind::Read) {
      throw ConfigError("the snapshot protocol has no register read");
    }
    if (c.protocol == Protocol::Abd && item.op.kind == OpKind::Snapshot) {
      throw ConfigError("the ABD baseline has no snapshot");
    }
    if (item.op.kind == OpKind::Read && item.op.target >= c.n) {
      throw ConfigError("read target out of range");
    }
  }
  if (const auto* a = std::get_if<AsyncDelay>(&c.delay); a && !(0 <= a->lo && a->lo <= a->hi)) {
    throw ConfigError("async delay bounds must satisfy 0 <= lo <= hi");
  }
  if (const auto* s = std::get_if<SyncDelay>(&c.delay); s && !(0 <= s->u && s->u <= s->d)) {
    throw ConfigError("sync delay must satisfy 0 <= u <= d");
  }
}

namespace {

struct Envelope {
  ProcId from = 0;
  ProcId to = 0;
  ObjectId object = 0;
  std::size_t depth = 0;
  std::uint64_t send_seq = 0;
  Payload payload;
};

struct Event {
  enum class Kind { Deliver, Invoke, Crash };
  double time = 0;
  std::uint64_t tiebreak = 0;
  Kind kind = Kind::Invoke;
  ProcId proc = 0;
  std::optional<Envelope> env;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.tiebreak > b.tiebreak;
  }
};

struct ProcRuntime {
  std::deque<WorkloadItem> todo;
  std::optional<std::size_t> current;  // history index of the op in flight
  std::size_t next_seq = 0;
  std::size_t transitions = 0;
  std::optional<std::size_t> crash_at_transition;
  bool crashed = false;
  std::deque<Envelope> self_queue;
};

// Outgoing message before addressing.
struct Outgoing {
  std::optional<ProcId> to;
  Payload payload;
};

class Engine {
 public:
  explicit Engine(const SimConfig& c) : cfg_(c), rng_(c.seed), procs_(c.n) {
    res_.history.n = c.n;
    res_.history.run_seed = c.seed;
    res_.crashed.assign(c.n, false);
    ObjectId objects = 1;
    for (const auto& item : c.workload) objects = std::max(objects, item.object + 1);
    if (c.protocol == Protocol::Scs) {
      res_.scs_states.resize(objects);
      for (auto& row : res_.scs_states) {
        for (ProcId p = 0; p < c.n; ++p) row.push_back(scs::init(c.n, p));
      }
    } else {
      res_.abd_states.resize(objects);
      for (auto& row : res_.abd_states) {
        for (ProcId p = 0; p < c.n; ++p) row.push_back(abd::init(c.n, p));
      }
    }
    postponed_op_.assign(objects, std::vector<std::optional<std::size_t>>(c.n));
    channel_last_.assign(c.n, std::vector<double>(c.n, 0.0));

    std::vector<std::vector<WorkloadItem>> by_proc(c.n);
    for (const auto& item : c.workload) by_proc[item.proc].push_back(item);
    for (ProcId p = 0; p < c.n; ++p) {
      std::stable_sort(by_proc[p].begin(), by_proc[p].end(),
                       [](const WorkloadItem& a, const WorkloadItem& b) { return a.time < b.time; });
      procs_[p].todo.assign(by_proc[p].begin(), by_proc[p].end());
      if (!procs_[p].todo.empty()) schedule_invoke(p, procs_[p].todo.front().time);
    }
    for (const auto& cr : c.crashes) {
      if (cr.at_time) {
        push({*cr.at_time, tiebreak_++, Event::Kind::Crash, cr.proc, std::nullopt});
      } else {
        procs_[cr.proc].crash_at_transition = cr.at_transition;
      }
    }
  }

  SimResult run() {
    while (!queue_.empty()) {
      if (res_.metrics.events_processed >= cfg_.event_cap) break;
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      ++res_.metrics.events_processed;
      switch (ev.kind) {
        case Event::Kind::Crash:
          crash(ev.proc);
          break;
        case Event::Kind::Invoke:
          invoke(ev.proc);
          break;
        case Event::Kind::Deliver:
          deliver(*ev.env);
          break;
      }
    }
    res_.metrics.quiescent = queue_.empty();
    finalize();
    return std::move(res_);
  }

 private:
  void push(Event ev) { queue_.push(std::move(ev)); }

  void schedule_invoke(ProcId p, double at) {
    push({std::max(at, now_), tiebreak_++, Event::Kind::Invoke, p, std::nullopt});
  }

  void crash(ProcId p) {
    procs_[p].crashed = true;
    procs_[p].self_queue.clear();
    res_.crashed[p] = true;
  }

  double draw_delay() {
    auto unit = [this] { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; };
    if (const auto* a = std::get_if<AsyncDelay>(&cfg_.delay)) return a->lo + (a->hi - a->lo) * unit();
    const auto& s = std::get<SyncDelay>(cfg_.delay);
    return (s.d - s.u) + s.u * unit();
  }

  void invoke(ProcId p) {
    ProcRuntime& pr = procs_[p];
    if (pr.crashed || pr.current || pr.todo.empty()) return;
    WorkloadItem item = pr.todo.front();
    pr.todo.pop_front();

    OpRecord rec;
    rec.proc = p;
    rec.seq = pr.next_seq++;
    rec.kind = item.op.kind;
    rec.object = item.object;
    rec.t_inv = now_;
    if (item.op.kind == OpKind::Write) rec.value = item.op.value;
    if (item.op.kind == OpKind::Read) rec.target = item.op.target;
    pr.current = res_.history.ops.size();
    res_.history.ops.push_back(rec);
    const OpRef ref = ref_of(rec);
    res_.metrics.messages_per_op[ref] = 0;

    std::vector<Outgoing> out;
    std::vector<std::optional<RegisterArray>> snap_done;
    std::vector<std::optional<Value>> abd_done;
    bool write_done = false;
    std::vector<UpdateId> validated;

    if (cfg_.protocol == Protocol::Scs) {
      auto& st = res_.scs_states[item.object][p];
      auto tr = item.op.kind == OpKind::Write ? scs::invoke_write(std::move(st), item.op.value)
                                              : scs::invoke_snapshot(std::move(st));
      st = std::move(tr.state);
      if (item.op.kind == OpKind::Write) {
        if (!tr.effect.outbox.empty()) {
          const auto& m = tr.effect.outbox.front();
          attach_update(item.object, m.update(), *pr.current);
        } else {
          postponed_op_[item.object][p] = *pr.current;
        }
      }
      for (auto& m : tr.effect.outbox) out.push_back({std::nullopt, m});
      for (auto& c : tr.effect.completions) {
        if (c.type == scs::OpType::Write) write_done = true;
        else snap_done.push_back(c.result);
      }
      validated = tr.effect.validated;
    } else {
      auto& st = res_.abd_states[item.object][p];
      auto tr = item.op.kind == OpKind::Write ? abd::abd_write(std::move(st), item.op.value, rec.seq)
                                              : abd::abd_read(std::move(st), item.op.target, rec.seq);
      st = std::move(tr.state);
      for (auto& o : tr.effect.outbox) out.push_back({o.to, o.msg});
      for (auto& c : tr.effect.completions) abd_done.push_back(c.result);
    }
    transition(p, item.object, 0, out, write_done, snap_done, abd_done, validated);
  }

  void deliver(const Envelope& env) {
    if (cfg_.record_deliveries) {
      res_.deliveries.push_back({env.from, env.to, env.send_seq, now_});
    }
    ProcRuntime& pr = procs_[env.to];
    if (pr.crashed) return;
    handle(env);
  }

  void handle(const Envelope& env) {
    const ProcId p = env.to;
    std::vector<Outgoing> out;
    std::vector<std::optional<RegisterArray>> snap_done;
    std::vector<std::optional<Value>> abd_done;
    std::vector<UpdateId> validated;
    if (cfg_.protocol == Protocol::Scs) {
      auto& st = res_.scs_states[env.object][p];
      auto tr = scs::handle_message(std::move(st), std::get<scs::WireMsg>(env.payload));
      st = std::move(tr.state);
      for (auto& m : tr.effect.outbox) {
        if (m.writer == p && m.sender == p) {
          // Postponed write released for validation.
          if (auto& op = postponed_op_[env.object][p]) {
            attach_update(env.object, m.update(), *op);
            op.reset();
          }
        }
        out.push_back({std::nullopt, m});
      }
      for (auto& c : tr.effect.completions) snap_done.push_back(c.result);
      validated = tr.effect.validated;
    } else {
      auto& st = res_.abd_states[env.object][p];
      auto tr = abd::handle_message(std::move(st), std::get<abd::Message>(env.payload));
      st = std::move(tr.state);
      for (auto& o : tr.effect.outbox) out.push_back({o.to, o.msg});
      for (auto& c : tr.effect.completions) abd_done.push_back(c.result);
    }
    transition(p, env.object, env.depth, out, false, snap_done, abd_done, validated);
  }

  void attach_update(ObjectId object, UpdateId u, std::size_t op_index) {
    res_.initiated.push_back({object, u, ref_of(res_.history.ops[op_index]), now_});
  }

  // Bookkeeping shared by every transition: trace, sends, completions, crash.
  void transition(ProcId p, ObjectId object, std::size_t cause_depth, const std::vector<Outgoing>& out,
                  bool write_done, const std::vector<std::optional<RegisterArray>>& snap_done,
                  const std::vector<std::optional<Value>>& abd_done,
                  const std::vector<UpdateId>& validated) {
    ProcRuntime& pr = procs_[p];
    const std::size_t index = pr.transitions++;
    const bool crashing = pr.crash_at_transition && *pr.crash_at_transition == index;

    if (cfg_.protocol == Protocol::Scs && cfg_.record_vc_trace) {
      res_.vc_trace.samples.push_back({p, object, now_, res_.scs_states[object][p].vc});
    }
    for (const auto& u : validated) res_.validations.push_back({p, object, u, now_});

    for (const auto& o : out) {
      std::vector<ProcId> targets;
      if (o.to) {
        targets.push_back(*o.to);
      } else {
        for (ProcId q = 0; q < cfg_.n; ++q) targets.push_back(q);
      }
      for (ProcId q : targets) {
        if (crashing && (q == p || (rng_() & 1u) == 0)) continue;
        send(p, q, object, cause_depth + 1, o.payload);
      }
    }

    if (crashing) {
      crash(p);
      return;
    }

    if (pr.current) {
      OpRecord& rec = res_.history.ops[*pr.current];
      bool done = false;
      if (write_done) done = true;
      for (const auto& r : snap_done) {
        rec.result = *r;
        done = true;
      }
      for (const auto& r : abd_done) {
        if (r) rec.value = *r;
        done = true;
      }
      if (done) {
        rec.t_ret = now_;
        res_.metrics.op_causal_depth[ref_of(rec)] = cause_depth;
        pr.current.reset();
        if (!pr.todo.empty()) schedule_invoke(p, pr.todo.front().time);
      }
    }

    while (!pr.self_queue.empty() && !pr.crashed) {
      Envelope env = std::move(pr.self_queue.front());
      pr.self_queue.pop_front();
      ++res_.metrics.events_processed;
      if (cfg_.record_deliveries) res_.deliveries.push_back({env.from, env.to, env.send_seq, now_});
      handle(env);
    }
  }

  void send(ProcId from, ProcId to, ObjectId object, std::size_t depth, const Payload& payload) {
    Envelope env{from, to, object, depth, send_seq_++, payload};
    ++res_.metrics.messages_total;
    if (const auto* m = std::get_if<scs::WireMsg>(&payload)) {
      ++res_.metrics.messages_per_update[{object, m->update()}];
    } else {
      const auto& a = std::get<abd::Message>(payload);
      ++res_.metrics.messages_per_op[{object, a.origin, a.op_seq}];
    }
    if (to == from) {
      procs_[from].self_queue.push_back(std::move(env));
      return;
    }
    double at;
    if (const auto* script = std::get_if<ScriptedDelay>(&cfg_.delay)) {
      at = (*script)(SendInfo{from, to, now_, object, &env.payload});
    } else {
      at = now_ + draw_delay();
    }
    at = std::max({at, now_, channel_last_[from][to]});
    channel_last_[from][to] = at;
    push({at, tiebreak_++, Event::Kind::Deliver, to, std::move(env)});
  }

  void finalize() {
    if (cfg_.protocol != Protocol::Scs) return;
    for (const auto& init : res_.initiated) {
      res_.metrics.messages_per_op[init.op] = res_.metrics.messages_per_update[{init.object, init.update}];
    }
  }

  const SimConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<ProcRuntime> procs_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<std::vector<std::optional<std::size_t>>> postponed_op_;
  std::vector<std::vector<double>> channel_last_;
  std::uint64_t tiebreak_ = 0;
  std::uint64_t send_seq_ = 0;
  double now_ = 0;
  SimResult res_;
};

}  // namespace

SimResult run_simulation(const SimConfig& config) {
  validate_config(config);
  Engine engine(config);
  return engine.run();
}

std::string metrics_to_json(const SimResult& r) {
  using nlohmann::json;
  const Metrics& m = r.metrics;
  json j;
  j["run_seed"] = r.history.run_seed;
  j["n"] = r.history.n;
  j["messages_total"] = m.messages_total;
  j["events_processed"] = m.events_processed;
  j["quiescent"] = m.quiescent;
  json upd = json::array();
  for (const auto& [k, count] : m.messages_per_update) {
    upd.push_back({{"object_id", k.object}, {"writer", k.update.writer}, {"stamp", k.update.stamp},
                   {"messages", count}});
  }
  j["messages_per_update"] = upd;
  json ops = json::array();
  for (const auto& [ref, count] : m.messages_per_op) {
    json o{{"object_id", ref.object}, {"proc", ref.proc}, {"seq", ref.seq}, {"messages", count}};
    if (auto it = m.op_causal_depth.find(ref); it != m.op_causal_depth.end()) {
      o["causal_depth"] = it->second;
    }
    ops.push_back(o);
  }
  j["ops"] = ops;
  json crashed = json::array();
  for (ProcId p = 0; p < r.crashed.size(); ++p) {
    if (r.crashed[p]) crashed.push_back(p);
  }
  j["crashed"] = crashed;
  json val = json::array();
  for (const auto& v : r.validations) {
    val.push_back({{"proc", v.proc}, {"object_id", v.object}, {"writer", v.update.writer},
                   {"stamp", v.update.stamp}, {"time", v.time}});
  }
  j["validations"] = val;
  return j.dump(2) + "\n";
}

std::string vc_trace_to_json(const SimResult& r) {
  using nlohmann::json;
  json samples = json::array();
  for (const auto& s : r.vc_trace.samples) {
    samples.push_back({{"proc", s.proc}, {"object_id", s.object}, {"time", s.time}, {"vc", s.vc}});
  }
  json j{{"run_seed", r.history.run_seed}, {"n", r.history.n}, {"samples", samples}};
  return j.dump() + "\n";
}

}  // namespace scsnap::sim
