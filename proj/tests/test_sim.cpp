#include <doctest.h>

#include "scsnap/checker.hpp"
#include "scsnap/invariants.hpp"
#include "scsnap/scenarios.hpp"
#include "scsnap/sim.hpp"
#include "scsnap/workload.hpp"

using namespace scsnap;
using namespace scsnap::sim;

namespace {

SimConfig sync_config(std::size_t n) {
  SimConfig c;
  c.n = n;
  c.delay = SyncDelay{1.0, 0.0};
  return c;
}

SimConfig random_config(std::size_t n, std::uint64_t seed, std::size_t crashes) {
  SimConfig c;
  c.n = n;
  c.seed = seed;
  c.max_crashes = crashes;
  c.record_deliveries = true;
  c.workload = workload::generate({workload::Kind::Random, n, 30, seed, 10.0, Protocol::Scs});
  c.crashes = workload::random_crashes(n, crashes, 40.0, seed);
  return c;
}

}  // namespace

TEST_CASE("single process") {
  auto c = sync_config(1);
  c.workload = {{0, 0.0, Operation::write(5), 0}, {0, 1.0, Operation::snapshot(), 0}};
  auto r = run_simulation(c);
  REQUIRE(r.history.ops.size() == 2);
  CHECK(r.history.ops[1].result == RegisterArray{5});
  CHECK(r.metrics.messages_total == 1);
  CHECK(r.metrics.quiescent);
}

TEST_CASE("write costs n squared messages and no latency") {
  for (std::size_t n : {2u, 3u, 5u}) {
    auto c = sync_config(n);
    c.workload = {{0, 0.0, Operation::write(1000), 0}};
    auto r = run_simulation(c);
    CHECK(r.metrics.messages_total == n * n);
    CHECK(r.metrics.op_causal_depth.at({0, 0, 0}) == 0);
    CHECK(r.history.ops[0].t_ret == 0.0);
    for (const auto& s : r.scs_states[0]) {
      CHECK(s.x[0] == 1000);
      CHECK(s.pending.empty());
    }
  }
}

TEST_CASE("snapshot depths") {
  SUBCASE("isolated snapshot") {
    auto c = sync_config(3);
    c.workload = {{1, 0.0, Operation::snapshot(), 0}};
    auto r = run_simulation(c);
    CHECK(r.metrics.op_causal_depth.at({0, 1, 0}) == 0);
    CHECK(r.metrics.messages_total == 0);
  }
  SUBCASE("write then snapshot waits one round of forwarding") {
    auto c = sync_config(3);
    c.workload = {{1, 0.0, Operation::write(1001), 0}, {1, 0.0, Operation::snapshot(), 0}};
    auto r = run_simulation(c);
    CHECK(r.metrics.op_causal_depth.at({0, 1, 1}) == 2);
  }
  SUBCASE("write, write, snapshot") {
    auto c = sync_config(3);
    c.workload = {{1, 0.0, Operation::write(1001), 0},
                  {1, 0.0, Operation::write(2001), 0},
                  {1, 0.0, Operation::snapshot(), 0}};
    auto r = run_simulation(c);
    CHECK(r.metrics.op_causal_depth.at({0, 1, 2}) == 4);
    CHECK(r.history.ops.back().result == RegisterArray{0, 2001, 0});
  }
}

TEST_CASE("crash in the middle of a broadcast") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = sync_config(3);
    c.seed = seed;
    c.max_crashes = 1;
    c.workload = {{0, 0.0, Operation::write(1000), 0},
                  {1, 5.0, Operation::snapshot(), 0},
                  {2, 5.0, Operation::snapshot(), 0}};
    c.crashes = {{0, std::nullopt, 0}};
    auto r = run_simulation(c);
    CHECK(r.crashed[0]);
    CHECK(stuck_operations(r) == 0);
    CHECK(vc_chain_violations(r.vc_trace) == 0);
    CHECK(check_sc_fast(r.history).accepted);
    // Both survivors end in the same state whatever subset got the message.
    CHECK(r.scs_states[0][1].x == r.scs_states[0][2].x);
  }
}

TEST_CASE("config errors") {
  SimConfig c;
  c.n = 0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.n = 4;
  c.max_crashes = 2;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.max_crashes = 1;
  c.crashes = {{0, 1.0, std::nullopt}, {1, 1.0, std::nullopt}};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.crashes.clear();
  c.workload = {{7, 0.0, Operation::snapshot(), 0}};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.workload.clear();
  c.delay = AsyncDelay{5.0, 1.0};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("random runs keep FIFO, invariants and determinism") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 4;
    auto c = random_config(n, seed, (n - 1) / 2);
    auto r = run_simulation(c);
    INFO("seed " << seed);
    CHECK(fifo_respected(r));
    CHECK(r.metrics.quiescent);
    CHECK(stuck_operations(r) == 0);
    CHECK(vc_chain_violations(r.vc_trace) == 0);
    CHECK(unvalidated_updates(r) == 0);
    CHECK(check_sc_fast(r.history).accepted);
    auto again = run_simulation(c);
    CHECK(to_jsonl(again.history) == to_jsonl(r.history));
    CHECK(metrics_to_json(again) == metrics_to_json(r));
    CHECK(vc_trace_to_json(again) == vc_trace_to_json(r));
  }
}

TEST_CASE("event cap stops a run") {
  auto c = random_config(3, 1, 0);
  c.event_cap = 5;
  auto r = run_simulation(c);
  CHECK_FALSE(r.metrics.quiescent);
  CHECK(r.metrics.events_processed <= 5);
}

TEST_CASE("fig4a validation pattern") {
  auto r = scenarios::replay_scripted("fig4a");
  const UpdateId a{4, 1}, b{0, 1};
  auto when = [&](ProcId p, UpdateId u) {
    for (const auto& v : r.validations) {
      if (v.proc == p && v.update == u) return v.time;
    }
    return -1.0;
  };
  CHECK(when(3, a) < when(3, b));
  CHECK(when(4, a) < when(4, b));
  for (ProcId p : {0u, 1u, 2u}) CHECK(when(p, a) == when(p, b));
  for (const auto& s : r.scs_states[0]) CHECK(s.x == RegisterArray{1, 0, 0, 0, 1});
  CHECK(r.metrics.messages_per_update.at({0, a}) == 25);
  CHECK(check_sc_fast(r.history).accepted);
}

TEST_CASE("fig4b validates every update") {
  auto r = scenarios::replay_scripted("fig4b");
  CHECK(r.metrics.quiescent);
  CHECK(unvalidated_updates(r) == 0);
  CHECK(leftover_pending(r) == 0);
  for (const auto& s : r.scs_states[0]) CHECK(s.x == RegisterArray{2, 0, 0, 2});
  CHECK(check_sc_fast(r.history).accepted);
}

TEST_CASE("unknown scenario") { CHECK_THROWS_AS(scenarios::config_for("nope"), std::invalid_argument); }
