#include <doctest.h>

#include "scsnap/invariants.hpp"
#include "scsnap/rounds.hpp"

using namespace scsnap;
using namespace scsnap::rounds;

TEST_CASE("one round is a plain run") {
  RoundConfig c;
  c.n = 3;
  c.rounds = 1;
  auto r = run_rounds(c);
  CHECK(objects_of(r.history).size() == 1);
  CHECK(check_composition(r.history).accepted);
}

TEST_CASE("three crash-free rounds compose") {
  RoundConfig c;
  c.n = 3;
  c.rounds = 3;
  c.seed = 9;
  auto r = run_rounds(c);
  CHECK(r.history.ops.size() == 18);
  CHECK(objects_of(r.history) == std::vector<ObjectId>{0, 1, 2});
  auto v = check_composition(r.history);
  REQUIRE(v.accepted);
  CHECK(verify_witness(r.history, v.witness));
}

TEST_CASE("a crash in round one leaves the others able to finish") {
  RoundConfig c;
  c.n = 3;
  c.rounds = 2;
  c.max_crashes = 1;
  c.crashes = {{2, std::nullopt, 1}};
  auto r = run_rounds(c);
  CHECK(r.crashed[2]);
  CHECK(sim::stuck_operations(r) == 0);
  std::size_t done = 0;
  for (const auto& op : r.history.ops) done += op.proc != 2 && op.complete();
  CHECK(done == 8);
  CHECK(check_composition(r.history).accepted);
  CHECK(check_sc_brute(r.history).accepted);
}

TEST_CASE("corrupted snapshot in a later round is rejected") {
  RoundConfig c;
  c.n = 3;
  c.rounds = 3;
  c.seed = 2;
  auto r = run_rounds(c);
  History h = r.history;
  bool corrupted = false;
  for (auto& op : h.ops) {
    if (op.object == 2 && op.kind == OpKind::Snapshot && op.complete()) {
      op.result[(op.proc + 1) % h.n] = 424242;
      corrupted = true;
      break;
    }
  }
  REQUIRE(corrupted);
  auto v = check_composition(h);
  CHECK_FALSE(v.accepted);
  CHECK(v.reason.rfind("object 2", 0) == 0);
  REQUIRE_FALSE(v.certificate.empty());
  for (const auto& ref : v.certificate) CHECK(ref.object == 2);
}

TEST_CASE("empty history") {
  History h;
  h.n = 3;
  CHECK(check_composition(h).accepted);
}

TEST_CASE("round discipline") {
  std::vector<sim::WorkloadItem> back{{0, 0.0, sim::Operation::snapshot(), 1},
                                      {0, 1.0, sim::Operation::snapshot(), 0}};
  CHECK_THROWS_AS(check_workload_discipline(back, 1), DisciplineError);

  RoundConfig c;
  c.n = 1;
  c.workload = back;
  CHECK_THROWS_AS(run_rounds(c), DisciplineError);

  History h;
  h.n = 1;
  OpRecord a;
  a.kind = OpKind::Snapshot;
  a.result = {0};
  a.t_ret = 1;
  a.object = 1;
  OpRecord b = a;
  b.seq = 1;
  b.object = 0;
  h.ops = {a, b};
  CHECK_THROWS_AS(check_round_discipline(h), DisciplineError);
  CHECK_THROWS_AS(check_composition(h), DisciplineError);
}

TEST_CASE("round workload shape") {
  RoundConfig c;
  c.n = 2;
  c.rounds = 2;
  c.writes_per_round = 2;
  c.snapshots_per_round = 1;
  auto items = round_workload(c);
  CHECK(items.size() == 12);
  CHECK_NOTHROW(check_workload_discipline(items, 2));
}
