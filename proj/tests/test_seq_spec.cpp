#include <doctest.h>

#include <random>

#include "scsnap/seq_spec.hpp"

using namespace scsnap;

TEST_CASE("seq_step: write then snapshots") {
  auto s = seq_step({0, 0}, SeqOp::write(0, 5));
  CHECK(s.legal);
  CHECK(s.state == RegisterArray{5, 0});

  auto ok = seq_step(s.state, SeqOp::snapshot(1, {5, 0}));
  CHECK(ok.legal);
  CHECK(ok.state == RegisterArray{5, 0});

  auto bad = seq_step(s.state, SeqOp::snapshot(1, {0, 5}));
  CHECK_FALSE(bad.legal);
  CHECK(bad.state == RegisterArray{5, 0});
}

TEST_CASE("seq_step: malformed ops are rejected, not judged") {
  CHECK_THROWS_AS(seq_step({0, 0}, SeqOp::snapshot(0, {0})), MalformedOp);
  CHECK_THROWS_AS(seq_step({0, 0}, SeqOp::write(2, 1)), MalformedOp);
  CHECK_THROWS_AS(seq_step({0, 0}, SeqOp::read(0, 3, 0)), MalformedOp);
}

TEST_CASE("seq_step: register reads") {
  CHECK(seq_step({4, 0}, SeqOp::read(1, 0, 4)).legal);
  CHECK_FALSE(seq_step({4, 0}, SeqOp::read(1, 0, 0)).legal);
}

TEST_CASE("is_legal_word") {
  CHECK(is_legal_word({}, 2));
  const std::vector<SeqOp> good{SeqOp::write(0, 1), SeqOp::snapshot(0, {1, 0}), SeqOp::write(1, 1),
                                SeqOp::snapshot(1, {1, 1})};
  CHECK(is_legal_word(good, 2));
  const std::vector<SeqOp> bad{SeqOp::write(0, 1), SeqOp::snapshot(0, {0, 1})};
  CHECK_FALSE(is_legal_word(bad, 2));
}

TEST_CASE("property: cells change only at their owner's writes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    RegisterArray state = initial_registers(n);
    for (int k = 0; k < 30; ++k) {
      const ProcId p = rng() % n;
      SeqOp op = rng() % 2 ? SeqOp::write(p, 1 + rng() % 50) : SeqOp::snapshot(p, state);
      const auto before = state;
      auto step = seq_step(state, op);
      REQUIRE(step.legal);
      for (ProcId q = 0; q < n; ++q) {
        if (q != p || op.kind != OpKind::Write) CHECK(step.state[q] == before[q]);
      }
      // Determinism.
      CHECK(seq_step(before, op).state == step.state);
      state = step.state;
    }
  }
}
