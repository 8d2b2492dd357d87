#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "scsnap/history.hpp"

using namespace scsnap;

TEST_CASE("round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    History h = testing::random_history(rng, 1 + rng() % 4, 10);
    h.run_seed = rng();
    for (auto& op : h.ops) op.t_inv += 0.125;
    if (!h.ops.empty() && h.ops.back().kind == OpKind::Write && rng() % 2) {
      // the last op of its process may be pending
      const ProcId p = h.ops.back().proc;
      bool last = true;
      for (const auto& op : h.ops) last &= op.proc != p || op.seq <= h.ops.back().seq;
      if (last) h.ops.back().t_ret.reset();
    }
    const auto text = to_jsonl(h);
    History back = parse_jsonl(text);
    if (h.ops.empty()) back.n = h.n, back.run_seed = h.run_seed;
    CHECK(back == h);
    CHECK(to_jsonl(back) == text);
  }
}

TEST_CASE("reads and object ids survive the trace format") {
  History h;
  h.n = 2;
  OpRecord r;
  r.proc = 1;
  r.kind = OpKind::Read;
  r.target = 0;
  r.value = 7;
  r.t_inv = 1;
  r.t_ret = 2;
  r.object = 3;
  h.ops = {r};
  CHECK(parse_jsonl(to_jsonl(h)) == h);
}

TEST_CASE("parse errors name the line") {
  const std::string good =
      R"({"run_seed":0,"n":2,"object_id":0,"proc":0,"seq":0,"op":"write","value":1,"t_inv":0,"t_ret":1})";
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_jsonl(text);
    } catch (const TraceParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of(good + "\n{not json\n") == 2);
  CHECK(line_of(good + "\n\n" + R"({"n":2,"proc":1,"seq":0,"op":"jump","t_inv":0})" + "\n") == 3);
  CHECK(line_of(R"({"n":2,"proc":5,"seq":0,"op":"write","value":1,"t_inv":0})") == 1);
  CHECK(line_of(R"({"n":2,"proc":0,"seq":0,"op":"snapshot","result":[1],"t_inv":0,"t_ret":1})") == 1);
  CHECK(line_of(good + "\n" + good + "\n") == 2);
  CHECK(line_of(good + "\n") == 0);
}

TEST_CASE("structural validation") {
  History h;
  h.n = 1;
  OpRecord a;
  a.t_ret.reset();
  OpRecord b;
  b.seq = 1;
  b.t_ret = 1;
  h.ops = {a, b};
  CHECK_THROWS_AS(validate_history(h), HistoryError);
  h.ops[0].t_ret = 0.5;
  CHECK_NOTHROW(validate_history(h));
  h.ops[1].seq = 2;
  CHECK_THROWS_AS(validate_history(h), HistoryError);
  CHECK_NOTHROW(validate_history(h, false));
}
