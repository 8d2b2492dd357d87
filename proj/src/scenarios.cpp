#include "scsnap/scenarios.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace scsnap::scenarios {

namespace {

// (from, to, writer) -> absolute arrival time; anything else arrives `late`
// time units after it was sent.
using Schedule = std::map<std::tuple<ProcId, ProcId, ProcId>, double>;

sim::ScriptedDelay scripted(Schedule schedule, double late) {
  auto table = std::make_shared<const Schedule>(std::move(schedule));
  return [table, late](const sim::SendInfo& s) {
    const auto& m = std::get<scs::WireMsg>(*s.payload);
    auto it = table->find({s.from, s.to, m.writer});
    return it != table->end() ? it->second : s.time + late;
  };
}

sim::SimConfig fig4a() {
  constexpr ProcId kA = 4;  // writer of a
  constexpr ProcId kB = 0;  // writer of b
  Schedule s{
      // update a
      {{4, 3, kA}, 1.5}, {{3, 2, kA}, 3.0}, {{3, 4, kA}, 3.0}, {{2, 3, kA}, 4.5},
      {{2, 4, kA}, 4.5}, {{2, 1, kA}, 5.0}, {{2, 0, kA}, 5.0}, {{1, 0, kA}, 7.5},
      {{1, 2, kA}, 6.0}, {{0, 1, kA}, 7.5},
      // update b
      {{0, 1, kB}, 1.5}, {{1, 2, kB}, 4.5}, {{1, 0, kB}, 3.5}, {{1, 4, kB}, 3.5},
      {{2, 0, kB}, 6.0}, {{2, 3, kB}, 5.5}, {{2, 4, kB}, 5.5}, {{2, 1, kB}, 6.0},
      {{3, 2, kB}, 7.5}, {{4, 3, kB}, 7.5},
  };
  sim::SimConfig c;
  c.n = 5;
  c.max_crashes = 2;
  c.seed = 4;
  c.delay = scripted(std::move(s), 20.0);
  c.record_deliveries = true;
  c.workload = {{4, 0.0, sim::Operation::write(1), 0}, {0, 0.0, sim::Operation::write(1), 0}};
  for (ProcId p = 0; p < c.n; ++p) c.workload.push_back({p, 60.0, sim::Operation::snapshot(), 0});
  return c;
}

sim::SimConfig fig4b() {
  constexpr ProcId kP3 = 3;
  constexpr ProcId kP0 = 0;
  // p2 hears p3 quickly and p0 slowly; p1 the other way round.
  sim::SimConfig c;
  c.n = 4;
  c.max_crashes = 1;
  c.seed = 5;
  c.record_deliveries = true;
  c.delay = [](const sim::SendInfo& s) {
    if (s.from == kP3 && s.to == 2) return s.time + 0.5;
    if (s.from == kP0 && s.to == 1) return s.time + 0.5;
    if (s.from == kP0 && s.to == 2) return s.time + 2.0;
    if (s.from == kP3 && s.to == 1) return s.time + 2.0;
    return s.time + 1.0;
  };
  c.workload = {
      {kP3, 1.0, sim::Operation::write(1), 0},  // a
      {kP3, 2.0, sim::Operation::write(2), 0},  // c
      {kP0, 1.0, sim::Operation::write(1), 0},  // b
      {kP0, 2.0, sim::Operation::write(2), 0},  // d
  };
  for (ProcId p = 0; p < c.n; ++p) c.workload.push_back({p, 40.0, sim::Operation::snapshot(), 0});
  return c;
}

sim::SimConfig abd_demo() {
  sim::SimConfig c;
  c.n = 3;
  c.max_crashes = 1;
  c.seed = 7;
  c.protocol = sim::Protocol::Abd;
  c.delay = sim::SyncDelay{1.0, 0.0};
  c.workload = {
      {0, 0.0, sim::Operation::write(7), 0},
      {2, 0.5, sim::Operation::read(0), 0},
      {1, 10.0, sim::Operation::read(0), 0},
  };
  return c;
}

}  // namespace

std::vector<std::string> names() { return {"fig4a", "fig4b", "abd_baseline_demo"}; }

sim::SimConfig config_for(const std::string& name) {
  if (name == "fig4a") return fig4a();
  if (name == "fig4b") return fig4b();
  if (name == "abd_baseline_demo") return abd_demo();
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

sim::SimResult replay_scripted(const std::string& name) { return sim::run_simulation(config_for(name)); }

}  // namespace scsnap::scenarios
