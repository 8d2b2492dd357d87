#include "scsnap/rounds.hpp"

#include <algorithm>
#include <random>

#include "scsnap/workload.hpp"

namespace scsnap::rounds {

std::vector<sim::WorkloadItem> round_workload(const RoundConfig& c) {
  if (!c.workload.empty()) return c.workload;
  std::mt19937_64 rng(c.seed ^ 0x5851f42d4c957f2dULL);
  std::vector<sim::WorkloadItem> items;
  for (ProcId p = 0; p < c.n; ++p) {
    std::size_t seq = 0;
    double t = static_cast<double>(rng() % 1000) / 100.0;
    for (ObjectId r = 0; r < c.rounds; ++r) {
      for (std::size_t w = 0; w < c.writes_per_round; ++w) {
        items.push_back({p, t, sim::Operation::write(workload::encode_value(p, seq++)), r});
      }
      for (std::size_t s = 0; s < c.snapshots_per_round; ++s) {
        items.push_back({p, t, sim::Operation::snapshot(), r});
        ++seq;
      }
    }
  }
  return items;
}

void check_workload_discipline(const std::vector<sim::WorkloadItem>& workload, std::size_t n) {
  std::vector<std::vector<sim::WorkloadItem>> by_proc(n);
  for (const auto& item : workload) {
    if (item.proc >= n) throw sim::ConfigError("workload references process out of range");
    by_proc[item.proc].push_back(item);
  }
  for (auto& items : by_proc) {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    for (std::size_t i = 1; i < items.size(); ++i) {
      if (items[i].object < items[i - 1].object) {
        throw DisciplineError("process " + std::to_string(items[i].proc) + " returns to object " +
                              std::to_string(items[i].object) + " after object " +
                              std::to_string(items[i - 1].object));
      }
    }
  }
}

void check_round_discipline(const History& h) {
  const auto order = per_process_order(h);
  for (ProcId p = 0; p < h.n; ++p) {
    for (std::size_t i = 1; i < order[p].size(); ++i) {
      if (h.ops[order[p][i]].object < h.ops[order[p][i - 1]].object) {
        throw DisciplineError("process " + std::to_string(p) + " operates on object " +
                              std::to_string(h.ops[order[p][i]].object) + " after object " +
                              std::to_string(h.ops[order[p][i - 1]].object));
      }
    }
  }
}

sim::SimResult run_rounds(const RoundConfig& c) {
  sim::SimConfig sc;
  sc.n = c.n;
  sc.max_crashes = c.max_crashes;
  sc.seed = c.seed;
  sc.delay = c.delay;
  sc.crashes = c.crashes;
  sc.workload = round_workload(c);
  sc.protocol = sim::Protocol::Scs;
  check_workload_discipline(sc.workload, c.n);
  return sim::run_simulation(sc);
}

Verdict check_composition(const History& h, std::size_t brute_bound) {
  validate_history(h);
  check_round_discipline(h);
  std::vector<OpRef> spliced;
  for (ObjectId o : objects_of(h)) {
    Verdict v = check_sc_fast(project(h, o));
    if (!v.accepted) {
      v.reason = "object " + std::to_string(o) + ": " + v.reason;
      return v;
    }
    spliced.insert(spliced.end(), v.witness.begin(), v.witness.end());
  }
  if (!verify_witness(h, spliced)) return check_sc_brute(h, brute_bound);
  Verdict v;
  v.accepted = true;
  v.witness = std::move(spliced);
  return v;
}

}  // namespace scsnap::rounds
