#pragma once

// Asynchronous rounds over fresh snapshot memories: round r uses object r and
// nothing else, and a process enters round r+1 only after finishing its
// round-r operations. The composed history is sequentially consistent for the
// composition of all objects whenever each object's history is, provided no
// process goes back to an earlier object.

#include <stdexcept>

#include "scsnap/checker.hpp"
#include "scsnap/sim.hpp"

namespace scsnap::rounds {

struct RoundConfig {
  std::size_t n = 3;
  std::size_t rounds = 1;
  std::size_t writes_per_round = 1;     // each process writes this many times,
  std::size_t snapshots_per_round = 1;  // then snapshots this many times
  std::size_t max_crashes = 0;
  std::vector<sim::CrashSpec> crashes;
  std::uint64_t seed = 0;
  sim::DelayModel delay = sim::AsyncDelay{};
  // Explicit workload (object_id = round); generated from the counts above
  // when empty.
  std::vector<sim::WorkloadItem> workload;
};

class DisciplineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<sim::WorkloadItem> round_workload(const RoundConfig& config);

/// Throws DisciplineError if some process would invoke an operation on an
/// earlier round's object after a later one.
void check_workload_discipline(const std::vector<sim::WorkloadItem>& workload, std::size_t n);

void check_round_discipline(const History& h);

sim::SimResult run_rounds(const RoundConfig& config);

/// Per-object fast checks spliced in round order. Throws DisciplineError when
/// the history itself breaks the round discipline.
Verdict check_composition(const History& h, std::size_t brute_bound = kDefaultBruteBound);

}  // namespace scsnap::rounds
