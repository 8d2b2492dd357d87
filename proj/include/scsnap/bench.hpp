#pragma once

// Per-operation message counts and causal depths of the snapshot protocol and
// the ABD baseline on matched workloads.

#include <string>
#include <vector>

#include "scsnap/sim.hpp"

namespace scsnap::bench {

struct Row {
  std::string algorithm;
  std::string workload;
  std::string op;
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t msgs_min = 0;
  std::size_t msgs_max = 0;
  double msgs_mean = 0;
  std::size_t depth_min = 0;
  std::size_t depth_max = 0;
  std::string cited;  // non-empty for rows quoted rather than measured
};

struct BenchConfig {
  std::vector<std::size_t> ns{3, 5, 7};
  std::size_t seeds = 5;
  std::size_t ops = 40;  // per random run
  std::uint64_t seed = 1;
};

/// Crash-free run where every operation burst gets a quiet network: each
/// process runs, in its own time window, write+snapshot, a lone snapshot,
/// and write+write+snapshot (ABD: a write, then a read of a neighbour).
sim::SimConfig quiet_config(sim::Protocol protocol, std::size_t n, std::uint64_t seed);

/// Aggregates one run into rows (one per op kind).
std::vector<Row> summarize(const sim::SimResult& r, sim::Protocol protocol, const std::string& workload);

std::vector<Row> run_bench(const BenchConfig& config);

std::string format_table(const std::vector<Row>& rows);

}  // namespace scsnap::bench
