#pragma once

// Seeded workload and crash-schedule generators.

#include <string>

#include "scsnap/sim.hpp"

namespace scsnap::workload {

enum class Kind { Random, WriteHeavy };

Kind parse_kind(const std::string& name);

/// Distinct nonzero value for the `seq`-th operation of process `p`
/// (requires p < 1000).
constexpr Value encode_value(ProcId p, std::size_t seq) { return (seq + 1) * 1000 + p; }

struct Params {
  Kind kind = Kind::Random;
  std::size_t n = 1;
  std::size_t ops = 20;         // total operations over all processes
  std::uint64_t seed = 0;
  double think_max = 10.0;      // upper bound of the gap between a process's invocations
  sim::Protocol protocol = sim::Protocol::Scs;
};

std::vector<sim::WorkloadItem> generate(const Params& p);

/// `count` crashes on distinct processes; each either at a random time in
/// [0, horizon] or at a random transition index (the latter truncates a
/// broadcast).
std::vector<sim::CrashSpec> random_crashes(std::size_t n, std::size_t count, double horizon,
                                           std::uint64_t seed);

}  // namespace scsnap::workload
