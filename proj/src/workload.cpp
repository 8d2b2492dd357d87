#include "scsnap/workload.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scsnap::workload {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

}  // namespace

Kind parse_kind(const std::string& name) {
  if (name == "random") return Kind::Random;
  if (name == "write-heavy") return Kind::WriteHeavy;
  throw std::invalid_argument("unknown workload '" + name + "'");
}

std::vector<sim::WorkloadItem> generate(const Params& p) {
  if (p.n == 0) throw std::invalid_argument("n must be positive");
  std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> clock(p.n, 0.0);
  std::vector<std::size_t> seq(p.n, 0);
  std::vector<sim::WorkloadItem> items;
  const double write_prob = p.kind == Kind::WriteHeavy ? 0.75 : 0.5;

  for (std::size_t k = 0; k < p.ops; ++k) {
    const ProcId proc = below(rng, p.n);
    // Write-heavy bursts: back-to-back invocations most of the time.
    const bool burst = p.kind == Kind::WriteHeavy && unit(rng) < 0.7;
    clock[proc] += burst ? 0.0 : p.think_max * unit(rng);
    sim::Operation op;
    if (unit(rng) < write_prob) {
      op = sim::Operation::write(encode_value(proc, seq[proc]));
    } else if (p.protocol == sim::Protocol::Abd) {
      op = sim::Operation::read(below(rng, p.n));
    } else {
      op = sim::Operation::snapshot();
    }
    ++seq[proc];
    items.push_back({proc, clock[proc], op, 0});
  }
  return items;
}

std::vector<sim::CrashSpec> random_crashes(std::size_t n, std::size_t count, double horizon,
                                           std::uint64_t seed) {
  if (count > n) throw std::invalid_argument("more crashes than processes");
  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<ProcId> procs(n);
  std::iota(procs.begin(), procs.end(), ProcId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(procs[i - 1], procs[below(rng, i)]);
  std::vector<sim::CrashSpec> out;
  for (std::size_t i = 0; i < count; ++i) {
    sim::CrashSpec c;
    c.proc = procs[i];
    if (rng() & 1u) {
      c.at_time = horizon * unit(rng);
    } else {
      c.at_transition = below(rng, 40);
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace scsnap::workload
