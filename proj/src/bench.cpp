#include "scsnap/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "scsnap/workload.hpp"

namespace scsnap::bench {

sim::SimConfig quiet_config(sim::Protocol protocol, std::size_t n, std::uint64_t seed) {
  sim::SimConfig c;
  c.n = n;
  c.seed = seed;
  c.protocol = protocol;
  c.delay = sim::SyncDelay{1.0, 0.0};
  const double window = 50.0;
  for (ProcId p = 0; p < n; ++p) {
    std::size_t seq = 0;
    auto at = [&](std::size_t phase) { return static_cast<double>(phase * n + p) * window; };
    auto write = [&](std::size_t phase) {
      c.workload.push_back({p, at(phase), sim::Operation::write(workload::encode_value(p, seq++)), 0});
    };
    if (protocol == sim::Protocol::Scs) {
      write(0);
      c.workload.push_back({p, at(0), sim::Operation::snapshot(), 0});
      ++seq;
      c.workload.push_back({p, at(1), sim::Operation::snapshot(), 0});
      ++seq;
      write(2);
      write(2);
      c.workload.push_back({p, at(2), sim::Operation::snapshot(), 0});
      ++seq;
    } else {
      write(0);
      c.workload.push_back({p, at(1), sim::Operation::read((p + 1) % n), 0});
      ++seq;
    }
  }
  return c;
}

std::vector<Row> summarize(const sim::SimResult& r, sim::Protocol protocol, const std::string& workload) {
  const std::string algorithm = protocol == sim::Protocol::Scs ? "snapshot-SC" : "ABD";
  std::map<OpKind, Row> rows;
  std::map<OpKind, std::size_t> msg_sum;
  auto add = [&](OpKind kind, std::size_t msgs, std::optional<std::size_t> depth) {
    auto [it, fresh] = rows.try_emplace(kind);
    Row& row = it->second;
    if (fresh) {
      row.algorithm = algorithm;
      row.workload = workload;
      row.op = protocol == sim::Protocol::Scs && kind == OpKind::Write ? "update" : to_string(kind);
      row.n = r.history.n;
      row.msgs_min = msgs;
      row.depth_min = depth.value_or(0);
    }
    ++row.samples;
    row.msgs_min = std::min(row.msgs_min, msgs);
    row.msgs_max = std::max(row.msgs_max, msgs);
    msg_sum[kind] += msgs;
    if (depth) {
      row.depth_min = std::min(row.depth_min, *depth);
      row.depth_max = std::max(row.depth_max, *depth);
    }
  };
  for (const auto& op : r.history.ops) {
    if (!op.complete()) continue;
    const OpRef ref = ref_of(op);
    const auto msgs = r.metrics.messages_per_op.at(ref);
    const auto depth = r.metrics.op_causal_depth.at(ref);
    // Writes overwritten while postponed never reach the network.
    if (protocol == sim::Protocol::Scs && op.kind == OpKind::Write && msgs == 0) continue;
    add(op.kind, msgs, depth);
  }
  std::vector<Row> out;
  for (auto& [kind, row] : rows) {
    row.msgs_mean = static_cast<double>(msg_sum[kind]) / static_cast<double>(row.samples);
    out.push_back(row);
  }
  return out;
}

namespace {

void merge(std::vector<Row>& into, const std::vector<Row>& rows) {
  for (const auto& r : rows) {
    auto it = std::find_if(into.begin(), into.end(), [&](const Row& x) {
      return x.algorithm == r.algorithm && x.workload == r.workload && x.op == r.op && x.n == r.n;
    });
    if (it == into.end()) {
      into.push_back(r);
      continue;
    }
    const double total = it->msgs_mean * it->samples + r.msgs_mean * r.samples;
    it->samples += r.samples;
    it->msgs_mean = total / it->samples;
    it->msgs_min = std::min(it->msgs_min, r.msgs_min);
    it->msgs_max = std::max(it->msgs_max, r.msgs_max);
    it->depth_min = std::min(it->depth_min, r.depth_min);
    it->depth_max = std::max(it->depth_max, r.depth_max);
  }
}

}  // namespace

std::vector<Row> run_bench(const BenchConfig& config) {
  std::vector<Row> rows;
  for (std::size_t n : config.ns) {
    for (auto protocol : {sim::Protocol::Abd, sim::Protocol::Scs}) {
      merge(rows, summarize(sim::run_simulation(quiet_config(protocol, n, config.seed)), protocol, "quiet"));
      for (std::size_t s = 0; s < config.seeds; ++s) {
        sim::SimConfig c;
        c.n = n;
        c.seed = config.seed + s;
        c.protocol = protocol;
        c.delay = sim::AsyncDelay{};
        c.record_vc_trace = false;
        c.workload = workload::generate({workload::Kind::Random, n, config.ops, c.seed, 10.0, protocol});
        merge(rows, summarize(sim::run_simulation(c), protocol, "random"));
      }
    }
    Row ar;
    ar.algorithm = "ABD+AR";
    ar.workload = "-";
    ar.n = n;
    ar.op = "snapshot/update";
    ar.cited = "not reproduced, cited: O(n^2 log n) msgs, O(n log n) latency";
    rows.push_back(ar);
  }
  return rows;
}

std::string format_table(const std::vector<Row>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-7s %-16s %3s %7s %14s %10s %12s\n", "algorithm", "load", "op",
                "n", "samples", "msgs min-max", "msgs mean", "depth min-max");
  out += line;
  for (const auto& r : rows) {
    if (!r.cited.empty()) {
      std::snprintf(line, sizeof line, "%-12s %-7s %-16s %3zu  %s\n", r.algorithm.c_str(), r.workload.c_str(),
                    r.op.c_str(), r.n, r.cited.c_str());
    } else {
      char msgs[32];
      char depth[32];
      std::snprintf(msgs, sizeof msgs, "%zu-%zu", r.msgs_min, r.msgs_max);
      std::snprintf(depth, sizeof depth, "%zu-%zu", r.depth_min, r.depth_max);
      std::snprintf(line, sizeof line, "%-12s %-7s %-16s %3zu %7zu %14s %10.2f %12s\n", r.algorithm.c_str(),
                    r.workload.c_str(), r.op.c_str(), r.n, r.samples, msgs, r.msgs_mean, depth);
    }
    out += line;
  }
  return out;
}

}  // namespace scsnap::bench
