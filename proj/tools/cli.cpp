#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scsnap/bench.hpp"
#include "scsnap/checker.hpp"
#include "scsnap/rounds.hpp"
#include "scsnap/scenarios.hpp"
#include "scsnap/workload.hpp"

namespace scsnap::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

sim::DelayModel parse_delay(const std::string& spec) {
  auto numbers = [&](const std::string& rest) {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw UsageError("delay needs two numbers: " + spec);
    try {
      return std::pair{std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1))};
    } catch (const std::exception&) {
      throw UsageError("bad delay numbers: " + spec);
    }
  };
  if (spec == "async") return sim::AsyncDelay{};
  if (spec.rfind("async:", 0) == 0) {
    auto [lo, hi] = numbers(spec.substr(6));
    return sim::AsyncDelay{lo, hi};
  }
  if (spec.rfind("sync:", 0) == 0) {
    auto [d, u] = numbers(spec.substr(5));
    return sim::SyncDelay{d, u};
  }
  throw UsageError("unknown delay model '" + spec + "' (async, async:<lo>,<hi>, sync:<d>,<u>)");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

void write_run(const fs::path& dir, const sim::SimResult& r) {
  fs::create_directories(dir);
  write_file(dir / "history.jsonl", to_jsonl(r.history));
  write_file(dir / "metrics.json", sim::metrics_to_json(r));
  write_file(dir / "vc_trace.json", sim::vc_trace_to_json(r));
}

std::size_t max_crashes_for(std::size_t n) { return n == 0 ? 0 : (n - 1) / 2; }

struct SimulateFlags {
  std::size_t n = 3;
  std::size_t crashes = 0;
  std::uint64_t seed = 0;
  std::size_t ops = 20;
  std::string delay = "async";
  std::string workload = "random";
  std::string protocol = "scs";
  std::string out = ".";
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  if (f.n == 0) throw UsageError("--n must be positive");
  if (2 * f.crashes >= f.n) {
    throw UsageError("--crashes " + std::to_string(f.crashes) + " violates t < n/2 for n=" + std::to_string(f.n));
  }
  if (f.n >= 1000) throw UsageError("--n must be below 1000");
  sim::SimConfig c;
  c.n = f.n;
  c.seed = f.seed;
  c.max_crashes = f.crashes;
  c.delay = parse_delay(f.delay);
  if (f.protocol == "scs") c.protocol = sim::Protocol::Scs;
  else if (f.protocol == "abd") c.protocol = sim::Protocol::Abd;
  else throw UsageError("unknown --protocol '" + f.protocol + "'");
  workload::Kind kind;
  try {
    kind = workload::parse_kind(f.workload);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.workload = workload::generate({kind, f.n, f.ops, f.seed, 10.0, c.protocol});
  double horizon = 0;
  for (const auto& item : c.workload) horizon = std::max(horizon, item.time);
  c.crashes = workload::random_crashes(f.n, f.crashes, horizon, f.seed);

  const auto r = sim::run_simulation(c);
  write_run(f.out, r);
  out << "ops=" << r.history.ops.size() << " messages=" << r.metrics.messages_total
      << " quiescent=" << (r.metrics.quiescent ? "yes" : "no") << " out=" << f.out << "\n";
  return 0;
}

int cmd_replay(const std::string& scenario, const std::string& dir, std::ostream& out) {
  sim::SimResult r;
  try {
    r = scenarios::replay_scripted(scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_run(dir, r);
  for (const auto& v : r.validations) {
    out << "t=" << v.time << " p" << v.proc << " validates (" << v.update.writer << "," << v.update.stamp << ")\n";
  }
  out << "messages=" << r.metrics.messages_total << " quiescent=" << (r.metrics.quiescent ? "yes" : "no") << "\n";
  return 0;
}

int cmd_check(const std::string& path, const std::string& mode, std::size_t bound, std::size_t n,
              const std::string& verdict_out, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot read " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  History h;
  try {
    h = parse_jsonl(buf.str(), n ? std::optional<std::size_t>(n) : std::nullopt);
  } catch (const TraceParseError& e) {
    err << path << ": " << e.what() << "\n";
    return 2;
  }

  Verdict v;
  try {
    if (mode == "fast") {
      v = objects_of(h).size() > 1 ? rounds::check_composition(h, bound) : check_sc_fast(h);
    } else if (mode == "brute") {
      v = check_sc_brute(h, bound);
    } else if (mode == "lin") {
      v = check_lin_brute(h, bound);
    } else {
      throw UsageError("unknown --mode '" + mode + "'");
    }
  } catch (const CheckRefused& e) {
    err << "refused: " << e.what() << "\n";
    return 2;
  } catch (const rounds::DisciplineError& e) {
    err << "round discipline violated: " << e.what() << "\n";
    return 2;
  } catch (const HistoryError& e) {
    err << "malformed history: " << e.what() << "\n";
    return 2;
  }

  const std::string doc = verdict_to_json(v, mode);
  if (verdict_out.empty()) out << doc;
  else write_file(verdict_out, doc);
  if (!v.accepted) err << "rejected: " << v.reason << "\n";
  return v.accepted ? 0 : 1;
}

int cmd_bench(const bench::BenchConfig& c, std::ostream& out) {
  for (auto n : c.ns) {
    if (n == 0 || n >= 1000) throw UsageError("bench --n values must be in [1, 999]");
  }
  out << bench::format_table(bench::run_bench(c));
  return 0;
}

struct RoundsFlags {
  rounds::RoundConfig cfg;
  std::size_t crashes = 0;
  std::string delay = "async";
  std::string out = ".";
};

int cmd_rounds(RoundsFlags f, std::ostream& out) {
  if (f.cfg.n == 0 || f.cfg.n >= 1000) throw UsageError("--n must be in [1, 999]");
  if (2 * f.crashes >= f.cfg.n) throw UsageError("--crashes violates t < n/2");
  f.cfg.max_crashes = f.crashes;
  f.cfg.delay = parse_delay(f.delay);
  const double horizon = 10.0 * static_cast<double>(f.cfg.rounds);
  f.cfg.crashes = workload::random_crashes(f.cfg.n, f.crashes, horizon, f.cfg.seed);
  const auto r = rounds::run_rounds(f.cfg);
  write_run(f.out, r);
  const Verdict v = rounds::check_composition(r.history);
  write_file(fs::path(f.out) / "verdict.json", verdict_to_json(v, "composition"));
  out << "ops=" << r.history.ops.size() << " objects=" << objects_of(r.history).size()
      << " composition=" << (v.accepted ? "accepted" : "rejected") << "\n";
  return v.accepted ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequentially consistent snapshot memory: simulator and checkers", "scsnap"};
  app.require_subcommand(1, 1);

  SimulateFlags sf;
  auto* simulate = app.add_subcommand("simulate", "run a seeded simulation and write trace files");
  simulate->add_option("--n", sf.n, "number of processes");
  simulate->add_option("--crashes", sf.crashes, "processes to crash (must be < n/2)");
  simulate->add_option("--seed", sf.seed, "run seed");
  simulate->add_option("--ops", sf.ops, "total operations");
  simulate->add_option("--delay", sf.delay, "async | async:<lo>,<hi> | sync:<d>,<u>");
  simulate->add_option("--workload", sf.workload, "random | write-heavy");
  simulate->add_option("--protocol", sf.protocol, "scs | abd");
  simulate->add_option("--out", sf.out, "output directory");

  std::string scenario;
  std::string replay_out = ".";
  auto* replay = app.add_subcommand("replay", "replay a scripted scenario");
  replay->add_option("--scenario", scenario, "fig4a | fig4b | abd_baseline_demo")->required();
  replay->add_option("--out", replay_out, "output directory");

  std::string trace;
  std::string mode = "fast";
  std::size_t bound = kDefaultBruteBound;
  std::size_t check_n = 0;
  std::string verdict_out;
  auto* check = app.add_subcommand("check", "check a history trace");
  check->add_option("trace", trace, "history trace (JSON lines)")->required();
  check->add_option("--mode", mode, "fast | brute | lin");
  check->add_option("--bound", bound, "brute-force size bound");
  check->add_option("--n", check_n, "number of processes (default: from the trace)");
  check->add_option("--out", verdict_out, "verdict file (default: stdout)");

  bench::BenchConfig bc;
  auto* benchcmd = app.add_subcommand("bench", "message and latency table, ABD vs snapshot protocol");
  benchcmd->add_option("--n", bc.ns, "process counts")->delimiter(',');
  benchcmd->add_option("--seeds", bc.seeds, "random runs per configuration");
  benchcmd->add_option("--ops", bc.ops, "operations per random run");
  benchcmd->add_option("--seed", bc.seed, "base seed");

  RoundsFlags rf;
  auto* roundscmd = app.add_subcommand("rounds", "run asynchronous rounds over fresh memories and check the composition");
  roundscmd->add_option("--n", rf.cfg.n, "number of processes");
  roundscmd->add_option("--rounds", rf.cfg.rounds, "number of rounds");
  roundscmd->add_option("--writes", rf.cfg.writes_per_round, "writes per process per round");
  roundscmd->add_option("--snapshots", rf.cfg.snapshots_per_round, "snapshots per process per round");
  roundscmd->add_option("--crashes", rf.crashes, "processes to crash");
  roundscmd->add_option("--seed", rf.cfg.seed, "run seed");
  roundscmd->add_option("--delay", rf.delay, "async | async:<lo>,<hi> | sync:<d>,<u>");
  roundscmd->add_option("--out", rf.out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(sf, out);
    if (*replay) return cmd_replay(scenario, replay_out, out);
    if (*check) return cmd_check(trace, mode, bound, check_n, verdict_out, out, err);
    if (*benchcmd) return cmd_bench(bc, out);
    if (*roundscmd) return cmd_rounds(rf, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const sim::ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const rounds::DisciplineError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace scsnap::cli
