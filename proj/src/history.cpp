#include "scsnap/history.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace scsnap {

using nlohmann::json;

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Write: return "write";
    case OpKind::Snapshot: return "snapshot";
    case OpKind::Read: return "read";
  }
  return "?";
}

std::vector<std::vector<std::size_t>> per_process_order(const History& h) {
  std::vector<std::vector<std::size_t>> order(h.n);
  for (std::size_t i = 0; i < h.ops.size(); ++i) {
    if (h.ops[i].proc >= h.n) throw HistoryError("process id out of range");
    order[h.ops[i].proc].push_back(i);
  }
  for (auto& ops : order) {
    std::sort(ops.begin(), ops.end(),
              [&](std::size_t a, std::size_t b) { return h.ops[a].seq < h.ops[b].seq; });
  }
  return order;
}

void validate_history(const History& h, bool contiguous_seq) {
  const auto order = per_process_order(h);
  for (ProcId p = 0; p < h.n; ++p) {
    const auto& ops = order[p];
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const OpRecord& op = h.ops[ops[i]];
      const bool in_order = contiguous_seq ? op.seq == i : (i == 0 || h.ops[ops[i - 1]].seq < op.seq);
      if (!in_order) {
        throw HistoryError("process " + std::to_string(p) + " has out-of-order seq " +
                           std::to_string(op.seq));
      }
      if (!op.complete() && i + 1 != ops.size()) {
        throw HistoryError("process " + std::to_string(p) +
                           " has an incomplete operation followed by another");
      }
      if (op.kind == OpKind::Snapshot && op.complete() && op.result.size() != h.n) {
        throw HistoryError("snapshot result length differs from n");
      }
      if (op.kind == OpKind::Read && op.target >= h.n) {
        throw HistoryError("read target out of range");
      }
    }
  }
}

History project(const History& h, ObjectId object) {
  History out{h.n, h.run_seed, {}};
  for (const auto& op : h.ops) {
    if (op.object == object) out.ops.push_back(op);
  }
  return out;
}

std::vector<ObjectId> objects_of(const History& h) {
  std::set<ObjectId> s;
  for (const auto& op : h.ops) s.insert(op.object);
  return {s.begin(), s.end()};
}

std::string to_jsonl(const History& h) {
  std::string out;
  for (const auto& op : h.ops) {
    json j;
    j["run_seed"] = h.run_seed;
    j["n"] = h.n;
    j["object_id"] = op.object;
    j["proc"] = op.proc;
    j["seq"] = op.seq;
    j["op"] = to_string(op.kind);
    switch (op.kind) {
      case OpKind::Write:
        j["value"] = op.value;
        break;
      case OpKind::Snapshot:
        if (op.complete()) j["result"] = op.result;
        break;
      case OpKind::Read:
        j["target"] = op.target;
        if (op.complete()) j["value"] = op.value;
        break;
    }
    j["t_inv"] = op.t_inv;
    if (op.t_ret) j["t_ret"] = *op.t_ret;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T field(const json& j, const char* name, std::size_t line) {
  if (!j.contains(name)) throw TraceParseError(line, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw TraceParseError(line, std::string("bad type for field '") + name + "'");
  }
}

}  // namespace

History parse_jsonl(std::string_view text, std::optional<std::size_t> n) {
  History h;
  std::optional<std::size_t> seen_n;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::set<std::pair<ProcId, std::size_t>> seen_ops;
  while (std::getline(in, raw)) {
    ++line;
    if (std::all_of(raw.begin(), raw.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw TraceParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw TraceParseError(line, "record is not an object");

    OpRecord op;
    op.proc = field<std::size_t>(j, "proc", line);
    op.seq = field<std::size_t>(j, "seq", line);
    op.t_inv = field<double>(j, "t_inv", line);
    if (j.contains("t_ret")) op.t_ret = field<double>(j, "t_ret", line);
    if (j.contains("object_id")) op.object = field<ObjectId>(j, "object_id", line);
    if (j.contains("run_seed")) h.run_seed = field<std::uint64_t>(j, "run_seed", line);
    if (j.contains("n")) {
      const auto rn = field<std::size_t>(j, "n", line);
      if (seen_n && *seen_n != rn) throw TraceParseError(line, "inconsistent n");
      seen_n = rn;
    }

    const auto kind = field<std::string>(j, "op", line);
    if (kind == "write") {
      op.kind = OpKind::Write;
      op.value = field<Value>(j, "value", line);
    } else if (kind == "snapshot") {
      op.kind = OpKind::Snapshot;
      if (op.complete()) op.result = field<RegisterArray>(j, "result", line);
    } else if (kind == "read") {
      op.kind = OpKind::Read;
      op.target = field<ProcId>(j, "target", line);
      if (op.complete()) op.value = field<Value>(j, "value", line);
    } else {
      throw TraceParseError(line, "unknown op '" + kind + "'");
    }
    if (op.kind == OpKind::Snapshot && op.complete() && seen_n && op.result.size() != *seen_n) {
      throw TraceParseError(line, "snapshot result length differs from n");
    }
    const auto limit = n ? n : seen_n;
    if (limit && op.proc >= *limit) throw TraceParseError(line, "process id out of range");
    if (!seen_ops.emplace(op.proc, op.seq).second) {
      throw TraceParseError(line, "duplicate seq " + std::to_string(op.seq) + " for process " +
                                      std::to_string(op.proc));
    }
    h.ops.push_back(std::move(op));
  }

  if (n) {
    h.n = *n;
  } else if (seen_n) {
    h.n = *seen_n;
  } else {
    std::size_t max_proc = 0;
    for (const auto& op : h.ops) {
      max_proc = std::max({max_proc, op.proc + 1, op.result.size()});
    }
    h.n = max_proc;
  }
  try {
    validate_history(h);
  } catch (const HistoryError& e) {
    throw TraceParseError(line, e.what());
  }
  return h;
}

}  // namespace scsnap
