#include "scsnap/checker.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include <json.hpp>

namespace scsnap {

namespace {

using WriteIndex = std::map<std::pair<ObjectId, ProcId>, std::map<Value, std::size_t>>;

WriteIndex index_writes(const History& h, const std::vector<std::vector<std::size_t>>& order) {
  WriteIndex idx;
  for (ProcId p = 0; p < h.n; ++p) {
    std::map<ObjectId, std::size_t> count;
    for (std::size_t i : order[p]) {
      const OpRecord& op = h.ops[i];
      if (op.kind != OpKind::Write) continue;
      auto& table = idx[{op.object, p}];
      const std::size_t version = ++count[op.object];
      if (op.value == 0 || !table.emplace(op.value, version).second) {
        throw HistoryError("written values must be distinct and nonzero per writer");
      }
    }
  }
  return idx;
}

Verdict reject(std::string reason, std::vector<OpRef> certificate) {
  Verdict v;
  v.accepted = false;
  v.reason = std::move(reason);
  v.certificate = std::move(certificate);
  return v;
}

bool leq(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

std::size_t total(const std::vector<std::size_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

// Operations a witness may or must contain, per process in program order.
struct Candidates {
  std::vector<std::vector<std::size_t>> order;  // complete ops + trailing incomplete write
  std::vector<std::size_t> required;            // prefix length that must be placed
  std::size_t count = 0;
};

Candidates candidates_of(const History& h) {
  Candidates c;
  const auto order = per_process_order(h);
  c.order.resize(h.n);
  c.required.resize(h.n);
  for (ProcId p = 0; p < h.n; ++p) {
    for (std::size_t i : order[p]) {
      const OpRecord& op = h.ops[i];
      if (op.complete() || op.kind == OpKind::Write) c.order[p].push_back(i);
    }
    c.required[p] = c.order[p].size();
    if (!c.order[p].empty() && !h.ops[c.order[p].back()].complete()) --c.required[p];
    c.count += c.order[p].size();
  }
  return c;
}

class BruteSearch {
 public:
  BruteSearch(const History& h, bool real_time) : h_(h), cand_(candidates_of(h)) {
    pos_.assign(h.n, 0);
    for (ObjectId o : objects_of(h)) regs_[o] = initial_registers(h.n);
    slot_.resize(h.ops.size());
    for (ProcId p = 0; p < h.n; ++p) {
      for (std::size_t k = 0; k < cand_.order[p].size(); ++k) slot_[cand_.order[p][k]] = k;
    }
    if (real_time) {
      preds_.resize(h.ops.size());
      for (ProcId p = 0; p < h.n; ++p) {
        for (std::size_t a : cand_.order[p]) {
          for (ProcId q = 0; q < h.n; ++q) {
            for (std::size_t b : cand_.order[q]) {
              if (h.ops[b].t_ret && *h.ops[b].t_ret < h.ops[a].t_inv) preds_[a].push_back(b);
            }
          }
        }
      }
    }
  }

  std::size_t size() const { return cand_.count; }

  bool run() { return dfs(); }

  std::vector<OpRef> witness() const {
    std::vector<OpRef> w;
    for (std::size_t i : trail_) w.push_back(ref_of(h_.ops[i]));
    return w;
  }

  std::vector<OpRef> all_ops() const {
    std::vector<OpRef> w;
    for (const auto& ops : cand_.order) {
      for (std::size_t i : ops) w.push_back(ref_of(h_.ops[i]));
    }
    return w;
  }

 private:
  bool placed(std::size_t i) const { return pos_[h_.ops[i].proc] > slot_[i]; }

  bool dfs() {
    bool done = true;
    for (ProcId p = 0; p < h_.n; ++p) done = done && pos_[p] >= cand_.required[p];
    if (done) return true;

    std::string key(pos_.begin(), pos_.end());
    if (failed_.count(key)) return false;

    for (ProcId p = 0; p < h_.n; ++p) {
      if (pos_[p] >= cand_.order[p].size()) continue;
      const std::size_t i = cand_.order[p][pos_[p]];
      const OpRecord& op = h_.ops[i];
      if (!preds_.empty() &&
          !std::all_of(preds_[i].begin(), preds_[i].end(), [&](std::size_t b) { return placed(b); })) {
        continue;
      }
      RegisterArray& regs = regs_[op.object];
      Value saved = 0;
      switch (op.kind) {
        case OpKind::Write:
          saved = regs[p];
          regs[p] = op.value;
          break;
        case OpKind::Snapshot:
          if (regs != op.result) continue;
          break;
        case OpKind::Read:
          if (regs[op.target] != op.value) continue;
          break;
      }
      ++pos_[p];
      trail_.push_back(i);
      if (dfs()) return true;
      trail_.pop_back();
      --pos_[p];
      if (op.kind == OpKind::Write) regs[p] = saved;
    }
    failed_.insert(std::move(key));
    return false;
  }

  const History& h_;
  Candidates cand_;
  std::vector<unsigned char> pos_;
  std::vector<std::size_t> slot_;
  std::vector<std::vector<std::size_t>> preds_;
  std::map<ObjectId, RegisterArray> regs_;
  std::vector<std::size_t> trail_;
  std::unordered_set<std::string> failed_;
};

Verdict brute(const History& h, std::size_t bound, bool real_time) {
  validate_history(h, false);
  BruteSearch search(h, real_time);
  if (search.size() > bound) {
    throw CheckRefused("history has " + std::to_string(search.size()) +
                       " operations, brute-force bound is " + std::to_string(bound));
  }
  if (search.run()) {
    Verdict v;
    v.accepted = true;
    v.witness = search.witness();
    return v;
  }
  return reject(real_time ? "no legal linear extension respects real-time order"
                          : "no legal linear extension exists",
                search.all_ops());
}

}  // namespace

VersionMap derive_versions(const History& h) {
  VersionMap out;
  out.of_op.resize(h.ops.size());
  const auto idx = index_writes(h, per_process_order(h));
  auto lookup = [&](ObjectId o, ProcId writer, Value v) -> std::optional<std::size_t> {
    if (v == 0) return 0;
    auto it = idx.find({o, writer});
    if (it == idx.end()) return std::nullopt;
    auto jt = it->second.find(v);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  };
  for (std::size_t i = 0; i < h.ops.size(); ++i) {
    const OpRecord& op = h.ops[i];
    if (!op.complete()) continue;
    if (op.kind == OpKind::Snapshot) {
      for (ProcId q = 0; q < h.n; ++q) {
        auto ver = lookup(op.object, q, op.result[q]);
        if (!ver) {
          out.rejection = reject("value " + std::to_string(op.result[q]) + " never written by p" +
                                     std::to_string(q),
                                 {ref_of(op)});
          return out;
        }
        out.of_op[i].push_back(*ver);
      }
    } else if (op.kind == OpKind::Read) {
      auto ver = lookup(op.object, op.target, op.value);
      if (!ver) {
        out.rejection = reject("value " + std::to_string(op.value) + " never written by p" +
                                   std::to_string(op.target),
                               {ref_of(op)});
        return out;
      }
      out.of_op[i].push_back(*ver);
    }
  }
  return out;
}

Verdict check_sc_fast(const History& h) {
  validate_history(h, false);
  if (objects_of(h).size() > 1) {
    throw std::invalid_argument("check_sc_fast takes a single-object history");
  }
  if (std::any_of(h.ops.begin(), h.ops.end(),
                  [](const OpRecord& op) { return op.kind == OpKind::Read; })) {
    // Register reads are outside the structural conditions.
    return check_sc_brute(h);
  }

  VersionMap versions = derive_versions(h);
  if (versions.rejection) return *versions.rejection;
  const auto order = per_process_order(h);
  const auto& ver = versions.of_op;

  // SELF and FUTURE, then MONO, per process.
  for (ProcId p = 0; p < h.n; ++p) {
    std::size_t writes_before = 0;
    std::optional<std::size_t> last_write;
    std::optional<std::size_t> prev_snap;
    for (std::size_t i : order[p]) {
      const OpRecord& op = h.ops[i];
      if (op.kind == OpKind::Write) {
        ++writes_before;
        last_write = i;
        for (std::size_t s : order[p]) {
          if (h.ops[s].seq >= op.seq) break;
          if (h.ops[s].kind == OpKind::Snapshot && h.ops[s].complete() && ver[s][p] >= writes_before) {
            return reject("snapshot observes a later write of its own process",
                          {ref_of(h.ops[s]), ref_of(op)});
          }
        }
        continue;
      }
      if (!op.complete()) continue;
      if (ver[i][p] != writes_before) {
        std::vector<OpRef> cert{ref_of(op)};
        if (last_write) cert.insert(cert.begin(), ref_of(h.ops[*last_write]));
        return reject("snapshot does not reflect its own process's latest write", cert);
      }
      if (prev_snap && !leq(ver[*prev_snap], ver[i])) {
        return reject("snapshots of one process go back in time",
                      {ref_of(h.ops[*prev_snap]), ref_of(op)});
      }
      prev_snap = i;
    }
  }

  // COMPARABLE: sorted by total version, consecutive snapshots must be <=.
  std::vector<std::size_t> snaps;
  for (std::size_t i = 0; i < h.ops.size(); ++i) {
    if (h.ops[i].kind == OpKind::Snapshot && h.ops[i].complete()) snaps.push_back(i);
  }
  std::sort(snaps.begin(), snaps.end(), [&](std::size_t a, std::size_t b) {
    const auto ta = total(ver[a]);
    const auto tb = total(ver[b]);
    if (ta != tb) return ta < tb;
    return std::pair(h.ops[a].proc, h.ops[a].seq) < std::pair(h.ops[b].proc, h.ops[b].seq);
  });
  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    if (!leq(ver[snaps[k]], ver[snaps[k + 1]])) {
      return reject("snapshots observed incomparable states",
                    {ref_of(h.ops[snaps[k]]), ref_of(h.ops[snaps[k + 1]])});
    }
  }

  // Witness: snapshots in version order, each writer's version-w write placed
  // just before the first snapshot that observes it, leftovers at the end.
  std::vector<std::vector<std::size_t>> writes_of(h.n);
  for (ProcId p = 0; p < h.n; ++p) {
    for (std::size_t i : order[p]) {
      if (h.ops[i].kind == OpKind::Write) writes_of[p].push_back(i);
    }
  }
  std::vector<std::size_t> applied(h.n, 0);
  std::vector<OpRef> witness;
  for (std::size_t s : snaps) {
    for (ProcId q = 0; q < h.n; ++q) {
      while (applied[q] < ver[s][q]) witness.push_back(ref_of(h.ops[writes_of[q][applied[q]++]]));
    }
    witness.push_back(ref_of(h.ops[s]));
  }
  for (ProcId q = 0; q < h.n; ++q) {
    for (; applied[q] < writes_of[q].size(); ++applied[q]) {
      const OpRecord& w = h.ops[writes_of[q][applied[q]]];
      if (w.complete()) witness.push_back(ref_of(w));
    }
  }

  if (!verify_witness(h, witness)) {
    return check_sc_brute(h);
  }
  Verdict v;
  v.accepted = true;
  v.witness = std::move(witness);
  return v;
}

Verdict check_sc_brute(const History& h, std::size_t bound) { return brute(h, bound, false); }

Verdict check_lin_brute(const History& h, std::size_t bound) { return brute(h, bound, true); }

bool verify_witness(const History& h, std::span<const OpRef> order, bool real_time) {
  std::map<OpRef, std::size_t> index;
  for (std::size_t i = 0; i < h.ops.size(); ++i) index[ref_of(h.ops[i])] = i;

  std::map<OpRef, std::size_t> position;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto it = index.find(order[k]);
    if (it == index.end()) return false;
    const OpRecord& op = h.ops[it->second];
    if (!op.complete() && op.kind != OpKind::Write) return false;
    if (!position.emplace(order[k], k).second) return false;
  }
  for (const auto& op : h.ops) {
    if (op.complete() && !position.count(ref_of(op))) return false;
  }

  // Program order.
  std::vector<std::optional<std::size_t>> last_seq(h.n);
  for (const auto& ref : order) {
    if (ref.proc >= h.n) return false;
    if (last_seq[ref.proc] && *last_seq[ref.proc] >= ref.seq) return false;
    last_seq[ref.proc] = ref.seq;
  }

  if (real_time) {
    for (const auto& a : order) {
      const OpRecord& oa = h.ops[index[a]];
      for (const auto& b : order) {
        const OpRecord& ob = h.ops[index[b]];
        if (ob.t_ret && *ob.t_ret < oa.t_inv && position[b] > position[a]) return false;
      }
    }
  }

  std::map<ObjectId, std::vector<SeqOp>> words;
  for (const auto& ref : order) {
    const OpRecord& op = h.ops[index[ref]];
    switch (op.kind) {
      case OpKind::Write: words[op.object].push_back(SeqOp::write(op.proc, op.value)); break;
      case OpKind::Snapshot: words[op.object].push_back(SeqOp::snapshot(op.proc, op.result)); break;
      case OpKind::Read: words[op.object].push_back(SeqOp::read(op.proc, op.target, op.value)); break;
    }
  }
  for (const auto& [object, word] : words) {
    if (!is_legal_word(word, h.n)) return false;
  }
  return true;
}

std::string verdict_to_json(const Verdict& v, const std::string& mode) {
  using nlohmann::json;
  auto refs = [](const std::vector<OpRef>& rs) {
    json a = json::array();
    for (const auto& r : rs) a.push_back({{"object_id", r.object}, {"proc", r.proc}, {"seq", r.seq}});
    return a;
  };
  json j;
  j["mode"] = mode;
  j["accepted"] = v.accepted;
  j["witness"] = refs(v.witness);
  j["certificate"] = refs(v.certificate);
  j["reason"] = v.reason;
  return j.dump(2) + "\n";
}

}  // namespace scsnap
