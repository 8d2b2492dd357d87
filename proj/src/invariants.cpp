#include "scsnap/invariants.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace scsnap::sim {

std::size_t vc_chain_violations(const VcTrace& trace) {
  std::map<ObjectId, std::vector<std::vector<Stamp>>> by_object;
  for (const auto& s : trace.samples) by_object[s.object].push_back(s.vc);

  std::size_t violations = 0;
  for (auto& [object, vcs] : by_object) {
    std::sort(vcs.begin(), vcs.end());
    vcs.erase(std::unique(vcs.begin(), vcs.end()), vcs.end());
    auto sum = [](const std::vector<Stamp>& v) { return std::accumulate(v.begin(), v.end(), Stamp{0}); };
    std::stable_sort(vcs.begin(), vcs.end(), [&](const auto& a, const auto& b) { return sum(a) < sum(b); });
    for (std::size_t i = 0; i + 1 < vcs.size(); ++i) {
      for (std::size_t k = 0; k < vcs[i].size(); ++k) {
        if (vcs[i][k] > vcs[i + 1][k]) {
          ++violations;
          break;
        }
      }
    }
  }
  return violations;
}

std::size_t unvalidated_updates(const SimResult& r) {
  std::size_t missing = 0;
  for (const auto& init : r.initiated) {
    if (r.crashed[init.update.writer]) continue;
    for (ProcId j = 0; j < r.crashed.size(); ++j) {
      if (r.crashed[j]) continue;
      if (r.scs_states[init.object][j].vc[init.update.writer] < init.update.stamp) ++missing;
    }
  }
  return missing;
}

std::size_t leftover_pending(const SimResult& r) {
  std::size_t left = 0;
  for (const auto& row : r.scs_states) {
    for (ProcId j = 0; j < row.size(); ++j) {
      if (!r.crashed[j]) left += row[j].pending.size();
    }
  }
  return left;
}

std::size_t stuck_operations(const SimResult& r) {
  return static_cast<std::size_t>(std::count_if(r.history.ops.begin(), r.history.ops.end(), [&](const OpRecord& op) {
    return !op.complete() && !r.crashed[op.proc];
  }));
}

bool fifo_respected(const SimResult& r) {
  std::map<std::pair<ProcId, ProcId>, std::uint64_t> last;
  for (const auto& d : r.deliveries) {
    auto [it, fresh] = last.try_emplace({d.from, d.to}, d.send_seq);
    if (!fresh) {
      if (d.send_seq <= it->second) return false;
      it->second = d.send_seq;
    }
  }
  return true;
}

}  // namespace scsnap::sim
