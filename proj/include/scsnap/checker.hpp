#pragma once

// Consistency checking of snapshot-memory histories.
//
// check_sc_fast decides sequential consistency of single-writer snapshot
// histories from four structural conditions on the version vectors the
// snapshots observed, and builds a witness order. check_sc_brute and
// check_lin_brute enumerate linear extensions and are exact; they are the
// oracles the fast checker is tested against. Brute-force checks treat each
// object_id as a separate snapshot memory, so they also decide consistency
// with respect to the composition of several objects.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scsnap/history.hpp"

namespace scsnap {

struct Verdict {
  bool accepted = false;
  std::vector<OpRef> witness;      // accepted: total order of the included ops
  std::vector<OpRef> certificate;  // rejected: ops that together cannot be ordered
  std::string reason;
};

/// Raised instead of a verdict when a brute-force check is asked to exceed its
/// size bound.
class CheckRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBruteBound = 10;

// Version of cell `writer` = how many writes by `writer` have been applied
// (0 = initial value).
struct VersionMap {
  // For snapshot ops: one version per writer. For reads: a single version of
  // the target cell. Empty for writes and incomplete ops.
  std::vector<std::vector<std::size_t>> of_op;
  std::optional<Verdict> rejection;
};

/// Resolves every returned value to the version that wrote it. Requires the
/// values written by each process (per object) to be distinct and nonzero.
VersionMap derive_versions(const History& h);

Verdict check_sc_fast(const History& h);

Verdict check_sc_brute(const History& h, std::size_t bound = kDefaultBruteBound);

Verdict check_lin_brute(const History& h, std::size_t bound = kDefaultBruteBound);

/// True iff `order` is a valid witness: every complete op appears exactly
/// once, incomplete snapshots/reads do not appear, each process order is
/// respected, and every object's projection is a legal sequential word.
/// With `real_time`, ops that returned before another was invoked must also
/// precede it.
bool verify_witness(const History& h, std::span<const OpRef> order, bool real_time = false);

std::string verdict_to_json(const Verdict& v, const std::string& mode);

}  // namespace scsnap
