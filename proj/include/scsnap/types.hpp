#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace scsnap {

using ProcId = std::size_t;
using Value = std::uint64_t;
using Stamp = std::uint64_t;
using ObjectId = std::size_t;

/// Stamp slot not yet known to the local process. Compares greater than any
/// finite stamp, so `finite < kUnknownStamp` holds and `kUnknownStamp < x`
/// never does.
inline constexpr Stamp kUnknownStamp = std::numeric_limits<Stamp>::max();

using RegisterArray = std::vector<Value>;

// An update is named by its writer and the stamp the writer gave it.
struct UpdateId {
  ProcId writer = 0;
  Stamp stamp = 0;
  auto operator<=>(const UpdateId&) const = default;
};

// Strict majority of n processes.
constexpr bool is_majority(std::size_t count, std::size_t n) { return 2 * count > n; }

}  // namespace scsnap
