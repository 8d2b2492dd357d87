#pragma once

// Run-level invariants checked over simulator output.

#include "scsnap/sim.hpp"

namespace scsnap::sim {

/// Number of adjacent pairs, after sorting each object's recorded VC vectors
/// by their sum, that are not componentwise ordered. Zero iff every object's
/// vectors form a chain.
std::size_t vc_chain_violations(const VcTrace& trace);

/// Updates submitted by correct writers that some correct process has not
/// validated (VC[writer] < stamp) at the end of the run.
std::size_t unvalidated_updates(const SimResult& r);

/// Total pending entries left at correct processes.
std::size_t leftover_pending(const SimResult& r);

/// Operations of correct processes that never returned.
std::size_t stuck_operations(const SimResult& r);

/// True iff every channel delivered in send order (needs record_deliveries).
bool fifo_respected(const SimResult& r);

}  // namespace scsnap::sim
