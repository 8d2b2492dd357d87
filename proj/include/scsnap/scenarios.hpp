#pragma once

// Scripted executions with hand-placed message delays.
//
//   fig4a  n=5, p4 writes a and p0 writes b concurrently. p3 and p4 validate
//          a before b; p0 and p1 must keep a -> b, p2 must keep b -> a, so
//          those three validate both updates together.
//   fig4b  n=4, p3 writes a then c, p0 writes b then d, with p2 hearing p3
//          first and p1 hearing p0 first. Postponing c and d until a and b
//          validate stops the a, b, c, d dependency chain.
//   abd_baseline_demo  n=3 ABD write with a concurrent and a later read.

#include <string>
#include <vector>

#include "scsnap/sim.hpp"

namespace scsnap::scenarios {

std::vector<std::string> names();

/// Throws std::invalid_argument for unknown names.
sim::SimConfig config_for(const std::string& name);

sim::SimResult replay_scripted(const std::string& name);

}  // namespace scsnap::scenarios
