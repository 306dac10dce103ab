#pragma once

#include <ostream>
#include <string>

#include "setler/core.hpp"

namespace setler {

// Shortest text form that round-trips a double exactly (17 significant digits).
std::string format_full(double v);

// Header `t,alpha,delta,r` (plus `,x,y,z` when cartesian is set), one row per
// retained sample. checkpoint_every > 1 decimates rows but always keeps the
// first and last sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool cartesian = false, std::size_t checkpoint_every = 1);

}  // namespace setler
