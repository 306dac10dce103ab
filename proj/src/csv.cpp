#include "setler/csv.hpp"

#include <cstdio>

namespace setler {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool cartesian,
                          std::size_t checkpoint_every) {
    if (checkpoint_every == 0) checkpoint_every = 1;
    os << (cartesian ? "t,alpha,delta,r,x,y,z\n" : "t,alpha,delta,r\n");
    const auto& ts = traj.times();
    const auto& ss = traj.states();
    const std::size_t last = ts.size() - 1;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i % checkpoint_every != 0 && i != last) continue;
        os << format_full(ts[i]) << ',' << format_full(ss[i].alpha) << ','
           << format_full(ss[i].delta) << ',' << format_full(ss[i].r);
        if (cartesian) {
            const CartesianState c = spherical_to_cartesian(ss[i]);
            os << ',' << format_full(c.x) << ',' << format_full(c.y) << ','
               << format_full(c.z);
        }
        os << '\n';
    }
}

}  // namespace setler
