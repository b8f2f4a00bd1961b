// Touchstone v1 two-port (.s2p) reader/writer. Supported option line:
//   # <HZ|KHZ|MHZ|GHZ> S <RI|MA|DB> R <z0>
// Comment lines start with '!'. Data rows carry 9 columns in the standard
// two-port order: f, S11, S21, S12, S22.

#pragma once

#include "swdl/components.hpp"

#include <string>
#include <vector>

namespace swdl {

struct TouchstoneData {
    double z0_ohm = 50.0;
    std::vector<SampledPoint> points;
};

TouchstoneData load_touchstone(const std::string& path);
void save_touchstone(const std::string& path, const TouchstoneData& data);

} // namespace swdl
