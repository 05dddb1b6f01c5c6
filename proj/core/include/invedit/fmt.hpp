#pragma once

#include <string>
#include <vector>

namespace invedit {

// Shortest round-trippable decimal form (%.17g). Infinities print as
// "inf"/"-inf". Used for every CSV cell so reruns are byte-identical.
std::string fmt_g17(double v);

// Fixed precision form for human-facing report lines.
std::string fmt_fixed(double v, int digits);

std::string join_csv(const std::vector<std::string>& cells);

}  // namespace invedit
