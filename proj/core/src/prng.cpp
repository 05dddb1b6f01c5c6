#include "invedit/prng.hpp"

#include <cmath>

namespace invedit {

double Pcg64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

}  // namespace invedit
