#include "gowers/config.hpp"

#include <algorithm>
#include <cmath>

#include "gowers/error.hpp"

namespace gowers {

double Tolerances::accept_threshold(int k) const { return accept_scale * std::ldexp(1.0, -k); }

double Tolerances::cocycle_gate(int k) const { return std::pow(2.0, -k - 0.5); }

const Tolerances& default_tolerances() {
  static const Tolerances t;
  return t;
}

Tolerances tolerance_profile(const std::string& name) {
  Tolerances t;
  if (name == "default") return t;
  if (name == "strict") {
    t.poly = 1e-10;
    t.accept_scale = 0.1;
    t.level_set = 0.75;
    t.intersection_cap = 0.1;
    return t;
  }
  if (name == "loose") {
    t.poly = 1e-6;
    t.accept_scale = 2.0;
    t.mag_clamp = 0.25;
    t.intersection_cap = 0.4;
    return t;
  }
  usage_fail("unknown tolerance profile '" + name + "' (expected default, strict or loose)");
}

std::size_t interval_min_length(int k) {
  if (k <= 2) return 4;
  return static_cast<std::size_t>(32 * (k - 2));
}

}  // namespace gowers
