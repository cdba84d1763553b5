#include "progmerge/rng.hpp"

#include <cmath>
#include <numbers>

namespace progmerge {

double Rng::normal(double mean, double sd) {
  double z;
  if (has_spare_) {
    has_spare_ = false;
    z = spare_;
  } else {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    z = r * std::cos(theta);
    spare_ = r * std::sin(theta);
    has_spare_ = true;
  }
  return mean + sd * z;
}

}  // namespace progmerge
