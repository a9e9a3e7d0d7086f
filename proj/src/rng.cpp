#include "frechet/rng.hpp"

#include <cmath>

namespace frechet {

double Rng::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t v;
  do { v = (*this)(); } while (v >= limit);
  return v % bound;
}

}  // namespace frechet
