#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace flipblur {

// Standard normal draws that are bit-reproducible across standard libraries:
// std::mt19937_64 has a fully specified output sequence, whereas
// std::normal_distribution does not, so the Box-Muller transform is done here.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform on (0, 1] with 53 random bits.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace flipblur
