#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wkx {

/// Deterministic sample points in [-1, 1]^dims. mt19937_64 output is fully
/// specified by the standard and the uint64 -> double mapping is fixed here,
/// so equal seeds give bit-identical samples on every platform.
inline std::vector<std::vector<double>> sample_points(std::uint64_t seed,
                                                      int count, int dims) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts(count, std::vector<double>(dims));
  for (auto& pt : pts)
    for (auto& v : pt) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
      v = 2.0 * u - 1.0;
    }
  return pts;
}

}  // namespace wkx
