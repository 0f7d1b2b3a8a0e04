#pragma once
// Seeded generator of strictly convex curves.  Modes n = 1..order draw
// uniformly from [-n^-decay, n^-decay]; a[0] is then set to
// 2*(sum n^2 (|a_n| + |b_n|) + margin_floor), which bounds the radius of
// curvature below by margin_floor for any draw.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "curveflow/fourier_support.hpp"

namespace curveflow {

namespace detail {

// mt19937_64 output mapped to [0, 1) explicitly, so draws do not depend on
// the standard library's uniform_real_distribution implementation.
inline double unit_draw(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline FourierSupport random_convex(std::uint64_t seed, int order, double decay,
                                    double margin_floor) {
  if (order < 2) throw std::invalid_argument("random_convex: order must be >= 2");
  if (!(decay > 0.0)) throw std::invalid_argument("random_convex: decay must be positive");
  if (!(margin_floor > 0.0))
    throw std::invalid_argument("random_convex: margin_floor must be positive");

  std::mt19937_64 rng(seed);
  FourierSupport fs;
  fs.a.assign(order + 1, 0.0);
  fs.b.assign(order + 1, 0.0);
  double bound = margin_floor;
  for (int n = 1; n <= order; ++n) {
    const double amp = std::pow(double(n), -decay);
    fs.a[n] = amp * (2.0 * detail::unit_draw(rng) - 1.0);
    fs.b[n] = amp * (2.0 * detail::unit_draw(rng) - 1.0);
    bound += double(n) * n * (std::abs(fs.a[n]) + std::abs(fs.b[n]));
  }
  fs.a[0] = 2.0 * bound;
  return fs;
}

}  // namespace curveflow
