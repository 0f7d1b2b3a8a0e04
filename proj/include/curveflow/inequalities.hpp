#pragma once
// Geometric and functional inequality checks.  Each check fills an
// InequalityReport whose slack is oriented so that slack >= 0 means the
// inequality holds; lhs/rhs keep the inequality's natural written order.
// Tolerances scale with the magnitude of both sides.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curveflow/fourier_support.hpp"

namespace curveflow {

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // >= 0 means the inequality holds
  bool holds = false;
  bool equality = false;
  std::optional<std::string> classifier;
};

inline constexpr double kInequalityTol = 1e-9;
inline constexpr double kEqualityCoeffTol = 1e-12;

namespace detail {

inline InequalityReport finish_report(std::string name, double lhs, double rhs, double slack,
                                      double tol) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  const double scaled = tol * (1.0 + std::abs(lhs) + std::abs(rhs));
  r.holds = slack >= -scaled;
  r.equality = std::abs(slack) <= scaled;
  return r;
}

inline bool harmonics_below(const FourierSupport& fs, int cutoff) {
  for (int n = cutoff; n <= fs.order(); ++n)
    if (std::abs(fs.a[n]) > kEqualityCoeffTol || std::abs(fs.b[n]) > kEqualityCoeffTol)
      return false;
  return true;
}

}  // namespace detail

// integral of k dtheta >= pi L / A, equality on circles.
inline InequalityReport check_gage(const FourierSupport& fs, double tol = kInequalityTol) {
  const int M = dense_grid(fs.order());
  const auto syn = synthesize(fs, M);
  double lhs = 0.0;
  for (double r : syn.radius.values) {
    if (!(r > 0.0)) throw std::domain_error("check_gage: curve must be strictly convex");
    lhs += 1.0 / r;
  }
  lhs *= kTwoPi / M;
  const double rhs = kPi * length(fs) / area(fs);
  auto r = detail::finish_report("gage", lhs, rhs, lhs - rhs, tol);
  if (r.equality) r.classifier = "circle";
  return r;
}

// integral of (1/k) ds >= (L^2 - 2 pi A) / pi.
inline InequalityReport check_pan_yang(const FourierSupport& fs, double tol = kInequalityTol) {
  const double L = length(fs), A = area(fs);
  const double lhs = int_inv_k(fs);
  const double rhs = (L * L - 2.0 * kPi * A) / kPi;
  return detail::finish_report("pan_yang", lhs, rhs, lhs - rhs, tol);
}

// integral of (1/k) ds >= (2/pi)(L^2 - 4 pi A) + 2 A, equality iff the support
// function carries no harmonics above 2.
inline InequalityReport check_refined(const FourierSupport& fs, double tol = kInequalityTol) {
  const double L = length(fs), A = area(fs);
  const double lhs = int_inv_k(fs);
  const double rhs = 2.0 / kPi * (L * L - 4.0 * kPi * A) + 2.0 * A;
  auto r = detail::finish_report("refined", lhs, rhs, lhs - rhs, tol);
  const bool low = detail::harmonics_below(fs, 3);
  r.classifier = low ? "harmonics <= 2" : "harmonics > 2";
  return r;
}

// L^2 >= 4 pi A, equality iff no harmonics above 1 (round curves).
inline InequalityReport check_isoperimetric(const FourierSupport& fs,
                                            double tol = kInequalityTol) {
  const double L = length(fs), A = area(fs);
  auto r = detail::finish_report("isoperimetric", L * L, 4.0 * kPi * A, L * L - 4.0 * kPi * A,
                                 tol);
  if (detail::harmonics_below(fs, 2)) r.classifier = "circle";
  return r;
}

// entropy >= 0, equality on circles.
inline InequalityReport check_entropy(const FourierSupport& fs, double tol = kInequalityTol) {
  const auto hi = higher_integrals(fs);
  auto r = detail::finish_report("entropy", hi.entropy, 0.0, hi.entropy, tol);
  if (r.equality) r.classifier = "circle";
  return r;
}

enum class Monotone { Increasing, Decreasing };

// Chebyshev-type rearrangement bound: for increasing F,
//   integral(xi) * integral(F(xi)) <= integral(1) * integral(xi F(xi)),
// reversed for decreasing F.  Measure is dtheta on the field's grid.
inline InequalityReport check_andrews(const SampledField& xi, Monotone monotone,
                                      const std::function<double(double)>& F,
                                      double tol = kInequalityTol) {
  const int M = xi.grid_size();
  if (M < 4) throw std::invalid_argument("check_andrews: need at least 4 samples");
  double s_xi = 0.0, s_F = 0.0, s_xiF = 0.0;
  for (double v : xi.values) {
    const double fv = F(v);
    if (!std::isfinite(fv)) throw std::domain_error("check_andrews: F produced a non-finite value");
    s_xi += v;
    s_F += fv;
    s_xiF += v * fv;
  }
  const double w = kTwoPi / M;
  const double lhs = (s_xi * w) * (s_F * w);
  const double rhs = kTwoPi * (s_xiF * w);
  const double slack = monotone == Monotone::Increasing ? rhs - lhs : lhs - rhs;
  auto r = detail::finish_report("andrews", lhs, rhs, slack, tol);
  if (r.equality) r.classifier = "constant factor";
  return r;
}

// Wirtinger-type bound: integral(1) * integral(f (f'' + f)) <= (integral f)^2,
// with f'' taken spectrally.  Equality iff f = c + first harmonics.
inline InequalityReport check_poincare(const SampledField& f, double tol = kInequalityTol) {
  const int M = f.grid_size();
  if (M < 4) throw std::invalid_argument("check_poincare: need at least 4 samples");
  const auto fs = analyze(f);
  const auto syn = synthesize(fs, M);  // syn.radius carries f'' + f
  double s_f = 0.0, s_ff = 0.0;
  for (int j = 0; j < M; ++j) {
    s_f += f.values[j];
    s_ff += f.values[j] * syn.radius.values[j];
  }
  const double w = kTwoPi / M;
  const double lhs = kTwoPi * (s_ff * w);
  const double rhs = (s_f * w) * (s_f * w);
  auto r = detail::finish_report("poincare", lhs, rhs, rhs - lhs, tol);
  if (detail::harmonics_below(fs, 2)) r.classifier = "first harmonics only";
  return r;
}

struct EntropySweepPoint {
  double r = 0.0;
  double entropy = 0.0;
};

// Entropy along outward parallel curves; non-increasing in r and tending to 0.
inline std::vector<EntropySweepPoint> entropy_parallel_sweep(const FourierSupport& fs,
                                                             const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("entropy_parallel_sweep: empty radius list");
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : radii) {
    if (!(r >= 0.0) || r <= prev)
      throw std::invalid_argument("entropy_parallel_sweep: radii must be increasing and >= 0");
    prev = r;
  }
  std::vector<EntropySweepPoint> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const auto off = parallel_offset(fs, r);
    out.push_back({r, higher_integrals(off).entropy});
  }
  return out;
}

}  // namespace curveflow
