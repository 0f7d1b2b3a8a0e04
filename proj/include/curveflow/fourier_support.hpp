#pragma once
// Convex plane curves stored as truncated Fourier series of the support
// function:
//
//   u(theta) = a[0]/2 + sum_{n=1..N} a[n] cos(n theta) + b[n] sin(n theta)
//
// The radius of curvature is 1/k = u'' + u, which scales mode n by (1 - n^2);
// strict convexity means u'' + u > 0 everywhere.  Length, area and the
// curvature integrals all reduce to closed forms in the coefficients, and the
// grid transforms below are exact (up to rounding) whenever the grid resolves
// every mode, i.e. M >= 2*order + 2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curveflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct FourierSupport {
  // a and b always have the same length order+1; b[0] stays zero.
  std::vector<double> a;
  std::vector<double> b;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

struct SampledField {
  // values[j] sampled at theta_j = 2*pi*j / values.size().
  std::vector<double> values;

  int grid_size() const { return static_cast<int>(values.size()); }
  double theta(int j) const { return kTwoPi * j / values.size(); }
};

inline void validate(const FourierSupport& fs) {
  if (fs.a.empty() || fs.a.size() != fs.b.size())
    throw std::invalid_argument("fourier support: coefficient arrays must be non-empty and equal length");
  if (fs.b[0] != 0.0)
    throw std::invalid_argument("fourier support: b[0] must be zero");
  for (double v : fs.a)
    if (!std::isfinite(v)) throw std::invalid_argument("fourier support: non-finite cos coefficient");
  for (double v : fs.b)
    if (!std::isfinite(v)) throw std::invalid_argument("fourier support: non-finite sin coefficient");
}

inline FourierSupport make_circle(double radius, int order = 2) {
  if (order < 0) throw std::invalid_argument("make_circle: order must be >= 0");
  FourierSupport fs;
  fs.a.assign(order + 1, 0.0);
  fs.b.assign(order + 1, 0.0);
  fs.a[0] = 2.0 * radius;
  return fs;
}

inline int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

// Dense grid used for quadrature-based quantities (margin, entropy, rates).
inline int dense_grid(int order) { return std::max(1024, next_pow2(8 * order)); }

// Cached cos/sin tables on the uniform M-grid: cos(n*theta_j) = cos_tab[(n*j) % M].
namespace detail {

struct TrigTable {
  std::vector<double> cos_tab, sin_tab;
};

inline const TrigTable& trig_table(int M) {
  static thread_local std::map<int, TrigTable> cache;
  auto it = cache.find(M);
  if (it == cache.end()) {
    TrigTable t;
    t.cos_tab.resize(M);
    t.sin_tab.resize(M);
    for (int k = 0; k < M; ++k) {
      t.cos_tab[k] = std::cos(kTwoPi * k / M);
      t.sin_tab[k] = std::sin(kTwoPi * k / M);
    }
    it = cache.emplace(M, std::move(t)).first;
  }
  return it->second;
}

}  // namespace detail

struct SynthesisResult {
  SampledField u;       // support values
  SampledField radius;  // u'' + u, mode n scaled by (1 - n^2)
};

inline SynthesisResult synthesize(const FourierSupport& fs, int M) {
  validate(fs);
  const int N = fs.order();
  if (M < 2 * N + 2)
    throw std::invalid_argument("synthesize: grid size " + std::to_string(M) +
                                " is below 2*order+2 = " + std::to_string(2 * N + 2));
  const auto& t = detail::trig_table(M);
  SynthesisResult out;
  out.u.values.assign(M, fs.a[0] / 2.0);
  out.radius.values.assign(M, fs.a[0] / 2.0);
  for (int n = 1; n <= N; ++n) {
    const double an = fs.a[n], bn = fs.b[n];
    if (an == 0.0 && bn == 0.0) continue;
    const double rn = 1.0 - double(n) * n;
    std::size_t idx = 0;
    for (int j = 0; j < M; ++j) {
      const double c = t.cos_tab[idx], s = t.sin_tab[idx];
      const double term = an * c + bn * s;
      out.u.values[j] += term;
      out.radius.values[j] += rn * term;
      idx += n;
      if (idx >= static_cast<std::size_t>(M)) idx -= M;
    }
  }
  return out;
}

inline FourierSupport analyze(const SampledField& field) {
  const int M = field.grid_size();
  if (M < 4) throw std::invalid_argument("analyze: need at least 4 samples");
  const int N = M / 2 - 1;
  const auto& t = detail::trig_table(M);
  FourierSupport fs;
  fs.a.assign(N + 1, 0.0);
  fs.b.assign(N + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    double ca = 0.0, cb = 0.0;
    std::size_t idx = 0;
    for (int j = 0; j < M; ++j) {
      ca += field.values[j] * t.cos_tab[idx];
      cb += field.values[j] * t.sin_tab[idx];
      idx += n;
      if (idx >= static_cast<std::size_t>(M)) idx -= M;
    }
    fs.a[n] = 2.0 * ca / M;
    fs.b[n] = 2.0 * cb / M;
  }
  fs.b[0] = 0.0;
  return fs;
}

// Trapezoid rule on the periodic grid; spectrally accurate for smooth fields.
inline double quadrature(const SampledField& field) {
  double s = 0.0;
  for (double v : field.values) s += v;
  return s * kTwoPi / field.values.size();
}

inline std::pair<double, double> margin_with_location(const FourierSupport& fs, int M) {
  const auto syn = synthesize(fs, M);
  int jmin = 0;
  for (int j = 1; j < M; ++j)
    if (syn.radius.values[j] < syn.radius.values[jmin]) jmin = j;
  return {syn.radius.values[jmin], syn.radius.theta(jmin)};
}

inline double convexity_margin(const FourierSupport& fs) {
  return margin_with_location(fs, dense_grid(fs.order())).first;
}

inline double length(const FourierSupport& fs) {
  validate(fs);
  return kPi * fs.a[0];
}

inline double area(const FourierSupport& fs) {
  validate(fs);
  double s = kPi / 4.0 * fs.a[0] * fs.a[0];
  for (int n = 1; n <= fs.order(); ++n)
    s += kPi / 2.0 * (1.0 - double(n) * n) * (fs.a[n] * fs.a[n] + fs.b[n] * fs.b[n]);
  return s;
}

// integral of 1/k ds = integral of (u'' + u)^2 dtheta.
inline double int_inv_k(const FourierSupport& fs) {
  double s = 2.0 * area(fs);
  for (int n = 2; n <= fs.order(); ++n) {
    const double n2 = double(n) * n;
    s += kPi * n2 * (n2 - 1.0) * (fs.a[n] * fs.a[n] + fs.b[n] * fs.b[n]);
  }
  return s;
}

struct HigherIntegrals {
  double int_inv_k = 0.0;
  double entropy = 0.0;
  bool entropy_degenerate = false;  // log argument hit the 1e-300 floor
};

// entropy = integral of log(k * sqrt(A/pi)) dtheta; zero exactly on circles.
inline HigherIntegrals higher_integrals(const FourierSupport& fs, int grid = 0) {
  const int M = grid > 0 ? grid : dense_grid(fs.order());
  const auto syn = synthesize(fs, M);
  double min_r = syn.radius.values[0];
  for (double r : syn.radius.values) min_r = std::min(min_r, r);
  if (!(min_r > 0.0))
    throw std::domain_error("higher_integrals: entropy needs a strictly convex curve (margin > 0)");

  HigherIntegrals out;
  out.int_inv_k = int_inv_k(fs);
  const double A = area(fs);
  double log_sum = 0.0;
  for (double r : syn.radius.values) {
    double arg = r;
    if (arg < 1e-300) {
      arg = 1e-300;
      out.entropy_degenerate = true;
    }
    log_sum += std::log(arg);
  }
  out.entropy = -log_sum * kTwoPi / M + kPi * std::log(A / kPi);
  return out;
}

struct CurveSummary {
  double length = 0.0;
  double area = 0.0;
  double ipd = 0.0;  // isoperimetric deficit L^2 - 4 pi A
  double ipr = 0.0;  // isoperimetric ratio L^2 / (4 pi A)
  double entropy = 0.0;
  double int_inv_k = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double margin = 0.0;
  bool entropy_valid = false;  // margin > 0 and no degeneracy floor hit
};

inline CurveSummary summarize(const FourierSupport& fs, int grid = 0) {
  validate(fs);
  const int M = grid > 0 ? grid : dense_grid(fs.order());
  CurveSummary s;
  s.length = length(fs);
  s.area = area(fs);
  s.ipd = s.length * s.length - 4.0 * kPi * s.area;
  s.ipr = s.area > 0.0 ? s.length * s.length / (4.0 * kPi * s.area)
                       : std::numeric_limits<double>::infinity();
  s.int_inv_k = int_inv_k(fs);
  s.center_x = fs.order() >= 1 ? fs.a[1] : 0.0;
  s.center_y = fs.order() >= 1 ? fs.b[1] : 0.0;
  const auto [m, theta] = margin_with_location(fs, M);
  (void)theta;
  s.margin = m;
  if (m > 0.0) {
    const auto hi = higher_integrals(fs, M);
    s.entropy = hi.entropy;
    s.entropy_valid = !hi.entropy_degenerate;
  } else {
    s.entropy = std::numeric_limits<double>::quiet_NaN();
    s.entropy_valid = false;
  }
  return s;
}

struct Point {
  double x = 0.0, y = 0.0;
};

// X(theta) = u*(cos, sin) + u'*(-sin, cos); traces the curve as theta sweeps.
inline Point embed(const FourierSupport& fs, double theta) {
  validate(fs);
  double u = fs.a[0] / 2.0, du = 0.0;
  for (int n = 1; n <= fs.order(); ++n) {
    const double c = std::cos(n * theta), s = std::sin(n * theta);
    u += fs.a[n] * c + fs.b[n] * s;
    du += n * (fs.b[n] * c - fs.a[n] * s);
  }
  const double ct = std::cos(theta), st = std::sin(theta);
  return {u * ct - du * st, u * st + du * ct};
}

// Outward parallel curve at distance r; r < 0 must stay within the margin.
inline FourierSupport parallel_offset(const FourierSupport& fs, double r) {
  validate(fs);
  if (!std::isfinite(r)) throw std::invalid_argument("parallel_offset: r must be finite");
  if (r < 0.0) {
    const double m = convexity_margin(fs);
    if (!(r > -m))
      throw std::domain_error("parallel_offset: inner offset " + std::to_string(r) +
                              " exceeds convexity margin " + std::to_string(m));
  }
  FourierSupport out = fs;
  out.a[0] += 2.0 * r;
  return out;
}

inline FourierSupport translate_dilate(const FourierSupport& fs, double lambda, double dx,
                                       double dy) {
  validate(fs);
  if (!(lambda > 0.0)) throw std::invalid_argument("translate_dilate: lambda must be positive");
  if (!std::isfinite(dx) || !std::isfinite(dy))
    throw std::invalid_argument("translate_dilate: translation must be finite");
  FourierSupport out = fs;
  for (auto& v : out.a) v *= lambda;
  for (auto& v : out.b) v *= lambda;
  if (out.order() < 1) {
    out.a.resize(2, 0.0);
    out.b.resize(2, 0.0);
  }
  out.a[1] += dx;
  out.b[1] += dy;
  return out;
}

}  // namespace curveflow
