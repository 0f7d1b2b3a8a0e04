#pragma once
// Nonlocal normal flows of convex curves, driven in Fourier coefficient
// space.  Every flow moves the curve by X_t = phi * N_in; the support
// function then obeys u_t = -phi.  Each step samples the curve on a uniform
// grid, evaluates phi pointwise plus its nonlocal terms, and projects back to
// the coefficient truncation (modes above the order are dropped).
//
// Time stepping is explicit RK4 with step-doubling error control: a full step
// is compared against two half steps, the difference Richardson-scaled, and
// the step rejected (dt halved) when the scaled error exceeds 1.  Accepted
// steps keep the two-half-step state.  Internal per-step tolerances are fixed
// (kRk4Rtol / kRk4Atol below); StepControl carries the public knobs.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/fourier_support.hpp"

namespace curveflow {

enum class FlowFamily {
  CSF,            // phi = k
  UnitNormal,     // phi = -lambda0 (constant speed)
  Gage,           // phi = k - 2 pi / L            (area preserving)
  JiangPan,       // phi = k - L / (2A)
  MaZhu,          // phi = k - (1/2pi) int k^2 ds  (length preserving)
  PanYang,        // phi = L/(2 pi) - 1/k          (length preserving)
  MaCheng,        // phi = (1/L) int (1/k) ds - 1/k (area preserving)
  Dual,           // phi = 2A/L - 1/k
  GradIPD,        // phi = 2L (k - 2 pi / L)
  GradIPR,        // phi = (L/(2 pi A)) (k - L/(2A))
  SupportAreaK,   // phi = k - (pi/A) u            (area preserving)
  SupportLenK,    // phi = k - ((1/L) int k^2 ds) u (length preserving)
  SupportAreaInvK,  // phi = ((1/(2A)) int (1/k) ds) u - 1/k (area preserving)
  SupportLenInvK,   // phi = u - 1/k               (length preserving)
  CustomK,        // phi = k - p(t)
  CustomInvK,     // phi = q(t) - 1/k
};

struct FlowSpec {
  FlowFamily family = FlowFamily::CSF;
  double lambda0 = -1.0;                      // UnitNormal: lambda of F(k) - lambda
  std::function<double(double)> time_fn;      // CustomK: p(t); CustomInvK: q(t)
};

// Families whose speed divides by the radius of curvature.
inline bool uses_curvature(FlowFamily f) {
  switch (f) {
    case FlowFamily::CSF:
    case FlowFamily::Gage:
    case FlowFamily::JiangPan:
    case FlowFamily::MaZhu:
    case FlowFamily::GradIPD:
    case FlowFamily::GradIPR:
    case FlowFamily::SupportAreaK:
    case FlowFamily::SupportLenK:
    case FlowFamily::CustomK:
      return true;
    default:
      return false;
  }
}

// Grid used for flow stages; 8x oversampling keeps the aliasing error of the
// projected speed far below the step tolerances.
inline int step_grid(int order) { return std::max(64, next_pow2(8 * order)); }

struct StepRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// phi evaluated on the grid. u and rho are the synthesized support and
// radius-of-curvature samples of the current state.
inline void eval_speed(const FlowSpec& spec, const FourierSupport& fs, const SampledField& u,
                       const SampledField& rho, double t, std::vector<double>& phi) {
  const int M = u.grid_size();
  phi.resize(M);

  if (spec.family != FlowFamily::UnitNormal) {
    for (double r : rho.values)
      if (!(r > 0.0))
        throw StepRejected("normal speed undefined: radius of curvature <= 0");
  }

  const double L = length(fs);
  const double A = area(fs);

  auto k_at = [&](int j) { return 1.0 / rho.values[j]; };

  switch (spec.family) {
    case FlowFamily::CSF:
      for (int j = 0; j < M; ++j) phi[j] = k_at(j);
      break;
    case FlowFamily::UnitNormal:
      for (int j = 0; j < M; ++j) phi[j] = -spec.lambda0;
      break;
    case FlowFamily::Gage: {
      const double lam = kTwoPi / L;
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - lam;
      break;
    }
    case FlowFamily::JiangPan: {
      const double lam = L / (2.0 * A);
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - lam;
      break;
    }
    case FlowFamily::MaZhu: {
      // int k^2 ds = int k dtheta, evaluated on this grid
      double q = 0.0;
      for (int j = 0; j < M; ++j) q += k_at(j);
      q *= kTwoPi / M;
      const double lam = q / kTwoPi;
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - lam;
      break;
    }
    case FlowFamily::PanYang: {
      const double lam = L / kTwoPi;
      for (int j = 0; j < M; ++j) phi[j] = lam - rho.values[j];
      break;
    }
    case FlowFamily::MaCheng: {
      const double lam = int_inv_k(fs) / L;
      for (int j = 0; j < M; ++j) phi[j] = lam - rho.values[j];
      break;
    }
    case FlowFamily::Dual: {
      const double lam = 2.0 * A / L;
      for (int j = 0; j < M; ++j) phi[j] = lam - rho.values[j];
      break;
    }
    case FlowFamily::GradIPD:
      for (int j = 0; j < M; ++j) phi[j] = 2.0 * L * k_at(j) - 4.0 * kPi;
      break;
    case FlowFamily::GradIPR: {
      const double pre = L / (kTwoPi * A);
      const double lam = L / (2.0 * A);
      for (int j = 0; j < M; ++j) phi[j] = pre * (k_at(j) - lam);
      break;
    }
    case FlowFamily::SupportAreaK: {
      const double lam = kPi / A;
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - lam * u.values[j];
      break;
    }
    case FlowFamily::SupportLenK: {
      double q = 0.0;
      for (int j = 0; j < M; ++j) q += k_at(j);
      q *= kTwoPi / M;
      const double lam = q / L;
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - lam * u.values[j];
      break;
    }
    case FlowFamily::SupportAreaInvK: {
      const double lam = int_inv_k(fs) / (2.0 * A);
      for (int j = 0; j < M; ++j) phi[j] = lam * u.values[j] - rho.values[j];
      break;
    }
    case FlowFamily::SupportLenInvK:
      for (int j = 0; j < M; ++j) phi[j] = u.values[j] - rho.values[j];
      break;
    case FlowFamily::CustomK: {
      if (!spec.time_fn) throw std::invalid_argument("CustomK flow needs a time function");
      const double p = spec.time_fn(t);
      for (int j = 0; j < M; ++j) phi[j] = k_at(j) - p;
      break;
    }
    case FlowFamily::CustomInvK: {
      if (!spec.time_fn) throw std::invalid_argument("CustomInvK flow needs a time function");
      const double q = spec.time_fn(t);
      for (int j = 0; j < M; ++j) phi[j] = q - rho.values[j];
      break;
    }
  }
}

}  // namespace detail

// Normal speed phi sampled on an M-grid (u_t = -phi).
inline SampledField normal_speed(const FlowSpec& spec, const FourierSupport& fs, int grid = 0,
                                 double t = 0.0) {
  validate(fs);
  const int M = grid > 0 ? grid : step_grid(fs.order());
  const auto syn = synthesize(fs, M);
  SampledField phi;
  try {
    detail::eval_speed(spec, fs, syn.u, syn.radius, t, phi.values);
  } catch (const StepRejected& e) {
    throw std::domain_error(std::string("normal_speed: ") + e.what());
  }
  return phi;
}

namespace detail {

// Coefficients packed as [a0..aN, b1..bN] for the generic RK4 driver.
inline std::vector<double> pack(const FourierSupport& fs) {
  std::vector<double> y(2 * fs.order() + 1);
  for (int n = 0; n <= fs.order(); ++n) y[n] = fs.a[n];
  for (int n = 1; n <= fs.order(); ++n) y[fs.order() + n] = fs.b[n];
  return y;
}

inline FourierSupport unpack(const std::vector<double>& y, int order) {
  FourierSupport fs;
  fs.a.assign(order + 1, 0.0);
  fs.b.assign(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) fs.a[n] = y[n];
  for (int n = 1; n <= order; ++n) fs.b[n] = y[order + n];
  return fs;
}

// d/dt of the packed coefficients: project -phi onto modes 0..N.  This is
// also where de-aliasing happens: modes above N are simply never formed.
struct FlowRhs {
  FlowSpec spec;
  int order;
  int grid;

  mutable std::vector<double> phi;

  void operator()(double t, const std::vector<double>& y, std::vector<double>& dy) const {
    FourierSupport fs = unpack(y, order);
    for (double v : y)
      if (!std::isfinite(v)) throw StepRejected("non-finite state");
    const auto syn = synthesize(fs, grid);
    eval_speed(spec, fs, syn.u, syn.radius, t, phi);

    const auto& tab = trig_table(grid);
    dy.assign(2 * order + 1, 0.0);
    const int M = grid;
    for (int n = 0; n <= order; ++n) {
      double ca = 0.0, cb = 0.0;
      std::size_t idx = 0;
      for (int j = 0; j < M; ++j) {
        ca += phi[j] * tab.cos_tab[idx];
        cb += phi[j] * tab.sin_tab[idx];
        idx += n;
        if (idx >= static_cast<std::size_t>(M)) idx -= M;
      }
      dy[n] = -2.0 * ca / M;
      if (n >= 1) dy[order + n] = -2.0 * cb / M;
    }
    for (double v : dy)
      if (!std::isfinite(v)) throw StepRejected("non-finite derivative");
  }
};

template <class Rhs>
void rk4_step(const Rhs& rhs, double t, const std::vector<double>& y, double h,
              std::vector<double>& out, std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4, std::vector<double>& tmp) {
  const std::size_t n = y.size();
  rhs(t, y, k1);
  tmp.resize(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

inline constexpr double kRk4Rtol = 1e-10;
inline constexpr double kRk4Atol = 1e-13;

// One controlled step: full step vs two half steps.  Returns the scaled error
// (accept iff <= 1) and leaves the two-half-step result in fine.
template <class Rhs>
double doubled_step(const Rhs& rhs, double t, const std::vector<double>& y, double h,
                    std::vector<double>& fine, std::vector<double>& scratch_full,
                    std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
                    std::vector<double>& k4, std::vector<double>& tmp,
                    std::vector<double>& half) {
  rk4_step(rhs, t, y, h, scratch_full, k1, k2, k3, k4, tmp);
  rk4_step(rhs, t, y, 0.5 * h, half, k1, k2, k3, k4, tmp);
  rk4_step(rhs, t + 0.5 * h, half, 0.5 * h, fine, k1, k2, k3, k4, tmp);
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  double err = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sc = kRk4Atol + kRk4Rtol * ymax;
    // factor 15 = 2^4 - 1: Richardson estimate of the fine solution's error
    err = std::max(err, std::abs(fine[i] - scratch_full[i]) / (15.0 * sc));
  }
  return err;
}

}  // namespace detail

// One explicit RK4 step of u_t = -phi in coefficient space.  Throws
// StepRejected when a stage leaves the strictly convex regime or goes
// non-finite.
inline FourierSupport step(const FlowSpec& spec, const FourierSupport& fs, double dt,
                           double t = 0.0) {
  validate(fs);
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  detail::FlowRhs rhs{spec, fs.order(), step_grid(fs.order()), {}};
  std::vector<double> out, k1, k2, k3, k4, tmp;
  detail::rk4_step(rhs, t, detail::pack(fs), dt, out, k1, k2, k3, k4, tmp);
  return detail::unpack(out, fs.order());
}

enum class Termination { Converged, TimeExhausted, ConvexityLost, NumericFailure };

struct StepControl {
  double dt_init = 1e-3;
  double dt_min = 1e-10;
  double dt_max = 5e-2;
  double safety = 0.9;       // in (0,1): growth factor and stiffness-cap scale
  double t_max = 1.0;
  double ipr_tol = 1e-10;    // converged when ipr - 1 < ipr_tol
  double margin_floor = 1e-6;
  int snapshot_every = 10;   // snapshot every this many records (0 = none)
};

struct FlowRecord {
  double t = 0.0;
  CurveSummary summary;
};

struct FlowSnapshot {
  std::size_t index = 0;
  double t = 0.0;
  FourierSupport state;
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  std::vector<FlowSnapshot> snapshots;
  Termination termination = Termination::TimeExhausted;
  FourierSupport final_state;
  double final_t = 0.0;
  double lost_t = 0.0;      // ConvexityLost: time of the failing state
  double lost_theta = 0.0;  // ConvexityLost: angle of minimal radius
  std::string note;
};

inline FlowTrace run(const FlowSpec& spec, const FourierSupport& fs0, const StepControl& ctl) {
  validate(fs0);
  if (!(ctl.t_max > 0.0)) throw std::invalid_argument("run: t_max must be positive");
  if (!(ctl.safety > 0.0 && ctl.safety < 1.0))
    throw std::invalid_argument("run: safety must lie in (0,1)");
  if (!(ctl.dt_min > 0.0 && ctl.dt_min <= ctl.dt_init && ctl.dt_init <= ctl.dt_max))
    throw std::invalid_argument("run: need dt_min <= dt_init <= dt_max");

  const int order = fs0.order();
  const int M = step_grid(order);
  const int record_grid = std::max(256, next_pow2(8 * order));
  detail::FlowRhs rhs{spec, order, M, {}};

  FlowTrace trace;
  auto record = [&](double t, const FourierSupport& fs) {
    trace.records.push_back({t, summarize(fs, record_grid)});
    const std::size_t idx = trace.records.size() - 1;
    if (ctl.snapshot_every > 0 && idx % static_cast<std::size_t>(ctl.snapshot_every) == 0)
      trace.snapshots.push_back({idx, t, fs});
  };

  FourierSupport fs = fs0;
  double t = 0.0;
  double h = ctl.dt_init;
  record(t, fs);

  // margin of the initial state decides whether we can move at all
  {
    const auto [m0, th0] = margin_with_location(fs, record_grid);
    if (m0 < ctl.margin_floor) {
      trace.termination = Termination::ConvexityLost;
      trace.lost_t = 0.0;
      trace.lost_theta = th0;
      trace.final_state = fs;
      trace.final_t = 0.0;
      trace.note = "initial margin below floor";
      return trace;
    }
    if (trace.records.back().summary.ipr - 1.0 < ctl.ipr_tol) {
      trace.termination = Termination::Converged;
      trace.final_state = fs;
      trace.final_t = 0.0;
      return trace;
    }
  }

  std::vector<double> y = detail::pack(fs);
  std::vector<double> fine, full, k1, k2, k3, k4, tmp, half;

  while (true) {
    // stiffness guard: curvature-driven families move on the (min radius)^2
    // clock, the linear families on an O(1) clock
    double cap = ctl.dt_max;
    {
      const auto [m, th] = margin_with_location(fs, M);
      (void)th;
      if (uses_curvature(spec.family))
        cap = std::min(cap, ctl.safety * m * m);
      else
        cap = std::min(cap, ctl.safety);
    }
    h = std::min({h, cap, ctl.t_max - t});
    if (h < ctl.dt_min) h = ctl.dt_min;

    bool rejected_convexity = false;
    double err = std::numeric_limits<double>::infinity();
    try {
      err = detail::doubled_step(rhs, t, y, h, fine, full, k1, k2, k3, k4, tmp, half);
    } catch (const StepRejected&) {
      rejected_convexity = true;
    }

    if (rejected_convexity || err > 1.0) {
      if (h <= ctl.dt_min * (1.0 + 1e-12)) {
        const auto [m, th] = margin_with_location(fs, record_grid);
        trace.final_state = fs;
        trace.final_t = t;
        if (rejected_convexity || m < ctl.margin_floor) {
          trace.termination = Termination::ConvexityLost;
          trace.lost_t = t;
          trace.lost_theta = th;
          trace.note = "step rejected at dt_min";
        } else {
          trace.termination = Termination::NumericFailure;
          trace.note = "error control failed at dt_min";
        }
        return trace;
      }
      h = std::max(0.5 * h, ctl.dt_min);
      continue;
    }

    // accepted
    t += h;
    y = fine;
    fs = detail::unpack(y, order);
    record(t, fs);
    const auto& summary = trace.records.back().summary;

    if (summary.margin < ctl.margin_floor) {
      const auto [m, th] = margin_with_location(fs, record_grid);
      (void)m;
      trace.termination = Termination::ConvexityLost;
      trace.lost_t = t;
      trace.lost_theta = th;
      trace.final_state = fs;
      trace.final_t = t;
      return trace;
    }
    if (summary.ipr - 1.0 < ctl.ipr_tol) {
      trace.termination = Termination::Converged;
      trace.final_state = fs;
      trace.final_t = t;
      break;
    }
    if (t >= ctl.t_max - 1e-14 * ctl.t_max) {
      trace.termination = Termination::TimeExhausted;
      trace.final_state = fs;
      trace.final_t = t;
      break;
    }
    if (err < 0.3) h = std::min(h * (1.0 + ctl.safety), ctl.dt_max);
  }

  // ensure the final state appears as the last snapshot
  if (ctl.snapshot_every > 0 &&
      (trace.snapshots.empty() || trace.snapshots.back().index != trace.records.size() - 1)) {
    trace.snapshots.push_back({trace.records.size() - 1, trace.final_t, trace.final_state});
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Closed-form solutions and linear semigroups.

// Flow phi = 2A/L - 1/k: modes decay as e^{(1-n^2) t} while a0 absorbs the
// lost oscillation so the evolution stays consistent with dL/dt >= 0.
inline FourierSupport dual_closed_form(const FourierSupport& fs0, double t) {
  validate(fs0);
  if (t < 0.0) throw std::invalid_argument("dual_closed_form: t must be >= 0");
  FourierSupport fs = fs0;
  double gain = 0.0;
  for (int n = 1; n <= fs.order(); ++n) {
    const double decay = std::exp((1.0 - double(n) * n) * t);
    fs.a[n] = fs0.a[n] * decay;
    fs.b[n] = fs0.b[n] * decay;
    if (n >= 2)
      gain += (1.0 - decay * decay) * (fs0.a[n] * fs0.a[n] + fs0.b[n] * fs0.b[n]);
  }
  fs.a[0] = std::sqrt(fs0.a[0] * fs0.a[0] + 2.0 * gain);
  return fs;
}

// Flow phi = (1/L) int (1/k) ds - 1/k: same mode decay, a0 shrinks to keep
// the enclosed area fixed.  Domain error when the radicand dies before t.
inline FourierSupport macheng_closed_form(const FourierSupport& fs0, double t) {
  validate(fs0);
  if (t < 0.0) throw std::invalid_argument("macheng_closed_form: t must be >= 0");
  FourierSupport fs = fs0;
  double loss = 0.0;
  for (int n = 1; n <= fs.order(); ++n) {
    const double decay = std::exp((1.0 - double(n) * n) * t);
    fs.a[n] = fs0.a[n] * decay;
    fs.b[n] = fs0.b[n] * decay;
    if (n >= 2)
      loss += (double(n) * n - 1.0) * (1.0 - decay * decay) *
              (fs0.a[n] * fs0.a[n] + fs0.b[n] * fs0.b[n]);
  }
  const double radicand = fs0.a[0] * fs0.a[0] - 2.0 * loss;
  if (!(radicand > 0.0))
    throw std::domain_error("macheng_closed_form: curve degenerates before the requested time");
  fs.a[0] = std::sqrt(radicand);
  return fs;
}

// Semigroup of sigma_t = sigma'' + sigma: mode n scales by e^{(1-n^2) t}.
inline SampledField linear_mode_evolve(const SampledField& field, double t) {
  auto fs = analyze(field);
  for (int n = 0; n <= fs.order(); ++n) {
    const double factor = std::exp((1.0 - double(n) * n) * t);
    fs.a[n] *= factor;
    fs.b[n] *= factor;
  }
  return synthesize(fs, field.grid_size()).u;
}

// Heat semigroup of w_t = w'': mode n scales by e^{-n^2 t}.
inline SampledField heat_semigroup(const SampledField& field, double t) {
  auto fs = analyze(field);
  for (int n = 0; n <= fs.order(); ++n) {
    const double factor = std::exp(-double(n) * n * t);
    fs.a[n] *= factor;
    fs.b[n] *= factor;
  }
  return synthesize(fs, field.grid_size()).u;
}

// ---------------------------------------------------------------------------
// Instantaneous functional rates.

struct FunctionalRates {
  double dL = 0.0;
  double dA = 0.0;
  double dipd = 0.0;
  double dipr = 0.0;
};

// Rates for an arbitrary speed field W = phi * N_in sampled on a grid:
//   dL/dt = -int phi k ds = -int phi dtheta,   dA/dt = -int phi ds.
inline FunctionalRates rates_from_speed(const FourierSupport& fs, const SampledField& phi) {
  validate(fs);
  const int M = phi.grid_size();
  const auto syn = synthesize(fs, M);
  double s_phi = 0.0, s_phi_rho = 0.0;
  for (int j = 0; j < M; ++j) {
    s_phi += phi.values[j];
    s_phi_rho += phi.values[j] * syn.radius.values[j];
  }
  const double w = kTwoPi / M;
  FunctionalRates r;
  r.dL = -s_phi * w;
  r.dA = -s_phi_rho * w;
  const double L = length(fs), A = area(fs);
  r.dipd = 2.0 * L * r.dL - 4.0 * kPi * r.dA;
  r.dipr = (2.0 * L * r.dL) / (4.0 * kPi * A) - (L * L * r.dA) / (4.0 * kPi * A * A);
  return r;
}

inline FunctionalRates functional_rates(const FlowSpec& spec, const FourierSupport& fs,
                                        int grid = 0, double t = 0.0) {
  const int M = grid > 0 ? grid : dense_grid(fs.order());
  return rates_from_speed(fs, normal_speed(spec, fs, M, t));
}

// d(ipd)/dt via the rearrangement identity, valid for any speed of the form
// F(k) - lambda(t):  2 [ int k ds int F ds - int ds int F k ds ].  The lambda
// part cancels exactly.  Support-weighted families are rejected.
inline double andrews_form_dipd(const FlowSpec& spec, const FourierSupport& fs, int grid = 0,
                                double t = 0.0) {
  validate(fs);
  const int M = grid > 0 ? grid : dense_grid(fs.order());
  const auto syn = synthesize(fs, M);
  for (double r : syn.radius.values)
    if (!(r > 0.0)) throw std::domain_error("andrews_form_dipd: curve must be strictly convex");

  const double L = length(fs), A = area(fs);
  std::vector<double> F(M);
  switch (spec.family) {
    case FlowFamily::CSF:
    case FlowFamily::Gage:
    case FlowFamily::JiangPan:
    case FlowFamily::MaZhu:
    case FlowFamily::CustomK:
      for (int j = 0; j < M; ++j) F[j] = 1.0 / syn.radius.values[j];
      break;
    case FlowFamily::UnitNormal:
      for (int j = 0; j < M; ++j) F[j] = 0.0;
      break;
    case FlowFamily::PanYang:
    case FlowFamily::MaCheng:
    case FlowFamily::Dual:
    case FlowFamily::CustomInvK:
      for (int j = 0; j < M; ++j) F[j] = -syn.radius.values[j];
      break;
    case FlowFamily::GradIPD:
      for (int j = 0; j < M; ++j) F[j] = 2.0 * L / syn.radius.values[j];
      break;
    case FlowFamily::GradIPR:
      for (int j = 0; j < M; ++j) F[j] = (L / (kTwoPi * A)) / syn.radius.values[j];
      break;
    default:
      throw std::invalid_argument("andrews_form_dipd: family is not of the F(k) - lambda form");
  }
  (void)t;
  double i_kds = 0.0, i_Fds = 0.0, i_ds = 0.0, i_Fkds = 0.0;
  for (int j = 0; j < M; ++j) {
    const double rho = syn.radius.values[j];
    i_kds += 1.0;  // k rho = 1 pointwise
    i_Fds += F[j] * rho;
    i_ds += rho;
    i_Fkds += F[j];
  }
  const double w = kTwoPi / M;
  return 2.0 * ((i_kds * w) * (i_Fds * w) - (i_ds * w) * (i_Fkds * w));
}

// Duality of the k and 1/k speed normalizations: with q = 1/p,
//   (1/q) dL[ (q - 1/k) N_in ] = dA[ (k - p) N_in ].
// Returns the quadrature residual of that identity.
inline double dual_relation_residual(const FourierSupport& fs, double p, int grid = 0) {
  validate(fs);
  if (!(p > 0.0)) throw std::invalid_argument("dual_relation_residual: p must be positive");
  const double q = 1.0 / p;
  const int M = grid > 0 ? grid : dense_grid(fs.order());
  const auto syn = synthesize(fs, M);
  for (double r : syn.radius.values)
    if (!(r > 0.0))
      throw std::domain_error("dual_relation_residual: curve must be strictly convex");
  double dL_inv = 0.0, dA_k = 0.0;
  for (int j = 0; j < M; ++j) {
    const double rho = syn.radius.values[j];
    dL_inv -= (q - rho);                     // -int phi dtheta
    dA_k -= (1.0 / rho - p) * rho;           // -int phi rho dtheta
  }
  const double w = kTwoPi / M;
  dL_inv *= w;
  dA_k *= w;
  return (1.0 / q) * dL_inv - dA_k;
}

// ---------------------------------------------------------------------------
// Reparametrization equivalence of the gradient flows with their normalized
// counterparts: d/dtau X = c(t) [F(k) - lambda] N_in traces the same curves
// as d/dt with dt/dtau = c.

enum class ReparamPair {
  IpdGradVsGage,      // c = 2L
  IprGradVsJiangPan,  // c = L / (2 pi A)
};

struct ReparamReport {
  double max_coeff_discrepancy = 0.0;
  std::vector<double> checkpoint_tau;
  std::vector<double> checkpoint_t;  // physical times reached by the gradient flow
};

namespace detail {

// Adaptive RK4 driver used for the oracle-grade integrations; advances to
// exactly t_target.
template <class Rhs>
void integrate_to(const Rhs& rhs, double& t, std::vector<double>& y, double t_target,
                  double& h) {
  std::vector<double> fine, full, k1, k2, k3, k4, tmp, half;
  const double h_min = 1e-14 * std::max(1.0, std::abs(t_target));
  while (t < t_target - 1e-15 * std::max(1.0, std::abs(t_target))) {
    h = std::min(h, t_target - t);
    double err = std::numeric_limits<double>::infinity();
    bool rejected = false;
    try {
      err = doubled_step(rhs, t, y, h, fine, full, k1, k2, k3, k4, tmp, half);
    } catch (const StepRejected&) {
      rejected = true;
    }
    if (rejected || err > 1.0) {
      h *= 0.5;
      if (h < h_min) throw std::runtime_error("integrate_to: step size underflow");
      continue;
    }
    t += h;
    y = fine;
    if (err < 0.3) h *= 1.9;
  }
}

}  // namespace detail

inline ReparamReport reparam_equivalence(const FourierSupport& fs0, double tau_max,
                                         ReparamPair pair = ReparamPair::IpdGradVsGage,
                                         int checkpoints = 4) {
  validate(fs0);
  if (!(tau_max > 0.0)) throw std::invalid_argument("reparam_equivalence: tau_max must be > 0");
  if (checkpoints < 1) throw std::invalid_argument("reparam_equivalence: need >= 1 checkpoint");

  const FlowFamily fast = pair == ReparamPair::IpdGradVsGage ? FlowFamily::GradIPD
                                                             : FlowFamily::GradIPR;
  const FlowFamily base = pair == ReparamPair::IpdGradVsGage ? FlowFamily::Gage
                                                             : FlowFamily::JiangPan;
  const int order = fs0.order();
  const int M = step_grid(order);

  // augmented state [coeffs, t]: the gradient flow plus dt/dtau = c(state)
  detail::FlowRhs flow_rhs{FlowSpec{fast, -1.0, {}}, order, M, {}};
  auto aug_rhs = [&](double tau, const std::vector<double>& y, std::vector<double>& dy) {
    (void)tau;
    std::vector<double> coeffs(y.begin(), y.end() - 1);
    std::vector<double> dcoeffs;
    flow_rhs(0.0, coeffs, dcoeffs);
    const FourierSupport fs = detail::unpack(coeffs, order);
    const double c = pair == ReparamPair::IpdGradVsGage
                         ? 2.0 * length(fs)
                         : length(fs) / (kTwoPi * area(fs));
    dy = dcoeffs;
    dy.push_back(c);
  };

  ReparamReport report;
  std::vector<std::vector<double>> fast_states;
  {
    std::vector<double> y = detail::pack(fs0);
    y.push_back(0.0);
    double tau = 0.0, h = 1e-4;
    for (int i = 1; i <= checkpoints; ++i) {
      const double target = tau_max * i / checkpoints;
      detail::integrate_to(aug_rhs, tau, y, target, h);
      report.checkpoint_tau.push_back(target);
      report.checkpoint_t.push_back(y.back());
      fast_states.push_back({y.begin(), y.end() - 1});
    }
  }

  {
    detail::FlowRhs base_rhs{FlowSpec{base, -1.0, {}}, order, M, {}};
    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
      base_rhs(t, y, dy);
    };
    std::vector<double> y = detail::pack(fs0);
    double t = 0.0, h = 1e-4;
    for (int i = 0; i < checkpoints; ++i) {
      detail::integrate_to(rhs, t, y, report.checkpoint_t[i], h);
      for (std::size_t c = 0; c < y.size(); ++c)
        report.max_coeff_discrepancy =
            std::max(report.max_coeff_discrepancy, std::abs(y[c] - fast_states[i][c]));
    }
  }
  return report;
}

}  // namespace curveflow
