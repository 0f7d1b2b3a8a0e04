#pragma once

// Command-line front end.  run_cli takes the argument list in natural order
// (program name excluded) and returns the process exit code:
//   0  success
//   1  invalid input, unreadable or malformed files, numeric failure
//   2  a verify check failed, or a flow ended with convexity lost

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveflow/flows.hpp"
#include "curveflow/fourier_support.hpp"
#include "curveflow/inequalities.hpp"
#include "curveflow/io.hpp"
#include "curveflow/mixed_bodies.hpp"
#include "curveflow/random_convex.hpp"

namespace curveflow {

namespace detail {

inline FlowFamily family_from_name(const std::string& name) {
  if (name == "csf") return FlowFamily::CSF;
  if (name == "unit") return FlowFamily::UnitNormal;
  if (name == "gage") return FlowFamily::Gage;
  if (name == "jiangpan") return FlowFamily::JiangPan;
  if (name == "mazhu") return FlowFamily::MaZhu;
  if (name == "panyang") return FlowFamily::PanYang;
  if (name == "macheng") return FlowFamily::MaCheng;
  if (name == "dual") return FlowFamily::Dual;
  if (name == "gradipd") return FlowFamily::GradIPD;
  if (name == "gradipr") return FlowFamily::GradIPR;
  if (name == "s1") return FlowFamily::SupportAreaK;
  if (name == "s2") return FlowFamily::SupportLenK;
  if (name == "s3") return FlowFamily::SupportAreaInvK;
  if (name == "s4") return FlowFamily::SupportLenInvK;
  throw std::runtime_error("unknown flow family '" + name + "'");
}

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::TimeExhausted: return "time_exhausted";
    case Termination::ConvexityLost: return "convexity_lost";
    case Termination::NumericFailure: return "numeric_failure";
  }
  return "unknown";
}

// The inequality battery, in its fixed reporting order.
inline const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names = {
      "gage", "pan_yang", "refined", "isoperimetric", "entropy", "andrews", "poincare"};
  return names;
}

inline InequalityReport run_check(const std::string& name, const FourierSupport& fs,
                                  double tol) {
  if (name == "gage") return check_gage(fs, tol);
  if (name == "pan_yang") return check_pan_yang(fs, tol);
  if (name == "refined") return check_refined(fs, tol);
  if (name == "isoperimetric") return check_isoperimetric(fs, tol);
  if (name == "entropy") return check_entropy(fs, tol);
  if (name == "andrews") {
    // curvature against its reciprocal: L * int k dtheta >= (2 pi)^2
    const auto syn = synthesize(fs, dense_grid(fs.order()));
    return check_andrews(syn.radius, Monotone::Decreasing,
                         [](double z) { return 1.0 / z; }, tol);
  }
  if (name == "poincare") {
    const auto syn = synthesize(fs, std::max(256, dense_grid(fs.order())));
    return check_poincare(syn.u, tol);
  }
  throw std::runtime_error("unknown check '" + name + "'");
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"spectral laboratory for nonlocal flows of convex plane curves"};
  app.name("curveflow");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate random strictly convex curves");
  unsigned long long gen_seed = 0;
  int gen_order = 8, gen_count = 0;
  double gen_decay = 2.5, gen_margin = 0.2;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--order", gen_order, "highest harmonic")->default_val(8);
  gen->add_option("--decay", gen_decay, "coefficient decay exponent")->default_val(2.5);
  gen->add_option("--margin", gen_margin, "convexity margin floor")->default_val(0.2);
  gen->add_option("--count", gen_count, "write a corpus of this many curves")->default_val(0);
  gen->add_option("-o,--output", gen_out, "curve file, or directory with --count")->required();

  // summarize
  auto* summ = app.add_subcommand("summarize", "print the scalar summary of a curve");
  std::string summ_path;
  summ->add_option("curve", summ_path, "curve JSON file")->required();

  // flow
  auto* flow = app.add_subcommand("flow", "evolve a curve and record a trace");
  std::string flow_family, flow_curve, flow_trace, flow_snapdir;
  double flow_tmax = 0.0, flow_iprtol = -1.0, flow_dtinit = -1.0;
  flow->add_option("--family", flow_family,
                   "csf|unit|gage|jiangpan|mazhu|panyang|macheng|dual|gradipd|gradipr|s1|s2|s3|s4")
      ->required();
  flow->add_option("--curve", flow_curve, "initial curve JSON file")->required();
  flow->add_option("--t-max", flow_tmax, "time horizon")->required();
  flow->add_option("--ipr-tol", flow_iprtol, "stop when ipr - 1 falls below this");
  flow->add_option("--dt-init", flow_dtinit, "initial step size");
  flow->add_option("--snapshots", flow_snapdir, "directory for state snapshots");
  flow->add_option("--trace", flow_trace, "output CSV path")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run the inequality battery on curves");
  std::vector<std::string> verify_paths, verify_only;
  double verify_tol = kInequalityTol;
  verify->add_option("paths", verify_paths, "curve JSON files")->required()->expected(-1);
  verify->add_option("--only", verify_only, "subset of checks, comma separated")
      ->delimiter(',');
  verify->add_option("--tol", verify_tol, "slack tolerance")->default_val(kInequalityTol);

  // relate
  auto* relate = app.add_subcommand("relate", "classify the relation between two curves");
  std::string relate_a, relate_b;
  double relate_tol = 1e-9;
  relate->add_option("a", relate_a, "first curve JSON file")->required();
  relate->add_option("b", relate_b, "second curve JSON file")->required();
  relate->add_option("--tol", relate_tol, "relative matching tolerance")->default_val(1e-9);

  // parallel-sweep
  auto* sweep = app.add_subcommand("parallel-sweep", "scalars along outward parallel bodies");
  std::string sweep_curve, sweep_out;
  double sweep_rmax = 0.0;
  int sweep_steps = 0;
  sweep->add_option("--curve", sweep_curve, "curve JSON file")->required();
  sweep->add_option("--r-max", sweep_rmax, "largest offset")->required();
  sweep->add_option("--steps", sweep_steps, "number of increments")->required();
  sweep->add_option("-o,--output", sweep_out, "output CSV path")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      if (gen_count < 0) throw std::runtime_error("--count must be >= 0");
      if (gen_count == 0) {
        write_curve(gen_out, random_convex(gen_seed, gen_order, gen_decay, gen_margin));
      } else {
        std::filesystem::create_directories(gen_out);
        for (int i = 0; i < gen_count; ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "curve_%04d.json", i);
          write_curve((std::filesystem::path(gen_out) / name).string(),
                      random_convex(gen_seed + i, gen_order, gen_decay, gen_margin));
        }
      }
      return 0;
    }

    if (summ->parsed()) {
      const auto fs = read_curve(summ_path);
      std::cout << summary_to_json(summarize(fs)).dump(2) << "\n";
      return 0;
    }

    if (flow->parsed()) {
      const auto fs = read_curve(flow_curve);
      FlowSpec spec{detail::family_from_name(flow_family), -1.0, {}};
      StepControl ctl;
      ctl.t_max = flow_tmax;
      if (flow_iprtol > 0.0) ctl.ipr_tol = flow_iprtol;
      if (flow_dtinit > 0.0) ctl.dt_init = flow_dtinit;
      const auto trace = run(spec, fs, ctl);
      write_text_file(flow_trace, trace_to_csv(trace));
      if (!flow_snapdir.empty()) {
        std::filesystem::create_directories(flow_snapdir);
        for (const auto& snap : trace.snapshots)
          write_curve((std::filesystem::path(flow_snapdir) / snapshot_filename(snap)).string(),
                      snap.state);
      }
      nlohmann::ordered_json j;
      j["termination"] = detail::termination_name(trace.termination);
      j["final_t"] = trace.final_t;
      j["records"] = trace.records.size();
      if (!trace.note.empty()) j["note"] = trace.note;
      j["final"] = summary_to_json(summarize(trace.final_state));
      std::cout << j.dump(2) << "\n";
      if (trace.termination == Termination::ConvexityLost) return 2;
      if (trace.termination == Termination::NumericFailure) return 1;
      return 0;
    }

    if (verify->parsed()) {
      std::vector<std::string> names =
          verify_only.empty() ? detail::battery_names() : verify_only;
      for (const auto& n : names)
        if (std::find(detail::battery_names().begin(), detail::battery_names().end(), n) ==
            detail::battery_names().end())
          throw std::runtime_error("unknown check '" + n + "'");
      bool all_hold = true;
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const auto& path : verify_paths) {
        const auto fs = read_curve(path);
        nlohmann::ordered_json entry;
        entry["path"] = path;
        entry["checks"] = nlohmann::ordered_json::array();
        for (const auto& n : names) {
          const auto rep = detail::run_check(n, fs, verify_tol);
          all_hold = all_hold && rep.holds;
          entry["checks"].push_back(report_to_json(rep));
        }
        out.push_back(std::move(entry));
      }
      std::cout << out.dump(2) << "\n";
      return all_hold ? 0 : 2;
    }

    if (relate->parsed()) {
      const auto fa = read_curve(relate_a);
      const auto fb = read_curve(relate_b);
      std::cout << mixed_report_to_json(mixed_report(fa, fb, relate_tol)).dump(2) << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      if (sweep_steps < 1) throw std::runtime_error("--steps must be >= 1");
      if (!(sweep_rmax > 0.0)) throw std::runtime_error("--r-max must be positive");
      const auto fs = read_curve(sweep_curve);
      std::vector<SweepRow> rows;
      rows.reserve(sweep_steps + 1);
      for (int i = 0; i <= sweep_steps; ++i) {
        const double r = sweep_rmax * i / sweep_steps;
        const auto off = parallel_offset(fs, r);
        const auto s = summarize(off);
        rows.push_back({r, s.entropy, s.ipd, s.ipr});
      }
      write_text_file(sweep_out, sweep_to_csv(rows));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace curveflow
