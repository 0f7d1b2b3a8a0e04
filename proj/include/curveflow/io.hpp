#pragma once

// Serialization for curves, summaries, reports, and traces.  Curve files and
// CSV cells are written at 17 significant digits so a read-back reproduces the
// doubles exactly; JSON reports go through nlohmann with ordered keys so the
// byte stream is deterministic.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/flows.hpp"
#include "curveflow/fourier_support.hpp"
#include "curveflow/inequalities.hpp"
#include "curveflow/mixed_bodies.hpp"

namespace curveflow {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- curve files -----------------------------------------------------------

inline std::string curve_to_json(const FourierSupport& fs) {
  validate(fs);
  std::string out = "{\"order\": " + std::to_string(fs.order()) + ",\n \"a\": [";
  for (int n = 0; n <= fs.order(); ++n) {
    if (n) out += ", ";
    out += fmt17(fs.a[n]);
  }
  out += "],\n \"b\": [";
  for (int n = 0; n <= fs.order(); ++n) {
    if (n) out += ", ";
    out += fmt17(fs.b[n]);
  }
  out += "]}\n";
  return out;
}

inline FourierSupport curve_from_json(const std::string& text, const std::string& where) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(where + ": top level must be an object");
  for (const char* key : {"order", "a", "b"})
    if (!j.contains(key)) throw std::runtime_error(where + ": missing field '" + key + "'");
  if (!j["order"].is_number_integer())
    throw std::runtime_error(where + ": field 'order' must be an integer");
  const long long order = j["order"].get<long long>();
  if (order < 0 || order > 100000)
    throw std::runtime_error(where + ": field 'order' out of range");
  FourierSupport fs;
  for (const char* key : {"a", "b"}) {
    const auto& arr = j[key];
    if (!arr.is_array())
      throw std::runtime_error(where + ": field '" + std::string(key) + "' must be an array");
    if (static_cast<long long>(arr.size()) != order + 1)
      throw std::runtime_error(where + ": field '" + std::string(key) + "' must have order+1 = " +
                               std::to_string(order + 1) + " entries, got " +
                               std::to_string(arr.size()));
    auto& dst = key[0] == 'a' ? fs.a : fs.b;
    dst.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number())
        throw std::runtime_error(where + ": field '" + std::string(key) + "' entry " +
                                 std::to_string(i) + " is not a number");
      dst.push_back(arr[i].get<double>());
    }
  }
  if (fs.b[0] != 0.0) throw std::runtime_error(where + ": field 'b' must start with 0");
  try {
    validate(fs);
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
  return fs;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline FourierSupport read_curve(const std::string& path) {
  return curve_from_json(read_text_file(path), path);
}

inline void write_curve(const std::string& path, const FourierSupport& fs) {
  write_text_file(path, curve_to_json(fs));
}

// ---- JSON reports ----------------------------------------------------------

inline nlohmann::ordered_json summary_to_json(const CurveSummary& s) {
  nlohmann::ordered_json j;
  j["length"] = s.length;
  j["area"] = s.area;
  j["ipd"] = s.ipd;
  j["ipr"] = s.ipr;
  if (s.entropy_valid)
    j["entropy"] = s.entropy;
  else
    j["entropy"] = nullptr;
  j["int_inv_k"] = s.int_inv_k;
  j["center_x"] = s.center_x;
  j["center_y"] = s.center_y;
  j["margin"] = s.margin;
  return j;
}

inline nlohmann::ordered_json report_to_json(const InequalityReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["holds"] = r.holds;
  j["equality"] = r.equality;
  if (r.classifier)
    j["classifier"] = *r.classifier;
  else
    j["classifier"] = nullptr;
  return j;
}

inline nlohmann::ordered_json relation_to_json(const RelationClass& rc) {
  nlohmann::ordered_json j;
  switch (rc.kind) {
    case RelationClass::Kind::Homothetic: j["kind"] = "homothetic"; break;
    case RelationClass::Kind::Parallel: j["kind"] = "parallel"; break;
    case RelationClass::Kind::Neither: j["kind"] = "neither"; break;
  }
  if (rc.kind == RelationClass::Kind::Homothetic)
    j["lambda"] = rc.lambda;
  else
    j["lambda"] = nullptr;
  if (rc.kind == RelationClass::Kind::Parallel)
    j["r"] = rc.r;
  else
    j["r"] = nullptr;
  if (rc.kind == RelationClass::Kind::Neither)
    j["shift"] = nullptr;
  else
    j["shift"] = nlohmann::ordered_json::array({rc.shift_x, rc.shift_y});
  return j;
}

inline nlohmann::ordered_json mixed_report_to_json(const MixedReport& r) {
  nlohmann::ordered_json j;
  j["a12"] = r.a12;
  j["mixed_ipd"] = r.mixed_ipd;
  j["mixed_ipr"] = r.mixed_ipr;
  j["favard_lo"] = r.favard_lo;
  j["favard_hi"] = r.favard_hi;
  j["minkowski_slack"] = r.minkowski_slack;
  j["sum_identity_residual"] = r.sum_identity_residual;
  j["favard_lo_equal"] = r.favard_lo_equal;
  j["favard_hi_equal"] = r.favard_hi_equal;
  j["favard_degenerate"] = r.favard_degenerate;
  j["relation"] = relation_to_json(r.relation);
  if (r.classifier)
    j["classifier"] = *r.classifier;
  else
    j["classifier"] = nullptr;
  return j;
}

// ---- CSV -------------------------------------------------------------------

inline const char* kTraceHeader = "t,L,A,ipd,ipr,entropy,int_inv_k,center_x,center_y,margin";

inline std::string trace_to_csv(const FlowTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& rec : trace.records) {
    const auto& s = rec.summary;
    out += fmt17(rec.t);
    for (double v : {s.length, s.area, s.ipd, s.ipr, s.entropy, s.int_inv_k, s.center_x,
                     s.center_y, s.margin}) {
      out += ',';
      out += fmt17(v);
    }
    out += '\n';
  }
  return out;
}

inline std::string snapshot_filename(const FlowSnapshot& snap) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%zu_%.6f.json", static_cast<std::size_t>(snap.index),
                snap.t);
  return buf;
}

struct SweepRow {
  double r = 0.0;
  double entropy = 0.0;
  double ipd = 0.0;
  double ipr = 0.0;
};

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "r,entropy,ipd,ipr\n";
  for (const auto& row : rows) {
    out += fmt17(row.r);
    out += ',';
    out += fmt17(row.entropy);
    out += ',';
    out += fmt17(row.ipd);
    out += ',';
    out += fmt17(row.ipr);
    out += '\n';
  }
  return out;
}

}  // namespace curveflow
