#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/cli.hpp"
#include "curveflow/io.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

// run_cli writes data to stdout; swap the buffer to grab it
struct CoutCapture {
  std::streambuf* old;
  std::ostringstream ss;
  CoutCapture() : old(std::cout.rdbuf(ss.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(old); }
  std::string text() const { return ss.str(); }
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("curveflow_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args) { return run_cli(std::move(args)); }

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("gen then summarize round-trips a valid curve") {
  const auto dir = fresh_dir("gen");
  const auto curve = (dir / "c.json").string();
  REQUIRE(cli({"gen", "--seed", "7", "--order", "16", "--decay", "3", "--margin", "0.1",
               "-o", curve}) == 0);

  const auto fs0 = read_curve(curve);
  REQUIRE(fs0.order() == 16);
  REQUIRE(convexity_margin(fs0) >= 0.1);

  CoutCapture cap;
  REQUIRE(cli({"summarize", curve}) == 0);
  const auto j = nlohmann::json::parse(cap.text());
  REQUIRE(j["ipr"].get<double>() >= 1.0);
  REQUIRE(j["margin"].get<double>() >= 0.1);
  REQUIRE(j["length"].get<double>() == Catch::Approx(length(fs0)).margin(1e-12));
}

TEST_CASE("gen is deterministic and corpora are indexed") {
  const auto dir = fresh_dir("corpus");
  const auto one = (dir / "one.json").string();
  const auto two = (dir / "two.json").string();
  REQUIRE(cli({"gen", "--seed", "11", "--order", "6", "-o", one}) == 0);
  REQUIRE(cli({"gen", "--seed", "11", "--order", "6", "-o", two}) == 0);
  REQUIRE(read_text_file(one) == read_text_file(two));

  const auto corpus = (dir / "many").string();
  REQUIRE(cli({"gen", "--seed", "11", "--order", "6", "--count", "3", "-o", corpus}) == 0);
  REQUIRE(fs::exists(fs::path(corpus) / "curve_0000.json"));
  REQUIRE(fs::exists(fs::path(corpus) / "curve_0002.json"));
  // first corpus entry uses the base seed
  REQUIRE(read_text_file((fs::path(corpus) / "curve_0000.json").string()) ==
          read_text_file(one));
  const auto c1 = read_curve((fs::path(corpus) / "curve_0001.json").string());
  const auto c0 = read_curve((fs::path(corpus) / "curve_0000.json").string());
  REQUIRE(c0.a[2] != c1.a[2]);
}

TEST_CASE("flow writes a well-formed trace with non-increasing deficit") {
  const auto dir = fresh_dir("flow");
  const auto curve = (dir / "c.json").string();
  REQUIRE(cli({"gen", "--seed", "5", "--order", "8", "--margin", "0.2", "-o", curve}) == 0);

  const auto trace_path = (dir / "t.csv").string();
  const auto snapdir = (dir / "snaps").string();
  CoutCapture cap;
  REQUIRE(cli({"flow", "--family", "dual", "--curve", curve, "--t-max", "10", "--trace",
               trace_path, "--snapshots", snapdir}) == 0);
  const auto final_json = nlohmann::json::parse(cap.text());
  REQUIRE(final_json["termination"].get<std::string>() == "converged");

  const auto lines = split_lines(read_text_file(trace_path));
  REQUIRE(lines.size() >= 3);
  REQUIRE(lines[0] == "t,L,A,ipd,ipr,entropy,int_inv_k,center_x,center_y,margin");
  double prev_ipd = std::numeric_limits<double>::infinity();
  double prev_t = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 10);
    REQUIRE(vals[0] > prev_t);
    prev_t = vals[0];
    REQUIRE(vals[3] <= prev_ipd + 1e-12);
    prev_ipd = vals[3];
  }

  // snapshots parse as curve files and start at the initial state
  bool saw_initial = false;
  for (const auto& entry : fs::directory_iterator(snapdir)) {
    const auto snap = read_curve(entry.path().string());
    REQUIRE(snap.order() >= 8);
    if (entry.path().filename().string().rfind("snap_0_", 0) == 0) saw_initial = true;
  }
  REQUIRE(saw_initial);
}

TEST_CASE("flow is byte-deterministic") {
  const auto dir = fresh_dir("det");
  const auto curve = (dir / "c.json").string();
  REQUIRE(cli({"gen", "--seed", "9", "--order", "6", "-o", curve}) == 0);
  const auto t1 = (dir / "t1.csv").string();
  const auto t2 = (dir / "t2.csv").string();
  {
    CoutCapture cap;
    REQUIRE(cli({"flow", "--family", "gage", "--curve", curve, "--t-max", "1", "--trace",
                 t1}) == 0);
  }
  {
    CoutCapture cap;
    REQUIRE(cli({"flow", "--family", "gage", "--curve", curve, "--t-max", "1", "--trace",
                 t2}) == 0);
  }
  REQUIRE(read_text_file(t1) == read_text_file(t2));
}

TEST_CASE("flow reports convexity loss through the exit code") {
  const auto dir = fresh_dir("lost");
  const auto curve = (dir / "c.json").string();
  write_curve(curve, [] {
    auto fs = make_circle(1.0, 2);
    fs.a[2] = 0.1;
    return fs;
  }());
  CoutCapture cap;
  REQUIRE(cli({"flow", "--family", "unit", "--curve", curve, "--t-max", "5", "--trace",
               (dir / "t.csv").string()}) == 2);
  const auto j = nlohmann::json::parse(cap.text());
  REQUIRE(j["termination"].get<std::string>() == "convexity_lost");
}

TEST_CASE("verify runs the battery and encodes failure in the exit code") {
  const auto dir = fresh_dir("verify");
  const auto good = (dir / "good.json").string();
  REQUIRE(cli({"gen", "--seed", "3", "--order", "5", "-o", good}) == 0);

  SECTION("full battery on a valid curve") {
    CoutCapture cap;
    REQUIRE(cli({"verify", good}) == 0);
    const auto j = nlohmann::json::parse(cap.text());
    REQUIRE(j.size() == 1);
    REQUIRE(j[0]["checks"].size() == 7);
    std::vector<std::string> names;
    for (const auto& c : j[0]["checks"]) {
      REQUIRE(c["holds"].get<bool>());
      names.push_back(c["name"].get<std::string>());
    }
    const std::vector<std::string> expected = {
        "gage", "pan_yang", "refined", "isoperimetric", "entropy", "andrews", "poincare"};
    REQUIRE(names == expected);
  }
  SECTION("--only restricts and orders the checks") {
    CoutCapture cap;
    REQUIRE(cli({"verify", good, "--only", "entropy,gage"}) == 0);
    const auto j = nlohmann::json::parse(cap.text());
    REQUIRE(j[0]["checks"].size() == 2);
    REQUIRE(j[0]["checks"][0]["name"].get<std::string>() == "entropy");
  }
  SECTION("unknown check name is a usage error") {
    CoutCapture cap;
    REQUIRE(cli({"verify", good, "--only", "bogus"}) == 1);
  }
  SECTION("a failing check exits 2") {
    const auto bad = (dir / "bad.json").string();
    write_text_file(bad, "{\"order\": 3, \"a\": [2, 0, 0, 0.15], \"b\": [0, 0, 0, 0]}\n");
    CoutCapture cap;
    REQUIRE(cli({"verify", bad, "--only", "andrews"}) == 2);
    const auto j = nlohmann::json::parse(cap.text());
    REQUIRE_FALSE(j[0]["checks"][0]["holds"].get<bool>());
  }
}

TEST_CASE("relate classifies constructed pairs from files") {
  const auto dir = fresh_dir("relate");
  const auto a = (dir / "a.json").string();
  const auto b = (dir / "b.json").string();
  REQUIRE(cli({"gen", "--seed", "21", "--order", "4", "--margin", "0.3", "-o", a}) == 0);
  const auto base = read_curve(a);
  write_curve(b, parallel_offset(base, 0.3));

  CoutCapture cap;
  REQUIRE(cli({"relate", a, b}) == 0);
  const auto j = nlohmann::json::parse(cap.text());
  REQUIRE(j["relation"]["kind"].get<std::string>() == "parallel");
  REQUIRE(j["relation"]["r"].get<double>() == Catch::Approx(0.3).margin(1e-10));
  REQUIRE(j["relation"]["lambda"].is_null());
  REQUIRE(j["favard_hi_equal"].get<bool>());
}

TEST_CASE("parallel-sweep emits the full offset table") {
  const auto dir = fresh_dir("sweep");
  const auto curve = (dir / "c.json").string();
  REQUIRE(cli({"gen", "--seed", "2", "--order", "6", "-o", curve}) == 0);
  const auto out = (dir / "s.csv").string();
  REQUIRE(cli({"parallel-sweep", "--curve", curve, "--r-max", "2", "--steps", "8", "-o",
               out}) == 0);
  const auto lines = split_lines(read_text_file(out));
  REQUIRE(lines.size() == 10);
  REQUIRE(lines[0] == "r,entropy,ipd,ipr");
  double prev_entropy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 4);
    REQUIRE(vals[1] <= prev_entropy + 1e-12);
    prev_entropy = vals[1];
  }
  SECTION("bad parameters are usage errors") {
    REQUIRE(cli({"parallel-sweep", "--curve", curve, "--r-max", "2", "--steps", "0", "-o",
                 out}) == 1);
    REQUIRE(cli({"parallel-sweep", "--curve", curve, "--r-max", "-1", "--steps", "4", "-o",
                 out}) == 1);
  }
}

TEST_CASE("malformed input never escapes as an exception") {
  const auto dir = fresh_dir("badinput");
  SECTION("missing file") { REQUIRE(cli({"summarize", (dir / "nope.json").string()}) == 1); }
  SECTION("syntax error") {
    const auto p = (dir / "junk.json").string();
    write_text_file(p, "not json {{{");
    REQUIRE(cli({"summarize", p}) == 1);
  }
  SECTION("structural violations") {
    const auto p = (dir / "bad.json").string();
    write_text_file(p, "{\"order\": 1, \"a\": [2, 0], \"b\": [0.5, 0]}");
    REQUIRE(cli({"summarize", p}) == 1);
    write_text_file(p, "{\"order\": 2, \"a\": [2, 0], \"b\": [0, 0]}");
    REQUIRE(cli({"summarize", p}) == 1);
    write_text_file(p, "{\"order\": 1, \"a\": [2, 0]}");
    REQUIRE(cli({"summarize", p}) == 1);
  }
  SECTION("unknown verb and missing required flags") {
    REQUIRE(cli({"frobnicate"}) == 1);
    REQUIRE(cli({"flow", "--family", "dual"}) == 1);
    REQUIRE(cli({"flow", "--family", "nosuch", "--curve", "x", "--t-max", "1", "--trace",
                 "y"}) == 1);
  }
}
