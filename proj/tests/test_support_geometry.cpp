#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "curveflow/fourier_support.hpp"
#include "curveflow/random_convex.hpp"
#include "test_util.hpp"

using namespace curveflow;
using testutil::eval_radius;
using testutil::eval_u;
using testutil::fd_radius;
using testutil::trapz;

namespace {

FourierSupport two_lobe() {
  // u = 1 + 0.1 cos(2 theta); radius = 1 - 0.3 cos(2 theta)
  FourierSupport fs = make_circle(1.0, 2);
  fs.a[2] = 0.1;
  return fs;
}

}  // namespace

TEST_CASE("synthesize reproduces direct evaluation") {
  const auto fs = random_convex(7, 6, 2.0, 0.2);
  const int M = 64;
  const auto syn = synthesize(fs, M);
  for (int j = 0; j < M; ++j) {
    const double theta = syn.u.theta(j);
    REQUIRE(syn.u.values[j] == Catch::Approx(eval_u(fs, theta)).margin(1e-13));
    REQUIRE(syn.radius.values[j] == Catch::Approx(eval_radius(fs, theta)).margin(1e-13));
  }
}

TEST_CASE("radius field agrees with finite-difference u'' + u") {
  const auto fs = random_convex(19, 8, 2.5, 0.15);
  const auto syn = synthesize(fs, 32);
  for (int j = 0; j < 32; ++j) {
    const double theta = syn.u.theta(j);
    // h = 1e-4 gives O(h^2) ~ 1e-8 truncation on these amplitudes
    REQUIRE(syn.radius.values[j] == Catch::Approx(fd_radius(fs, theta, 1e-4)).margin(1e-5));
  }
}

TEST_CASE("synthesize frozen values") {
  SECTION("unit circle") {
    const auto syn = synthesize(make_circle(1.0), 8);
    for (double v : syn.u.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-15));
    for (double v : syn.radius.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-15));
  }
  SECTION("two-lobe curve") {
    const auto syn = synthesize(two_lobe(), 8);
    REQUIRE(syn.radius.values[0] == Catch::Approx(0.7).margin(1e-15));  // theta = 0
    REQUIRE(syn.radius.values[1] == Catch::Approx(1.0).margin(1e-15));  // theta = pi/4
    REQUIRE(syn.u.values[0] == Catch::Approx(1.1).margin(1e-15));
  }
}

TEST_CASE("synthesize rejects grids that cannot hold every mode") {
  REQUIRE_THROWS_AS(synthesize(two_lobe(), 5), std::invalid_argument);
  REQUIRE_NOTHROW(synthesize(two_lobe(), 6));
}

TEST_CASE("analyze inverts synthesize at the minimal grid") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto fs = random_convex(seed, 9, 2.0, 0.1);
    const int M = 2 * fs.order() + 2;
    const auto back = analyze(synthesize(fs, M).u);
    REQUIRE(back.order() == M / 2 - 1);
    for (int n = 0; n <= fs.order(); ++n) {
      REQUIRE(back.a[n] == Catch::Approx(fs.a[n]).margin(1e-12));
      REQUIRE(back.b[n] == Catch::Approx(fs.b[n]).margin(1e-12));
    }
  }
}

TEST_CASE("analyze frozen values") {
  SECTION("constant field") {
    SampledField f;
    f.values.assign(16, 3.5);
    const auto fs = analyze(f);
    REQUIRE(fs.a[0] == Catch::Approx(7.0).margin(1e-14));
    for (int n = 1; n <= fs.order(); ++n) {
      REQUIRE(fs.a[n] == Catch::Approx(0.0).margin(1e-14));
      REQUIRE(fs.b[n] == Catch::Approx(0.0).margin(1e-14));
    }
  }
  SECTION("1 + 0.3 sin(2 theta) on 64 samples") {
    SampledField f;
    f.values.resize(64);
    for (int j = 0; j < 64; ++j) f.values[j] = 1.0 + 0.3 * std::sin(2.0 * f.theta(j));
    const auto fs = analyze(f);
    REQUIRE(fs.order() == 31);
    REQUIRE(fs.a[0] == Catch::Approx(2.0).margin(1e-13));
    REQUIRE(fs.b[2] == Catch::Approx(0.3).margin(1e-13));
    REQUIRE(fs.a[2] == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(fs.b[5] == Catch::Approx(0.0).margin(1e-13));
  }
}

TEST_CASE("length and area closed forms match quadrature") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const auto fs = random_convex(seed, 10, 2.2, 0.1);
    const double L_quad = trapz([&](double t) { return eval_u(fs, t); });
    const double A_quad =
        trapz([&](double t) { return 0.5 * eval_u(fs, t) * eval_radius(fs, t); });
    REQUIRE(length(fs) == Catch::Approx(L_quad).margin(1e-10));
    REQUIRE(area(fs) == Catch::Approx(A_quad).margin(1e-10));
  }
}

TEST_CASE("length and area frozen values") {
  SECTION("circle of radius 2") {
    const auto fs = make_circle(2.0);
    REQUIRE(length(fs) == Catch::Approx(4.0 * kPi).margin(1e-14));
    REQUIRE(area(fs) == Catch::Approx(4.0 * kPi).margin(1e-14));
  }
  SECTION("two-lobe curve") {
    REQUIRE(length(two_lobe()) == Catch::Approx(kTwoPi).margin(1e-14));
    REQUIRE(area(two_lobe()) == Catch::Approx(0.985 * kPi).margin(1e-14));
  }
  SECTION("translation leaves both unchanged") {
    const auto fs = translate_dilate(two_lobe(), 1.0, 0.4, -0.2);
    REQUIRE(length(fs) == Catch::Approx(kTwoPi).margin(1e-14));
    REQUIRE(area(fs) == Catch::Approx(0.985 * kPi).margin(1e-14));
  }
}

TEST_CASE("curvature integral closed form matches quadrature") {
  for (std::uint64_t seed : {21u, 22u}) {
    const auto fs = random_convex(seed, 8, 2.0, 0.1);
    const double quad = trapz([&](double t) {
      const double r = eval_radius(fs, t);
      return r * r;
    });
    REQUIRE(int_inv_k(fs) == Catch::Approx(quad).margin(1e-10));
  }
  // circle: integral of r^2 dtheta = 2 pi r^2
  REQUIRE(int_inv_k(make_circle(3.0)) == Catch::Approx(18.0 * kPi).margin(1e-12));
  // two-lobe: pi*4*3*0.01 + 2*0.985 pi = 2.09 pi
  REQUIRE(int_inv_k(two_lobe()) == Catch::Approx(2.09 * kPi).margin(1e-13));
}

TEST_CASE("entropy behaves like a roundness defect") {
  SECTION("vanishes on circles") {
    for (double r : {0.5, 1.0, 7.0}) {
      const auto hi = higher_integrals(make_circle(r));
      REQUIRE(hi.entropy == Catch::Approx(0.0).margin(1e-12));
      REQUIRE_FALSE(hi.entropy_degenerate);
    }
  }
  SECTION("positive off the circle and matches quadrature") {
    const auto fs = two_lobe();
    const auto hi = higher_integrals(fs);
    const double A = area(fs);
    const double oracle = trapz([&](double t) {
      return std::log(std::sqrt(A / kPi) / eval_radius(fs, t));
    });
    REQUIRE(hi.entropy == Catch::Approx(oracle).margin(1e-10));
    REQUIRE(hi.entropy > 0.0);
  }
  SECTION("rejected when convexity fails") {
    FourierSupport bad = make_circle(1.0);
    bad.a[2] = 0.4;  // radius dips to -0.2
    REQUIRE_THROWS_AS(higher_integrals(bad), std::domain_error);
  }
}

TEST_CASE("convexity margin") {
  REQUIRE(convexity_margin(make_circle(1.0)) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(convexity_margin(two_lobe()) == Catch::Approx(0.7).margin(1e-14));
  FourierSupport bad = make_circle(1.0);
  bad.a[2] = 0.4;
  REQUIRE(convexity_margin(bad) == Catch::Approx(-0.2).margin(1e-14));
}

TEST_CASE("summarize frozen values") {
  SECTION("unit circle") {
    const auto s = summarize(make_circle(1.0));
    REQUIRE(s.length == Catch::Approx(kTwoPi).margin(1e-14));
    REQUIRE(s.area == Catch::Approx(kPi).margin(1e-14));
    REQUIRE(s.ipd == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.ipr == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(s.entropy == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.int_inv_k == Catch::Approx(kTwoPi).margin(1e-13));
    REQUIRE(s.center_x == 0.0);
    REQUIRE(s.center_y == 0.0);
    REQUIRE(s.margin == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(s.entropy_valid);
  }
  SECTION("two-lobe deficit") {
    const auto s = summarize(two_lobe());
    REQUIRE(s.ipd == Catch::Approx(0.06 * kPi * kPi).margin(1e-12));
    REQUIRE(s.ipr == Catch::Approx(1.0 / 0.985).margin(1e-13));
  }
  SECTION("center is the first harmonic") {
    const auto fs = translate_dilate(make_circle(1.0), 1.0, 0.3, 0.4);
    const auto s = summarize(fs);
    REQUIRE(s.center_x == Catch::Approx(0.3).margin(1e-14));
    REQUIRE(s.center_y == Catch::Approx(0.4).margin(1e-14));
    // oracle: (1/pi) integral of u cos / u sin
    const double cx = trapz([&](double t) { return eval_u(fs, t) * std::cos(t); }) / kPi;
    const double cy = trapz([&](double t) { return eval_u(fs, t) * std::sin(t); }) / kPi;
    REQUIRE(s.center_x == Catch::Approx(cx).margin(1e-12));
    REQUIRE(s.center_y == Catch::Approx(cy).margin(1e-12));
  }
}

TEST_CASE("embed frozen values") {
  SECTION("circle") {
    const auto p = embed(make_circle(2.0), 1.1);
    REQUIRE(p.x == Catch::Approx(2.0 * std::cos(1.1)).margin(1e-14));
    REQUIRE(p.y == Catch::Approx(2.0 * std::sin(1.1)).margin(1e-14));
  }
  SECTION("translated circle") {
    const auto fs = translate_dilate(make_circle(1.0), 1.0, 0.3, 0.0);
    const auto p = embed(fs, kPi / 2.0);
    REQUIRE(p.x == Catch::Approx(0.3).margin(1e-14));
    REQUIRE(p.y == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("two-lobe at theta = 0") {
    const auto p = embed(two_lobe(), 0.0);
    REQUIRE(p.x == Catch::Approx(1.1).margin(1e-14));
    REQUIRE(p.y == Catch::Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("embed traces a closed curve with tangent along the rotated normal") {
  const auto fs = random_convex(31, 6, 2.0, 0.2);
  // dX/dtheta should equal radius * (-sin, cos); check via finite differences
  const double h = 1e-6;
  for (double theta : {0.3, 1.7, 4.0}) {
    const auto pp = embed(fs, theta + h);
    const auto pm = embed(fs, theta - h);
    const double r = eval_radius(fs, theta);
    REQUIRE((pp.x - pm.x) / (2 * h) == Catch::Approx(-r * std::sin(theta)).margin(1e-6));
    REQUIRE((pp.y - pm.y) / (2 * h) == Catch::Approx(r * std::cos(theta)).margin(1e-6));
  }
}

TEST_CASE("parallel offset") {
  SECTION("frozen length and area at r = 0.5") {
    const auto fs = parallel_offset(two_lobe(), 0.5);
    REQUIRE(length(fs) == Catch::Approx(3.0 * kPi).margin(1e-14));
    REQUIRE(area(fs) == Catch::Approx(0.985 * kPi + kPi + 0.25 * kPi).margin(1e-13));
  }
  SECTION("isoperimetric deficit is offset-invariant") {
    const auto fs = random_convex(41, 7, 2.0, 0.2);
    const double ipd0 = summarize(fs).ipd;
    for (double r : {0.1, 1.0, 10.0}) {
      const auto off = parallel_offset(fs, r);
      REQUIRE(summarize(off).ipd == Catch::Approx(ipd0).margin(1e-9));
    }
  }
  SECTION("curvature integral minus twice the area is offset-invariant") {
    const auto fs = random_convex(43, 7, 2.0, 0.2);
    const double inv0 = int_inv_k(fs) - 2.0 * area(fs);
    const auto off = parallel_offset(fs, 2.5);
    REQUIRE(int_inv_k(off) - 2.0 * area(off) == Catch::Approx(inv0).margin(1e-10));
  }
  SECTION("inner offsets are capped by the margin") {
    const auto fs = two_lobe();  // margin 0.7
    REQUIRE_NOTHROW(parallel_offset(fs, -0.69));
    REQUIRE_THROWS_AS(parallel_offset(fs, -0.7), std::domain_error);
    REQUIRE_THROWS_AS(parallel_offset(fs, -2.0), std::domain_error);
  }
}

TEST_CASE("translate and dilate") {
  SECTION("pure dilation scales L, A, margin") {
    const auto fs = two_lobe();
    const auto big = translate_dilate(fs, 3.0, 0.0, 0.0);
    REQUIRE(length(big) == Catch::Approx(3.0 * length(fs)).margin(1e-12));
    REQUIRE(area(big) == Catch::Approx(9.0 * area(fs)).margin(1e-12));
    REQUIRE(convexity_margin(big) == Catch::Approx(3.0 * 0.7).margin(1e-13));
  }
  SECTION("isoperimetric ratio is similarity-invariant") {
    const auto fs = random_convex(53, 8, 2.5, 0.15);
    const double ipr0 = summarize(fs).ipr;
    const auto moved = translate_dilate(fs, 2.7, -1.0, 4.0);
    REQUIRE(summarize(moved).ipr == Catch::Approx(ipr0).margin(1e-12));
  }
  SECTION("rejects non-positive scale") {
    REQUIRE_THROWS_AS(translate_dilate(two_lobe(), 0.0, 0.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(translate_dilate(two_lobe(), -1.0, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("random_convex generator") {
  SECTION("deterministic in the seed") {
    const auto f1 = random_convex(99, 8, 2.0, 0.1);
    const auto f2 = random_convex(99, 8, 2.0, 0.1);
    REQUIRE(f1.a == f2.a);
    REQUIRE(f1.b == f2.b);
    const auto f3 = random_convex(100, 8, 2.0, 0.1);
    REQUIRE(f1.a != f3.a);
  }
  SECTION("margin floor and isoperimetric inequality hold on a corpus") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const auto fs = random_convex(seed, 16, 3.0, 0.1);
      REQUIRE(convexity_margin(fs) >= 0.1);
      const double L = length(fs), A = area(fs);
      REQUIRE(L * L >= 4.0 * kPi * A - 1e-9);
    }
  }
  SECTION("rejects bad parameters") {
    REQUIRE_THROWS_AS(random_convex(1, 1, 2.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(random_convex(1, 4, 2.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(random_convex(1, 4, -1.0, 0.1), std::invalid_argument);
  }
}

TEST_CASE("validation rejects malformed coefficient sets") {
  FourierSupport fs;
  fs.a = {2.0, 0.0, 0.1};
  fs.b = {0.0, 0.0};
  REQUIRE_THROWS_AS(validate(fs), std::invalid_argument);
  fs.b = {0.5, 0.0, 0.0};
  REQUIRE_THROWS_AS(validate(fs), std::invalid_argument);
  fs.b = {0.0, 0.0, std::numeric_limits<double>::quiet_NaN()};
  REQUIRE_THROWS_AS(validate(fs), std::invalid_argument);
}
