#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/characteristics.hpp"

using namespace ssflow;

TEST_CASE("characteristic speed closed form") {
  // mu = 2, c = 1: s = 1/sqrt(3)
  CHECK(char_speed(2.0, 1.0) ==
        Catch::Approx(0.5773502691896258).epsilon(1e-14));
  CHECK_THROWS_AS(char_speed(1.0, 1.0), SubsonicPoint);
  CHECK_THROWS_AS(char_speed(0.5, 1.0), SubsonicPoint);
  auto sp = eigen_speeds(2.0, 1.0);
  CHECK(sp[0] == 0.0);
  CHECK(sp[1] == Catch::Approx(-sp[2]));
}

TEST_CASE("pencil determinant vanishes exactly at the wave speeds") {
  for (double mu : {1.7, 2.0, 2.4}) {
    double c = 1.0, s = char_speed(mu, c);
    CHECK(std::abs(pencil_det(mu, c, 0.0)) < 1e-13);
    CHECK(std::abs(pencil_det(mu, c, s)) < 1e-12);
    CHECK(std::abs(pencil_det(mu, c, -s)) < 1e-12);
    CHECK(std::abs(pencil_det(mu, c, 0.5 * s)) > 1e-4);
  }
}

TEST_CASE("characteristic tracing: constant-coefficient exact line") {
  BaseFlow flat = BaseFlow::couette(2.0, 2.0);
  Grid g = build_grid(32, 32, 0.05, 0.1, Grading::uniform);
  double s = char_speed(2.0, 1.0);
  auto y = trace_characteristic(g, flat, 1.0, 0.3, +1);
  for (int i = 0; i <= g.n1; ++i)
    CHECK(y[i] == Catch::Approx(0.3 + s * g.x1[i]).margin(1e-12));
  auto yd = trace_characteristic(g, flat, 1.0, 1.9, -1);
  CHECK(yd.back() == Catch::Approx(1.9 - s * 0.05).margin(1e-12));
  auto y0 = trace_characteristic(g, flat, 1.0, 0.7, 0);
  CHECK(y0.back() == Catch::Approx(0.7));
}

TEST_CASE("domain partition on the default profile") {
  BaseFlow f = BaseFlow::quartic(2.0, 2.2, 0.15);
  Grid g = build_grid(32, 64, 0.05, 0.1, Grading::tanh_walls, 1.5);
  Partition p = partition_domain(g, f, 1.0);
  CHECK_FALSE(p.crossed);  // short channel: corner fans stay separated
  CHECK(p.count1 > 0);
  CHECK(p.count2 > 0);
  CHECK(p.count3 > 0);
  CHECK(p.count1 + p.count2 + p.count3 == 32 * 64);
  // curves start at the corners and move monotonically
  CHECK(p.curve_low.front() == 0.0);
  CHECK(p.curve_high.front() == 2.0);
  CHECK(p.curve_low.back() > 0.0);
  CHECK(p.curve_high.back() < 2.0);
  for (int i = 0; i < 32; ++i) {
    CHECK(p.curve_low[i + 1] >= p.curve_low[i]);
    CHECK(p.curve_high[i + 1] <= p.curve_high[i]);
  }
}
