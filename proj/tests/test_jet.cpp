#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/jet.hpp"

using namespace ssflow;

TEST_CASE("jet ring operations against closed forms") {
  using J = Jet<6>;
  J x = J::variable() + J::constant(0.3);  // expansion of x around x0 = 0.3
  J p = x * x * x;                         // x^3
  CHECK(p.value() == Catch::Approx(0.027).epsilon(1e-15));
  CHECK(p.deriv(1) == Catch::Approx(0.27).epsilon(1e-14));   // 3 x0^2
  CHECK(p.deriv(2) == Catch::Approx(1.8).epsilon(1e-14));    // 6 x0
  CHECK(p.deriv(3) == Catch::Approx(6.0).epsilon(1e-14));
  CHECK(p.deriv(4) == 0.0);

  J q = p - x * 2.0 + J::constant(5.0);
  CHECK(q.value() == Catch::Approx(0.027 - 0.6 + 5.0).epsilon(1e-15));
  CHECK(q.deriv(1) == Catch::Approx(0.27 - 2.0).epsilon(1e-14));
}

TEST_CASE("jet division: geometric series") {
  using J = Jet<6>;
  J one = J::constant(1.0);
  J d = one / (one + J::variable());  // 1/(1+x) at 0: coefficients (-1)^k
  for (int k = 0; k <= 6; ++k)
    CHECK(d.c[k] == Catch::Approx((k % 2 == 0) ? 1.0 : -1.0).epsilon(1e-14));
  // division by zero-value jet refuses
  CHECK_THROWS_AS(one / J::variable(), Error);
}

TEST_CASE("jet division inverts multiplication") {
  using J = Jet<4>;
  J a;
  a.c = {0.7, -1.2, 0.4, 2.0, -0.3};
  J b;
  b.c = {2.0, 0.5, -0.8, 0.1, 0.9};
  J r = (a * b) / b;
  for (int k = 0; k <= 4; ++k)
    CHECK(r.c[k] == Catch::Approx(a.c[k]).margin(1e-13));
}

TEST_CASE("jet derivative shifts orders") {
  using J = Jet<6>;
  J x = J::variable() + J::constant(2.0);
  J f = x * x * x * x;  // x^4 at 2
  J g = f.derivative(); // 4 x^3
  CHECK(g.value() == Catch::Approx(32.0).epsilon(1e-14));
  CHECK(g.deriv(1) == Catch::Approx(48.0).epsilon(1e-14));  // 12 x0^2
  CHECK(g.deriv(2) == Catch::Approx(48.0).epsilon(1e-14));  // 24 x0
}
