#include <cmath>
#include <limits>

#include "doctest.h"
#include "fsrd/control.hpp"

using namespace fsrd;

TEST_SUITE("control") {

TEST_CASE("energy cache tracks bulk updates") {
  Control v(4, 2, 0.25);
  CHECK(v.energy() == 0.0);
  std::vector<double> vals = {1, 2, 3, 4, 5, 6, 7, 8};
  v.set_values(vals);
  CHECK(v.energy() == doctest::Approx(v.energy_recomputed()).epsilon(1e-15));
  CHECK(v.energy() == doctest::Approx(0.25 * (1 + 4 + 9 + 16 + 25 + 36 + 49 + 64)));
  CHECK(v.action() == doctest::Approx(0.5 * v.energy()));
}

TEST_CASE("layout: at() indexes row-major (step, mode)") {
  Control v(3, 2, 0.5, {10, 11, 20, 21, 30, 31});
  CHECK(v.at(0, 0) == 10);
  CHECK(v.at(0, 1) == 11);
  CHECK(v.at(2, 1) == 31);
  auto row = v.row(1);
  CHECK(row.size() == 2);
  CHECK(row[0] == 20);
  CHECK(row[1] == 21);
  CHECK(v.duration() == doctest::Approx(1.5));
}

TEST_CASE("constructor and setter validation") {
  CHECK_THROWS_AS(Control(0, 1, 0.1), InvalidArgument);
  CHECK_THROWS_AS(Control(1, 0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(Control(1, 1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Control(2, 2, 0.1, {1.0, 2.0}), InvalidArgument);
  Control v(2, 1, 0.1);
  CHECK_THROWS_AS(v.set_values({1.0}), InvalidArgument);
  CHECK_THROWS_AS(v.set_values({1.0, std::numeric_limits<double>::quiet_NaN()}),
                  NonFiniteError);
}

} // TEST_SUITE
