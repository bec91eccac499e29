/*
   Copyright 2026 The mismix Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "mismix/special_functions.hpp"

using mismix::erfcx;
using mismix::erfc_mills_deficit;
using mismix::normal_cdf;

namespace {

// Composite Simpson in long double of (2/sqrt(pi)) * int_x^{x+L} exp(-t^2) dt.
long double erfc_oracle(long double x) {
  const long double len = 12.0L;
  const int panels = 400000;
  const long double h = len / panels;
  long double s = 0.0L;
  for (int i = 0; i <= panels; ++i) {
    const long double t = x + i * h;
    const long double w = (i == 0 || i == panels) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    s += w * std::exp(-t * t);
  }
  return s * h / 3.0L * 2.0L / std::sqrt(std::numbers::pi_v<long double>);
}

double rel_err(double a, long double b) { return static_cast<double>(std::abs((a - b) / b)); }

}  // namespace

TEST_CASE("erfc matches the integral oracle") {
  for (double x : {0.0, 0.05, 0.3, 0.7, 1.0, 1.6, 2.4, 2.5, 2.6, 3.3, 4.5, 6.0, 9.0, 14.0, 20.0, 26.0})
    CHECK_MESSAGE(rel_err(mismix::erfc(x), erfc_oracle(x)) < 1e-12, "x = " << x);
}

TEST_CASE("erf family frozen values") {
  const std::pair<double, double> table[] = {
      {0.1, 0.8875370839817151},   {0.5, 0.47950012218695346},   {1.0, 0.15729920705028513},
      {2.0, 0.0046777349810472658}, {3.0, 2.2090496998585441e-5}, {5.0, 1.5374597944280349e-12},
      {8.0, 1.1224297172982927e-29}, {12.0, 1.3562611692059042e-64}, {20.0, 5.3958656116079009e-176},
      {26.0, 5.6631924088561428e-296}};
  for (auto [x, v] : table) CHECK_MESSAGE(std::abs(mismix::erfc(x) / v - 1.0) < 1e-13, "x = " << x);

  CHECK(erfcx(0.5) == doctest::Approx(0.61569034419292587).epsilon(1e-14));
  CHECK(erfcx(3.0) == doctest::Approx(0.17900115118138995).epsilon(1e-14));
  CHECK(erfcx(30.0) == doctest::Approx(0.018795888861416751).epsilon(1e-14));
  CHECK(erfcx(1000.0) == doctest::Approx(0.00056418930145338765).epsilon(1e-14));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.158655253931457).epsilon(1e-14));
}

TEST_CASE("symmetry and limits") {
  for (double x : {0.2, 1.3, 4.0}) {
    CHECK(mismix::erf(-x) == -mismix::erf(x));
    CHECK(mismix::erfc(-x) == doctest::Approx(2.0 - mismix::erfc(x)).epsilon(1e-15));
    CHECK(std::abs(mismix::erf(x) + mismix::erfc(x) - 1.0) < 1e-15);
  }
  CHECK(mismix::erf(0.0) == 0.0);
  CHECK(mismix::erfc(40.0) == 0.0);
  CHECK(mismix::erfc(-40.0) == 2.0);
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-16));
}

TEST_CASE("mills deficit agrees with the direct form and its asymptote") {
  for (double x : {0.3, 1.0, 2.0}) CHECK(erfc_mills_deficit(x) == doctest::Approx(1.0 - std::sqrt(std::numbers::pi) * x * erfcx(x)).epsilon(1e-12));
  for (double x : {50.0, 200.0}) CHECK(erfc_mills_deficit(x) * 2.0 * x * x == doctest::Approx(1.0).epsilon(3.0 / (2.0 * x * x)));
}
