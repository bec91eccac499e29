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

#include "mismix/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mismix {
namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
constexpr double kSeriesLimit = 2.5;

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!
// All terms are positive, so there is no cancellation for moderate x.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 0; n < 500; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 3.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

// Tail of the continued fraction
//   sqrt(pi) erfcx(x) = 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))
// starting at the second partial denominator, evaluated by modified Lentz.
// Returns T = x + 1 / (x + (3/2) / (x + ...)).
double erfc_cf_tail(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int k = 2; k < 20000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

double erfcx_positive(double x) {
  if (x < kSeriesLimit) return std::exp(x * x) * (1.0 - erf_series(x));
  const double tail = erfc_cf_tail(x);
  return std::numbers::inv_sqrtpi / (x + 0.5 / tail);
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  double value;
  if (ax < kSeriesLimit) {
    value = erf_series(ax);
  } else {
    value = 1.0 - std::exp(-ax * ax) * erfcx_positive(ax);
  }
  return x < 0 ? -value : value;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0) return 2.0 - erfc(-x);
  if (x < kSeriesLimit) return 1.0 - erf_series(x);
  if (x > 27.3) return 0.0;
  return std::exp(-x * x) * erfcx_positive(x);
}

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0) {
    if (x < -26.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(x * x) - erfcx_positive(-x);
  }
  return erfcx_positive(x);
}

double erfc_mills_deficit(double x) {
  if (x < kSeriesLimit) return 1.0 - std::sqrt(std::numbers::pi) * x * erfcx(x);
  // sqrt(pi) x erfcx(x) = x / (x + F) with F = (1/2) / T.
  const double tail_ratio = 0.5 / erfc_cf_tail(x);
  return tail_ratio / (x + tail_ratio);
}

double normal_cdf(double x) { return 0.5 * erfc(-x * std::numbers::sqrt2 / 2.0); }

}  // namespace mismix
