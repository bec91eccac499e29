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

#pragma once

namespace mismix {

// Error-function family, implemented here so that the closed-form oracles do
// not depend on the platform libm.
//
// Accuracy: absolute error below 1e-12 for |x| <= 6; relative error below
// 1e-8 for erfc on (6, 26.5], past which erfc(x) leaves the normal double
// range. erfcx stays accurate for all finite x >= 0.

double erf(double x);
double erfc(double x);

/// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

/// 1 - sqrt(pi) * x * erfcx(x), computed without cancellation for large x.
/// Behaves like 1/(2 x^2) as x grows.
double erfc_mills_deficit(double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace mismix
