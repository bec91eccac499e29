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

#include "mismix/core_model.hpp"

namespace mismix {

/// Centered symmetric two-component model Y ~ N(mu, s^2 I)/2 + N(-mu, s^2 I)/2.
struct K2Model {
  Vector mu;
  double sigma = 1.0;

  K2Model(Vector half_difference, double noise_sigma);
  /// mu = sqrt(snr) * sigma along the first axis of R^d.
  static K2Model from_snr(double snr, double sigma = 1.0, int d = 1);

  double mu_norm() const { return mu.norm(); }
  double snr() const;
  MeanConfig truth() const;
  MixtureModel mixture() const { return {truth(), sigma}; }
};

/// Population hard-assignment centers (c, -c), with c = E|T| mu/||mu||
/// and T the projection of Y on mu/||mu|| (folded normal).
MeanConfig ha_target_k2(const K2Model& m);

/// Exact normalized population hard-assignment MSE,
///   (sqrt(2/pi) s exp(-a^2) - ||mu|| erfc(a))^2 / ||mu||^2,  a = ||mu||/(sqrt 2 s).
double ha_mse_k2(const K2Model& m);

/// The same quantity written as
///   (sqrt(2) s exp(-a^2) - erfc(a) ||mu||)^2 / (pi ||mu||^2).
/// Kept for comparison only; it does not equal ha_mse_k2.
double ha_mse_k2_alternate_form(const K2Model& m);

enum class SnrRegime { Low, High };

/// (2/pi)/snr (low) or (2/pi) exp(-snr)/snr^3 (high).
double ha_mse_asymptote(double snr, SnrRegime regime);

/// Bayes misclassification probability erfc(sqrt(snr/2))/2.
double bayes_error_k2(double snr);

}  // namespace mismix
