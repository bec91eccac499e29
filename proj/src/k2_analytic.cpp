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

#include "mismix/k2_analytic.hpp"

#include <cmath>
#include <numbers>

#include "mismix/error.hpp"
#include "mismix/special_functions.hpp"

namespace mismix {
namespace {

// Above this SNR the bracket is evaluated through the continued-fraction
// deficit to avoid cancellation between its two terms.
constexpr double kScaledFormSnr = 20.0;

const double kSqrtTwoOverPi = std::sqrt(2.0 / std::numbers::pi);

// sqrt(2/pi) s exp(-a^2) - ||mu|| erfc(a) = E|T| - ||mu||.
double folded_excess(double mu_norm, double sigma) {
  const double a = mu_norm / (std::numbers::sqrt2 * sigma);
  const double snr = (mu_norm / sigma) * (mu_norm / sigma);
  if (snr <= kScaledFormSnr)
    return kSqrtTwoOverPi * sigma * std::exp(-a * a) - mu_norm * erfc(a);
  // ||mu|| erfc(a) = sqrt(2/pi) s exp(-a^2) (sqrt(pi) a erfcx(a)), so the
  // bracket is sqrt(2/pi) s exp(-a^2) (1 - sqrt(pi) a erfcx(a)).
  return kSqrtTwoOverPi * sigma * std::exp(-a * a) * erfc_mills_deficit(a);
}

}  // namespace

K2Model::K2Model(Vector half_difference, double noise_sigma)
    : mu(std::move(half_difference)), sigma(noise_sigma) {
  require(mu.size() >= 1, "K2Model: mu must be nonempty");
  require(mu.norm() > 0.0, "K2Model: mu must be nonzero");
  require(std::isfinite(sigma) && sigma > 0.0, "K2Model: sigma must be positive");
}

K2Model K2Model::from_snr(double snr, double sigma, int d) {
  require(snr > 0.0, "K2Model::from_snr: snr must be positive");
  Vector mu = Vector::Zero(d);
  mu(0) = std::sqrt(snr) * sigma;
  return K2Model(std::move(mu), sigma);
}

double K2Model::snr() const { return mu.squaredNorm() / (sigma * sigma); }

MeanConfig K2Model::truth() const {
  MeanConfig out(2, static_cast<int>(mu.size()));
  out.mean(0) = mu.transpose();
  out.mean(1) = -mu.transpose();
  return out;
}

MeanConfig ha_target_k2(const K2Model& m) {
  const double norm = m.mu_norm();
  const double folded_mean = norm + folded_excess(norm, m.sigma);
  const Vector c = m.mu * (folded_mean / norm);
  MeanConfig out(2, static_cast<int>(c.size()));
  out.mean(0) = c.transpose();
  out.mean(1) = -c.transpose();
  return out;
}

double ha_mse_k2(const K2Model& m) {
  const double norm = m.mu_norm();
  const double excess = folded_excess(norm, m.sigma);
  return excess * excess / (norm * norm);
}

double ha_mse_k2_alternate_form(const K2Model& m) {
  const double norm = m.mu_norm();
  const double a = norm / (std::numbers::sqrt2 * m.sigma);
  const double bracket = std::numbers::sqrt2 * m.sigma * std::exp(-a * a) - erfc(a) * norm;
  return bracket * bracket / (std::numbers::pi * norm * norm);
}

double ha_mse_asymptote(double snr, SnrRegime regime) {
  require(snr > 0.0, "ha_mse_asymptote: snr must be positive");
  const double two_over_pi = 2.0 / std::numbers::pi;
  if (regime == SnrRegime::Low) return two_over_pi / snr;
  return two_over_pi * std::exp(-snr) / (snr * snr * snr);
}

double bayes_error_k2(double snr) {
  require(snr >= 0.0, "bayes_error_k2: snr must be nonnegative");
  return 0.5 * erfc(std::sqrt(0.5 * snr));
}

}  // namespace mismix
