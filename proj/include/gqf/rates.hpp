/* Copyright (C) 2026 The gqf-dmt Authors.
 * This program is Licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. See accompanying LICENSE file.
 */
/* rates.hpp - Gaussian instantaneous mutual information of the GQF scheme
 * (quantize without binning, joint decoding over both slots).
 *
 * All rates are in bits per channel use.
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "gqf/channel.hpp"

namespace gqf {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Rates that scale with SNR: R1 = R2 = (r/2) log2 SNR, R_U = r_u log2 SNR.
struct MultiplexingGains {
  double r = 0.0;
  double r_u = 0.5;
};

/// Fixed rates in bits per channel use.
struct AbsoluteRates {
  double r1 = 0.0;
  double r2 = 0.0;
  double r_u = 0.0;
};

struct TargetRates {
  double r1 = 0.0;
  double r2 = 0.0;
  double r_u = 0.0;
};

struct SchemeConfig {
  double snr = 1.0;   // linear; every transmitter uses power SNR
  double beta = 0.5;  // fraction of the block in the first slot
  std::variant<MultiplexingGains, AbsoluteRates> rate_mode = MultiplexingGains{};

  static SchemeConfig with_gains(double snr_db, double beta, double r, double r_u) {
    return {db_to_linear(snr_db), beta, MultiplexingGains{r, r_u}};
  }
  static SchemeConfig with_rates(double snr_db, double beta, double r1, double r2, double r_u) {
    return {db_to_linear(snr_db), beta, AbsoluteRates{r1, r2, r_u}};
  }

  bool scales_with_snr() const { return std::holds_alternative<MultiplexingGains>(rate_mode); }

  SchemeConfig at_snr_db(double snr_db) const {
    SchemeConfig c = *this;
    c.snr = db_to_linear(snr_db);
    return c;
  }

  TargetRates targets() const {
    if (const auto* g = std::get_if<MultiplexingGains>(&rate_mode)) {
      const double l = std::log2(snr);
      return {0.5 * g->r * l, 0.5 * g->r * l, g->r_u * l};
    }
    const auto& a = std::get<AbsoluteRates>(rate_mode);
    return {a.r1, a.r2, a.r_u};
  }

  void validate() const {
    if (!(snr > 0.0) || !std::isfinite(snr)) throw std::invalid_argument("snr must be positive and finite");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (const auto* g = std::get_if<MultiplexingGains>(&rate_mode)) {
      if (!(g->r >= 0.0 && g->r <= 1.0)) throw std::invalid_argument("multiplexing gain r must lie in [0, 1]");
      if (!(g->r_u >= 0.0) || !std::isfinite(g->r_u)) throw std::invalid_argument("r_u must be >= 0");
      if (snr < 1.0) throw std::invalid_argument("SNR-scaled rates need snr >= 0 dB");
    } else {
      const auto& a = std::get<AbsoluteRates>(rate_mode);
      for (double v : {a.r1, a.r2, a.r_u}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("rates must be finite and >= 0");
      }
    }
  }
};

/// The six instantaneous mutual-information values bounding R1, R1+R_U,
/// R2, R2+R_U, R1+R2 and R1+R2+R_U, plus the quantizer noise variance used.
struct RateVector {
  double i_r1 = 0.0;
  double i_r1u = 0.0;
  double i_r2 = 0.0;
  double i_r2u = 0.0;
  double i_r12 = 0.0;
  double i_r12u = 0.0;
  double sigma_q2 = 0.0;

  std::array<double, 6> values() const { return {i_r1, i_r1u, i_r2, i_r2u, i_r12, i_r12u}; }
};

namespace detail {

inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

inline void check_finite(const ChannelRealization& h) {
  if (!h.finite()) throw std::invalid_argument("channel realization has non-finite coefficients");
}

}  // namespace detail

/// Rate of the quantization index, beta * log2(1 + (1 + |h1R|^2 P + |h2R|^2 P) / sigma_q2).
inline double quantizer_rate(const ChannelRealization& h, const SchemeConfig& cfg, double sigma_q2) {
  const double p = cfg.snr;
  const double relay_power = 1.0 + (std::norm(h.h1r) * p + std::norm(h.h2r) * p);
  return cfg.beta * detail::log2_1p(relay_power / sigma_q2);
}

/// Quantization noise variance that makes the quantization index rate equal R_U.
inline double select_quantization_noise(const ChannelRealization& h, const SchemeConfig& cfg) {
  detail::check_finite(h);
  const double r_u = cfg.targets().r_u;
  if (!(r_u > 0.0)) throw std::invalid_argument("quantizer rate must be positive");
  const double p = cfg.snr;
  const double relay_power = 1.0 + (std::norm(h.h1r) * p + std::norm(h.h2r) * p);
  return relay_power / std::expm1(r_u / cfg.beta * std::numbers::ln2);
}

/// The six mutual-information terms with the quantizer noise variance given.
/// The 2x2 determinant term of the sum-rate bound uses |h1D h2R - h1R h2D|^2.
inline RateVector rates_with_noise(const ChannelRealization& h, const SchemeConfig& cfg, double s) {
  detail::check_finite(h);
  const double p = cfg.snr;
  const double b = cfg.beta;
  const double g1d = std::norm(h.h1d) * p;
  const double g2d = std::norm(h.h2d) * p;
  const double g1r = std::norm(h.h1r) * p;
  const double g2r = std::norm(h.h2r) * p;
  const double grd = std::norm(h.hrd) * p;
  const double q = 1.0 + s;
  const double relay_sum = g1r + g2r;
  const double direct_sum = g1d + g2d;
  const double det = std::norm(h.h1d * h.h2r - h.h1r * h.h2d) * p * p;

  using detail::log2_1p;
  RateVector out;
  out.sigma_q2 = s;
  out.i_r1 = b * log2_1p(g1d + g1r / q) + (1.0 - b) * log2_1p(g1d);
  out.i_r2 = b * log2_1p(g2d + g2r / q) + (1.0 - b) * log2_1p(g2d);
  out.i_r1u = b * (log2_1p(g1d) + log2_1p(relay_sum / q)) + (1.0 - b) * log2_1p(g1d + grd);
  out.i_r2u = b * (log2_1p(g2d) + log2_1p(relay_sum / q)) + (1.0 - b) * log2_1p(g2d + grd);
  out.i_r12 = b * log2_1p(direct_sum + (det + relay_sum) / q) + (1.0 - b) * log2_1p(direct_sum);
  out.i_r12u = b * (log2_1p(direct_sum) + log2_1p(relay_sum / q)) + (1.0 - b) * log2_1p(direct_sum + grd);
  return out;
}

/// Evaluates the six mutual-information terms for a realization, re-selecting
/// the quantizer noise from (h1R, h2R) on every call.
inline RateVector instantaneous_rates(const ChannelRealization& h, const SchemeConfig& cfg) {
  return rates_with_noise(h, cfg, select_quantization_noise(h, cfg));
}

}  // namespace gqf
