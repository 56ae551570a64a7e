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
/* channel.hpp - Rayleigh block-fading model of the half-duplex MARC and
 * counter-based sampling of channel realizations.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace gqf {

using Complex = std::complex<double>;

/// Links of the half-duplex multiple-access relay channel.
/// The order is the order of the exponent vector used by the high-SNR analysis
/// (alpha_11, alpha_21, alpha_1R, alpha_2R, alpha_RD); the direct links S1->D
/// and S2->D double as the "11" and "21" links of that analysis.
enum class Link : std::size_t { s1_dest = 0, s2_dest = 1, s1_relay = 2, s2_relay = 3, relay_dest = 4 };

inline constexpr std::size_t kLinkCount = 5;

inline constexpr std::array<Link, kLinkCount> kAllLinks = {
    Link::s1_dest, Link::s2_dest, Link::s1_relay, Link::s2_relay, Link::relay_dest};

inline constexpr const char* link_name(Link l) {
  switch (l) {
    case Link::s1_dest: return "1d";
    case Link::s2_dest: return "2d";
    case Link::s1_relay: return "1r";
    case Link::s2_relay: return "2r";
    case Link::relay_dest: return "rd";
  }
  return "?";
}

/// One draw of the five fading coefficients.
struct ChannelRealization {
  Complex h1d{};
  Complex h2d{};
  Complex h1r{};
  Complex h2r{};
  Complex hrd{};

  const Complex& operator[](Link l) const {
    switch (l) {
      case Link::s1_dest: return h1d;
      case Link::s2_dest: return h2d;
      case Link::s1_relay: return h1r;
      case Link::s2_relay: return h2r;
      case Link::relay_dest: break;
    }
    return hrd;
  }
  Complex& operator[](Link l) {
    return const_cast<Complex&>(std::as_const(*this)[l]);
  }

  bool finite() const {
    for (Link l : kAllLinks) {
      const Complex& h = (*this)[l];
      if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) return false;
    }
    return true;
  }

  /// Same realization seen with the two sources relabelled.
  ChannelRealization swapped_sources() const { return {h2d, h1d, h2r, h1r, hrd}; }

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

/// Per-link variance of the circularly symmetric Gaussian coefficient.
/// A zero variance is a dead link.
struct FadingParams {
  std::array<double, kLinkCount> variance{1.0, 1.0, 1.0, 1.0, 1.0};

  static FadingParams symmetric(double v = 1.0) { return {{v, v, v, v, v}}; }

  double operator[](Link l) const { return variance[static_cast<std::size_t>(l)]; }

  void validate() const {
    for (double v : variance) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("fading variance must be finite and >= 0");
    }
  }
};

namespace detail {

// Philox4x32-10 (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  static constexpr Counter apply(Counter c, Key k) {
    for (int i = 0; i < 10; ++i) {
      if (i > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      c = round(c, k);
    }
    return c;
  }
};

// Uniform on the open interval (0, 1) from the top 52 of 64 random bits;
// the half-ulp offset keeps both endpoints out (53 bits would round up to 1).
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

}  // namespace detail

/// Draws realization `sample_index` of stream `stream_id` under `seed`.
///
/// The result is a pure function of (seed, stream_id, sample_index, params):
/// each link consumes one Philox block keyed by the seed, so any partitioning
/// of sample indices across workers sees the same realizations. Real and
/// imaginary parts are independent N(0, variance/2) via Box-Muller.
inline ChannelRealization sample_channel(std::uint64_t stream_id, std::uint64_t sample_index,
                                         const FadingParams& params, std::uint64_t seed) {
  const detail::Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  ChannelRealization out;
  for (std::size_t k = 0; k < kLinkCount; ++k) {
    const double var = params.variance[k];
    if (var == 0.0) continue;
    const detail::Philox4x32::Counter ctr{static_cast<std::uint32_t>(sample_index),
                                          static_cast<std::uint32_t>(sample_index >> 32),
                                          static_cast<std::uint32_t>(stream_id),
                                          (static_cast<std::uint32_t>(stream_id >> 32) << 3) | static_cast<std::uint32_t>(k)};
    const auto r = detail::Philox4x32::apply(ctr, key);
    const double u1 = detail::open_unit(r[0], r[1]);
    const double u2 = detail::open_unit(r[2], r[3]);
    const double radius = std::sqrt(-var * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    out[kAllLinks[k]] = Complex(radius * std::cos(phase), radius * std::sin(phase));
  }
  return out;
}

}  // namespace gqf
