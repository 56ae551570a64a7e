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
/* outage.hpp - outage events of the GQF scheme and their Monte Carlo
 * estimation over Rayleigh block fading.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gqf/channel.hpp"
#include "gqf/rates.hpp"

namespace gqf {

/// The six rate constraints whose violation is an outage.
enum class Event : std::size_t { r1 = 0, r1u = 1, r2 = 2, r2u = 3, r12 = 4, r12u = 5 };

inline constexpr std::size_t kEventCount = 6;

inline constexpr std::array<Event, kEventCount> kAllEvents = {Event::r1,  Event::r1u, Event::r2,
                                                              Event::r2u, Event::r12, Event::r12u};

inline constexpr const char* event_name(Event e) {
  constexpr std::array<const char*, kEventCount> names = {"r1", "r1u", "r2", "r2u", "r12", "r12u"};
  return names[static_cast<std::size_t>(e)];
}

inline constexpr std::size_t index_of(Event e) { return static_cast<std::size_t>(e); }

struct OutageFlags {
  std::array<bool, kEventCount> flag{};

  bool operator[](Event e) const { return flag[index_of(e)]; }
  bool o_union() const { return std::any_of(flag.begin(), flag.end(), [](bool b) { return b; }); }
};

/// Flags every constraint whose target rate strictly exceeds its mutual information.
inline OutageFlags outage_indicator(const ChannelRealization& h, const SchemeConfig& cfg) {
  const RateVector iv = instantaneous_rates(h, cfg);
  const TargetRates t = cfg.targets();
  OutageFlags f;
  f.flag[index_of(Event::r1)] = t.r1 > iv.i_r1;
  f.flag[index_of(Event::r1u)] = t.r1 + t.r_u > iv.i_r1u;
  f.flag[index_of(Event::r2)] = t.r2 > iv.i_r2;
  f.flag[index_of(Event::r2u)] = t.r2 + t.r_u > iv.i_r2u;
  f.flag[index_of(Event::r12)] = t.r1 + t.r2 > iv.i_r12;
  f.flag[index_of(Event::r12u)] = t.r1 + t.r2 + t.r_u > iv.i_r12u;
  return f;
}

/// Two-sided 95% Wilson score half-width for `count` successes out of `n`.
inline double wilson_halfwidth(std::uint64_t count, std::uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(count) / nn;
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

struct OutageCounts {
  std::array<std::uint64_t, kEventCount> event{};
  std::uint64_t any = 0;

  OutageCounts& operator+=(const OutageCounts& o) {
    for (std::size_t i = 0; i < kEventCount; ++i) event[i] += o.event[i];
    any += o.any;
    return *this;
  }
  friend bool operator==(const OutageCounts&, const OutageCounts&) = default;
};

struct OutageEstimate {
  double snr_db = 0.0;
  std::uint64_t samples = 0;
  OutageCounts counts;

  double p_hat(Event e) const {
    return static_cast<double>(counts.event[index_of(e)]) / static_cast<double>(samples);
  }
  double p_union() const { return static_cast<double>(counts.any) / static_cast<double>(samples); }
  double ci_halfwidth() const { return wilson_halfwidth(counts.any, samples); }
  double ci_halfwidth(Event e) const { return wilson_halfwidth(counts.event[index_of(e)], samples); }
};

/// Counts outages over sample indices [first, last) of one stream.
inline OutageCounts count_outages(const SchemeConfig& cfg, const FadingParams& params, std::uint64_t first,
                                  std::uint64_t last, std::uint64_t seed, std::uint64_t stream = 0) {
  OutageCounts c;
  for (std::uint64_t i = first; i < last; ++i) {
    const OutageFlags f = outage_indicator(sample_channel(stream, i, params, seed), cfg);
    bool any = false;
    for (std::size_t k = 0; k < kEventCount; ++k) {
      c.event[k] += f.flag[k];
      any = any || f.flag[k];
    }
    c.any += any;
  }
  return c;
}

/// Monte Carlo outage estimate from `samples` realizations.
///
/// Sample indices are split into contiguous blocks, one per worker; counts are
/// identical for any worker count.
inline OutageEstimate estimate_outage(const SchemeConfig& cfg, const FadingParams& params, std::uint64_t samples,
                                      std::uint64_t seed, unsigned workers = 1) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  cfg.validate();
  params.validate();
  if (cfg.targets().r_u <= 0.0) throw std::invalid_argument("quantizer rate must be positive");
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::uint64_t>(samples, 256)));

  std::vector<OutageCounts> partial(workers);
  if (workers == 1) {
    partial[0] = count_outages(cfg, params, 0, samples, seed);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = samples * w / workers;
      const std::uint64_t last = samples * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] { partial[w] = count_outages(cfg, params, first, last, seed); });
    }
  }

  OutageEstimate est;
  est.snr_db = linear_to_db(cfg.snr);
  est.samples = samples;
  for (const auto& p : partial) est.counts += p;
  return est;
}

/// One estimate per grid point. SNR-scaled rates are re-derived at every point;
/// every point reuses the same realizations (stream 0).
inline std::vector<OutageEstimate> sweep_outage(const SchemeConfig& cfg_template, std::span<const double> snr_grid_db,
                                                const FadingParams& params, std::uint64_t samples, std::uint64_t seed,
                                                unsigned workers = 1) {
  if (snr_grid_db.empty()) throw std::invalid_argument("SNR grid is empty");
  for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
    if (!(snr_grid_db[i] > snr_grid_db[i - 1])) throw std::invalid_argument("SNR grid must be strictly increasing");
  }
  std::vector<OutageEstimate> out;
  out.reserve(snr_grid_db.size());
  for (double db : snr_grid_db) {
    OutageEstimate e = estimate_outage(cfg_template.at_snr_db(db), params, samples, seed, workers);
    e.snr_db = db;
    out.push_back(e);
  }
  return out;
}

inline constexpr std::uint64_t kSlopeCountFloor = 50;

/// Least-squares slope of -log10 P(union outage) against log10 SNR, using
/// only points with at least `count_floor` union outages.
inline double fit_diversity_slope(std::span<const OutageEstimate> estimates,
                                  std::uint64_t count_floor = kSlopeCountFloor) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : estimates) {
    if (e.samples == 0 || e.counts.any < count_floor || e.counts.any == 0) continue;
    pts.emplace_back(e.snr_db / 10.0, -std::log10(e.p_union()));
  }
  if (pts.size() < 2) throw std::runtime_error("insufficient resolution: fewer than 2 usable SNR points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::runtime_error("insufficient resolution: usable points share one SNR");
  return sxy / sxx;
}

}  // namespace gqf
