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
/* curves.hpp - diversity-multiplexing tradeoff curves of the symmetric
 * half-duplex MARC, with r the total multiplexing gain split equally
 * between the two sources.
 */
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gqf/exponent.hpp"

namespace gqf {

enum class Scheme { gqf_closed, gqf_computed, cf, upper };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::gqf_closed: return "gqf";
    case Scheme::gqf_computed: return "gqf_computed";
    case Scheme::cf: return "cf";
    case Scheme::upper: return "upper";
  }
  return "?";
}

struct DmtPoint {
  double r = 0.0;
  double d = 0.0;
};

struct DmtCurve {
  Scheme scheme = Scheme::gqf_closed;
  std::vector<DmtPoint> points;
};

/// Closed-form curves. Breakpoints take the left branch; both branches agree there.
inline double dmt_closed_form(Scheme s, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0, 1]");
  switch (s) {
    case Scheme::gqf_closed:
    case Scheme::upper:
      return r <= 0.5 ? 2.0 - r : 3.0 * (1.0 - r);
    case Scheme::cf:
      if (r <= 2.0 / 3.0) return 2.0 * (1.0 - r);
      if (r <= 4.0 / 5.0) return 1.0 - r / 2.0;
      return 3.0 * (1.0 - r);
    case Scheme::gqf_computed:
      break;
  }
  throw std::invalid_argument("no closed form for the computed GQF curve");
}

/// {0, 1/(n-1), ..., 1}
inline std::vector<double> uniform_r_grid(std::size_t points = 101) {
  if (points < 2) throw std::invalid_argument("r grid needs at least 2 points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

inline DmtCurve dmt_closed_curve(Scheme s, std::span<const double> r_grid) {
  DmtCurve c{s, {}};
  for (double r : r_grid) c.points.push_back({r, dmt_closed_form(s, r)});
  return c;
}

/// Union-bound GQF diversity from the per-event exponent LPs at every grid point.
inline DmtCurve dmt_computed(std::span<const double> r_grid, double beta = 0.5, double r_u = 0.5) {
  if (r_grid.empty()) throw std::invalid_argument("r grid is empty");
  DmtCurve c{Scheme::gqf_computed, {}};
  for (double r : r_grid) {
    const auto res = solve_all({beta, r, r_u}, Method::lp);
    c.points.push_back({r, combine_min(res).value});
  }
  return c;
}

}  // namespace gqf
