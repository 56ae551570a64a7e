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
/* report.hpp - CSV and text renderings of results. Output is '.'-decimal,
 * comma separated, LF terminated and independent of the global locale.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

#include "gqf/curves.hpp"
#include "gqf/exponent.hpp"
#include "gqf/outage.hpp"
#include "gqf/rates.hpp"

namespace gqf::report {

/// printf-style %.<digits>g; snprintf in the "C" locale.
inline std::string sig(double v, int digits = 6) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline constexpr std::string_view kOutageHeader =
    "snr_db,samples,p_r1,p_r1u,p_r2,p_r2u,p_r12,p_r12u,p_union,ci_halfwidth";

inline std::string outage_row(const OutageEstimate& e) {
  std::string s = sig(e.snr_db) + "," + std::to_string(e.samples);
  for (Event ev : kAllEvents) s += "," + sig(e.p_hat(ev));
  s += "," + sig(e.p_union()) + "," + sig(e.ci_halfwidth());
  return s;
}

inline std::string outage_csv(std::span<const OutageEstimate> rows) {
  std::string s{kOutageHeader};
  s += '\n';
  for (const auto& e : rows) s += outage_row(e) + '\n';
  return s;
}

inline constexpr std::string_view kRatesHeader = "i_r1,i_r1u,i_r2,i_r2u,i_r12,i_r12u,sigma_q2";

inline std::string rates_csv(const RateVector& v) {
  std::string s{kRatesHeader};
  s += '\n';
  bool first = true;
  for (double x : v.values()) {
    s += (first ? "" : ",") + sig(x, 12);
    first = false;
  }
  s += "," + sig(v.sigma_q2, 12) + '\n';
  return s;
}

inline constexpr std::string_view kExponentHeader = "constraint,method,value,a11,a21,a1r,a2r,ard,active_case";

inline std::string exponent_row(const ExponentResult& r) {
  std::string s = std::string(event_name(r.event)) + "," + method_name(r.method) + "," + sig(r.value, 10);
  for (double a : r.argmin) s += "," + sig(a, 10);
  s += "," + r.active_case;
  return s;
}

/// Header `r,<scheme>...`; d columns use 10 significant digits.
inline std::string dmt_csv(std::span<const DmtCurve> curves) {
  std::string s = "r";
  for (const auto& c : curves) s += std::string(",d_") + scheme_name(c.scheme);
  s += '\n';
  if (curves.empty()) return s;
  for (std::size_t i = 0; i < curves.front().points.size(); ++i) {
    s += sig(curves.front().points[i].r, 10);
    for (const auto& c : curves) s += "," + sig(c.points[i].d, 10);
    s += '\n';
  }
  return s;
}

inline std::string case_table_text(Event e, std::span<const CaseProfile> rows) {
  std::string s = std::string("constraint ") + event_name(e) + "\n";
  s += "case_id,branch pieces,feasible,min_exponent(r)\n";
  for (const auto& row : rows) {
    s += row.id + ",(";
    for (std::size_t j = 0; j < row.outcomes.size(); ++j) s += (j ? " | " : "") + row.outcomes[j];
    s += std::string("),") + (row.feasible ? "yes" : "no") + "," + row.minimum.to_string() + "\n";
  }
  return s;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gqf::report
