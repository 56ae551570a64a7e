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
/* exponent.hpp - high-SNR outage exponents of the GQF scheme.
 *
 * With |h_j|^2 = SNR^(-alpha_j), every outage event becomes, at high SNR, a
 * region of the nonnegative orthant of the form
 *
 *     threshold > sum_j weight_j * max(piece_j1(alpha), ..., piece_jk(alpha), 0)
 *
 * with affine pieces. The diversity order of the event is the infimum of
 * alpha_11 + alpha_21 + alpha_1R + alpha_2R + alpha_RD over that region. It is
 * computed three ways: one linear program over the epigraph of the clamped
 * maxima, enumeration of every branch of the maxima (one small LP each), and
 * an exhaustive grid search.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqf/channel.hpp"
#include "gqf/lp.hpp"
#include "gqf/outage.hpp"
#include "gqf/rates.hpp"

namespace gqf {

/// Exponent vector (alpha_11, alpha_21, alpha_1R, alpha_2R, alpha_RD), indexed by Link.
using Alpha = std::array<double, kLinkCount>;

inline double alpha_sum(const Alpha& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

inline const char* alpha_name(Link l) {
  constexpr std::array<const char*, kLinkCount> names = {"a11", "a21", "a1r", "a2r", "ard"};
  return names[static_cast<std::size_t>(l)];
}

namespace detail {

inline std::string format_number(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

struct AffineForm {
  double constant = 0.0;
  Alpha coeff{};

  static AffineForm constant_form(double c) { return {c, {}}; }

  /// 1 - alpha_link
  static AffineForm one_minus(Link l) {
    AffineForm f{1.0, {}};
    f.coeff[static_cast<std::size_t>(l)] = -1.0;
    return f;
  }

  double operator()(const Alpha& a) const {
    double v = constant;
    for (std::size_t k = 0; k < kLinkCount; ++k) v += coeff[k] * a[k];
    return v;
  }

  AffineForm operator-(const AffineForm& o) const {
    AffineForm f{constant - o.constant, {}};
    for (std::size_t k = 0; k < kLinkCount; ++k) f.coeff[k] = coeff[k] - o.coeff[k];
    return f;
  }

  std::string to_string() const {
    std::string s;
    if (constant != 0.0) s = detail::format_number(constant);
    for (std::size_t k = 0; k < kLinkCount; ++k) {
      const double c = coeff[k];
      if (c == 0.0) continue;
      if (c == 1.0) {
        s += s.empty() ? "" : "+";
      } else if (c == -1.0) {
        s += "-";
      } else {
        s += (c > 0.0 && !s.empty() ? "+" : "") + detail::format_number(c) + "*";
      }
      s += alpha_name(kAllLinks[k]);
    }
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

/// weight * max(pieces..., 0)
struct MaxTerm {
  double weight = 1.0;
  std::vector<AffineForm> pieces;

  double operator()(const Alpha& a) const {
    double m = 0.0;
    for (const auto& p : pieces) m = std::max(m, p(a));
    return weight * m;
  }
};

/// One convex outage region in alpha space: outage iff threshold > sum of terms.
struct PiecewiseConstraint {
  Event event = Event::r1;
  double threshold = 0.0;
  std::vector<MaxTerm> terms;
  /// Normalized rate (mutual information / log2 SNR) = rate_scale * sum of terms.
  double rate_scale = 1.0;

  double rhs(const Alpha& a) const {
    double s = 0.0;
    for (const auto& t : terms) s += t(a);
    return s;
  }
  bool in_outage(const Alpha& a) const { return threshold > rhs(a); }

  void validate() const {
    if (terms.empty()) throw std::invalid_argument("constraint has no terms");
    for (const auto& t : terms) {
      if (!(t.weight > 0.0)) throw std::invalid_argument("term weights must be positive");
      if (t.pieces.empty()) throw std::invalid_argument("term has no pieces");
    }
  }
};

/// Outage region of one event as a union of convex regimes. At r_u >= beta the
/// quantizer noise never grows with SNR and there is exactly one regime.
struct OutageRegion {
  Event event = Event::r1;
  std::vector<PiecewiseConstraint> regimes;

  double rhs(const Alpha& a) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : regimes) best = std::min(best, c.rhs(a));
    return best;
  }
  bool in_outage(const Alpha& a) const {
    return std::any_of(regimes.begin(), regimes.end(), [&](const auto& c) { return c.in_outage(a); });
  }
  double rate_scale() const { return regimes.front().rate_scale; }
  const PiecewiseConstraint& primary() const { return regimes.front(); }
};

struct ExponentParams {
  double beta = 0.5;
  double r = 0.0;
  double r_u = 0.5;

  void validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0, 1]");
    if (!(r_u >= 0.0) || !std::isfinite(r_u)) throw std::invalid_argument("r_u must be >= 0");
  }
};

namespace detail {

using P = AffineForm;

inline P one_minus(Link l) { return AffineForm::one_minus(l); }

// Source-specific links: (direct, relay) of source 1 or 2.
struct SourceLinks {
  Link direct;
  Link relay;
  Link other_relay;
};

inline SourceLinks source_links(bool first) {
  return first ? SourceLinks{Link::s1_dest, Link::s1_relay, Link::s2_relay}
               : SourceLinks{Link::s2_dest, Link::s2_relay, Link::s1_relay};
}

// Relay observation forwarded through the quantizer, sum of both sources:
// at high SNR its exponent is min(max(1-a1R, 1-a2R), r_u/beta).
inline std::vector<std::vector<P>> relay_sum_options(double cap) {
  std::vector<std::vector<P>> opts{{one_minus(Link::s1_relay), one_minus(Link::s2_relay)}};
  if (cap < 1.0) opts.push_back({P::constant_form(cap)});
  return opts;
}

// Single-source relay observation: exponent 1-aiR - max(0, max(0,1-a1R,1-a2R) - cap),
// i.e. the minimum of 1-aiR, cap and cap + a_jR - a_iR.
inline std::vector<P> relay_single_options(const SourceLinks& s, double cap) {
  std::vector<P> opts{one_minus(s.relay)};
  if (cap < 1.0) {
    opts.push_back(P::constant_form(cap));
    P mixed = P::constant_form(cap);
    mixed.coeff[static_cast<std::size_t>(s.other_relay)] = 1.0;
    mixed.coeff[static_cast<std::size_t>(s.relay)] = -1.0;
    opts.push_back(mixed);
  }
  return opts;
}

inline OutageRegion build_single(bool first, const ExponentParams& p) {
  const auto s = source_links(first);
  const double cap = p.r_u / p.beta;
  OutageRegion region{first ? Event::r1 : Event::r2, {}};
  for (const P& relay : relay_single_options(s, cap)) {
    PiecewiseConstraint c;
    c.event = region.event;
    c.threshold = p.r / 2.0;
    c.rate_scale = 1.0;
    c.terms = {MaxTerm{p.beta, {one_minus(s.direct), relay}}, MaxTerm{1.0 - p.beta, {one_minus(s.direct)}}};
    region.regimes.push_back(std::move(c));
  }
  return region;
}

inline OutageRegion build_single_with_index(bool first, const ExponentParams& p) {
  const auto s = source_links(first);
  const double cap = p.r_u / p.beta;
  const double w2 = (1.0 - p.beta) / p.beta;
  OutageRegion region{first ? Event::r1u : Event::r2u, {}};
  for (auto& relay : relay_sum_options(cap)) {
    PiecewiseConstraint c;
    c.event = region.event;
    c.threshold = (p.r / 2.0 + p.r_u) / p.beta;
    c.rate_scale = p.beta;
    c.terms = {MaxTerm{1.0, {one_minus(s.direct)}}, MaxTerm{1.0, std::move(relay)},
               MaxTerm{w2, {one_minus(s.direct), one_minus(Link::relay_dest)}}};
    region.regimes.push_back(std::move(c));
  }
  return region;
}

inline OutageRegion build_sum(const ExponentParams& p) {
  const double cap = p.r_u / p.beta;
  const double w2 = (1.0 - p.beta) / p.beta;
  OutageRegion region{Event::r12, {}};
  for (auto& relay : relay_sum_options(cap)) {
    std::vector<P> slot1{one_minus(Link::s1_dest), one_minus(Link::s2_dest)};
    slot1.insert(slot1.end(), relay.begin(), relay.end());
    PiecewiseConstraint c;
    c.event = Event::r12;
    c.threshold = p.r / p.beta;
    c.rate_scale = p.beta;
    c.terms = {MaxTerm{1.0, std::move(slot1)}, MaxTerm{w2, {one_minus(Link::s1_dest), one_minus(Link::s2_dest)}}};
    region.regimes.push_back(std::move(c));
  }
  return region;
}

inline OutageRegion build_sum_with_index(const ExponentParams& p) {
  const double cap = p.r_u / p.beta;
  const double w2 = (1.0 - p.beta) / p.beta;
  OutageRegion region{Event::r12u, {}};
  for (auto& relay : relay_sum_options(cap)) {
    PiecewiseConstraint c;
    c.event = Event::r12u;
    c.threshold = (p.r + p.r_u) / p.beta;
    c.rate_scale = p.beta;
    c.terms = {MaxTerm{1.0, {one_minus(Link::s1_dest), one_minus(Link::s2_dest)}}, MaxTerm{1.0, std::move(relay)},
               MaxTerm{w2, {one_minus(Link::s1_dest), one_minus(Link::s2_dest), one_minus(Link::relay_dest)}}};
    region.regimes.push_back(std::move(c));
  }
  return region;
}

}  // namespace detail

/// Alpha-space outage region of one event.
///
/// R1/R2 keep the raw form (threshold r/2, weights beta and 1-beta); the other
/// four are divided through by beta (thresholds (r/2 + r_u)/beta, r/beta and
/// (r + r_u)/beta), which at beta = r_u = 1/2 gives r+1, 2r and 2r+1 with
/// unit weights. The relay observation is capped by r_u/beta through the
/// quantizer noise; for r_u >= beta the cap is inactive and each region is a
/// single convex set.
inline OutageRegion build_constraint(Event e, const ExponentParams& p) {
  p.validate();
  switch (e) {
    case Event::r1: return detail::build_single(true, p);
    case Event::r2: return detail::build_single(false, p);
    case Event::r1u: return detail::build_single_with_index(true, p);
    case Event::r2u: return detail::build_single_with_index(false, p);
    case Event::r12: return detail::build_sum(p);
    case Event::r12u: return detail::build_sum_with_index(p);
  }
  throw std::invalid_argument("unknown event");
}

inline std::array<OutageRegion, kEventCount> build_constraints(double beta, double r, double r_u) {
  const ExponentParams p{beta, r, r_u};
  std::array<OutageRegion, kEventCount> out;
  for (Event e : kAllEvents) out[index_of(e)] = build_constraint(e, p);
  return out;
}

enum class Method { lp, cases, grid };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::lp: return "lp";
    case Method::cases: return "cases";
    case Method::grid: return "grid";
  }
  return "?";
}

struct ExponentResult {
  Event event = Event::r1;
  double value = std::numeric_limits<double>::infinity();
  Alpha argmin{};
  Method method = Method::lp;
  std::size_t regime = 0;
  std::string active_case;  // cases method only
};

namespace detail {

inline constexpr double kLexSlack = 1e-11;

inline std::vector<double> row_of(const AffineForm& f, std::size_t width) {
  std::vector<double> row(width, 0.0);
  std::copy(f.coeff.begin(), f.coeff.end(), row.begin());
  return row;
}

// Re-solves an LP whose optimum over the first five variables is `optimum`,
// returning the lexicographically smallest optimal alpha.
inline Alpha lex_smallest_argmin(lp::LinearProgram prog, double optimum) {
  const std::size_t width = prog.num_vars();
  std::vector<double> sum_row(width, 0.0);
  std::fill(sum_row.begin(), sum_row.begin() + kLinkCount, 1.0);
  prog.add_le(sum_row, optimum + kLexSlack);
  Alpha a{};
  for (std::size_t k = 0; k < kLinkCount; ++k) {
    std::fill(prog.cost.begin(), prog.cost.end(), 0.0);
    prog.cost[k] = 1.0;
    const auto sol = lp::solve(prog);
    if (sol.status != lp::Status::optimal) throw std::runtime_error("lexicographic refinement lost feasibility");
    a[k] = std::max(0.0, sol.x[k]);
    std::vector<double> fix(width, 0.0);
    fix[k] = 1.0;
    prog.add_le(fix, sol.x[k] + kLexSlack);
  }
  for (double& v : a) {
    if (std::abs(v) < 1e-10) v = 0.0;
  }
  return a;
}

// Epigraph LP: variables alpha (5) then one t per term.
inline lp::LinearProgram epigraph_program(const PiecewiseConstraint& c) {
  const std::size_t width = kLinkCount + c.terms.size();
  lp::LinearProgram prog(width);
  std::fill(prog.cost.begin(), prog.cost.begin() + kLinkCount, 1.0);
  std::vector<double> budget(width, 0.0);
  for (std::size_t j = 0; j < c.terms.size(); ++j) {
    const std::size_t tj = kLinkCount + j;
    for (const auto& piece : c.terms[j].pieces) {
      auto row = row_of(piece, width);
      row[tj] = -1.0;
      prog.add_le(std::move(row), -piece.constant);
    }
    budget[tj] = c.terms[j].weight;
  }
  prog.add_le(std::move(budget), c.threshold);
  return prog;
}

inline bool lex_less(const Alpha& a, const Alpha& b) {
  for (std::size_t k = 0; k < kLinkCount; ++k) {
    if (std::abs(a[k] - b[k]) > 1e-9) return a[k] < b[k];
  }
  return false;
}

}  // namespace detail

namespace detail {

// nullopt when the region is empty, which happens for capped regimes whose
// constant relay piece alone exceeds the threshold.
inline std::optional<ExponentResult> try_solve_lp(const PiecewiseConstraint& c) {
  c.validate();
  const auto prog = epigraph_program(c);
  const auto sol = lp::solve(prog);
  if (sol.status == lp::Status::infeasible) return std::nullopt;
  if (sol.status != lp::Status::optimal) throw std::logic_error("exponent LP is unbounded");
  if (!sol.certified()) throw std::runtime_error("exponent LP optimum failed its dual certificate");
  ExponentResult res;
  res.event = c.event;
  res.method = Method::lp;
  res.value = sol.objective;
  res.argmin = lex_smallest_argmin(prog, sol.objective);
  return res;
}

}  // namespace detail

/// Diversity order of one convex region by a single LP.
inline ExponentResult solve_lp(const PiecewiseConstraint& c) {
  auto res = detail::try_solve_lp(c);
  if (!res) throw std::logic_error("exponent LP is infeasible");
  return *res;
}

/// Diversity order of an event: minimum over its nonempty regimes.
inline ExponentResult solve_lp(const OutageRegion& region) {
  ExponentResult best;
  best.event = region.event;
  bool found = false;
  for (std::size_t k = 0; k < region.regimes.size(); ++k) {
    auto r = detail::try_solve_lp(region.regimes[k]);
    if (!r) continue;
    r->regime = k;
    if (!found || r->value < best.value - 1e-12 ||
        (std::abs(r->value - best.value) <= 1e-12 && detail::lex_less(r->argmin, best.argmin))) {
      best = *r;
      found = true;
    }
  }
  if (!found) throw std::logic_error("exponent LP is infeasible");
  return best;
}

/// Outcome selected in each max-term: a piece index, or the 0-clamp.
using Branch = std::vector<std::size_t>;

inline constexpr std::size_t kClamp = std::numeric_limits<std::size_t>::max();

struct CaseRow {
  std::size_t regime = 0;
  Branch branch;
  std::string id;                     // "Case 1-2-3", 1-based, clamp numbered last
  std::vector<std::string> outcomes;  // selected piece per term, "0" for the clamp
  bool feasible = false;
  double minimum = std::numeric_limits<double>::infinity();
  Alpha argmin{};
  bool optimal = false;
};

struct CaseAnalysis {
  ExponentResult best;
  std::vector<CaseRow> rows;
};

namespace detail {

inline std::string case_id(const PiecewiseConstraint& c, const Branch& b, std::size_t regime, std::size_t regimes) {
  std::string id = regimes > 1 ? "Regime " + std::to_string(regime + 1) + " Case " : "Case ";
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (j) id += "-";
    id += std::to_string(b[j] == kClamp ? c.terms[j].pieces.size() + 1 : b[j] + 1);
  }
  return id;
}

// Feasible set of one branch: the selected piece dominates its siblings and 0
// (or every piece is <= 0 under the clamp), and the weighted selections meet
// the threshold.
inline lp::LinearProgram branch_program(const PiecewiseConstraint& c, const Branch& b) {
  lp::LinearProgram prog(kLinkCount);
  std::fill(prog.cost.begin(), prog.cost.end(), 1.0);
  AffineForm total = AffineForm::constant_form(0.0);
  for (std::size_t j = 0; j < c.terms.size(); ++j) {
    const auto& pieces = c.terms[j].pieces;
    if (b[j] == kClamp) {
      for (const auto& q : pieces) prog.add_le(row_of(q, kLinkCount), -q.constant);
      continue;
    }
    const AffineForm& sel = pieces[b[j]];
    prog.add_le(row_of(AffineForm::constant_form(0.0) - sel, kLinkCount), sel.constant);
    for (std::size_t q = 0; q < pieces.size(); ++q) {
      if (q == b[j]) continue;
      const AffineForm diff = pieces[q] - sel;
      prog.add_le(row_of(diff, kLinkCount), -diff.constant);
    }
    const double w = c.terms[j].weight;
    total.constant += w * sel.constant;
    for (std::size_t k = 0; k < kLinkCount; ++k) total.coeff[k] += w * sel.coeff[k];
  }
  prog.add_le(row_of(total, kLinkCount), c.threshold - total.constant);
  return prog;
}

inline std::vector<Branch> all_branches(const PiecewiseConstraint& c) {
  std::vector<Branch> out{Branch{}};
  for (const auto& t : c.terms) {
    std::vector<Branch> next;
    for (const auto& prefix : out) {
      for (std::size_t k = 0; k <= t.pieces.size(); ++k) {
        Branch b = prefix;
        b.push_back(k == t.pieces.size() ? kClamp : k);
        next.push_back(std::move(b));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Minimum of sum(alpha) over one branch, or nullopt when the branch is empty.
inline std::optional<std::pair<double, Alpha>> solve_branch(const PiecewiseConstraint& c, const Branch& b) {
  if (b.size() != c.terms.size()) throw std::invalid_argument("branch arity does not match constraint");
  const auto prog = detail::branch_program(c, b);
  const auto sol = lp::solve(prog);
  if (sol.status == lp::Status::infeasible) return std::nullopt;
  if (sol.status != lp::Status::optimal || !sol.certified()) throw std::runtime_error("branch LP failed");
  return std::make_pair(sol.objective, detail::lex_smallest_argmin(prog, sol.objective));
}

/// Diversity order by exhaustive enumeration of the branches of every max-term.
inline CaseAnalysis solve_by_cases(const OutageRegion& region) {
  CaseAnalysis out;
  out.best.event = region.event;
  out.best.method = Method::cases;
  for (std::size_t k = 0; k < region.regimes.size(); ++k) {
    const auto& c = region.regimes[k];
    c.validate();
    for (const auto& b : detail::all_branches(c)) {
      CaseRow row;
      row.regime = k;
      row.branch = b;
      row.id = detail::case_id(c, b, k, region.regimes.size());
      for (std::size_t j = 0; j < b.size(); ++j) {
        row.outcomes.push_back(b[j] == kClamp ? "0" : c.terms[j].pieces[b[j]].to_string());
      }
      if (auto r = solve_branch(c, b)) {
        row.feasible = true;
        row.minimum = r->first;
        row.argmin = r->second;
      }
      out.rows.push_back(std::move(row));
    }
  }
  for (const auto& row : out.rows) out.best.value = std::min(out.best.value, row.minimum);
  if (!std::isfinite(out.best.value)) throw std::logic_error("no feasible branch");
  bool first = true;
  for (auto& row : out.rows) {
    row.optimal = row.feasible && row.minimum <= out.best.value + 1e-9;
    if (!row.optimal) continue;
    if (first || detail::lex_less(row.argmin, out.best.argmin)) {
      out.best.argmin = row.argmin;
      out.best.active_case = row.id;
      out.best.regime = row.regime;
      first = false;
    }
  }
  return out;
}

inline CaseAnalysis solve_by_cases(const PiecewiseConstraint& c) { return solve_by_cases(OutageRegion{c.event, {c}}); }

/// Exhaustive search of sum(alpha) over the grid {0, step, ..., box}^5
/// restricted to the closed region rhs(alpha) <= threshold.
inline ExponentResult solve_by_grid(const OutageRegion& region, double step = 0.05, double box = 2.0) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(box >= 2.0)) throw std::invalid_argument("grid box must be >= 2");
  const auto n = static_cast<long>(std::floor(box / step + 1e-9)) + 1;
  const long unreachable = 5 * (n - 1) + 1;
  long best = unreachable;
  std::array<long, kLinkCount> best_idx{};

  auto feasible = [&](const Alpha& a) {
    for (const auto& c : region.regimes) {
      if (c.rhs(a) <= c.threshold + 1e-12) return true;
    }
    return false;
  };

  Alpha a{};
  for (long i0 = 0; i0 < n && i0 < best; ++i0) {
    a[0] = static_cast<double>(i0) * step;
    for (long i1 = 0; i1 < n && i0 + i1 < best; ++i1) {
      a[1] = static_cast<double>(i1) * step;
      for (long i2 = 0; i2 < n && i0 + i1 + i2 < best; ++i2) {
        a[2] = static_cast<double>(i2) * step;
        for (long i3 = 0; i3 < n && i0 + i1 + i2 + i3 < best; ++i3) {
          a[3] = static_cast<double>(i3) * step;
          const long partial = i0 + i1 + i2 + i3;
          for (long i4 = 0; i4 < n && partial + i4 < best; ++i4) {
            a[4] = static_cast<double>(i4) * step;
            if (feasible(a)) {
              best = partial + i4;
              best_idx = {i0, i1, i2, i3, i4};
              break;
            }
          }
        }
      }
    }
  }
  if (best == unreachable) throw std::runtime_error("no feasible grid point: box/step too coarse");
  ExponentResult res;
  res.event = region.event;
  res.method = Method::grid;
  res.value = static_cast<double>(best) * step;
  for (std::size_t k = 0; k < kLinkCount; ++k) res.argmin[k] = static_cast<double>(best_idx[k]) * step;
  return res;
}

inline ExponentResult solve_by_grid(const PiecewiseConstraint& c, double step = 0.05, double box = 2.0) {
  return solve_by_grid(OutageRegion{c.event, {c}}, step, box);
}

inline ExponentResult solve(const OutageRegion& region, Method m, double step = 0.05, double box = 2.0) {
  switch (m) {
    case Method::lp: return solve_lp(region);
    case Method::cases: return solve_by_cases(region).best;
    case Method::grid: return solve_by_grid(region, step, box);
  }
  throw std::invalid_argument("unknown method");
}

/// The six per-event diversity orders at one operating point.
inline std::array<ExponentResult, kEventCount> solve_all(const ExponentParams& p, Method m = Method::lp,
                                                         double step = 0.05, double box = 2.0) {
  const auto regions = build_constraints(p.beta, p.r, p.r_u);
  std::array<ExponentResult, kEventCount> out;
  for (Event e : kAllEvents) out[index_of(e)] = solve(regions[index_of(e)], m, step, box);
  return out;
}

struct DmtLowerBound {
  double value = 0.0;
  Event binding = Event::r1;
};

/// Union-bound diversity: the smallest per-event exponent and the event attaining it.
inline DmtLowerBound combine_min(std::span<const ExponentResult, kEventCount> results) {
  DmtLowerBound out{std::numeric_limits<double>::infinity(), Event::r1};
  for (const auto& r : results) {
    if (r.value < out.value - 1e-12) out = {r.value, r.event};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Case minima as functions of r.

/// a + b r
struct AffineInR {
  double a = 0.0;
  double b = 0.0;

  double operator()(double r) const { return a + b * r; }

  std::string to_string() const {
    std::string s = detail::format_number(a);
    if (b == 0.0) return s;
    if (s == "0") s.clear();
    if (b == 1.0) return s + (s.empty() ? "r" : "+r");
    if (b == -1.0) return s + "-r";
    return s + (b > 0.0 && !s.empty() ? "+" : "") + detail::format_number(b) + "r";
  }
  friend bool operator==(const AffineInR&, const AffineInR&) = default;
};

struct AffineSegment {
  double lo = 0.0;
  double hi = 1.0;
  AffineInR f;
};

/// Convex piecewise-affine function of r on a closed interval.
struct PiecewiseAffineInR {
  std::vector<AffineSegment> segments;

  bool empty() const { return segments.empty(); }
  bool affine() const { return segments.size() == 1; }
  const AffineInR& leading() const { return segments.front().f; }

  std::string to_string() const {
    if (segments.empty()) return "infeasible";
    if (segments.size() == 1 && segments[0].lo == 0.0 && segments[0].hi == 1.0) return segments[0].f.to_string();
    std::string s;
    for (const auto& seg : segments) {
      if (!s.empty()) s += "; ";
      s += seg.f.to_string() + " on [" + detail::format_number(seg.lo) + "," + detail::format_number(seg.hi) + "]";
    }
    return s;
  }
};

namespace detail {

// Nearest rational with denominator <= 24, if within tol.
inline double snap(double v, double tol = 1e-7) {
  for (int d = 1; d <= 24; ++d) {
    const double n = std::round(v * d);
    if (std::abs(v - n / d) <= tol) return n / d;
  }
  return v;
}

inline void bisect_convex(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                          std::vector<AffineSegment>& out) {
  const double mid = 0.5 * (lo + hi);
  const double fmid = f(mid);
  if (std::abs(fmid - 0.5 * (flo + fhi)) <= 1e-10 || hi - lo < 1e-7) {
    const double b = (fhi - flo) / (hi - lo);
    out.push_back({lo, hi, {flo - b * lo, b}});
    return;
  }
  bisect_convex(f, lo, mid, flo, fmid, out);
  bisect_convex(f, mid, hi, fmid, fhi, out);
}

}  // namespace detail

/// Recovers a convex piecewise-affine function of r on [lo, hi] from point
/// evaluations. A chord that matches the function at its midpoint matches it
/// on the whole interval, so bisection terminates at the breakpoints;
/// coefficients are snapped to small rationals.
inline PiecewiseAffineInR profile_convex(const std::function<double(double)>& f, double lo = 0.0, double hi = 1.0) {
  PiecewiseAffineInR out;
  if (hi <= lo) {
    out.segments.push_back({lo, lo, {detail::snap(f(lo)), 0.0}});
    return out;
  }
  std::vector<AffineSegment> raw;
  detail::bisect_convex(f, lo, hi, f(lo), f(hi), raw);
  std::vector<AffineSegment> merged;
  for (auto seg : raw) {
    seg.f = {detail::snap(seg.f.a, 1e-6), detail::snap(seg.f.b, 1e-6)};
    if (seg.hi - seg.lo < 1e-6 && !raw.empty() && raw.size() > 1) continue;  // chord across a kink
    if (!merged.empty() && std::abs(merged.back().f.a - seg.f.a) < 1e-9 && std::abs(merged.back().f.b - seg.f.b) < 1e-9) {
      merged.back().hi = seg.hi;
    } else {
      merged.push_back(seg);
    }
  }
  for (std::size_t i = 1; i < merged.size(); ++i) {
    auto& l = merged[i - 1];
    auto& r = merged[i];
    const double x = detail::snap((r.f.a - l.f.a) / (l.f.b - r.f.b));
    l.hi = x;
    r.lo = x;
  }
  merged.front().lo = lo;
  merged.back().hi = hi;
  out.segments = std::move(merged);
  return out;
}

struct CaseProfile {
  std::size_t regime = 0;
  Branch branch;
  std::string id;
  std::vector<std::string> outcomes;
  bool feasible = false;       // for some r in [0, 1]
  PiecewiseAffineInR minimum;  // over the r-range where the branch is nonempty
};

/// Case table of one event at fixed (beta, r_u): every branch with its minimum
/// as a function of r in [0, 1].
inline std::vector<CaseProfile> case_table(Event e, double beta, double r_u) {
  const auto reference = build_constraint(e, {beta, 0.0, r_u});
  std::vector<CaseProfile> rows;
  for (std::size_t k = 0; k < reference.regimes.size(); ++k) {
    const auto& c0 = reference.regimes[k];
    for (const auto& b : detail::all_branches(c0)) {
      CaseProfile row;
      row.regime = k;
      row.branch = b;
      row.id = detail::case_id(c0, b, k, reference.regimes.size());
      for (std::size_t j = 0; j < b.size(); ++j) {
        row.outcomes.push_back(b[j] == kClamp ? "0" : c0.terms[j].pieces[b[j]].to_string());
      }
      auto at = [&](double r) -> std::optional<double> {
        const auto region = build_constraint(e, {beta, r, r_u});
        const auto sol = solve_branch(region.regimes[k], b);
        if (!sol) return std::nullopt;
        return sol->first;
      };
      // The threshold grows with r, so each branch is nonempty on some [r0, 1].
      if (!at(1.0)) {
        rows.push_back(std::move(row));
        continue;
      }
      double r0 = 0.0;
      if (!at(0.0)) {
        double infeasible = 0.0, feasible = 1.0;
        while (feasible - infeasible > 1e-12) {
          const double mid = 0.5 * (infeasible + feasible);
          (at(mid) ? feasible : infeasible) = mid;
        }
        r0 = detail::snap(feasible, 1e-9);
        if (!at(r0)) r0 = feasible;
      }
      row.feasible = true;
      row.minimum = profile_convex([&](double r) { return *at(r); }, r0, 1.0);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Finite-SNR check of the alpha-space forms.

struct ConsistencyEntry {
  Event event = Event::r1;
  double exact = 0.0;      // mutual information / log2 SNR
  double predicted = 0.0;  // rate_scale * rhs(alpha)
  double deviation = 0.0;
  bool within_tolerance = false;
  /// Deviation on the sum-rate event attributed to the determinant term
  /// that the printed alpha-space form leaves out. Reported, not failed.
  bool known_discrepancy = false;
};

struct ConsistencyReport {
  double snr = 0.0;
  Alpha alpha{};
  double tolerance = 0.05;
  std::array<ConsistencyEntry, kEventCount> entries{};

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const auto& e) { return e.within_tolerance || e.known_discrepancy; });
  }
};

/// Channel with |h_j|^2 = snr^(-alpha_j). h2R carries a quarter-turn phase so
/// the determinant |h1D h2R - h1R h2D|^2 equals |h1D h2R|^2 + |h1R h2D|^2
/// instead of cancelling for real gains.
inline ChannelRealization channel_from_alpha(const Alpha& a, double snr) {
  ChannelRealization h;
  for (Link l : kAllLinks) {
    h[l] = Complex(std::sqrt(std::pow(snr, -a[static_cast<std::size_t>(l)])), 0.0);
  }
  h.h2r = Complex(0.0, h.h2r.real());
  return h;
}

inline ConsistencyReport high_snr_consistency_check(const Alpha& alpha, double snr, double beta = 0.5,
                                                    double r_u = 0.5, double tolerance = 0.05) {
  if (!(snr >= 1e6)) throw std::invalid_argument("consistency check needs snr >= 1e6");
  for (double v : alpha) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("alpha must be finite and >= 0");
  }
  const SchemeConfig cfg{snr, beta, MultiplexingGains{0.0, r_u}};
  cfg.validate();
  const auto iv = instantaneous_rates(channel_from_alpha(alpha, snr), cfg).values();
  const auto regions = build_constraints(beta, 0.0, r_u);
  const double l = std::log2(snr);

  ConsistencyReport rep;
  rep.snr = snr;
  rep.alpha = alpha;
  rep.tolerance = tolerance;
  for (Event e : kAllEvents) {
    auto& entry = rep.entries[index_of(e)];
    const auto& region = regions[index_of(e)];
    entry.event = e;
    entry.exact = iv[index_of(e)] / l;
    entry.predicted = region.rate_scale() * region.rhs(alpha);
    entry.deviation = std::abs(entry.exact - entry.predicted);
    entry.within_tolerance = entry.deviation <= tolerance;
    entry.known_discrepancy = e == Event::r12 && !entry.within_tolerance;
  }
  return rep;
}

}  // namespace gqf
