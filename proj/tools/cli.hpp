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
/* cli.hpp - the `gqf` command line: rates, sweep, exponent, tables, dmt,
 * and replay of a run manifest.
 *
 * Exit codes: 0 success, 1 runtime error, 2 usage error.
 */
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqf/gqf.hpp"

namespace gqf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parameters and output checksum of one run; replaying `args` must
/// reproduce the same output bytes.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> args;
  nlohmann::json parameters = nlohmann::json::object();
  std::string version = kVersion;
  std::string checksum;

  nlohmann::json to_json() const {
    return {{"tool", "gqf"},          {"version", version}, {"subcommand", subcommand},
            {"args", args},           {"parameters", parameters}, {"checksum_fnv1a64", checksum}};
  }
  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.parameters = j.value("parameters", nlohmann::json::object());
    m.version = j.value("version", std::string{});
    m.checksum = j.at("checksum_fnv1a64").get<std::string>();
    return m;
  }
};

namespace detail {

inline Complex parse_coefficient(const std::string& text) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double re = 0.0, im = 0.0;
  if (!(in >> re)) throw std::invalid_argument("bad channel coefficient '" + text + "'");
  if (in.peek() == ',') {
    in.get();
    if (!(in >> im)) throw std::invalid_argument("bad channel coefficient '" + text + "'");
  }
  if (!in.eof() && in.peek() != std::char_traits<char>::eof()) {
    throw std::invalid_argument("bad channel coefficient '" + text + "'");
  }
  return {re, im};
}

inline Event parse_event(const std::string& name) {
  for (Event e : kAllEvents) {
    if (name == event_name(e)) return e;
  }
  throw std::invalid_argument("unknown constraint '" + name + "'");
}

inline Method parse_method(const std::string& name) {
  for (Method m : {Method::lp, Method::cases, Method::grid}) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

inline Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::gqf_closed, Scheme::gqf_computed, Scheme::cf, Scheme::upper}) {
    if (name == scheme_name(s)) return s;
  }
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

// Rate flags shared by `rates` and `sweep`.
struct RateFlags {
  double beta = 0.5;
  std::optional<double> r, r_u, r1, r2, r_u_abs;

  void attach(CLI::App* app) {
    app->add_option("--beta", beta, "first-slot fraction of the block")->capture_default_str();
    app->add_option("--r", r, "total multiplexing gain (R1 = R2 = r/2 log2 SNR)");
    app->add_option("--ru", r_u, "quantizer multiplexing gain (R_U = r_u log2 SNR)");
    app->add_option("--R1", r1, "absolute rate of source 1 [bits/use]");
    app->add_option("--R2", r2, "absolute rate of source 2 [bits/use]");
    app->add_option("--RU", r_u_abs, "absolute quantizer rate [bits/use]");
  }

  SchemeConfig config(double snr_db) const {
    const bool absolute = r1 || r2 || r_u_abs;
    if (absolute && (r || r_u)) throw std::invalid_argument("mix of --r/--ru and --R1/--R2/--RU");
    SchemeConfig cfg = absolute ? SchemeConfig::with_rates(snr_db, beta, r1.value_or(0.0), r2.value_or(0.0),
                                                           r_u_abs.value_or(0.0))
                                : SchemeConfig::with_gains(snr_db, beta, r.value_or(0.0), r_u.value_or(0.5));
    cfg.validate();
    return cfg;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"beta", beta}};
    if (r) j["r"] = *r;
    if (r_u) j["r_u"] = *r_u;
    if (r1) j["R1"] = *r1;
    if (r2) j["R2"] = *r2;
    if (r_u_abs) j["RU"] = *r_u_abs;
    return j;
  }
};

}  // namespace detail

/// Runs the command line; output goes to `out` unless --out is given.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

inline const CLI::Validator positive(
    [](std::string& v) { return v.find_first_not_of("0") == std::string::npos ? "must be positive" : ""; }, "POSITIVE");

struct Outputs {
  std::string out_path;
  std::string manifest_path;

  void attach(CLI::App* app) {
    app->add_option("--out", out_path, "write CSV/text here instead of stdout");
    app->add_option("--manifest", manifest_path, "JSON run manifest path (default <out>.manifest.json)");
  }
};

inline void emit(const std::string& text, const Outputs& o, RunManifest manifest, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + o.out_path);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + o.out_path);
  }
  // --out always gets a manifest next to it unless one is named explicitly
  const std::string path = !o.manifest_path.empty() ? o.manifest_path
                           : o.out_path.empty()     ? std::string{}
                                                    : o.out_path + ".manifest.json";
  if (!path.empty()) {
    manifest.checksum = report::fnv1a64(text);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << manifest.to_json().dump(2) << '\n';
  }
}

// Arguments with --out/--manifest stripped, as stored in manifests.
inline std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outage and diversity analysis of GQF relaying on the half-duplex MARC", "gqf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // rates
  auto* rates = app.add_subcommand("rates", "instantaneous mutual information for one channel");
  std::string h1d, h2d, h1r, h2r, hrd;
  double rates_snr_db = 0.0;
  detail::RateFlags rates_flags;
  detail::Outputs rates_io;
  rates->add_option("--h1d", h1d, "S1->D coefficient, 're' or 're,im'")->required();
  rates->add_option("--h2d", h2d, "S2->D coefficient")->required();
  rates->add_option("--h1r", h1r, "S1->R coefficient")->required();
  rates->add_option("--h2r", h2r, "S2->R coefficient")->required();
  rates->add_option("--hrd", hrd, "R->D coefficient")->required();
  rates->add_option("--snr-db", rates_snr_db, "transmit SNR in dB")->required();
  rates_flags.attach(rates);
  rates_io.attach(rates);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo outage probability over an SNR grid");
  std::vector<double> sweep_grid;
  std::vector<double> variances;
  std::uint64_t samples = 0, seed = 0;
  unsigned workers = 1;
  bool fit_slope = false;
  detail::RateFlags sweep_flags;
  detail::Outputs sweep_io;
  sweep->add_option("--snr-db", sweep_grid, "comma-separated SNR grid in dB, strictly increasing")
      ->required()
      ->delimiter(',');
  sweep->add_option("--samples", samples, "realizations per grid point")->required()->check(detail::positive);
  sweep->add_option("--seed", seed, "random seed")->required();
  sweep->add_option("--workers", workers, "worker threads; never changes the output")->check(detail::positive);
  sweep->add_option("--variances", variances, "five link variances 1d,2d,1r,2r,rd (default all 1)")
      ->delimiter(',')
      ->expected(5);
  sweep->add_flag("--fit-slope", fit_slope, "print the fitted diversity slope to stderr");
  sweep_flags.attach(sweep);
  sweep_io.attach(sweep);

  // exponent
  auto* exponent = app.add_subcommand("exponent", "high-SNR outage exponents of the six events");
  std::string constraint = "all", method = "lp";
  double exp_r = 0.0, exp_beta = 0.5, exp_ru = 0.5, step = 0.05, box = 2.0;
  detail::Outputs exp_io;
  exponent->add_option("--constraint", constraint, "r1|r1u|r2|r2u|r12|r12u|all")->capture_default_str();
  exponent->add_option("--r", exp_r, "total multiplexing gain")->required();
  exponent->add_option("--beta", exp_beta)->capture_default_str();
  exponent->add_option("--ru", exp_ru)->capture_default_str();
  exponent->add_option("--method", method, "lp|cases|grid")->capture_default_str();
  exponent->add_option("--step", step, "grid step (grid method)")->capture_default_str();
  exponent->add_option("--box", box, "grid extent per exponent (grid method)")->capture_default_str();
  exp_io.attach(exponent);

  // tables
  auto* tables = app.add_subcommand("tables", "branch-by-branch case tables of the exponent problems");
  std::string table_constraint = "all";
  double tab_beta = 0.5, tab_ru = 0.5;
  detail::Outputs tab_io;
  tables->add_option("--constraint", table_constraint, "r1|r1u|r2|r2u|r12|r12u|all")->capture_default_str();
  tables->add_option("--beta", tab_beta)->capture_default_str();
  tables->add_option("--ru", tab_ru)->capture_default_str();
  tab_io.attach(tables);

  // dmt
  auto* dmt = app.add_subcommand("dmt", "diversity-multiplexing tradeoff curves");
  std::size_t points = 101;
  double dmt_beta = 0.5, dmt_ru = 0.5;
  std::vector<std::string> schemes{"gqf", "gqf_computed", "cf", "upper"};
  detail::Outputs dmt_io;
  dmt->add_option("--points", points, "uniform r grid size on [0, 1]")->capture_default_str();
  dmt->add_option("--beta", dmt_beta)->capture_default_str();
  dmt->add_option("--ru", dmt_ru)->capture_default_str();
  dmt->add_option("--schemes", schemes, "columns: gqf,gqf_computed,cf,upper")->delimiter(',');
  dmt_io.attach(dmt);

  // replay
  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output checksums");
  std::string manifest_in;
  replay->add_option("--manifest", manifest_in, "manifest written by --manifest")->required();

  std::vector<const char*> argv{"gqf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  manifest.args = detail::replayable_args(args);
  manifest.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (rates->parsed()) {
      const ChannelRealization h{detail::parse_coefficient(h1d), detail::parse_coefficient(h2d),
                                 detail::parse_coefficient(h1r), detail::parse_coefficient(h2r),
                                 detail::parse_coefficient(hrd)};
      const SchemeConfig cfg = rates_flags.config(rates_snr_db);
      manifest.parameters = rates_flags.to_json();
      manifest.parameters["snr_db"] = rates_snr_db;
      detail::emit(report::rates_csv(instantaneous_rates(h, cfg)), rates_io, manifest, out);
    } else if (sweep->parsed()) {
      FadingParams params;
      if (!variances.empty()) std::copy(variances.begin(), variances.end(), params.variance.begin());
      params.validate();
      const SchemeConfig cfg = sweep_flags.config(sweep_grid.front());
      const auto est = sweep_outage(cfg, sweep_grid, params, samples, seed, workers);
      manifest.parameters = sweep_flags.to_json();
      manifest.parameters["snr_db"] = sweep_grid;
      manifest.parameters["samples"] = samples;
      manifest.parameters["seed"] = seed;
      manifest.parameters["variances"] = params.variance;
      detail::emit(report::outage_csv(est), sweep_io, manifest, out);
      if (fit_slope) err << "slope=" << report::sig(fit_diversity_slope(est)) << '\n';
    } else if (exponent->parsed()) {
      const ExponentParams p{exp_beta, exp_r, exp_ru};
      p.validate();
      const Method m = detail::parse_method(method);
      std::string text{report::kExponentHeader};
      text += '\n';
      if (constraint == "all") {
        const auto res = solve_all(p, m, step, box);
        for (const auto& r : res) text += report::exponent_row(r) + '\n';
        const auto bound = combine_min(res);
        ExponentResult u = res[index_of(bound.binding)];
        u.active_case = std::string("binding=") + event_name(bound.binding);
        std::string row = report::exponent_row(u);
        text += "min" + row.substr(row.find(',')) + '\n';
      } else {
        const auto region = build_constraint(detail::parse_event(constraint), p);
        text += report::exponent_row(solve(region, m, step, box)) + '\n';
      }
      manifest.parameters = {{"constraint", constraint}, {"r", exp_r},   {"beta", exp_beta}, {"r_u", exp_ru},
                             {"method", method},         {"step", step}, {"box", box}};
      detail::emit(text, exp_io, manifest, out);
    } else if (tables->parsed()) {
      ExponentParams{tab_beta, 0.0, tab_ru}.validate();
      std::string text;
      for (Event e : kAllEvents) {
        if (table_constraint != "all" && detail::parse_event(table_constraint) != e) continue;
        if (!text.empty()) text += '\n';
        text += report::case_table_text(e, case_table(e, tab_beta, tab_ru));
      }
      if (text.empty()) throw std::invalid_argument("unknown constraint '" + table_constraint + "'");
      manifest.parameters = {{"constraint", table_constraint}, {"beta", tab_beta}, {"r_u", tab_ru}};
      detail::emit(text, tab_io, manifest, out);
    } else if (dmt->parsed()) {
      ExponentParams{dmt_beta, 0.0, dmt_ru}.validate();
      const auto grid = uniform_r_grid(points);
      std::vector<DmtCurve> curves;
      for (const auto& name : schemes) {
        const Scheme s = detail::parse_scheme(name);
        curves.push_back(s == Scheme::gqf_computed ? dmt_computed(grid, dmt_beta, dmt_ru) : dmt_closed_curve(s, grid));
      }
      manifest.parameters = {{"points", points}, {"beta", dmt_beta}, {"r_u", dmt_ru}, {"schemes", schemes}};
      detail::emit(report::dmt_csv(curves), dmt_io, manifest, out);
    } else if (replay->parsed()) {
      std::ifstream f(manifest_in);
      if (!f) throw std::runtime_error("cannot open " + manifest_in);
      const auto m = RunManifest::from_json(nlohmann::json::parse(f));
      std::ostringstream replayed, replay_err;
      const int code = run(m.args, replayed, replay_err);
      if (code != kExitOk) {
        err << replay_err.str();
        return code;
      }
      const std::string sum = report::fnv1a64(replayed.str());
      out << "checksum " << sum << (sum == m.checksum ? " matches" : " DIFFERS from " + m.checksum) << '\n';
      return sum == m.checksum ? kExitOk : kExitRuntime;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace gqf::cli
