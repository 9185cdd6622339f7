// Copyright 2026 the decokin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "decokin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "decokin/constants.hpp"
#include "decokin/csv.hpp"
#include "decokin/errors.hpp"

namespace decokin {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Sections {
  std::string source;
  // section -> key -> entry; section order preserved separately for channels
  std::map<std::string, std::map<std::string, Entry>> data;
  std::vector<std::string> channel_sections;  // in file order

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Sections tokenize(const std::string& text, const std::string& source) {
  Sections sec;
  sec.source = source;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') sec.fail(lineno, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) sec.fail(lineno, "empty section name");
      if (current.rfind("channels.", 0) == 0) {
        if (std::find(sec.channel_sections.begin(), sec.channel_sections.end(), current) ==
            sec.channel_sections.end()) {
          sec.channel_sections.push_back(current);
        }
      }
      sec.data[current];  // create
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) sec.fail(lineno, "expected 'key = value'");
    if (current.empty()) sec.fail(lineno, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) sec.fail(lineno, "empty key");
    if (value.empty()) sec.fail(lineno, "empty value for key '" + key + "'");
    auto [it, fresh] = sec.data[current].emplace(key, Entry{value, lineno, false});
    if (!fresh) sec.fail(lineno, "duplicate key '" + key + "' in [" + current + "]");
  }
  return sec;
}

class Reader {
 public:
  Reader(Sections& sec, const std::string& section) : sec_(sec), section_(section) {}

  bool has(const std::string& key) const {
    auto s = sec_.data.find(section_);
    return s != sec_.data.end() && s->second.count(key) > 0;
  }

  const Entry* find(const std::string& key) const {
    auto s = sec_.data.find(section_);
    if (s == sec_.data.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  [[noreturn]] void fail(const Entry& e, const std::string& msg) const {
    sec_.fail(e.line, "in [" + section_ + "]: " + msg);
  }

  std::string str(const std::string& key, const std::string& fallback = {}) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  // Numeric value with an optional unit suffix out of `units`; returns the
  // value multiplied by the unit factor.
  double number(const std::string& key, std::optional<double> fallback = std::nullopt,
                const std::map<std::string, double>& units = {},
                double default_unit = 1.0) const {
    const Entry* e = find(key);
    if (!e) {
      if (fallback) return *fallback;
      throw ValidationError(sec_.source + ": missing required key '" + key + "' in [" +
                            section_ + "]");
    }
    std::string v = e->value;
    double unit = default_unit;
    const auto space = v.find_last_of(" \t");
    if (space != std::string::npos) {
      const std::string suffix = trim(v.substr(space + 1));
      const auto u = units.find(suffix);
      if (u == units.end()) fail(*e, "unknown unit '" + suffix + "' for key '" + key + "'");
      unit = u->second;
      v = trim(v.substr(0, space));
    }
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      fail(*e, "cannot parse number '" + v + "' for key '" + key + "'");
    }
    return out * unit;
  }

  int integer(const std::string& key, int fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    int out = 0;
    const auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), out);
    if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size()) {
      fail(*e, "cannot parse integer '" + e->value + "' for key '" + key + "'");
    }
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "on" || e->value == "1") return true;
    if (e->value == "false" || e->value == "off" || e->value == "0") return false;
    fail(*e, "cannot parse boolean '" + e->value + "' for key '" + key + "'");
  }

 private:
  Sections& sec_;
  std::string section_;
};

const std::map<std::string, double> kMassUnits = {
    {"kg", 1.0}, {"u", constants::atomic_mass_unit}};

double length_unit_factor(const Reader& ch, const Sections& sec, const std::string& section) {
  const std::string unit = ch.str("unit", "nm");
  if (unit == "nm") return 1e-9;
  if (unit == "bohr") return constants::bohr_radius;
  if (unit == "m") return 1.0;
  throw ValidationError(sec.source + ": in [" + section + "]: unit must be nm, bohr or m, got '" +
                        unit + "'");
}

Channel read_channel(Sections& sec, const std::string& section) {
  Reader ch(sec, section);
  const double L = length_unit_factor(ch, sec, section);
  Channel out;
  out.label = section.substr(std::string("channels.").size());
  out.energy = ch.number("energy", 0.0);
  const double alpha = ch.number("alpha") * L;
  const double beta = ch.number("beta", 0.0) * L;
  out.a = Complex(alpha, -beta);
  out.b_red = Complex(ch.number("b_red_re", 0.0), ch.number("b_red_im", 0.0)) * (L * L);
  out.c_red = Complex(ch.number("c_red_re", 0.0), ch.number("c_red_im", 0.0)) * (L * L * L);
  try {
    out.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(sec.source + ": in [" + section + "]: " + err.what() +
                          " (rule: beta >= 0, all coefficients finite)");
  }
  return out;
}

}  // namespace

std::vector<double> ScenarioConfig::temperatures() const {
  if (!t_sweep) return {bath.T};
  std::vector<double> out;
  out.reserve(t_sweep->points);
  const auto& s = *t_sweep;
  for (int i = 0; i < s.points; ++i) {
    const double f = s.points == 1 ? 0.0 : static_cast<double>(i) / (s.points - 1);
    out.push_back(s.log_scale ? s.start * std::pow(s.stop / s.start, f)
                              : s.start + f * (s.stop - s.start));
  }
  return out;
}

std::vector<double> ScenarioConfig::time_grid(double zeta0) const {
  double tmax = run.t_max.value_or(0.0);
  if (tmax <= 0.0) {
    tmax = zeta0 > 0.0 ? 5.0 / zeta0 : 1.0;
  }
  std::vector<double> t(run.t_points);
  for (int i = 0; i < run.t_points; ++i) {
    t[i] = tmax * static_cast<double>(i) / (run.t_points - 1);
  }
  return t;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source_name, bool strict,
                            std::vector<std::string>* warnings) {
  Sections sec = tokenize(text, source_name);
  ScenarioConfig cfg;

  Reader bath(sec, "bath");
  if (bath.has("species")) {
    const std::string species = bath.str("species");
    const auto mass = constants::species_mass(species);
    if (!mass) {
      throw ValidationError(source_name + ": in [bath]: unknown species '" + species +
                            "' (known: He-3, He-4)");
    }
    cfg.bath.m = *mass;
  }
  if (bath.has("mass")) cfg.bath.m = bath.number("mass", std::nullopt, kMassUnits);
  if (cfg.bath.m <= 0.0) {
    throw ValidationError(source_name + ": [bath] needs 'species' or 'mass'");
  }
  cfg.bath.M = bath.number("tracer_mass", std::nullopt, kMassUnits);
  cfg.bath.n_gas = bath.number("density");
  if (bath.has("T_start") || bath.has("T_stop") || bath.has("T_points")) {
    ScenarioConfig::Sweep sweep;
    sweep.start = bath.number("T_start");
    sweep.stop = bath.number("T_stop");
    sweep.points = bath.integer("T_points", 9);
    const std::string scale = bath.str("T_scale", "log");
    if (scale != "log" && scale != "lin") {
      throw ValidationError(source_name + ": in [bath]: T_scale must be log or lin");
    }
    sweep.log_scale = scale == "log";
    if (!(sweep.start > 0.0) || !(sweep.stop > sweep.start) || sweep.points < 2) {
      throw ValidationError(source_name +
                            ": in [bath]: sweep needs 0 < T_start < T_stop and T_points >= 2");
    }
    cfg.t_sweep = sweep;
    cfg.bath.T = sweep.start;
  }
  if (bath.has("T")) cfg.bath.T = bath.number("T");
  if (!(cfg.bath.T > 0.0)) {
    throw ValidationError(source_name + ": [bath] needs 'T' or a T_start/T_stop sweep");
  }
  cfg.bath.validate();

  if (sec.channel_sections.size() != 2) {
    throw ValidationError(source_name + ": expected exactly two [channels.<name>] sections, found " +
                          std::to_string(sec.channel_sections.size()));
  }
  cfg.pair.nu = read_channel(sec, sec.channel_sections[0]);
  cfg.pair.nu_prime = read_channel(sec, sec.channel_sections[1]);

  Reader pair(sec, "pair");
  const double abs0 = pair.number("rho0_abs", 0.5);
  const double phase0 = pair.number("rho0_phase", 0.0);
  cfg.pair.rho0 = std::polar(abs0, phase0);
  cfg.pair.rho0_diag_nu = pair.number("pop_nu", 0.5);
  cfg.pair.rho0_diag_nup = pair.number("pop_nu_prime", 0.5);
  try {
    cfg.pair.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(source_name + ": in [pair]: " + std::string(err.what()));
  }

  Reader run(sec, "run");
  if (run.has("t_max")) cfg.run.t_max = run.number("t_max");
  cfg.run.t_points = run.integer("t_points", 200);
  if (cfg.run.t_points < 2) {
    throw ValidationError(source_name + ": in [run]: t_points must be >= 2");
  }
  const int order = run.integer("order", 2);
  if (order < 0 || order > 2) {
    throw ValidationError(source_name + ": in [run]: order must be 0, 1 or 2");
  }
  cfg.run.order = static_cast<TruncationOrder>(order);
  cfg.run.margin = run.number("margin", 0.1);
  cfg.run.ref_length = run.number("ref_length", 1e-9);
  cfg.run.oracle = run.boolean("oracle", false);

  Reader orc(sec, "oracle");
  cfg.oracle.grid.nodes = orc.integer("grid_points", 128);
  cfg.oracle.grid.span = orc.number("span", 6.0);
  cfg.oracle.quad.nq = orc.integer("quad_q", 48);
  cfg.oracle.quad.nc = orc.integer("quad_c", 28);
  cfg.oracle.quad.np = orc.integer("quad_p", 20);
  cfg.oracle.dt = orc.number("dt", 0.0);
  cfg.oracle.threads = orc.integer("threads", 1);
  cfg.oracle.compare_tol = orc.number("compare_tol", 1e-2);

  // Unknown sections/keys: strict mode errors, lax mode warns.
  for (const auto& [section, keys] : sec.data) {
    const bool known_section = section == "bath" || section == "pair" || section == "run" ||
                               section == "oracle" || section.rfind("channels.", 0) == 0;
    for (const auto& [key, entry] : keys) {
      if (known_section && entry.used) continue;
      const std::string msg = source_name + ":" + std::to_string(entry.line) +
                              ": unknown key '" + key + "' in [" + section + "]";
      if (strict) throw ValidationError(msg);
      if (warnings) warnings->push_back(msg);
    }
    if (!known_section && keys.empty()) {
      const std::string msg = source_name + ": unknown section [" + section + "]";
      if (strict) throw ValidationError(msg);
      if (warnings) warnings->push_back(msg);
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, bool strict,
                           std::vector<std::string>* warnings) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string(), strict, warnings);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) { return csv::format_double(v); };
  out << "[bath]\n";
  out << "mass = " << num(cfg.bath.m) << " kg\n";
  out << "tracer_mass = " << num(cfg.bath.M) << " kg\n";
  out << "density = " << num(cfg.bath.n_gas) << "\n";
  out << "T = " << num(cfg.bath.T) << "\n";
  if (cfg.t_sweep) {
    out << "T_start = " << num(cfg.t_sweep->start) << "\n";
    out << "T_stop = " << num(cfg.t_sweep->stop) << "\n";
    out << "T_points = " << cfg.t_sweep->points << "\n";
    out << "T_scale = " << (cfg.t_sweep->log_scale ? "log" : "lin") << "\n";
  }
  const auto channel = [&](const Channel& ch) {
    out << "[channels." << ch.label << "]\n";
    out << "unit = m\n";
    out << "energy = " << num(ch.energy) << "\n";
    out << "alpha = " << num(ch.alpha()) << "\n";
    out << "beta = " << num(ch.beta()) << "\n";
    out << "b_red_re = " << num(ch.b_red.real()) << "\n";
    out << "b_red_im = " << num(ch.b_red.imag()) << "\n";
    out << "c_red_re = " << num(ch.c_red.real()) << "\n";
    out << "c_red_im = " << num(ch.c_red.imag()) << "\n";
  };
  channel(cfg.pair.nu);
  channel(cfg.pair.nu_prime);
  out << "[pair]\n";
  out << "rho0_abs = " << num(std::abs(cfg.pair.rho0)) << "\n";
  out << "rho0_phase = " << num(std::arg(cfg.pair.rho0)) << "\n";
  out << "pop_nu = " << num(cfg.pair.rho0_diag_nu) << "\n";
  out << "pop_nu_prime = " << num(cfg.pair.rho0_diag_nup) << "\n";
  out << "[run]\n";
  if (cfg.run.t_max) out << "t_max = " << num(*cfg.run.t_max) << "\n";
  out << "t_points = " << cfg.run.t_points << "\n";
  out << "order = " << static_cast<int>(cfg.run.order) << "\n";
  out << "margin = " << num(cfg.run.margin) << "\n";
  out << "ref_length = " << num(cfg.run.ref_length) << "\n";
  out << "oracle = " << (cfg.run.oracle ? "true" : "false") << "\n";
  out << "[oracle]\n";
  out << "grid_points = " << cfg.oracle.grid.nodes << "\n";
  out << "span = " << num(cfg.oracle.grid.span) << "\n";
  out << "quad_q = " << cfg.oracle.quad.nq << "\n";
  out << "quad_c = " << cfg.oracle.quad.nc << "\n";
  out << "quad_p = " << cfg.oracle.quad.np << "\n";
  out << "dt = " << num(cfg.oracle.dt) << "\n";
  out << "threads = " << cfg.oracle.threads << "\n";
  out << "compare_tol = " << num(cfg.oracle.compare_tol) << "\n";
  return out.str();
}

}  // namespace decokin
