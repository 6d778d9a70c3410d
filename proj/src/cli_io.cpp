// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamforge Authors.
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

#include "beamforge/cli_io.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "beamforge/error.hpp"
#include "beamforge/parallel.hpp"

namespace beamforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double identity(double x) { return x; }
double deg_to_rad(double x) { return x * kPi / 180.0; }
double kmh_to_mps(double x) { return x / 3.6; }
double ghz_to_hz(double x) { return x * 1e9; }

struct Alias {
  const char* key;
  double (*convert)(double);
};

/// Consumes keys from one config section and remembers which were used.
class Section {
 public:
  Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) throw ConfigError(name_, "section '" + name_ + "' must be a JSON object");
  }

  std::optional<double> number(const std::string& quantity, std::initializer_list<Alias> aliases, bool required) {
    std::optional<double> out;
    std::string found;
    for (const Alias& a : aliases) {
      if (!obj_.contains(a.key)) continue;
      if (out) throw ConfigError(a.key, "conflicting keys '" + found + "' and '" + a.key + "' for " + quantity);
      const json& v = obj_.at(a.key);
      if (!v.is_number()) throw ConfigError(a.key, std::string("'") + a.key + "' must be a number");
      out = a.convert(v.get<double>());
      found = a.key;
      used_.insert(a.key);
    }
    if (!out && required) throw ConfigError(quantity, "missing required field '" + quantity + "'");
    return out;
  }

  std::optional<long long> integer(const std::string& key, bool required) {
    if (!obj_.contains(key)) {
      if (required) throw ConfigError(key, "missing required field '" + key + "'");
      return std::nullopt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "'" + key + "' must be an integer");
    used_.insert(key);
    return v.get<long long>();
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(it.key(), "unknown key '" + it.key() + "' in section '" + name_ + "'");
  }

 private:
  const json& obj_;
  std::string name_;
  std::set<std::string> used_;
};

void set_if(std::optional<double> v, double& field) {
  if (v) field = *v;
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double gain_db(double g) { return 10.0 * std::log10(std::max(g, 1e-30)); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_design_scheme(const std::string& s) { return s == "sdr_dc_bis" || s == "pp_pdg_ms"; }

}  // namespace

RunConfig parse_config_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "scenario" && it.key() != "solver")
      throw ConfigError(it.key(), "unknown top-level key '" + it.key() + "'");
  if (!doc.contains("scenario")) throw ConfigError("scenario", "missing required section 'scenario'");

  RunConfig rc;
  ScenarioConfig& c = rc.scenario;
  Section sc(doc.at("scenario"), "scenario");
  set_if(sc.number("f_c", {{"f_c", identity}, {"f_c_hz", identity}, {"f_c_ghz", ghz_to_hz}}, true), c.f_c);
  set_if(sc.number("B_f", {{"B_f", identity}, {"B_f_hz", identity}}, false), c.B_f);
  c.N_T = static_cast<int>(*sc.integer("N_T", true));
  set_if(sc.number("delta_T", {{"delta_T", identity}, {"delta_T_m", identity}}, false), c.delta_T);
  set_if(sc.number("y_0", {{"y_0", identity}, {"y_0_m", identity}}, true), c.y_0);
  set_if(sc.number("alpha", {{"alpha", identity}, {"alpha_rad", identity}, {"alpha_deg", deg_to_rad}}, true), c.alpha);
  set_if(sc.number("v", {{"v", identity}, {"v_mps", identity}, {"v_kmh", kmh_to_mps}}, true), c.v);
  set_if(sc.number("P_T", {{"P_T", identity}, {"P_T_w", identity}, {"P_T_dbm", dbm_to_watt}}, true), c.P_T);
  set_if(sc.number("P_N", {{"P_N", identity}, {"P_N_w", identity}, {"P_N_dbm", dbm_to_watt}}, true), c.P_N);
  set_if(sc.number("eta", {{"eta", identity}}, false), c.eta);
  set_if(sc.number("r_0", {{"r_0", identity}, {"r_0_m", identity}}, false), c.r_0);
  set_if(sc.number("psi_min", {{"psi_min", identity}, {"psi_min_rad", identity}, {"psi_min_deg", deg_to_rad}}, true),
         c.psi_min);
  set_if(sc.number("psi_max", {{"psi_max", identity}, {"psi_max_rad", identity}, {"psi_max_deg", deg_to_rad}}, true),
         c.psi_max);
  set_if(sc.number("gamma_th", {{"gamma_th", identity}, {"gamma_th_db", db_to_linear}}, true), c.gamma_th);
  set_if(sc.number("eps_t", {{"eps_t", identity}}, false), c.eps_t);
  set_if(sc.number("sigma_psi",
                   {{"sigma_psi", identity}, {"sigma_psi_rad", identity}, {"sigma_psi_deg", deg_to_rad}}, false),
         c.sigma_psi);
  set_if(sc.number("p_th", {{"p_th", identity}}, false), c.p_th);
  set_if(sc.number("L_th", {{"L_th", identity}}, false), c.L_th);
  sc.reject_unknown();
  if (c.delta_T < 0.0 || (doc.at("scenario").contains("delta_T") && c.delta_T == 0.0))
    throw ConfigError("delta_T", "invariant violated: delta_T > 0");
  c.validate();
  c.delta_T = c.spacing();

  SolverParams& p = rc.solver;
  if (doc.contains("solver")) {
    Section sv(doc.at("solver"), "solver");
    auto num = [&](const char* key, double& field) { set_if(sv.number(key, {{key, identity}}, false), field); };
    auto integer = [&](const char* key, int& field) {
      if (auto v = sv.integer(key, false)) field = static_cast<int>(*v);
    };
    num("rho_1", p.rho_1);
    num("eps_1", p.eps_1);
    num("eps_2", p.eps_2);
    integer("dc_max_iter", p.dc_max_iter);
    num("dykstra_tol", p.dykstra_tol);
    integer("dykstra_max_iter", p.dykstra_max_iter);
    integer("subgrad_max_iter", p.subgrad_max_iter);
    num("rho_2_init", p.rho_2_init);
    num("delta_rho_2", p.delta_rho_2);
    num("eps_min", p.eps_min);
    num("eps_max", p.eps_max);
    num("eps_f", p.eps_f);
    num("w_max", p.w_max);
    num("w_min", p.w_min);
    num("w_mu", p.w_mu);
    integer("Q_cap", p.Q_cap);
    if (auto v = sv.integer("pdg_max_iter", false)) p.pdg_max_iter = static_cast<int>(*v);
    set_if(sv.number("eps_phi", {{"eps_phi", identity}, {"eps_phi_rad", identity}}, false), p.eps_phi);
    set_if(sv.number("delta_phi", {{"delta_phi", identity}, {"delta_phi_rad", identity}}, false), p.delta_phi);
    integer("delta_phi_samples", p.delta_phi_samples);
    integer("max_ts_iter", p.max_ts_iter);
    num("working_set_spacing", p.working_set_spacing);
    if (auto v = sv.integer("seed", false)) {
      if (*v < 0) throw ConfigError("seed", "seed must be non-negative");
      p.seed = static_cast<std::uint64_t>(*v);
    }
    sv.reject_unknown();
  }
  p.validate();

  rc.canonical = json{
      {"scenario",
       {{"f_c", c.f_c}, {"B_f", c.B_f}, {"N_T", c.N_T}, {"delta_T", c.delta_T}, {"y_0", c.y_0},
        {"alpha", c.alpha}, {"v", c.v}, {"P_T", c.P_T}, {"P_N", c.P_N}, {"eta", c.eta}, {"r_0", c.r_0},
        {"psi_min", c.psi_min}, {"psi_max", c.psi_max}, {"gamma_th", c.gamma_th}, {"eps_t", c.eps_t},
        {"sigma_psi", c.sigma_psi}, {"p_th", c.p_th}, {"L_th", c.L_th}}},
      {"solver",
       {{"rho_1", p.rho_1}, {"eps_1", p.eps_1}, {"eps_2", p.eps_2}, {"dc_max_iter", p.dc_max_iter},
        {"dykstra_tol", p.dykstra_tol}, {"dykstra_max_iter", p.dykstra_max_iter},
        {"subgrad_max_iter", p.subgrad_max_iter}, {"rho_2_init", p.rho_2_init}, {"delta_rho_2", p.delta_rho_2},
        {"eps_min", p.eps_min}, {"eps_max", p.eps_max}, {"eps_f", p.eps_f}, {"w_max", p.w_max},
        {"w_min", p.w_min}, {"w_mu", p.w_mu}, {"Q_cap", p.Q_cap}, {"pdg_max_iter", p.pdg_max_iter},
        {"eps_phi", p.eps_phi}, {"delta_phi", p.delta_phi}, {"delta_phi_samples", p.delta_phi_samples},
        {"max_ts_iter", p.max_ts_iter}, {"working_set_spacing", p.working_set_spacing}, {"seed", p.seed}}}};
  return rc;
}

RunConfig parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

std::string config_digest(const json& canonical) {
  const std::string text = canonical.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

json codebook_to_json(const Codebook& cb) {
  json beams = json::array();
  json angles = json::array();
  json diags = json::array();
  for (int i = 0; i < cb.N(); ++i) {
    const Beam& b = cb.beams[i];
    json w = json::array();
    for (Eigen::Index n = 0; n < b.weights.size(); ++n) {
      w.push_back(b.weights[n].real());
      w.push_back(b.weights[n].imag());
    }
    beams.push_back({{"phi_lo", b.phi_lo}, {"phi_hi", b.phi_hi}, {"weights", w}});
    angles.push_back(b.phi_lo);
    if (i < static_cast<int>(cb.diagnostics.size())) {
      const BeamDiagnostics& d = cb.diagnostics[i];
      diags.push_back({{"ts_iterations", d.ts_iterations}, {"solver_iterations", d.solver_iterations},
                       {"inner_iterations", d.inner_iterations}, {"first_sample", d.first_sample},
                       {"end_sample", d.end_sample}});
    }
  }
  if (cb.N() > 0) angles.push_back(cb.beams.back().phi_hi);
  const int N_T = cb.N() > 0 ? static_cast<int>(cb.beams[0].weights.size()) : 0;
  return json{{"scheme", cb.scheme}, {"N", cb.N()}, {"N_T", N_T}, {"switch_angles", angles},
              {"beams", beams}, {"diagnostics", diags}};
}

Codebook codebook_from_json(const json& doc) {
  Codebook cb;
  try {
    cb.scheme = doc.value("scheme", std::string());
    for (const json& b : doc.at("beams")) {
      Beam beam;
      beam.phi_lo = b.at("phi_lo").get<double>();
      beam.phi_hi = b.at("phi_hi").get<double>();
      const std::vector<double> w = b.at("weights").get<std::vector<double>>();
      if (w.size() % 2 != 0 || w.empty()) throw ConfigError("weights", "weights must be interleaved re/im pairs");
      beam.weights.resize(static_cast<Eigen::Index>(w.size() / 2));
      for (std::size_t n = 0; n < w.size() / 2; ++n)
        beam.weights[static_cast<Eigen::Index>(n)] = {w[2 * n], w[2 * n + 1]};
      cb.beams.push_back(std::move(beam));
    }
  } catch (const json::exception& e) {
    throw ConfigError("codebook", std::string("malformed codebook: ") + e.what());
  }
  cb.diagnostics.resize(cb.beams.size());
  return cb;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string pattern_csv(const Codebook& cb, const AoDGrid& grid, const ScenarioConfig& cfg) {
  constexpr int kUniform = 2001;
  std::vector<double> angles(grid.psi);
  for (int k = 0; k < kUniform; ++k)
    angles.push_back(cfg.psi_min + (cfg.psi_max - cfg.psi_min) * k / (kUniform - 1));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  std::vector<std::string> rows(angles.size());
  parallel_for(angles.size(), [&](std::size_t k) {
    const double psi = angles[k];
    const Eigen::VectorXcd a = steering_vector(cfg, cfg.N_T, psi, 0.0, bs_to_relay_distance(cfg, psi));
    std::string row = fmt_double(psi);
    for (const Beam& b : cb.beams) {
      row += ',';
      row += fmt_double(gain_db(std::norm(a.dot(b.weights))));
    }
    rows[k] = std::move(row);
  });

  std::string out = "psi_rad";
  for (int i = 0; i < cb.N(); ++i) out += ",beam_" + std::to_string(i) + "_gain_db";
  out += '\n';
  for (const auto& r : rows) out += r + '\n';
  return out;
}

std::string rsnr_csv(const RsnrTrace& trace) {
  std::string out = "t_s,psi_rad,psi_hat_rad,beam,rsnr_db\n";
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    out += fmt_double(trace.t[k]) + ',' + fmt_double(trace.psi[k]) + ',' + fmt_double(trace.psi_hat[k]) + ',' +
           std::to_string(trace.beam[k]) + ',' +
           (trace.rsnr[k] > 0.0 ? fmt_double(linear_to_db(trace.rsnr[k])) : std::string("-inf")) + '\n';
  }
  return out;
}

std::string band_csv(const ScenarioConfig& cfg, int points) {
  std::vector<std::string> rows(static_cast<std::size_t>(points));
  parallel_for(rows.size(), [&](std::size_t k) {
    const double psi = cfg.psi_min + (cfg.psi_max - cfg.psi_min) * static_cast<double>(k) / (points - 1);
    const double r = bs_to_relay_distance(cfg, psi);
    const double b = band(cfg, psi, cfg.N_T, cfg.B_f, cfg.L_th);
    rows[k] = fmt_double(psi) + ',' + fmt_double(r) + ',' + fmt_double(b) + ',' + (r < b ? "1" : "0");
  });
  std::string out = "psi_rad,distance_m,band_m,inside_band\n";
  for (const auto& r : rows) out += r + '\n';
  return out;
}

json RunManifest::to_json() const {
  return json{{"digest", digest},         {"scheme", scheme}, {"seed", seed},   {"started_utc", started_utc},
              {"finished_utc", finished_utc}, {"files", files}, {"N", N},         {"seconds", seconds},
              {"threads", thread_count()}, {"config", config}};
}

namespace {

RunManifest start_manifest(const RunConfig& rc, const std::string& scheme) {
  RunManifest m;
  m.digest = config_digest(rc.canonical);
  m.scheme = scheme;
  m.seed = rc.solver.seed;
  m.started_utc = utc_now();
  m.config = rc.canonical;
  return m;
}

void emit(RunManifest& m, const fs::path& dir, const std::string& name, const std::string& content) {
  write_atomic(dir / name, content);
  m.files.push_back(name);
}

void finish_manifest(RunManifest& m, const fs::path& dir, std::chrono::steady_clock::time_point t0) {
  m.finished_utc = utc_now();
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.files.push_back("manifest.json");
  write_atomic(dir / "manifest.json", m.to_json().dump(2) + '\n');
}

void emit_codebook_files(RunManifest& m, const fs::path& dir, const Codebook& cb, const AoDGrid& grid,
                         const RunConfig& rc) {
  const ScenarioConfig& cfg = rc.scenario;
  emit(m, dir, "codebook.json", codebook_to_json(cb).dump(2) + '\n');
  emit(m, dir, "pattern.csv", pattern_csv(cb, grid, cfg));
  emit(m, dir, "rsnr.csv", rsnr_csv(codebook_rsnr_trace(cb, grid, cfg, rc.solver.seed, cfg.sigma_psi)));
}

}  // namespace

RunManifest run_design(const RunConfig& rc, Scheme scheme, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m = start_manifest(rc, scheme_name(scheme));
  const AoDGrid grid = build_grid(rc.scenario);
  const Codebook cb = sequential_design(grid, rc.scenario, rc.solver, scheme);
  m.N = cb.N();
  emit_codebook_files(m, out_dir, cb, grid, rc);
  emit(m, out_dir, "band.csv", band_csv(rc.scenario));
  finish_manifest(m, out_dir, t0);
  return m;
}

RunManifest run_band(const RunConfig& rc, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m = start_manifest(rc, "band");
  emit(m, out_dir, "band.csv", band_csv(rc.scenario));
  finish_manifest(m, out_dir, t0);
  return m;
}

RunManifest run_benchmark(const RunConfig& rc, BenchmarkScheme scheme, int N, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m = start_manifest(rc, benchmark_name(scheme));
  const AoDGrid grid = build_grid(rc.scenario);
  const Partition p = benchmark_partition(rc.scenario, scheme, N);
  const Codebook cb = partition_codebook(grid, rc.scenario, p, rc.solver, benchmark_name(scheme));
  m.N = cb.N();
  emit_codebook_files(m, out_dir, cb, grid, rc);
  finish_manifest(m, out_dir, t0);
  return m;
}

EvaluationReport run_evaluate(const RunConfig& rc, const Codebook& cb, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig& cfg = rc.scenario;
  for (const Beam& b : cb.beams)
    if (b.weights.size() != cfg.N_T) throw ConfigError("codebook", "codebook antenna count differs from N_T");
  RunManifest m = start_manifest(rc, cb.scheme.empty() ? "evaluate" : cb.scheme);
  const AoDGrid grid = build_grid(cfg);
  const RsnrTrace exact = codebook_rsnr_trace(cb, grid, cfg, rc.solver.seed, 0.0);
  EvaluationReport rep;
  rep.feasible = true;
  for (std::size_t k = 0; k < exact.rsnr.size(); ++k)
    if (exact.beam[k] < 0 || exact.rsnr[k] < cfg.gamma_th) rep.feasible = false;
  const RsnrTrace trace = codebook_rsnr_trace(cb, grid, cfg, rc.solver.seed, cfg.sigma_psi);
  rep.summary = summarize_trace(trace);
  rep.switches = trace.switches;
  m.N = cb.N();
  emit(m, out_dir, "pattern.csv", pattern_csv(cb, grid, cfg));
  emit(m, out_dir, "rsnr.csv", rsnr_csv(trace));
  finish_manifest(m, out_dir, t0);
  return rep;
}

std::vector<ComparisonRow> compare_schemes(const RunConfig& rc, const std::vector<std::string>& schemes,
                                           std::optional<int> beams) {
  std::vector<ComparisonRow> rows;
  if (schemes.empty()) return rows;
  for (const auto& s : schemes)
    if (!is_design_scheme(s)) parse_benchmark(s);
  const ScenarioConfig& cfg = rc.scenario;
  const AoDGrid grid = build_grid(cfg);

  auto row_for = [&](const std::string& name, const Codebook& cb, double seconds) {
    const RsnrSummary s = summarize_trace(codebook_rsnr_trace(cb, grid, cfg, rc.solver.seed, cfg.sigma_psi));
    return ComparisonRow{name, cb.N(), s.min_db, s.max_db, s.spread_db, seconds};
  };

  std::optional<ComparisonRow> pp_row;
  for (const auto& s : schemes) {
    if (!is_design_scheme(s)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const Codebook cb = sequential_design(grid, cfg, rc.solver, parse_scheme(s));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row_for(s, cb, secs));
    if (s == "pp_pdg_ms") pp_row = rows.back();
  }
  const bool any_benchmark =
      std::any_of(schemes.begin(), schemes.end(), [](const std::string& s) { return !is_design_scheme(s); });
  if (any_benchmark && !beams) {
    if (!pp_row) {
      const auto t0 = std::chrono::steady_clock::now();
      const Codebook cb = sequential_design(grid, cfg, rc.solver, Scheme::pp_pdg_ms);
      pp_row = row_for("pp_pdg_ms", cb, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    beams = pp_row->N;
  }
  for (const auto& s : schemes) {
    if (is_design_scheme(s)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const BenchmarkScheme b = parse_benchmark(s);
    const Codebook cb = partition_codebook(grid, cfg, benchmark_partition(cfg, b, *beams), rc.solver, s);
    rows.push_back(row_for(s, cb, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "scheme,N,min_rsnr_db,max_rsnr_db,spread_db,seconds\n";
  for (const auto& r : rows)
    out += r.scheme + ',' + std::to_string(r.N) + ',' + fmt_double(r.min_rsnr_db) + ',' + fmt_double(r.max_rsnr_db) +
           ',' + fmt_double(r.spread_db) + ',' + fmt_double(r.seconds) + '\n';
  return out;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"beamforge: beam-switching codebook design for high-speed railway mmWave links"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string design_scheme;
  std::string bench_scheme;
  std::string compare_list;
  std::string codebook_path;
  std::optional<int> beams;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario/solver JSON file")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed (overrides solver.seed)");
    sub->add_option("--threads", threads, "worker threads (fallback: BEAMFORGE_THREADS)");
  };

  CLI::App* design = app.add_subcommand("design", "design a codebook with sdr_dc_bis or pp_pdg_ms");
  common(design);
  design->add_option("--scheme", design_scheme, "sdr_dc_bis | pp_pdg_ms")->default_val("pp_pdg_ms");

  CLI::App* band_cmd = app.add_subcommand("band", "near-field boundary along the design range");
  common(band_cmd);

  CLI::App* evaluate = app.add_subcommand("evaluate", "RSNR trace and beam pattern of an existing codebook");
  common(evaluate);
  evaluate->add_option("--codebook", codebook_path, "codebook.json to evaluate")->required();

  CLI::App* bench = app.add_subcommand("benchmark", "max-min beams on a reference partition");
  common(bench);
  bench->add_option("--scheme", bench_scheme, "ubw | esc | nubw_m | nubw_s")->required();
  bench->add_option("--beams", beams, "beam count (default: the pp_pdg_ms count)");

  CLI::App* compare = app.add_subcommand("compare", "side-by-side summary of several schemes");
  common(compare);
  compare->add_option("--scheme", compare_list, "comma-separated scheme list")
      ->default_val("pp_pdg_ms,ubw,esc,nubw_m,nubw_s");
  compare->add_option("--beams", beams, "beam count for benchmark schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (threads) {
    set_thread_count(*threads);
  } else if (const char* env = std::getenv("BEAMFORGE_THREADS")) {
    try {
      set_thread_count(static_cast<unsigned>(std::stoul(env)));
    } catch (const std::exception&) {
      std::cerr << "config error: BEAMFORGE_THREADS must be a non-negative integer\n";
      return kExitConfig;
    }
  }

  try {
    RunConfig rc = parse_config(config_path);
    if (seed) rc.solver.seed = *seed;
    const fs::path out(out_dir);

    if (design->parsed()) {
      const RunManifest m = run_design(rc, parse_scheme(design_scheme), out);
      std::cout << m.scheme << ": N = " << m.N << " beams in " << m.seconds << " s -> " << out.string() << '\n';
    } else if (band_cmd->parsed()) {
      run_band(rc, out);
      std::cout << "band.csv written to " << out.string() << '\n';
    } else if (evaluate->parsed()) {
      std::ifstream in(codebook_path);
      if (!in) throw ConfigError("codebook", "cannot open codebook '" + codebook_path + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("codebook", std::string("malformed JSON: ") + e.what());
      }
      const EvaluationReport rep = run_evaluate(rc, codebook_from_json(doc), out);
      std::cout << "min RSNR " << rep.summary.min_db << " dB, max " << rep.summary.max_db << " dB, switches "
                << rep.switches << (rep.feasible ? "" : ", THRESHOLD MISSED") << '\n';
      if (!rep.feasible) return kExitRecheck;
    } else if (bench->parsed()) {
      const BenchmarkScheme b = parse_benchmark(bench_scheme);
      int n = 0;
      if (beams) {
        n = *beams;
      } else {
        const AoDGrid grid = build_grid(rc.scenario);
        n = sequential_design(grid, rc.scenario, rc.solver, Scheme::pp_pdg_ms).N();
      }
      const RunManifest m = run_benchmark(rc, b, n, out);
      std::cout << m.scheme << ": N = " << m.N << " -> " << out.string() << '\n';
    } else if (compare->parsed()) {
      const auto rows = compare_schemes(rc, split_list(compare_list), beams);
      const std::string csv = comparison_csv(rows);
      write_atomic(out / "compare.csv", csv);
      std::cout << csv;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RecheckError& e) {
    std::cerr << "recheck failed: " << e.what() << '\n';
    return kExitRecheck;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const DomainError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace beamforge
