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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamforge/cli_io.hpp"
#include "beamforge/error.hpp"

using namespace beamforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json::parse(R"({
    "scenario": {"f_c_ghz": 30, "N_T": 4, "y_0": 8, "alpha_deg": 10, "v_kmh": 500,
                 "P_T_dbm": 40, "P_N_dbm": -40, "psi_min_rad": -0.4, "psi_max_rad": 0.2,
                 "gamma_th_db": 4, "eps_t": 0.1},
    "solver": {"seed": 3}
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("beamforge_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BEAMFORGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("unit aliases resolve to SI values") {
  const RunConfig rc = parse_config_json(small_config());
  CHECK(rc.scenario.f_c == doctest::Approx(30e9));
  CHECK(rc.scenario.alpha == doctest::Approx(10.0 * M_PI / 180.0));
  CHECK(rc.scenario.v == doctest::Approx(500.0 / 3.6));
  CHECK(rc.scenario.P_T == doctest::Approx(10.0));
  CHECK(rc.scenario.P_N == doctest::Approx(1e-7));
  CHECK(rc.scenario.gamma_th == doctest::Approx(std::pow(10.0, 0.4)));
  CHECK(rc.scenario.delta_T == doctest::Approx(299792458.0 / 30e9 / 2.0));
  CHECK(rc.solver.seed == 3);
  CHECK(rc.canonical["scenario"]["f_c"].get<double>() == doctest::Approx(30e9));

  json si = small_config();
  si["scenario"].erase("f_c_ghz");
  si["scenario"]["f_c"] = 30e9;
  si["scenario"].erase("alpha_deg");
  si["scenario"]["alpha_rad"] = 10.0 * M_PI / 180.0;
  CHECK(parse_config_json(si).scenario.alpha == doctest::Approx(rc.scenario.alpha));
}

TEST_CASE("config errors name the offending key") {
  auto key_of = [](const json& doc) -> std::string {
    try {
      parse_config_json(doc);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return "<accepted>";
  };
  json missing = small_config();
  missing["scenario"].erase("N_T");
  CHECK(key_of(missing) == "N_T");

  json unknown = small_config();
  unknown["solver"]["tolerance"] = 1.0;
  CHECK(key_of(unknown) == "tolerance");

  json conflict = small_config();
  conflict["scenario"]["f_c"] = 30e9;
  CHECK(key_of(conflict).rfind("f_c", 0) == 0);

  json wrong_type = small_config();
  wrong_type["scenario"]["y_0"] = "eight";
  CHECK(key_of(wrong_type) == "y_0");

  json bad_range = small_config();
  bad_range["scenario"]["psi_max_rad"] = -0.5;
  CHECK(key_of(bad_range) != "<accepted>");

  json top = small_config();
  top["extra"] = json::object();
  CHECK(key_of(top) == "extra");

  CHECK(key_of(small_config()) == "<accepted>");
}

TEST_CASE("config digest") {
  const RunConfig a = parse_config_json(small_config());
  json other = small_config();
  other["scenario"].erase("f_c_ghz");
  other["scenario"]["f_c_hz"] = 30e9;
  const RunConfig b = parse_config_json(other);
  const std::string d = config_digest(a.canonical);
  CHECK(d.size() == 64);
  CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(d == config_digest(b.canonical));
  json changed = small_config();
  changed["solver"]["seed"] = 4;
  CHECK(d != config_digest(parse_config_json(changed).canonical));
  // Known SHA-256 vector for the empty JSON object text "{}".
  CHECK(config_digest(json::object()) == "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
}

TEST_CASE("codebook JSON round trip") {
  Codebook cb;
  cb.scheme = "pp_pdg_ms";
  for (int i = 0; i < 3; ++i) {
    Beam b;
    b.phi_lo = -0.4 + 0.2 * i;
    b.phi_hi = b.phi_lo + 0.2;
    b.weights.resize(4);
    for (int n = 0; n < 4; ++n) b.weights[n] = std::polar(0.5, 0.37 * n * (i + 1) + 1.0 / 3.0);
    cb.beams.push_back(b);
  }
  cb.diagnostics.resize(3);
  const json doc = codebook_to_json(cb);
  CHECK(doc["N"] == 3);
  CHECK(doc["switch_angles"].size() == 4);
  const Codebook back = codebook_from_json(json::parse(doc.dump()));
  REQUIRE(back.N() == 3);
  CHECK(back.scheme == cb.scheme);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.beams[i].phi_lo == cb.beams[i].phi_lo);
    CHECK(back.beams[i].phi_hi == cb.beams[i].phi_hi);
    CHECK((back.beams[i].weights - cb.beams[i].weights).norm() == 0.0);
  }
  CHECK_THROWS_AS(codebook_from_json(json::parse(R"({"beams": [{"phi_lo": 0}]})")), ConfigError);
}

TEST_CASE("atomic writes leave no temporary file") {
  const fs::path dir = scratch("atomic");
  write_atomic(dir / "sub" / "a.txt", "first");
  write_atomic(dir / "sub" / "a.txt", "second");
  CHECK(slurp(dir / "sub" / "a.txt") == "second");
  CHECK_FALSE(fs::exists(dir / "sub" / "a.txt.tmp"));
}

TEST_CASE("band table") {
  const RunConfig rc = parse_config_json(small_config());
  const std::string csv = band_csv(rc.scenario, 11);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "psi_rad,distance_m,band_m,inside_band");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  const fs::path cfg = write_config(dir, small_config());

  SUBCASE("design reruns are byte-identical") {
    REQUIRE(run_cli("design --config " + cfg.string() + " --out " + (dir / "a").string()) == kExitOk);
    REQUIRE(run_cli("design --config " + cfg.string() + " --out " + (dir / "b").string() + " --threads 2") == kExitOk);
    for (const char* f : {"codebook.json", "pattern.csv", "rsnr.csv", "band.csv"}) {
      CAPTURE(f);
      CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    const json m = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(m["digest"] == config_digest(parse_config(cfg).canonical));
    CHECK(m["N"].get<int>() >= 1);

    CHECK(run_cli("evaluate --config " + cfg.string() + " --codebook " + (dir / "a" / "codebook.json").string() +
                  " --out " + (dir / "eval").string()) == kExitOk);
    CHECK(fs::exists(dir / "eval" / "rsnr.csv"));

    // A codebook whose beams all point the wrong way misses the threshold.
    json cb = json::parse(slurp(dir / "a" / "codebook.json"));
    for (auto& b : cb["beams"])
      for (std::size_t k = 0; k < b["weights"].size(); ++k) b["weights"][k] = (k % 4 < 2) ? 0.5 : 0.0;
    std::ofstream(dir / "bad.json") << cb.dump();
    CHECK(run_cli("evaluate --config " + cfg.string() + " --codebook " + (dir / "bad.json").string() + " --out " +
                  (dir / "eval2").string()) == kExitRecheck);
  }
  SUBCASE("band and benchmark") {
    CHECK(run_cli("band --config " + cfg.string() + " --out " + (dir / "band").string()) == kExitOk);
    CHECK(fs::exists(dir / "band" / "band.csv"));
    CHECK(run_cli("benchmark --config " + cfg.string() + " --scheme esc --beams 3 --out " + (dir / "esc").string()) ==
          kExitOk);
    CHECK(json::parse(slurp(dir / "esc" / "codebook.json"))["N"] == 3);
    CHECK(run_cli("compare --config " + cfg.string() + " --scheme ubw,esc --beams 2 --out " + (dir / "cmp").string()) ==
          kExitOk);
    CHECK(fs::exists(dir / "cmp" / "compare.csv"));
  }
  SUBCASE("exit codes") {
    CHECK(run_cli("design --config " + (dir / "missing.json").string()) == kExitConfig);
    CHECK(run_cli("design --config " + cfg.string() + " --scheme simplex --out " + dir.string()) == kExitConfig);
    CHECK(run_cli("frobnicate") == kExitConfig);
    json bad = small_config();
    bad["solver"]["surprise"] = 1;
    CHECK(run_cli("design --config " + write_config(dir, bad).string() + " --out " + dir.string()) == kExitConfig);
    json hard = small_config();
    hard["scenario"]["gamma_th_db"] = 40;
    CHECK(run_cli("design --config " + write_config(dir, hard).string() + " --out " + dir.string()) == kExitSolver);
  }
}
