// Copyright 2026 The qpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qpriv/io.hpp"

using namespace qpriv;
using qpriv::io::InputDocument;
using qpriv::io::Json;

namespace {

const char* kIdentityMixedDoc = R"json({
  "dim": 2,
  "channel": {"kind": "kraus", "operators": [[[[1,0],[0,0]],[[0,0],[1,0]]]]},
  "pairs": [{"rho": [[[1,0],[0,0]],[[0,0],[0,0]]],
             "sigma": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}]
})json";

const char* kIdentityOrthogonalDoc = R"json({
  "dim": 2,
  "channel": {"kind": "kraus", "operators": [[[[1,0],[0,0]],[[0,0],[1,0]]]]},
  "pairs": [{"rho": [[[1,0],[0,0]],[[0,0],[0,0]]],
             "sigma": [[[0,0],[0,0]],[[0,0],[1,0]]]}]
})json";

const char* kDepolarizingBallDoc = R"json({
  "dim": 2,
  "channel": {"kind": "depolarizing", "p": 0.5},
  "neighborhood": {"kind": "trace_distance", "d": 0.5},
  "seed": 7
})json";

std::filesystem::path test_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "qpriv_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = test_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& arguments) {
  static int counter = 0;
  const std::string out_path = (test_dir() / ("stdout" + std::to_string(counter))).string();
  const std::string err_path = (test_dir() / ("stderr" + std::to_string(counter))).string();
  ++counter;
  const std::string cmd = std::string(QPRIV_CLI_PATH) + " " + arguments + " > " +
                          out_path + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

void check_all_numbers_finite(const Json& j) {
  if (j.is_number_float()) {
    CHECK(std::isfinite(j.get<double>()));
  } else if (j.is_array() || j.is_object()) {
    for (const auto& item : j.items()) check_all_numbers_finite(item.value());
  }
}

}  // namespace

TEST_CASE("parse_input accepts the minimal identity-channel document") {
  const InputDocument doc = qpriv::io::parse_input_text(kIdentityMixedDoc);
  CHECK(doc.dim == 2);
  CHECK(doc.channel.kraus() != nullptr);
  REQUIRE(doc.pairs.size() == 1);
  CHECK(doc.base == LogBase::natural);
  CHECK(doc.seed == 0);
}

TEST_CASE("parse_input rejects an incomplete Kraus list naming the check") {
  const char* doc = R"json({
    "dim": 2,
    "channel": {"kind": "kraus", "operators": [
      [[[1,0],[0,0]],[[0,0],[1,0]]],
      [[[1,0],[0,0]],[[0,0],[1,0]]]
    ]}
  })json";
  try {
    qpriv::io::parse_input_text(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("completeness") != std::string::npos);
    CHECK(std::string(e.what()).find("channel.operators") != std::string::npos);
  }
}

TEST_CASE("parse_input names the offending pair index") {
  const char* doc = R"json({
    "dim": 2,
    "channel": {"kind": "kraus", "operators": [[[[1,0],[0,0]],[[0,0],[1,0]]]]},
    "pairs": [
      {"rho": [[[1,0],[0,0]],[[0,0],[0,0]]], "sigma": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]},
      {"rho": [[[2,0],[0,0]],[[0,0],[0,0]]], "sigma": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
    ]
  })json";
  try {
    qpriv::io::parse_input_text(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("pairs[1].rho") != std::string::npos);
  }
}

TEST_CASE("parse_input rejects malformed syntax with ParseError") {
  CHECK_THROWS_AS(qpriv::io::parse_input_text("{not json"), ParseError);
  CHECK_THROWS_AS(qpriv::io::parse_input_text(R"json({"dim": 2})json"), ParseError);
  CHECK_THROWS_AS(
      qpriv::io::parse_input_text(
          R"json({"dim": 2, "channel": {"kind": "nope"}})json"),
      ParseError);
}

TEST_CASE("depolarizing document with a trace-distance ball selects the certificate") {
  const InputDocument doc = qpriv::io::parse_input_text(kDepolarizingBallDoc);
  REQUIRE(doc.channel.depolarizing() != nullptr);
  const AuditReport report =
      audit_ht(doc.channel, qpriv::io::audit_relation(doc), 0.0, std::log(2.0),
               LogBase::natural, 10, doc.seed);
  CHECK(report.status == AuditStatus::certified_closed_form);
  REQUIRE(report.certificate.has_value());
}

TEST_CASE("audit_relation enforces exactly one neighborhood source") {
  InputDocument both = qpriv::io::parse_input_text(kIdentityMixedDoc);
  both.neighborhood = InputDocument::NeighborhoodKind::trace_distance;
  both.neighborhood_d = 0.5;
  CHECK_THROWS_AS(qpriv::io::audit_relation(both), ValidationError);

  InputDocument neither = qpriv::io::parse_input_text(kDepolarizingBallDoc);
  neither.neighborhood = InputDocument::NeighborhoodKind::none;
  CHECK_THROWS_AS(qpriv::io::audit_relation(neither), ValidationError);
}

TEST_CASE("serialize / parse round trip") {
  for (const char* text : {kIdentityMixedDoc, kIdentityOrthogonalDoc,
                           kDepolarizingBallDoc}) {
    const InputDocument doc = qpriv::io::parse_input_text(text);
    const InputDocument again =
        qpriv::io::parse_document(qpriv::io::serialize(doc));
    CHECK(qpriv::io::documents_equal(doc, again));
  }
}

TEST_CASE("emit_curve gamma values and format") {
  qpriv::io::CurveSpec spec;
  spec.bound = qpriv::io::CurveSpec::Bound::gamma;
  spec.eps_min = 0.0;
  spec.eps_max = 1.0;
  spec.steps = 11;
  spec.fixed = {0.5};
  const std::string csv = qpriv::io::emit_curve(spec);

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("# bound=gamma", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(lines, line);
  CHECK(line == "epsilon,eta=0.5");

  // eps = 0 -> 0.5, eps = 0.4 -> 0.4, eps = 1 -> 0.25.
  std::vector<std::pair<std::string, std::string>> expect = {
      {"0", "0.5"}, {"0.4", "0.4"}, {"1", "0.25"}};
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    for (const auto& [eps, value] : expect)
      if (line.substr(0, comma) == eps) CHECK(line.substr(comma + 1) == value);
  }
}

TEST_CASE("emit_curve omega and theta spot values") {
  qpriv::io::CurveSpec omega;
  omega.bound = qpriv::io::CurveSpec::Bound::omega;
  omega.steps = 2;
  omega.eps_max = 1.0;
  omega.fixed = {0.0};
  omega.omega_eta = 0.0;
  const std::string omega_csv = qpriv::io::emit_curve(omega);
  CHECK(omega_csv.find("\n0,1\n") != std::string::npos);

  qpriv::io::CurveSpec theta;
  theta.bound = qpriv::io::CurveSpec::Bound::theta;
  theta.steps = 2;
  theta.eps_max = 1.0;
  theta.fixed = {0.0};
  const std::string theta_csv = qpriv::io::emit_curve(theta);
  CHECK(theta_csv.find("\n0,0.5\n") != std::string::npos);
}

TEST_CASE("emit_curve columns are monotone nonincreasing in epsilon") {
  for (auto bound : {qpriv::io::CurveSpec::Bound::gamma, qpriv::io::CurveSpec::Bound::omega,
                     qpriv::io::CurveSpec::Bound::theta}) {
    qpriv::io::CurveSpec spec;
    spec.bound = bound;
    spec.steps = 61;
    spec.fixed = bound == qpriv::io::CurveSpec::Bound::gamma
                     ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
                     : std::vector<double>{0.0, 0.05, 0.1, 0.2};
    const std::string csv = qpriv::io::emit_curve(spec);
    std::istringstream lines(csv);
    std::string line;
    std::vector<double> prev;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
      std::vector<double> row;
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
      if (!prev.empty())
        for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] <= prev[c] + 1e-12);
      prev = row;
    }
  }
}

TEST_CASE("cli divergence example: beta 0.25 with a tight certificate") {
  const std::string doc = write_file("doc.json", kIdentityMixedDoc);
  const CliResult r = run_cli("divergence --input " + doc + " --eta 0.5 --json");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["pairs"].size() == 1);
  CHECK(std::abs(j["pairs"][0]["beta"].get<double>() - 0.25) <= 1e-9);
  CHECK(j["pairs"][0]["dual_gap"].get<double>() <= 1e-9);
  check_all_numbers_finite(j);
}

TEST_CASE("cli audit ht example: orthogonal pair is falsified with worst inf") {
  const std::string doc = write_file("orth.json", kIdentityOrthogonalDoc);
  const CliResult r =
      run_cli("audit ht --input " + doc + " --eta 0 --epsilon 1 --json");
  CHECK(r.exit_code == 1);
  const Json j = Json::parse(r.out);
  CHECK(j["status"] == "FALSIFIED");
  CHECK(j["worst_value"] == "inf");
}

TEST_CASE("cli bounds gamma example: CSV row at eps 0.4 reads 0.4") {
  const std::string out = (test_dir() / "g.csv").string();
  const CliResult r = run_cli("bounds gamma --p-rho 0.5 --eta 0.5 --eps 0:3:121 --out " +
                              out);
  REQUIRE(r.exit_code == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("\n0.4,0.4\n") != std::string::npos);
}

TEST_CASE("cli reruns are byte-identical for a fixed seed") {
  const std::string doc = write_file("ball.json", kDepolarizingBallDoc);
  const std::string args =
      "audit ht --input " + doc + " --eta 0.1 --epsilon 0.7 --budget 10 --json";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  const std::string c1 = (test_dir() / "c1.csv").string();
  const std::string c2 = (test_dir() / "c2.csv").string();
  REQUIRE(run_cli("bounds omega --eps 0:2:41 --out " + c1).exit_code == 0);
  REQUIRE(run_cli("bounds omega --eps 0:2:41 --out " + c2).exit_code == 0);
  CHECK(read_file(c1) == read_file(c2));
}

TEST_CASE("cli exit codes for invalid input") {
  const std::string bad = write_file("bad.json", "{");
  CHECK(run_cli("divergence --input " + bad + " --eta 0.5").exit_code == 2);
  CHECK(run_cli("divergence --input /nonexistent.json --eta 0.5").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("cli translate") {
  const CliResult r = run_cli("translate ht-to-dp --epsilon 0.3 --eta 0.02 --json");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["output"]["delta"].get<double>() - 0.2) <= 1e-12);

  CHECK(run_cli("translate dp-to-ht --epsilon 0.5 --delta 0.1").exit_code == 2);
  const CliResult family = run_cli("translate dp-to-ht --epsilon 0.5 --json");
  REQUIRE(family.exit_code == 0);
  CHECK(Json::parse(family.out)["output"]["eta"] == "all");
}

TEST_CASE("cli compose: identity factors on orthogonal pairs add to infinity") {
  const std::string a = write_file("factor_a.json", kIdentityOrthogonalDoc);
  const std::string b = write_file("factor_b.json", kIdentityMixedDoc);
  const CliResult r =
      run_cli("compose --input " + a + " --input-b " + b + " --json");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["worst_value"] == "inf");
  CHECK(j["worst_additivity_gap"].get<double>() <= 1e-8);

  const CliResult budgeted = run_cli("compose --input " + b + " --input-b " + b +
                                     " --epsilon 0.1 --json");
  CHECK(budgeted.exit_code == 1);  // ln 2 + ln 2 exceeds 0.1
}
