#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entkit/cli.hpp"
#include "entkit/io.hpp"

using namespace entkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "entkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("phi-table command") {
  const Run r = run({"phi-table", "--dmax", "4", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("d,closed_form,lo_value,two_outcome_value,sweep_max,pass\n") == 0);
  CHECK(r.out.find("\n2,0.584962500721,") != std::string::npos);
  CHECK(r.out.find("\n3,1,") != std::string::npos);
  CHECK(r.out.find("\n4,1.32192809489,") != std::string::npos);
  CHECK(run({"phi-table", "--dmax", "4", "--format", "csv"}).out == r.out);
  CHECK(run({"phi-table", "--dmax", "1"}).code == kExitUsage);
}

TEST_CASE("ree command") {
  write_file("cli_phi2.json", state_to_json(max_entangled(2)).dump());
  const Run r = run({"ree", "--state", "cli_phi2.json", "--seed", "1"});
  REQUIRE(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(j["gap"].get<double>() <= 1e-4);

  write_file("cli_sep.json", state_to_json(tensor(random_density({2}, 2, 3), random_density({2}, 2, 4))).dump());
  const Run sep = run({"ree", "--state", "cli_sep.json", "--seed", "1"});
  REQUIRE(sep.code == kExitOk);
  CHECK(Json::parse(sep.out)["value"].get<double>() <= 1e-4);

  write_file("cli_bad.json", "{\"dims\": [2,2], \"re\": ");
  CHECK(run({"ree", "--state", "cli_bad.json", "--seed", "1"}).code == kExitUsage);
  write_file("cli_invalid.json", R"({"dims":[2],"re":[[1,0],[0,1]]})");
  const Run inv = run({"ree", "--state", "cli_invalid.json", "--seed", "1"});
  CHECK(inv.code == kExitUsage);
  CHECK(inv.err.find("trace") != std::string::npos);
  CHECK(run({"ree", "--state", "cli_phi2.json"}).code == kExitUsage);
}

TEST_CASE("measured-ree command") {
  write_file("cli_phi2.json", state_to_json(max_entangled(2)).dump());
  write_file("cli_iso.json", povm_to_json(iso_two_outcome_povm(2)).dump());
  const Run r = run({"measured-ree", "--state", "cli_phi2.json", "--povm", "cli_iso.json", "--seed", "2", "--tol", "1e-3"});
  REQUIRE(r.code == kExitOk);
  CHECK(Json::parse(r.out)["value"].get<double>() <= std::log2(3.0) - 1.0 + 1e-3);
}

TEST_CASE("stein command") {
  const Run r = run({"stein", "--preset", "qubit-pair", "--nmax", "6", "--jobs", "1"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 6);
  CHECK(r.out.find("\n5,0.03125,0.127572016461,") != std::string::npos);

  write_file("cli_rho.json", state_to_json(max_entangled(2)).dump());
  const Run same = run({"stein", "--rho", "cli_rho.json", "--sigma", "cli_rho.json", "--nmax", "2", "--jobs", "1"});
  REQUIRE(same.code == kExitOk);
  CHECK(same.out.find("\n1,0,1,0,") != std::string::npos);
  CHECK(run({"stein", "--rho", "cli_rho.json"}).code == kExitUsage);
  write_file("cli_generic.json", povm_to_json(iso_two_outcome_povm(2)).dump());
  CHECK(run({"stein", "--preset", "qubit-pair", "--povm", "cli_generic.json"}).code == kExitUsage);
}

TEST_CASE("harness command") {
  CHECK(run({"harness", "phi", "--dmax", "3"}).code == kExitOk);
  CHECK(run({"harness", "ssa", "--samples", "2", "--dims", "2,2,2", "--seed", "42", "--jobs", "1"}).code == kExitOk);
  const Run unknown = run({"harness", "nonsense", "--seed", "1"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("classical-ext") != std::string::npos);
  CHECK(run({"harness", "ssa", "--samples", "0", "--seed", "1"}).code == kExitUsage);
  CHECK(run({"harness", "ssa", "--samples", "2"}).code == kExitUsage);
  CHECK(run({"harness", "ssa", "--samples", "2", "--dims", "2,2", "--seed", "1"}).code == kExitUsage);

  const Run csv = run({"harness", "pure-state", "--samples", "2", "--seed", "3", "--format", "csv", "--jobs", "1"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.find("check,seed,samples,violations,skipped,worst_margin,pass\npure-state,3,2,0,") == 0);
}

TEST_CASE("general usage") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  const Run to_file = run({"phi-table", "--dmax", "2", "--format", "json", "--out", "cli_phi_table.json"});
  CHECK(to_file.code == kExitOk);
  CHECK(to_file.out.empty());
  CHECK(read_json_file("cli_phi_table.json")["check"] == "phi-table");
}
