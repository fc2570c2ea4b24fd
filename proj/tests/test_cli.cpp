#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "milnor/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "milnor");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = milnor::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and argument errors") {
    CHECK(run({"--help"}).code == milnor::cli::kExitOk);
    const auto help = run({"components", "--help"});
    CHECK(help.code == milnor::cli::kExitOk);
    CHECK(help.out.find("800") != std::string::npos);
    CHECK(run({}).code == milnor::cli::kExitInput);
    CHECK(run({"analyze", "z1", "--no-such-flag"}).code == milnor::cli::kExitInput);
    CHECK(run({"analyze", "z1 +* z2"}).code == milnor::cli::kExitInput);
    CHECK(run({"lens-roots", "--n", "1"}).code == milnor::cli::kExitInput);
    CHECK(run({"lens-roots", "--a", "0.7"}).code == milnor::cli::kExitInput);
  }

  TEST_CASE("analyze reports verdicts and Newton data") {
    const auto r = run({"--json", "analyze", "z1^2 + 2*z1*z2 + z2^2", "--face", "1,1", "--trials", "50",
                        "--expect", "witness_found"});
    REQUIRE(r.code == milnor::cli::kExitOk);
    const auto j = parse(r);
    CHECK(j["degenerate_face_found"] == true);
    CHECK(j["faces"][0]["verdict"] == "witness_found");

    const auto s = run({"--json", "analyze", "z1^2 + z2^2", "--face", "1,1", "--trials", "50"});
    REQUIRE(s.code == milnor::cli::kExitOk);
    CHECK(parse(s)["faces"][0]["verdict"] == "no_witness");
    CHECK(run({"analyze", "z1^2 + z2^2", "--face", "1,1", "--trials", "20", "--expect", "witness_found"}).code ==
          milnor::cli::kExitMismatch);
  }

  TEST_CASE("analyze lists vanishing subspaces 1-based") {
    const auto r = run({"--json", "analyze", "z1*z2", "--trials", "10", "--bound", "2"});
    REQUIRE(r.code == milnor::cli::kExitOk);
    const auto j = parse(r);
    REQUIRE(j["tameness"].size() == 2);
    CHECK(j["tameness"][0]["subspace"] == nlohmann::json::array({1}));
  }

  TEST_CASE("repeated runs are byte-identical") {
    const std::vector<std::string> args{"--json", "--seed", "3", "sample-fiber", "z1*z2 + zb1", "--N", "12"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == milnor::cli::kExitOk);
    CHECK(a.out == b.out);
    CHECK(parse(a)["count"] == 12);
  }

  TEST_CASE("monodromy returns to the fiber") {
    const auto r = run({"--json", "monodromy", "z1*z2", "--theta", "1.0"});
    REQUIRE(r.code == milnor::cli::kExitOk);
    const auto j = parse(r);
    CHECK(j["angle_error"].get<double>() < 1e-6);
    CHECK(j["max_modulus_drift"].get<double>() < 1e-8);
  }

  TEST_CASE("gcd-check without numerics") {
    const auto r = run({"--json", "gcd-check", "--mult", "6,10,15"});
    REQUIRE(r.code == milnor::cli::kExitOk);
    const auto j = parse(r);
    CHECK(j["gcd"] == 1);
    CHECK(j["cyclic_cover_components"] == 1);
    CHECK(run({"gcd-check", "--mult", "4,6", "--expect", "3"}).code == milnor::cli::kExitMismatch);
    CHECK(run({"gcd-check", "--mult", "4,0"}).code == milnor::cli::kExitInput);
  }

  TEST_CASE("lens-roots exit codes follow the count") {
    const auto four = run({"--json", "lens-roots", "--n", "4"});
    CHECK(four.code == milnor::cli::kExitOk);
    CHECK(parse(four)["count"] == 15);
    const auto two = run({"--json", "lens-roots", "--n", "2"});
    CHECK(two.code == milnor::cli::kExitMismatch);
    CHECK(parse(two)["match"] == false);
  }

  TEST_CASE("config file sits between flags and defaults") {
    const auto cfg = temp_file("milnor_cli_test_config.json",
                               R"({"seed": 5, "sample-fiber": {"N": 7}})");
    const auto from_file = run({"--config", cfg.string(), "--json", "sample-fiber", "z1*z2"});
    REQUIRE(from_file.code == milnor::cli::kExitOk);
    CHECK(parse(from_file)["count"] == 7);
    const auto explicit_seed = run({"--json", "--seed", "5", "sample-fiber", "z1*z2", "--N", "7"});
    CHECK(from_file.out == explicit_seed.out);

    const auto flag_wins = run({"--config", cfg.string(), "--json", "sample-fiber", "z1*z2", "--N", "9"});
    REQUIRE(flag_wins.code == milnor::cli::kExitOk);
    CHECK(parse(flag_wins)["count"] == 9);

    const auto bad = temp_file("milnor_cli_test_bad.json", R"({"no_such_option": 1})");
    CHECK(run({"--config", bad.string(), "sample-fiber", "z1*z2"}).code == milnor::cli::kExitInput);
    std::filesystem::remove(cfg);
    std::filesystem::remove(bad);
  }

  TEST_CASE("polynomial input from a JSON file") {
    const auto path = temp_file(
        "milnor_cli_test_poly.json",
        R"({"n": 2, "terms": [{"re": 1, "im": 0, "nu": [1, 0], "mu": [0, 0]}, {"re": 1, "im": 0, "nu": [0, 1], "mu": [0, 0]}]})");
    const auto r = run({"--json", "sample-fiber", path.string(), "--N", "5"});
    CHECK(r.code == milnor::cli::kExitOk);
    std::filesystem::remove(path);
  }
}
