#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "almostsq/cli.hpp"
#include "almostsq/numeric.hpp"

using namespace almostsq::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  const EnvLookup lookup = [env](const std::string& k) -> std::optional<std::string> {
    if (auto it = env.find(k); it != env.end()) return it->second;
    return std::nullopt;
  };
  const int code = run(args, out, err, lookup);
  return {code, out.str(), err.str()};
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("almostsq_test_" + name);
}

}  // namespace

TEST_CASE("find lists the known records") {
  const auto r = run_cli({"find", "--lo", "14000", "--hi", "15000", "--x", "14520", "--theta", "1/4", "--c2", "2"});
  REQUIRE(r.code == kExitOk);
  const auto recs = json_lines(r.out);
  REQUIRE(recs.size() == 7);
  std::vector<std::uint64_t> ns;
  for (const auto& j : recs) ns.push_back(j["n"]);
  CHECK(std::find(ns.begin(), ns.end(), 14280) != ns.end());
  CHECK(std::find(ns.begin(), ns.end(), 14520) != ns.end());
  CHECK(recs[5]["pairs"] == json::parse("[[110,132],[120,121]]"));

  const auto p = run_cli({"find", "--lo", "14000", "--hi", "15000", "--x", "14520", "--theta", "1/4", "--c2",
                          "2", "--method", "products"});
  CHECK(p.out == r.out);
}

TEST_CASE("find with the default center") {
  const auto r = run_cli({"find", "--lo", "14000", "--hi", "15000", "--theta", "1/4", "--c2", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(json_lines(r.out).size() >= 2);
}

TEST_CASE("find in a collision-free regime is empty") {
  const auto r = run_cli({"find", "--lo", "1000000", "--hi", "1001000", "--theta", "1/5", "--c2", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
}

TEST_CASE("find csv") {
  const auto r = run_cli({"find", "--lo", "14500", "--hi", "14530", "--x", "14520", "--theta", "1/4", "--c2", "2",
                          "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out == "n,pair_count,pairs\n14520,2,110x132;120x121\n");
}

TEST_CASE("configuration errors exit 2") {
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10", "--theta", "2/3"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10", "--theta", "1/2"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "10", "--hi", "1", "--theta", "1/4"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10", "--theta", "1/65"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "x", "--hi", "10", "--theta", "1/4"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10", "--theta", "1/4", "--format", "xml"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10", "--theta", "1/4", "--budget", "0"}).code == kExitConfig);
  CHECK(run_cli({"find", "--lo", "1", "--hi", "10"}).code == kExitConfig);
  CHECK(run_cli({"bogus"}).code == kExitConfig);
  CHECK(run_cli({"construct", "--x", "1000000000000", "--epsilon", "1/2"}).code == kExitConfig);
  CHECK(run_cli({"decompose", "--n", "37", "--pairs", "4,9,6,6"}).code == kExitConfig);
  CHECK(run_cli({"decompose", "--n", "36", "--pairs", "4,9,6"}).code == kExitConfig);
}

TEST_CASE("budget overflow exits 3") {
  const std::vector<std::string> args{"find", "--lo", "2900000", "--hi", "3100000", "--theta", "1/3", "--c2", "2"};
  auto with = args;
  with.insert(with.end(), {"--budget", "10"});
  CHECK(run_cli(with).code == kExitCapacity);
  CHECK(run_cli(args, {{"ALMOSTSQ_BUDGET", "10"}}).code == kExitCapacity);
  // the flag beats the environment
  with.back() = "1000000000";
  CHECK(run_cli(with, {{"ALMOSTSQ_BUDGET", "10"}}).code == kExitOk);
  CHECK(run_cli({"gaps", "--lo", "1000000", "--hi", "1100000", "--theta", "1/3", "--c2", "2", "--budget", "10"}).code ==
        kExitCapacity);
}

TEST_CASE("precision cap exits 4") {
  CHECK(run_cli({"construct", "--x", "30000000000000", "--epsilon", "1/4", "--precision-cap", "64"}).code ==
        kExitConfig);
  // sqrt(2^600 + 1) exceeds 2^300 by about 2^-301, so ceil(sqrt(x) - 1) needs more than 128 bits
  const std::string x = almostsq::to_string((almostsq::BigInt(1) << 600) + 1);
  const std::vector<std::string> args{"find", "--lo", "1", "--hi", "2", "--x", x, "--theta", "0", "--method", "products"};
  auto capped = args;
  capped.insert(capped.end(), {"--precision-cap", "128"});
  CHECK(run_cli(capped).code == kExitPrecision);
  CHECK(run_cli(args, {{"ALMOSTSQ_PRECISION_CAP", "128"}}).code == kExitPrecision);
  // with the full ladder the window is decided and is simply too large to scan
  CHECK(run_cli(args).code == kExitCapacity);
}

TEST_CASE("construct") {
  const auto r = run_cli({"construct", "--x", "1000000000000", "--epsilon", "1/4"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  CHECK(j["n"] == 999995000004LL);
  CHECK(j["abs_error"] == 4999996);
  CHECK(j["verification"]["pass"] == true);
  for (const auto& [name, clause] : j["verification"]["clauses"].items()) CHECK_MESSAGE(clause["pass"] == true, name);

  const auto small = run_cli({"construct", "--x", "100000000", "--epsilon", "1/4"});
  REQUIRE(small.code == kExitOk);
  CHECK(json::parse(small.out)["n"] == 99950004);

  CHECK(run_cli({"construct", "--x", "100", "--epsilon", "1/4"}).code == kExitTargetTooSmall);

  const auto csv = run_cli({"construct", "--x", "100000000", "--epsilon", "1/4", "--format", "csv"});
  REQUIRE(csv.code == kExitOk);
  CHECK(csv.out.rfind("key,value\n", 0) == 0);
  CHECK(csv.out.find("\nn,99950004\n") != std::string::npos);
  CHECK(csv.out.find("\nfactors,\"[9898,9996,9999,10098]\"\n") != std::string::npos);
  CHECK(csv.out.find("\nverification.clauses.recipe.detail,\"N = 100, q = 1\"\n") != std::string::npos);
}

TEST_CASE("gaps") {
  const auto r = run_cli({"gaps", "--lo", "14000", "--hi", "15000", "--theta", "1/4", "--c2", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  const auto inst = j["instances"].get<std::vector<std::uint64_t>>();
  CHECK(std::find(inst.begin(), inst.end(), 14280) != inst.end());
  CHECK(std::find(inst.begin(), inst.end(), 14520) != inst.end());
  const auto gaps = j["gaps"].get<std::vector<std::uint64_t>>();
  CHECK(std::find(gaps.begin(), gaps.end(), 240) != gaps.end());

  const auto empty = run_cli({"gaps", "--lo", "1000000", "--hi", "1010000", "--theta", "1/5", "--c2", "1"});
  REQUIRE(empty.code == kExitOk);
  CHECK(json::parse(empty.out)["instance_count"] == 0);

  const auto hist = run_cli({"gaps", "--lo", "14000", "--hi", "15000", "--theta", "1/4", "--c2", "2", "--histogram"});
  REQUIRE(hist.code == kExitOk);
  const auto h = json::parse(hist.out);
  CHECK(h["histogram_mode"] == true);
  CHECK(h.contains("histogram"));
  CHECK_FALSE(h.contains("instances"));

  const auto csv = run_cli({"gaps", "--lo", "14000", "--hi", "15000", "--theta", "1/4", "--c2", "2", "--format", "csv"});
  CHECK(csv.out.rfind("n,gap_from_previous\n14000,\n14040,40\n14280,240\n", 0) == 0);
}

TEST_CASE("decompose") {
  const auto r = run_cli({"decompose", "--n", "14520", "--pairs", "110,132,120,121", "--theta", "1/4", "--c2", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  CHECK(j["d1"] == 10);
  CHECK(j["d2"] == 11);
  CHECK(j["e1"] == 11);
  CHECK(j["e2"] == 12);
  CHECK(j["range"]["pass"] == true);

  const auto s = run_cli({"decompose", "--n", "36", "--pairs", "4,9,6,6"});
  REQUIRE(s.code == kExitOk);
  const auto k = json::parse(s.out);
  CHECK(k["d1"] == 2);
  CHECK(k["d2"] == 3);
  CHECK(k["e1"] == 2);
  CHECK(k["e2"] == 3);

  CHECK(run_cli({"decompose", "--n", "9940", "--pairs", "70,142,71,140"}).code == kExitStructure);
}

TEST_CASE("output does not depend on thread count") {
  const std::vector<std::vector<std::string>> commands{
      {"find", "--lo", "2900000", "--hi", "3100000", "--theta", "1/3", "--c2", "2"},
      {"gaps", "--lo", "200000", "--hi", "400000", "--theta", "3/10", "--c2", "2"},
  };
  for (const auto& cmd : commands) {
    auto one = cmd;
    one.insert(one.end(), {"--threads", "1"});
    const auto base = run_cli(one);
    REQUIRE(base.code == kExitOk);
    for (const char* t : {"2", "5"}) {
      auto many = cmd;
      many.insert(many.end(), {"--threads", t});
      CHECK(run_cli(many).out == base.out);
    }
    CHECK(run_cli(cmd, {{"ALMOSTSQ_THREADS", "3"}}).out == base.out);
  }
}

TEST_CASE("config file and output path") {
  const auto cfg = temp_file("config.txt");
  {
    std::ofstream f(cfg);
    f << "# limits\nbudget = 10\nthreads = 2\n";
  }
  const std::vector<std::string> args{"find", "--lo", "2900000", "--hi", "3100000", "--theta", "1/3", "--c2", "2",
                                      "--config", cfg.string()};
  CHECK(run_cli(args).code == kExitCapacity);
  // environment beats the config file
  CHECK(run_cli(args, {{"ALMOSTSQ_BUDGET", "1000000000"}}).code == kExitOk);

  {
    std::ofstream f(cfg);
    f << "budget\n";
  }
  CHECK(run_cli(args).code == kExitConfig);
  std::filesystem::remove(cfg);
  CHECK(run_cli(args).code == kExitConfig);

  const auto out = temp_file("out.jsonl");
  const auto r = run_cli({"find", "--lo", "14500", "--hi", "14530", "--x", "14520", "--theta", "1/4", "--c2", "2",
                          "-o", out.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "{\"n\":14520,\"pairs\":[[110,132],[120,121]]}\n");
  std::filesystem::remove(out);
}
