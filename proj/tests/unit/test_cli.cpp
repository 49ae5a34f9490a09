#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "primerec/cli.hpp"

using namespace primerec;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"primerec"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("chain") {
  const Outcome r = run_cli({"chain", "--count", "10", "--mode", "proven"});
  CHECK(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "n,p_n,s,precision_bits,enclosure_width,escalations,p_next,oracle,match");
  CHECK(rows[9].starts_with("9,23,46,"));
  CHECK(rows[9].ends_with(",29,29,true"));
  CHECK(r.err.find("all 9 steps match") != std::string::npos);

  const Outcome conj = run_cli({"chain", "--count", "10", "--mode", "conjectural"});
  CHECK(conj.code == cli::kOk);
  CHECK(lines(conj.out).back().ends_with(",29,29,true"));
}

TEST_CASE("chain exit codes") {
  CHECK(run_cli({"chain", "--count", "0"}).code == cli::kBadArguments);
  CHECK(run_cli({"chain", "--mode", "fixed=0.5"}).code == cli::kBadArguments);
  CHECK(run_cli({"chain", "--guard-bits", "0"}).code == cli::kBadArguments);
  CHECK(run_cli({"chain", "--format", "xml"}).code == cli::kBadArguments);
  CHECK(run_cli({"--count", "3"}).code == cli::kBadArguments);
  CHECK(run_cli({"nonsense"}).code == cli::kBadArguments);
  // a too-small fixed exponent computes wrong primes
  const Outcome wrong = run_cli({"chain", "--count", "4", "--mode", "fixed=1.5"});
  CHECK(wrong.code == cli::kOracleMismatch);
  CHECK(lines(wrong.out)[1] == "1,2,1.5,128,2.65e-38,0,2,3,false");
  // a fixed exponent too large for the precision limit
  const Outcome huge = run_cli({"chain", "--count", "3", "--mode", "fixed=1e9"});
  CHECK(huge.code == cli::kPrecisionExhausted);
  CHECK(huge.err.find("step 1") != std::string::npos);
  CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("scan") {
  const Outcome one = run_cli({"scan", "--max-n", "1"});
  CHECK(one.code == cli::kOk);
  CHECK(one.out == "n,p_n,p_next,s_n,ratio\n1,2,3,1.94010201,0.970051003\n");
  CHECK(one.err.find("s_n <= p_n for every n") != std::string::npos);

  const Outcome csv = run_cli({"scan", "--max-n", "12", "--tol", "1e-6"});
  const Outcome json = run_cli({"scan", "--max-n", "12", "--format", "json"});
  REQUIRE(csv.code == cli::kOk);
  REQUIRE(json.code == cli::kOk);
  const auto rows = lines(csv.out);
  const auto array = nlohmann::json::parse(json.out);
  REQUIRE(rows.size() == 13);
  REQUIRE(array.size() == 12);
  for (std::size_t i = 0; i < array.size(); ++i) {
    const auto& o = array[i];
    char expected[160];
    std::snprintf(expected, sizeof expected, "%d,%d,%d,%.9g,%.9g", o["n"].get<int>(),
                  o["p_n"].get<int>(), o["p_next"].get<int>(), o["s_n"].get<double>(),
                  o["ratio"].get<double>());
    CHECK(rows[i + 1] == expected);
  }
  CHECK(run_cli({"scan", "--max-n", "12", "--threads", "3"}).out == csv.out);
  CHECK(run_cli({"scan", "--tol", "0"}).code == cli::kBadArguments);
  CHECK(run_cli({"scan", "--min-n", "5", "--max-n", "4"}).code == cli::kBadArguments);
}

TEST_CASE("scan writes files and a plot script") {
  const auto dir = std::filesystem::temp_directory_path() / "primerec_cli_test";
  std::filesystem::create_directories(dir);
  const std::string csv = (dir / "scan.csv").string();
  const std::string plot = (dir / "scan.gp").string();
  const Outcome r = run_cli({"scan", "--max-n", "3", "--out", csv.c_str(), "--plot", plot.c_str()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  CHECK(read_file(csv).starts_with("n,p_n,p_next,s_n,ratio\n1,2,3,"));
  CHECK(read_file(plot).find("'" + csv + "' using 1:5") != std::string::npos);
  std::filesystem::remove_all(dir);
  CHECK(run_cli({"scan", "--out", "/nonexistent/dir/x.csv"}).code == cli::kBadArguments);
}

TEST_CASE("mod4") {
  const Outcome r = run_cli({"mod4", "--max-n", "100"});
  CHECK(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == "n,p_n,p_next,predicted,actual,match");
  CHECK(rows[1] == "1,2,3,3,3,true");
  CHECK(rows[2] == "2,3,5,1,1,true");
  CHECK(r.err.find("100/100 correct, 0 indeterminate") != std::string::npos);
  const Outcome json = run_cli({"mod4", "--max-n", "2", "--format", "json"});
  const auto array = nlohmann::json::parse(json.out);
  CHECK(array[1]["predicted"] == 1);
  CHECK(array[1]["match"] == true);
}

TEST_CASE("gandhi and trefeu") {
  const Outcome g = run_cli({"gandhi", "--max-n", "15"});
  CHECK(g.code == cli::kOk);
  const auto rows = lines(g.out);
  REQUIRE(rows.size() == 16);
  CHECK(rows[0] == "n,p_n,p_next,computed,window,match");
  CHECK(rows[1] == "1,2,3,3,1.33333333,true");
  for (long b : {2L, 3L, 10L}) {
    const std::string base = std::to_string(b);
    const Outcome t = run_cli({"trefeu", "--max-n", "15", "--base", base.c_str()});
    CHECK(t.code == cli::kOk);
    CHECK(lines(t.out).size() == 16);
  }
  const Outcome all = run_cli({"trefeu", "--max-n", "5", "--base", "2,3", "--base", "10"});
  CHECK(all.code == cli::kOk);
  CHECK(lines(all.out).size() == 16);
  CHECK(run_cli({"trefeu", "--base", "1"}).code == cli::kBadArguments);
}

TEST_CASE("output is deterministic") {
  const Outcome a = run_cli({"chain", "--count", "20"});
  const Outcome b = run_cli({"chain", "--count", "20"});
  CHECK(a.out == b.out);
  const Outcome c = run_cli({"gandhi", "--max-n", "6", "--format", "json"});
  const Outcome d = run_cli({"gandhi", "--max-n", "6", "--format", "json"});
  CHECK(c.out == d.out);
}
