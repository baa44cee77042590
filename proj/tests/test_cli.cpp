#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cbchern/cli.hpp"
#include "cbchern/fusion.hpp"
#include "cbchern/io.hpp"

using namespace cbchern;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kWorked{"--algebra", "sl2", "--level", "2", "--weights", "1;1;1;1;2"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

bool is_fraction(const nlohmann::json& j) {
  if (!j.is_string()) return false;
  try {
    parse_rational(j.get<std::string>());
    return true;
  } catch (...) {
    return false;
  }
}

void check_class_schema(const nlohmann::json& doc) {
  REQUIRE(doc.is_object());
  CHECK(doc.at("n").is_number_integer());
  const int n = doc.at("n").get<int>();
  for (const auto& term : doc.at("terms")) {
    CHECK(is_fraction(term.at("coeff")));
    CHECK(term.at("psi").size() == static_cast<std::size_t>(n));
    for (const auto& d : term.at("deltas")) {
      const auto set = d.at("set").get<std::vector<int>>();
      CHECK(std::is_sorted(set.begin(), set.end()));
      CHECK(d.at("power").get<int>() >= 1);
    }
  }
}

void check_report_schema(const nlohmann::json& doc) {
  CHECK(doc.at("identity").is_string());
  CHECK(doc.at("hypotheses").is_array());
  CHECK(doc.at("holds").is_boolean());
  for (const auto& w : doc.at("witness_pairings")) {
    CHECK(is_fraction(w.at("lhs")));
    CHECK(is_fraction(w.at("rhs")));
  }
}

}  // namespace

TEST_CASE("compute subcommands") {
  CHECK(run(with({"rank"}, kWorked)).out == "2\n");
  CHECK(run({"rank", "--algebra", "sl2", "--level", "1", "--weights", "1;1;1"}).out == "0\n");
  CHECK(run(with({"chern", "--m", "2", "--pair-top"}, kWorked)).out == "1\n");
  CHECK(run(with({"ch", "--k", "2", "--pair-top"}, kWorked)).out == "-1/2\n");
  CHECK(run(with({"schur", "--partition", "1,1", "--pair-top"}, kWorked)).out == "1\n");

  const Result c1 = run(with({"c1"}, kWorked));
  CHECK(c1.code == 0);
  const auto doc = nlohmann::json::parse(c1.out);
  check_class_schema(doc);
  CHECK(chow_from_json(doc) == first_chern(BundleSpec{{1}, 2, parse_weight_list({1}, "1;1;1;1;2")}));

  const Result w = run({"weights", "--algebra", "sl2", "--level", "2"});
  const auto wdoc = nlohmann::json::parse(w.out);
  REQUIRE(wdoc.size() == 3);
  CHECK(wdoc[1].at("w") == "3/16");
  CHECK(wdoc[2].at("w") == "1/2");
}

TEST_CASE("integrate and pair read class documents") {
  const auto dir = std::filesystem::temp_directory_path() / "cbchern_cli_test";
  std::filesystem::create_directories(dir);
  const auto file = (dir / "c2.json").string();
  {
    std::ofstream f(file);
    f << run(with({"chern", "--m", "2"}, kWorked)).out;
  }
  CHECK(run({"integrate", "--class", file}).out == "1\n");
  const auto c1file = (dir / "c1.json").string();
  {
    std::ofstream f(c1file);
    f << run(with({"c1"}, kWorked)).out;
  }
  CHECK(run({"pair", "--class", c1file, "--parts", "1|2|3|4,5"}).out ==
        run(with({"pair", "--parts", "1|2|3|4,5"}, kWorked)).out);
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"n": 5, "terms": [{"coeff": "1/0", "psi": [1,1,0,0,0], "deltas": []}]})";
  }
  CHECK(run({"integrate", "--class", (dir / "bad.json").string()}).code == kExitParse);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verification subcommands") {
  const Result crit = run(with({"verify-critical", "--k", "2"}, kWorked));
  CHECK(crit.code == kExitOk);
  const auto doc = nlohmann::json::parse(crit.out);
  check_report_schema(doc);
  CHECK(doc.at("holds") == true);

  const Result ext = run({"verify-extremal", "--algebra", "sl2", "--level", "3", "--weights", "1;1;1;1;1;1;1;1", "--k",
                          "2", "--parts", "1|2|3|4|5,6,7,8"});
  CHECK(ext.code == kExitOk);
  const auto edoc = nlohmann::json::parse(ext.out);
  check_report_schema(edoc);
  CHECK(edoc.at("certificate").at("pairing") == "0");

  const Result off = run({"verify-critical", "--algebra", "sl2", "--level", "3", "--weights", "1;1;1;1;1;1", "--k", "2"});
  CHECK(off.code == kExitHypothesis);

  const Result van = run({"verify-vanishing", "--algebra", "sl2", "--level", "3", "--weights", "1;1;1;1;1;1", "--k", "3"});
  CHECK(van.code == kExitOk);
}

TEST_CASE("basis subcommands") {
  const auto f6 = nlohmann::json::parse(run({"basis", "--kind", "fakhruddin", "--n", "6"}).out);
  CHECK(f6.at("members").size() == 16);
  CHECK(f6.at("kind") == "fakhruddin");
  const auto b8 = nlohmann::json::parse(run({"basis", "--kind", "b1", "--n", "8"}).out);
  CHECK(b8.at("ranks") == nlohmann::json::array({1, 8, 13}));
  const auto p7 = nlohmann::json::parse(run({"pliant", "--kind", "b1", "--n", "7", "--m", "2"}).out);
  CHECK(p7.at("generators").size() == 3);
}

TEST_CASE("exit codes and diagnostics") {
  const Result bad_label = run({"rank", "--algebra", "sl2", "--level", "2", "--weights", "1;x;1"});
  CHECK(bad_label.code == kExitParse);
  CHECK(std::count(bad_label.err.begin(), bad_label.err.end(), '\n') == 1);
  CHECK(run({"rank", "--algebra", "su2", "--weights", "1;1"}).code == kExitParse);
  CHECK(run({"frobnicate"}).code == kExitParse);
  CHECK(run({"rank", "--level", "two"}).code == kExitParse);
  const Result above = run({"rank", "--algebra", "sl2", "--level", "1", "--weights", "2;1;1"});
  CHECK(above.code == kExitPrecondition);
  CHECK(above.out.empty());
  CHECK(run({"verify-extremal", "--algebra", "sl2", "--level", "3", "--weights", "1;1;1;1;1;1;1;1", "--k", "2",
             "--parts", "1|2|3|4,5,6,7,8"})
            .code == kExitPrecondition);
  CHECK(run({"pair", "--algebra", "sl2", "--level", "1", "--weights", "1;1;1;1", "--parts", "1|2|9,3,4"}).code ==
        kExitPrecondition);
  CHECK(run(with({"c1", "--pair-top"}, kWorked)).code == kExitPrecondition);
}

TEST_CASE("output is byte-stable") {
  const auto args = with({"chern", "--m", "2"}, kWorked);
  CHECK(run(args).out == run(args).out);
  const auto text = with({"c1", "--format", "text"}, kWorked);
  CHECK(run(text).out == run(text).out);
}

TEST_CASE("CB_CACHE_DIR persists the fusion memo") {
  const auto dir = std::filesystem::temp_directory_path() / "cbchern_cli_cache";
  std::filesystem::remove_all(dir);
  ::setenv("CB_CACHE_DIR", dir.c_str(), 1);
  fusion_cache::clear();
  CHECK(run({"rank", "--algebra", "sl3", "--level", "2", "--weights", "2,0;2,0;1,0;1,0;1,0;1,0;1,0"}).out == "3\n");
  ::unsetenv("CB_CACHE_DIR");
  std::ifstream in(dir / "fusion.cache");
  REQUIRE(in.good());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.find("\xE2\x86\x92") != std::string::npos);
  }
  CHECK(lines > 0);
  fusion_cache::clear();
  CHECK(fusion_cache::load(dir / "fusion.cache") == lines);
  std::filesystem::remove_all(dir);
}
