#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glissando/cli/app.hpp"
#include "glissando/cli/cache.hpp"
#include "glissando/cli/serialize.hpp"
#include "glissando/umatrix.hpp"

using namespace glissando;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "glissando");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("glissando-test-" + std::to_string(std::hash<std::string>{}(fs::current_path().string())) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("single weight in text") {
  const Result r = run({"slopes", "--p", "2", "--q", "2", "--k", "5", "--no-cache"});
  CHECK(r.code == 0);
  CHECK(r.out == "0^1, 3/2^2, inf^1\n");
}

TEST_CASE("csv covers the table") {
  const Result r = run({"slopes", "--p", "2", "--q", "2", "--k", "2:23", "--format", "csv", "--no-cache"});
  REQUIRE(r.code == 0);
  std::ifstream f(std::string(GLISSANDO_TEST_DATA) + "/slopes_p2_q2_k2_23.txt");
  std::string expected = "k,slope,multiplicity\n";
  for (std::string line; std::getline(f, line);) {
    const auto colon = line.find(':');
    const std::string k = line.substr(0, colon);
    std::stringstream items(line.substr(colon + 2));
    for (std::string item; std::getline(items, item, ',');) {
      if (item.front() == ' ') item.erase(0, 1);
      const auto caret = item.find('^');
      expected += k + "," + item.substr(0, caret) + "," + item.substr(caret + 1) + "\n";
    }
  }
  CHECK(r.out == expected);
}

TEST_CASE("json form parses") {
  const Result r = run({"slopes", "--p", "3", "--k", "4:6", "--format", "json", "--no-cache"});
  REQUIRE(r.code == 0);
  const auto j = cli::json::parse(r.out);
  CHECK(j["rows"].size() == 3);
  CHECK(j["mode"] == "exact");
  CHECK(j["rows"][0]["k"] == 4);
}

TEST_CASE("bad parameters exit 2") {
  Result r = run({"slopes", "--p", "4", "--k", "5", "--no-cache"});
  CHECK(r.code == 2);
  CHECK(r.err.find("p must be prime") != std::string::npos);
  CHECK(run({"slopes", "--p", "2", "--q", "6", "--k", "5", "--no-cache"}).code == 2);
  CHECK(run({"slopes", "--p", "2", "--k", "9:3", "--no-cache"}).code == 2);
  CHECK(run({"slopes", "--p", "2", "--k", "1", "--no-cache"}).code == 2);
  CHECK(run({"slopes", "--p", "2", "--k", "5", "--mode", "truncated", "--no-cache"}).code == 2);
  CHECK(run({"slopes", "--p", "2", "--k", "5", "--format", "xml", "--no-cache"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "nothing", "--k", "2:3"}).code == 2);
  CHECK(run({"matrix", "--p", "2", "--k", "1"}).code == 2);
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("insufficient precision exits 3 with a usable hint") {
  const Result r = run({"slopes", "--p", "2", "--k", "20", "--mode", "truncated", "--precision", "6", "--cutoff",
                        "5", "--no-cache"});
  REQUIRE(r.code == 3);
  const auto pos = r.err.find("suggested precision: ");
  REQUIRE(pos != std::string::npos);
  const std::string n = std::to_string(std::stoul(r.err.substr(pos + 21)));
  const Result retry = run({"slopes", "--p", "2", "--k", "20", "--mode", "truncated", "--precision", n,
                            "--cutoff", "5", "--no-cache"});
  CHECK(retry.code == 0);
  CHECK(retry.out == "0^1, 1^1, 3^1, 4^1\n");
}

TEST_CASE("matrix rendering") {
  const Result text = run({"matrix", "--p", "2", "--q", "2", "--k", "3"});
  CHECK(text.code == 0);
  CHECK(text.out.find("[1 0]\n[1 0]\n") != std::string::npos);
  const Result js = run({"matrix", "--p", "2", "--q", "2", "--k", "2", "--format", "json"});
  CHECK(cli::json::parse(js.out)["entries"] == cli::json::parse("[[[1]]]"));

  TempDir dir;
  const fs::path dump = dir.path / "u.json";
  CHECK(run({"matrix", "--p", "3", "--k", "6", "--dump", dump.string()}).code == 0);
  std::ifstream f(dump);
  const auto j = cli::json::parse(f);
  CHECK(j["k"] == 6);
  CHECK(j["entries"].size() == 5);
}

TEST_CASE("verify targets") {
  CHECK(run({"verify", "gouvea-mazur", "--p", "2", "--q", "2", "--k", "2:48", "--m", "0:3", "--no-cache"}).code == 0);
  CHECK(run({"verify", "lemma-num", "--m", "1:6", "--n", "2:10000"}).code == 0);
  const Result all = run({"verify", "all", "--p", "3", "--q", "9", "--k", "2:30", "--m", "1:2", "--no-cache"});
  CHECK(all.code == 0);
  CHECK(all.out.find("[FAIL]") == std::string::npos);
  CHECK(all.out.substr(all.out.size() - 3) == "OK\n");

  TempDir dir;
  const fs::path out = dir.path / "report.txt";
  const Result r = run({"verify", "perturbation", "--p", "2", "--k", "2:10", "--m", "1:2", "--no-cache", "--out",
                        out.string()});
  CHECK(r.code == 0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("[PASS] perturbation") != std::string::npos);
  CHECK(ss.str().find("margin") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
  const std::vector<std::string> args = {"slopes", "--p", "3", "--q", "9", "--k", "2:25", "--format", "json",
                                         "--no-cache", "--jobs", "3"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("cache round trip") {
  TempDir dir;
  const cli::ResultCache cache(dir.path);
  const Params pr = Params::make(3, 3);
  const CharSeries s = compute_u_series(pr, 17, kExact);
  CHECK_FALSE(cache.load(pr, 17, kExact));
  cache.store(pr, 17, kExact, s);
  const auto back = cache.load(pr, 17, kExact);
  REQUIRE(back);
  CHECK(*back == s);
  CHECK_FALSE(cache.load(pr, 17, 40));
  CHECK_FALSE(cache.load(Params::make(3, 9), 17, kExact));

  const CharSeries tr = compute_u_series(pr, 17, 5);
  cache.store(pr, 17, 5, tr);
  CHECK(*cache.load(pr, 17, 5) == tr);
  CHECK(cli::series_from_json(cli::to_json(tr, pr, 17)) == tr);
}

TEST_CASE("corrupt cache entries are misses") {
  TempDir dir;
  const cli::ResultCache cache(dir.path);
  const Params pr = Params::make(2, 2);
  cache.store(pr, 9, kExact, compute_u_series(pr, 9, kExact));
  const fs::path entry = cache.entry_path(pr, 9, kExact);
  std::string body;
  {
    std::ifstream f(entry);
    std::stringstream ss;
    ss << f.rdbuf();
    body = ss.str();
  }
  // Flip one coefficient inside the payload; the checksum no longer matches.
  const auto pos = body.find("\"coeffs\"");
  REQUIRE(pos != std::string::npos);
  const auto digit = body.find_first_of("01", pos);
  body[digit] = body[digit] == '0' ? '1' : '0';
  std::ofstream(entry) << body;
  CHECK_FALSE(cache.load(pr, 9, kExact));
  std::ofstream(entry) << "{ not json";
  CHECK_FALSE(cache.load(pr, 9, kExact));
}

TEST_CASE("cache is used and verified by the tool") {
  TempDir dir;
  const std::vector<std::string> base = {"slopes", "--p", "2", "--k", "2:12", "--cache-dir", dir.path.string()};
  const Result first = run(base);
  REQUIRE(first.code == 0);
  CHECK(fs::exists(dir.path / "u-p2-q2-k12-exact.json"));
  CHECK(run(base).out == first.out);

  auto verify = base;
  verify.push_back("--verify-cache");
  CHECK(run(verify).code == 0);

  // A consistent-looking entry with the wrong series is caught only on verification.
  const cli::ResultCache cache(dir.path);
  const Params pr = Params::make(2, 2);
  cache.store(pr, 12, kExact, compute_u_series(pr, 11, kExact));
  CHECK(run(base).out != first.out);
  const Result caught = run(verify);
  CHECK(caught.code == 1);
  CHECK(caught.err.find("differs") != std::string::npos);
}

TEST_CASE("divisors and periodicity subcommands") {
  const Result d = run({"divisors", "--p", "2", "--k", "6"});
  CHECK(d.code == 0);
  CHECK(d.out == "0, 1, 2, inf, inf\n");
  const Result dj = run({"divisors", "--p", "2", "--k", "6", "--format", "json"});
  CHECK(cli::json::parse(dj.out)["divisors"].size() == 5);

  const Result p = run({"periodicity", "--p", "2", "--n", "3", "--k", "6:41", "--no-cache"});
  CHECK(p.code == 0);
  CHECK(p.out.find("observed period: 8") != std::string::npos);
}

}
