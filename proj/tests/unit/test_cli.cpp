#include "fixtures.hpp"

#include "trackpoly/cli.hpp"
#include "trackpoly/invariants.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace trackpoly;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "trackpoly");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "trackpoly_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("analyze exit codes") {
  CHECK(run({"analyze", fixture_path("k8_9.tt")}).code == kExitOk);

  const Result broken = run({"analyze", std::string(TRACKPOLY_TEST_DATA) + "/broken.tt"});
  CHECK(broken.code == kExitInvalidInput);
  CHECK(broken.err.find("not a path") != std::string::npos);

  CHECK(run({"analyze", "/nonexistent/file.tt"}).code == kExitInvalidInput);
  CHECK(run({"analyze"}).code == kExitInvalidInput);
  CHECK(run({"--tol", "0", "analyze", fixture_path("k8_9.tt")}).code == kExitInvalidInput);
  CHECK(run({"--tol", "abc", "analyze", fixture_path("k8_9.tt")}).code == kExitInvalidInput);
  CHECK(run({"--format", "xml", "analyze", fixture_path("k8_9.tt")}).code == kExitInvalidInput);

  // A reflected vertex passes validation but breaks the form identity.
  TrainTrackMap m = load_fixture("k8_9.tt");
  auto& order = m.cyclic_order[*m.find_vertex("v2")];
  std::reverse(order.begin(), order.end());
  const auto path = scratch("reflected.tt");
  std::ofstream(path) << serialize(m);
  const Result bad = run({"analyze", path.string()});
  CHECK(bad.code == kExitInternal);
  CHECK(bad.err.find("form_invariant") != std::string::npos);
  CHECK(bad.out.find("status: invalid") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  for (const char* format : {"text", "structured"}) {
    CAPTURE(format);
    const Result a = run({"--format", format, "analyze", fixture_path("penner.tt")});
    const Result b = run({"--format", format, "analyze", fixture_path("penner.tt")});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("structured analyze") {
  const Result r = run({"--format", "structured", "analyze", fixture_path("penner.tt")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"dim_Z\": 1") != std::string::npos);
  CHECK(r.out.find("\"symplectic_poly\": \"x^4 - 11*x^3 + 22*x^2 - 11*x + 1\"") != std::string::npos);
}

TEST_CASE("power") {
  CHECK(run({"power", fixture_path("penner.tt"), "-n", "1"}).out == run({"analyze", fixture_path("penner.tt")}).out);
  const Result two = run({"power", fixture_path("k8_9.tt"), "-n", "2"});
  CHECK(two.code == kExitOk);
  CHECK(two.out.find("MISMATCH") == std::string::npos);
  CHECK(two.out.find("symplectic_poly: x^6 + x^5 - 7*x^4 - 15*x^3 - 7*x^2 + x + 1 | predicted") != std::string::npos);
  const Result cap = run({"power", fixture_path("k8_9.tt"), "-n", "99"});
  CHECK(cap.code == kExitInvalidInput);
  CHECK(cap.err.find("exceeds") != std::string::npos);
  CHECK(run({"--max-word-len", "2", "power", fixture_path("k8_9.tt"), "-n", "2"}).code == kExitInvalidInput);
  CHECK(run({"power", fixture_path("k8_9.tt"), "-n", "0"}).code == kExitInvalidInput);
}

TEST_CASE("cover writes both lifts") {
  const auto dir = scratch("cover");
  std::filesystem::remove_all(dir);
  const Result r = run({"cover", fixture_path("penner.tt"), "--out-dir", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("sign-consistent: b c e") != std::string::npos);
  CHECK(r.out.find("A + B = T: yes") != std::string::npos);
  for (const char* name : {"penner.op.tt", "penner.or.tt"}) {
    CAPTURE(name);
    REQUIRE(std::filesystem::exists(dir / name));
    const Result a = run({"analyze", (dir / name).string()});
    CHECK(a.code == kExitOk);
    CHECK(a.out.find("orientable: yes") != std::string::npos);
  }
  const std::string op = [&] {
    std::ifstream f(dir / "penner.op.tt");
    return std::string(std::istreambuf_iterator<char>(f), {});
  }();
  CHECK(op.find("map b -> d a c' d' a' b") != std::string::npos);

  const Result orientable = run({"cover", fixture_path("k8_9.tt"), "--out-dir", dir.string()});
  CHECK(orientable.code == kExitInvalidInput);
  CHECK(orientable.err.find("train track is orientable") != std::string::npos);
}

TEST_CASE("restrict") {
  const Result r = run({"restrict", fixture_path("f2_T.txt"), fixture_path("f2_Q.txt")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("homology_poly: x^3 - 39*x^2 + 39*x - 1") != std::string::npos);
  CHECK(r.out.find("dilatation: 37.973666") != std::string::npos);
  CHECK(run({"restrict", fixture_path("f1_T.txt"), fixture_path("f2_Q.txt")}).code == kExitInvalidInput);
  CHECK(run({"restrict", fixture_path("f1_T.txt")}).code == kExitInvalidInput);

  const auto neg = scratch("neg.txt");
  std::ofstream(neg) << "1 1\n-1\n";
  const auto one = scratch("one.txt");
  std::ofstream(one) << "1 1\n1\n";
  CHECK(run({"restrict", neg.string(), one.string()}).code == kExitInvalidInput);
}

TEST_CASE("selftest command") {
  const Result r = run({"selftest", "--fixtures", TRACKPOLY_FIXTURE_DIR});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("status: ok") != std::string::npos);
  CHECK(run({"selftest", "--fixtures", "/nonexistent"}).code == kExitInvalidInput);
}
