// Runs the end-to-end criteria through the command-line entry point and
// prints one PASS or FAIL line per criterion.

#include "trackpoly/cli.hpp"
#include "trackpoly/polynomial.hpp"

#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace trackpoly;
using json = nlohmann::json;

namespace {

std::string fixtures;
std::string workdir;

struct Run {
  int code = 0;
  std::string out, err;
  json doc;
};

Run cli(std::vector<std::string> args, bool structured = true) {
  args.insert(args.begin(), "trackpoly");
  if (structured) args.insert(args.begin() + 1, {"--format", "structured"});
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  if (structured && r.code != 1) r.doc = json::parse(r.out, nullptr, false);
  return r;
}

std::string fx(const std::string& name) { return fixtures + "/" + name; }

// Collects mismatches for one criterion.
struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void poly(const json& doc, const std::string& key, const std::string& want) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      problems.push_back(key + " missing");
      return;
    }
    const std::string got = doc[key];
    if (parse_polynomial(got) != parse_polynomial(want)) problems.push_back(key + " = " + got + ", expected " + want);
  }
  bool report() const {
    std::cout << (problems.empty() ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
    if (!problems.empty()) {
      std::cout << " --";
      for (const auto& p : problems) std::cout << " [" << p << "]";
    }
    std::cout << "\n";
    return problems.empty();
  }
};

bool within(const std::string& decimal, const std::string& target, const std::string& tol) {
  Rational d = parse_decimal(decimal) - parse_decimal(target);
  if (d < 0) d = -d;
  return d <= parse_decimal(tol);
}

Criterion knot() {
  Criterion c{1, "k8_9 end-to-end", {}};
  const Run r = cli({"analyze", fx("k8_9.tt")});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code) + " " + r.err);
  if (r.doc.is_discarded() || r.doc.is_null()) return c.expect(false, "no report"), c;
  c.poly(r.doc, "char_poly", "x^9 - 2*x^8 + x^7 - 4*x^5 + 4*x^4 - x^2 + 2*x - 1");
  c.poly(r.doc, "vertex_poly", "x^3 + x^2 - x - 1");
  c.poly(r.doc, "homology_poly", "x^6 - 3*x^5 + 5*x^4 - 7*x^3 + 5*x^2 - 3*x + 1");
  c.poly(r.doc, "symplectic_poly", "x^6 - 3*x^5 + 5*x^4 - 7*x^3 + 5*x^2 - 3*x + 1");
  c.poly(r.doc, "puncture_poly", "1");
  c.expect(r.doc["orientable"] == true, "not orientable");
  c.expect(r.doc["orientation_action"] == "preserving", "orientation action not preserving");
  return c;
}

Criterion penner() {
  Criterion c{2, "Penner end-to-end", {}};
  const Run r = cli({"analyze", fx("penner.tt")});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code) + " " + r.err);
  if (r.doc.is_discarded() || r.doc.is_null()) return c.expect(false, "no report"), c;
  c.poly(r.doc, "char_poly", "(x^4 - 11*x^3 + 22*x^2 - 11*x + 1)*(x - 1)^2");
  c.poly(r.doc, "puncture_poly", "x - 1");
  c.poly(r.doc, "symplectic_poly", "x^4 - 11*x^3 + 22*x^2 - 11*x + 1");
  c.expect(r.doc["dim_W"] == 5, "dim W " + r.doc["dim_W"].dump());
  c.expect(r.doc["dim_Z"] == 1, "dim Z " + r.doc["dim_Z"].dump());
  c.expect(r.doc["orientable"] == false, "orientable");
  c.expect(r.doc["basis"] == "no-odd-nonorientable", "basis case " + r.doc["basis"].dump());
  for (const auto& [v, type] : r.doc["vertex_types"].items()) c.expect(type != "odd", "odd vertex " + v);
  return c;
}

Criterion penner_cover() {
  Criterion c{3, "Penner orientation cover", {}};
  const std::string out = workdir + "/cover";
  const Run r = cli({"cover", fx("penner.tt"), "--out-dir", out});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code) + " " + r.err);
  if (r.doc.is_discarded() || r.doc.is_null()) return c.expect(false, "no cover report"), c;
  const json A = json::parse(R"([[2,1,1,2,3,3],[0,1,0,1,1,1],[0,0,2,1,1,1],[1,1,1,2,2,2],[0,0,0,1,2,2],[0,0,0,1,1,2]])");
  const json B = json::parse(R"([[0,1,0,1,1,1],[0,0,1,1,1,1],[0,1,0,1,1,1],[0,1,0,1,1,1],[0,0,1,1,1,1],[0,0,0,0,0,0]])");
  c.expect(r.doc["A"] == A, "A = " + r.doc["A"].dump());
  c.expect(r.doc["B"] == B, "B = " + r.doc["B"].dump());
  c.expect(r.doc["A_plus_B_is_T"] == true, "A + B != T");
  c.expect(r.doc["op"]["holds"] == true, "op identity fails");
  c.expect(r.doc["or"]["holds"] == true, "or identity fails");

  const std::string quartic = "(x^4 - 11*x^3 + 22*x^2 - 11*x + 1)";
  const Run base = cli({"--tol", "1e-9", "analyze", fx("penner.tt")});
  const Run op = cli({"--tol", "1e-9", "analyze", out + "/penner.op.tt"});
  const Run orr = cli({"--tol", "1e-9", "analyze", out + "/penner.or.tt"});
  c.expect(op.code == 0 && orr.code == 0 && base.code == 0, "analysis of the lifts failed " + op.err + orr.err);
  if (op.doc.is_null() || orr.doc.is_null() || base.doc.is_null()) return c;
  c.poly(op.doc, "symplectic_poly", "(x - 1)^2*(x^2 - 4*x + 1)*(x^2 - 3*x + 1)*" + quartic);
  c.poly(orr.doc, "symplectic_poly", "(x + 1)^2*(x^2 + 3*x + 1)*(x^2 + 4*x + 1)*" + quartic);
  c.poly(json{{"op_char_poly", r.doc["op"]["char_poly"]}}, "op_char_poly",
         "(x - 1)^4*(x^2 - 4*x + 1)*(x^2 - 3*x + 1)*" + quartic);
  c.poly(json{{"or_char_poly", r.doc["or"]["char_poly"]}}, "or_char_poly",
         "(x - 1)^2*(x + 1)^2*(x^2 + 3*x + 1)*(x^2 + 4*x + 1)*" + quartic);
  const std::string lambda = base.doc["dilatation"];
  c.expect(within(op.doc["dilatation"], lambda, "1e-6"), "op dilatation " + op.doc["dilatation"].dump());
  c.expect(within(orr.doc["dilatation"], lambda, "1e-6"), "or dilatation " + orr.doc["dilatation"].dump());
  return c;
}

Criterion matrix_path() {
  Criterion c{4, "matrix path for F1 and F2", {}};
  const Run f1 = cli({"--tol", "1e-6", "restrict", fx("f1_T.txt"), fx("f1_Q.txt")});
  const Run f2 = cli({"--tol", "1e-6", "restrict", fx("f2_T.txt"), fx("f2_Q.txt")});
  c.expect(f1.code == 0 && f2.code == 0, "restrict failed " + f1.err + f2.err);
  if (f1.doc.is_null() || f2.doc.is_null()) return c;
  c.expect(f1.doc["A"] == json::parse("[[16,0,6,21],[6,1,3,9],[3,0,1,3],[15,0,6,22]]"), "A1 = " + f1.doc["A"].dump());
  c.expect(f2.doc["A"] == json::parse("[[31,6,0],[36,7,0],[30,5,1]]"), "A2 = " + f2.doc["A"].dump());
  c.poly(f1.doc, "homology_poly", "(x - 1)^2*(x^2 - 38*x + 1)");
  c.poly(f2.doc, "homology_poly", "(x - 1)*(x^2 - 38*x + 1)");
  c.expect(f1.doc["homology_poly"] != f2.doc["homology_poly"], "F1 and F2 not distinguished");
  c.expect(within(f1.doc["dilatation"], "37.9737", "5e-4"), "F1 dilatation " + f1.doc["dilatation"].dump());
  c.expect(within(f2.doc["dilatation"], "37.9737", "5e-4"), "F2 dilatation " + f2.doc["dilatation"].dump());
  return c;
}

Criterion properties() {
  Criterion c{5, "property suites", {}};
  const Run r = cli({"selftest", "--fixtures", fixtures});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code) + " " + r.err);
  if (!r.doc.is_array()) return c.expect(false, "no suite results"), c;
  std::string ids;
  for (const auto& s : r.doc) {
    ids += s["id"].get<std::string>();
    c.expect(s["passed"] == true, "suite " + s["id"].get<std::string>() + " " + s["failures"].dump());
    c.expect(s["cases"] > 0, "suite " + s["id"].get<std::string>() + " ran no cases");
  }
  c.expect(ids == "abcdefghij", "suites " + ids);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <fixture-dir> <work-dir>\n";
    return 2;
  }
  fixtures = argv[1];
  workdir = argv[2];
  std::filesystem::create_directories(workdir);
  bool ok = true;
  for (const Criterion& c : {knot(), penner(), penner_cover(), matrix_path(), properties()}) ok = c.report() && ok;
  std::cout << "note criterion 6: not reproducible here; the maps of the mixed-vertex example and of 8_10 are "
               "not given, and the eigenspace statement is covered only through its polynomial consequences\n";
  return ok ? 0 : 1;
}
