#include "trackpoly/cli.hpp"

#include "trackpoly/cover.hpp"
#include "trackpoly/errors.hpp"
#include "trackpoly/selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#ifndef TRACKPOLY_DEFAULT_FIXTURES
#define TRACKPOLY_DEFAULT_FIXTURES "fixtures"
#endif

namespace trackpoly {

namespace {

using json = nlohmann::ordered_json;

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

void require_inputs(const RunConfig& c, std::size_t count) {
  if (c.inputs.size() != count)
    throw InputError(c.command + " expects " + std::to_string(count) + " input file(s), got " +
                     std::to_string(c.inputs.size()));
}

ReportOptions report_options(const RunConfig& c, const TrainTrackMap& m) {
  ReportOptions o;
  o.tol = c.tol;
  o.basis.seed = c.seed;
  if (c.loop) o.basis.loop_hint = parse_loop(m, *c.loop);
  return o;
}

int report_status(const InvariantReport& r, const RunConfig& c) {
  if (!r.valid()) return kExitInternal;
  if (c.strict && !r.warnings.empty()) return kExitInternal;
  return kExitOk;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).convert_to<long long>());
    rows.push_back(row);
  }
  return rows;
}

std::string matrix_text(const IntMatrix& m) {
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cells.push_back(m(i, j).str());
      width = std::max(width, cells.back().size());
    }
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::string& c = cells[i * m.cols() + j];
      s += (j ? " " : "") + std::string(width - c.size(), ' ') + c;
    }
    s += "]\n";
  }
  return s;
}

std::string file_stem(const std::string& path) {
  std::string stem = std::filesystem::path(path).filename().string();
  if (auto dot = stem.rfind(".tt"); dot != std::string::npos && dot + 3 == stem.size()) stem.erase(dot);
  return stem;
}

}  // namespace

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_inputs(c, 1);
    const TrainTrackMap m = load_spec(c.inputs[0]);
    const InvariantReport r = full_report(m, report_options(c, m));
    out << (c.format == OutputFormat::Structured ? to_json(r, m) : to_text(r, m));
    for (const Check& check : r.checks)
      if (!check.passed) err << "check failed: " << check.name << ": " << check.detail << "\n";
    return report_status(r, c);
  });
}

int cmd_cover(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_inputs(c, 1);
    const TrainTrackMap m = load_spec(c.inputs[0]);
    const GateStructure g = analyze_gates(m);
    const OrientabilityVerdict verdict = orientability(m, g);
    const Cover cover = build_cover(m, g, verdict);
    const LiftedMaps lifted = lift_map(m, cover);
    const IntMatrix T = transition_matrix(m);
    const CoverIdentities id = cover_identities(T, lifted.A, lifted.B);
    const bool sum_ok = lifted.A + lifted.B == T;

    const std::filesystem::path dir(c.out_dir);
    std::filesystem::create_directories(dir);
    const std::string stem = file_stem(c.inputs[0]);
    std::vector<std::string> written;
    for (const auto& [suffix, map] : {std::pair{".op.tt", &lifted.op}, std::pair{".or.tt", &lifted.orr}}) {
      const std::filesystem::path path = dir / (stem + suffix);
      std::ofstream f(path);
      if (!f) throw InputError("cannot write " + path.string());
      f << serialize(*map);
      written.push_back(path.string());
    }

    std::vector<std::string> consistent, crossing;
    for (std::size_t e = 0; e < m.num_edges(); ++e)
      (cover.sign_consistent[e] ? consistent : crossing).push_back(m.edges[e].name);

    if (c.format == OutputFormat::Structured) {
      json j;
      j["edges"] = lifted.op.num_edges();
      j["vertices"] = lifted.op.num_vertices();
      j["sign_consistent"] = consistent;
      j["sign_inconsistent"] = crossing;
      j["A"] = matrix_json(lifted.A);
      j["B"] = matrix_json(lifted.B);
      j["A_plus_B_is_T"] = sum_ok;
      j["op"] = {{"char_poly", to_string(id.chi_op)}, {"det_factor", to_string(id.det_op)}, {"holds", id.op_holds}};
      j["or"] = {{"char_poly", to_string(id.chi_or)}, {"det_factor", to_string(id.det_or)}, {"holds", id.or_holds}};
      j["files"] = written;
      out << j.dump(2) << "\n";
    } else {
      auto names = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
        return s.empty() ? std::string("-") : s;
      };
      out << "cover edges: " << lifted.op.num_edges() << "\n";
      out << "cover vertices: " << lifted.op.num_vertices() << "\n";
      out << "sign-consistent: " << names(consistent) << "\n";
      out << "sign-inconsistent: " << names(crossing) << "\n";
      out << "A:\n" << matrix_text(lifted.A) << "B:\n" << matrix_text(lifted.B);
      out << "A + B = T: " << (sum_ok ? "yes" : "no") << "\n";
      out << "op lift chi: " << to_string(id.chi_op) << "\n";
      out << "  = chi(T) * (" << to_string(id.det_op) << "): " << (id.op_holds ? "holds" : "FAILS") << "\n";
      out << "or lift chi: " << to_string(id.chi_or) << "\n";
      out << "  = chi(T) * (" << to_string(id.det_or) << "): " << (id.or_holds ? "holds" : "FAILS") << "\n";
      for (const auto& w : written) out << "wrote " << w << "\n";
    }
    return sum_ok && id.op_holds && id.or_holds ? kExitOk : kExitInternal;
  });
}

int cmd_power(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.power == 1) return cmd_analyze(c, out, err);
  return guarded(err, [&] {
    require_inputs(c, 1);
    if (c.power == 0) throw InputError("power must be at least 1");
    const TrainTrackMap m = load_spec(c.inputs[0]);
    const TrainTrackMap fn = compose(m, c.power, c.max_word_len);
    const InvariantReport r1 = full_report(m, report_options(c, m));
    ReportOptions on = report_options(c, m);
    on.basis.loop_hint.reset();
    const InvariantReport rn = full_report(fn, on);

    struct Row {
      std::string name;
      std::optional<IntPolynomial> got, want;
    };
    auto predict = [&](const std::optional<IntPolynomial>& p) -> std::optional<IntPolynomial> {
      if (!p) return std::nullopt;
      return power_roots_poly(*p, c.power);
    };
    const std::vector<Row> rows = {
        {"char_poly", rn.char_poly, power_roots_poly(r1.char_poly, c.power)},
        {"homology_poly", rn.homology, predict(r1.homology)},
        {"vertex_poly", rn.vertex, predict(r1.vertex)},
        {"puncture_poly", rn.puncture, predict(r1.puncture)},
        {"symplectic_poly", rn.symplectic, predict(r1.symplectic)},
    };
    auto text = [](const std::optional<IntPolynomial>& p) { return p ? to_string(*p) : std::string("none"); };
    bool all = true;
    for (const Row& row : rows) all = all && row.got == row.want;

    if (c.format == OutputFormat::Structured) {
      json j;
      j["n"] = c.power;
      j["report"] = json::parse(to_json(rn, fn));
      json cmp = json::object();
      for (const Row& row : rows)
        cmp[row.name] = {{"power", text(row.got)}, {"predicted", text(row.want)}, {"match", row.got == row.want}};
      j["comparison"] = cmp;
      j["power_law_holds"] = all;
      out << j.dump(2) << "\n";
    } else {
      out << to_text(rn, fn);
      out << "power law (n = " << c.power << "):\n";
      for (const Row& row : rows)
        out << "  " << row.name << ": " << text(row.got) << " | predicted " << text(row.want) << " | "
            << (row.got == row.want ? "match" : "MISMATCH") << "\n";
    }
    if (!all) return static_cast<int>(kExitInternal);
    return report_status(rn, c);
  });
}

int cmd_restrict(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_inputs(c, 2);
    const IntMatrix T = load_matrix(c.inputs[0]);
    const IntMatrix Q = load_matrix(c.inputs[1]);
    if (T.rows() != T.cols()) throw InputError("T must be square, got " + T.shape());
    for (std::size_t i = 0; i < T.rows(); ++i)
      for (std::size_t j = 0; j < T.cols(); ++j)
        if (T(i, j) < 0) throw InputError("T has a negative entry at " + std::to_string(i) + "," + std::to_string(j));
    const IntMatrix A = restrict_to_span(T, Q);
    const IntPolynomial chi = char_poly(T);
    const IntPolynomial homology = char_poly(A);
    const IntPolynomial vertex = vertex_polynomial_quotient(chi, homology);
    const RootEstimate lambda = largest_real_root(homology, c.tol);
    const int digits = decimal_places_for(c.tol);
    if (c.format == OutputFormat::Structured) {
      json j;
      j["A"] = matrix_json(A);
      j["char_poly"] = to_string(chi);
      j["homology_poly"] = to_string(homology);
      j["vertex_poly"] = to_string(vertex);
      j["dilatation"] = to_decimal(lambda.value, digits);
      j["dilatation_interval"] = {to_string(lambda.lower), to_string(lambda.upper)};
      out << j.dump(2) << "\n";
    } else {
      out << "A:\n" << matrix_text(A);
      out << "char_poly: " << to_string(chi) << "\n";
      out << "homology_poly: " << to_string(homology) << "\n";
      out << "vertex_poly: " << to_string(vertex) << "\n";
      out << "dilatation: " << to_decimal(lambda.value, digits) << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_selftest(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string dir = c.fixture_dir.empty() ? std::string(TRACKPOLY_DEFAULT_FIXTURES) : c.fixture_dir;
    if (!std::filesystem::is_directory(dir)) throw InputError("fixture directory not found: " + dir);
    const std::vector<SuiteResult> suites = run_selftest(dir);
    bool ok = true;
    if (c.format == OutputFormat::Structured) {
      json j = json::array();
      for (const SuiteResult& s : suites) {
        j.push_back({{"id", s.id}, {"name", s.name}, {"cases", s.cases}, {"passed", s.passed()},
                     {"failures", s.failures}});
        ok = ok && s.passed();
      }
      out << j.dump(2) << "\n";
    } else {
      for (const SuiteResult& s : suites) {
        out << (s.passed() ? "[pass] " : "[FAIL] ") << s.id << " " << s.name << " (" << s.cases << " cases)\n";
        for (const auto& f : s.failures) out << "    " << f << "\n";
        ok = ok && s.passed();
      }
      out << "status: " << (ok ? "ok" : "failed") << "\n";
    }
    return ok ? kExitOk : kExitInternal;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polynomial invariants of train track maps"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  std::string format = "text";
  std::string tol = "1e-6";
  app.add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--tol", tol, "dilatation tolerance, a positive decimal");
  app.add_option("--max-word-len", c.max_word_len, "cap on image word length when composing");
  app.add_flag("--strict", c.strict, "treat warnings as failures");

  auto* analyze = app.add_subcommand("analyze", "full report for a train track map");
  analyze->add_option("spec", c.inputs, "map file")->required()->expected(1);
  analyze->add_option("--loop", c.loop, "core loop for the weight basis, e.g. \"a ~b\"");
  analyze->add_option("--seed", c.seed, "randomize the spanning tree");

  auto* cover = app.add_subcommand("cover", "orientation double cover and both lifts");
  cover->add_option("spec", c.inputs, "map file")->required()->expected(1);
  cover->add_option("--out-dir", c.out_dir, "directory for <name>.op.tt and <name>.or.tt");

  auto* power = app.add_subcommand("power", "report for f^n against the power law");
  power->add_option("spec", c.inputs, "map file")->required()->expected(1);
  power->add_option("-n", c.power, "exponent")->required()->check(CLI::PositiveNumber);
  power->add_option("--loop", c.loop, "core loop for the weight basis");
  power->add_option("--seed", c.seed, "randomize the spanning tree");

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict T to the span of Q");
  restrict_cmd->add_option("files", c.inputs, "T and Q matrix files")->required()->expected(2);

  auto* selftest = app.add_subcommand("selftest", "property suites over the fixtures");
  selftest->add_option("--fixtures", c.fixture_dir, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  c.format = format == "structured" ? OutputFormat::Structured : OutputFormat::Text;
  try {
    c.tol = parse_decimal(tol);
  } catch (const std::exception& e) {
    err << "error: --tol: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  if (c.tol <= 0) {
    err << "error: --tol must be positive\n";
    return kExitInvalidInput;
  }

  if (*analyze) return (c.command = "analyze", cmd_analyze(c, out, err));
  if (*cover) return (c.command = "cover", cmd_cover(c, out, err));
  if (*power) return (c.command = "power", cmd_power(c, out, err));
  if (*restrict_cmd) return (c.command = "restrict", cmd_restrict(c, out, err));
  c.command = "selftest";
  return cmd_selftest(c, out, err);
}

}  // namespace trackpoly
