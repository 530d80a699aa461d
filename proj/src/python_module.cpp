#include "trackpoly/cli.hpp"
#include "trackpoly/cover.hpp"
#include "trackpoly/errors.hpp"

#include <json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace trackpoly;
using json = nlohmann::ordered_json;

namespace {

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

ReportOptions options(const TrainTrackMap& m, const std::string& tol, const std::optional<std::string>& loop,
                      std::uint64_t seed) {
  ReportOptions o;
  o.tol = parse_decimal(tol);
  if (o.tol <= 0) throw InputError("tol must be positive");
  o.basis.seed = seed;
  if (loop) o.basis.loop_hint = parse_loop(m, *loop);
  return o;
}

std::string analyze_json(const std::string& text, const std::string& tol, const std::optional<std::string>& loop,
                         std::uint64_t seed) {
  const TrainTrackMap m = parse_spec(text);
  return to_json(full_report(m, options(m, tol, loop, seed)), m);
}

std::string analyze_text(const std::string& text, const std::string& tol) {
  const TrainTrackMap m = parse_spec(text);
  return to_text(full_report(m, options(m, tol, std::nullopt, 0)), m);
}

std::string cover_json(const std::string& text) {
  const TrainTrackMap m = parse_spec(text);
  const GateStructure g = analyze_gates(m);
  const Cover c = build_cover(m, g, orientability(m, g));
  const LiftedMaps l = lift_map(m, c);
  const IntMatrix T = transition_matrix(m);
  const CoverIdentities id = cover_identities(T, l.A, l.B);
  json j;
  j["A"] = matrix_json(l.A);
  j["B"] = matrix_json(l.B);
  j["A_plus_B_is_T"] = l.A + l.B == T;
  j["op_identity"] = id.op_holds;
  j["or_identity"] = id.or_holds;
  j["op_char_poly"] = to_string(id.chi_op);
  j["or_char_poly"] = to_string(id.chi_or);
  j["op_spec"] = serialize(l.op);
  j["or_spec"] = serialize(l.orr);
  return j.dump();
}

std::string restrict_json(const std::string& t_text, const std::string& q_text) {
  const IntMatrix A = restrict_to_span(parse_matrix(t_text), parse_matrix(q_text));
  json j;
  j["A"] = matrix_json(A);
  j["homology_poly"] = to_string(char_poly(A));
  return j.dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<std::string> all{"trackpoly"};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_trackpoly, m) {
  m.doc() = "Polynomial invariants of train track maps";
  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<InvariantError> invariant_error(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const InvariantError& e) {
      py::set_error(invariant_error, e.what());
    }
  });

  m.def("analyze_json", &analyze_json, py::arg("spec"), py::arg("tol") = "1e-6", py::arg("loop") = py::none(),
        py::arg("seed") = 0);
  m.def("analyze_text", &analyze_text, py::arg("spec"), py::arg("tol") = "1e-6");
  m.def("cover_json", &cover_json, py::arg("spec"));
  m.def("restrict_json", &restrict_json, py::arg("T"), py::arg("Q"));
  m.def("normalize_spec", [](const std::string& text) { return serialize(parse_spec(text)); }, py::arg("spec"));
  m.def("power_roots", [](const std::string& p, unsigned n) { return to_string(power_roots_poly(parse_polynomial(p), n)); },
        py::arg("poly"), py::arg("n"));
  m.def("cli", &cli, py::arg("args"));
}
