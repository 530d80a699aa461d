#include "trackpoly/selftest.hpp"

#include "trackpoly/cover.hpp"
#include "trackpoly/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>

namespace trackpoly {

namespace {

GateStructure star(int k, VertexType type) {
  GateStructure g;
  g.gate_offset = {0};
  g.gate_count = {k};
  g.type = {type};
  g.infinitesimal.resize(1);
  const int c = is_partial(type) ? k - 1 : k;
  for (int i = 0; i < c; ++i) g.infinitesimal[0].push_back({i, (i + 1) % k});
  for (int i = 0; i < k; ++i) {
    g.gate_vertex.push_back(0);
    g.gate_index.push_back(i);
    g.gate_dirs.push_back({Direction{i, End::Initial}});
  }
  return g;
}

void form_table(SuiteResult& s) {
  const Rational half(1, 2);
  auto expect = [&](const std::string& what, const Rational& got, const Rational& want) {
    ++s.cases;
    if (got != want) s.failures.push_back(what + " = " + to_string(got) + ", expected " + to_string(want));
  };
  for (int k = 3; k <= 8; ++k) {
    const GateStructure g = star(k, k % 2 ? VertexType::Odd : VertexType::Even);
    const std::size_t n = static_cast<std::size_t>(k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const int d = j - i;
        const Rational want = d == 1 ? -half : d == k - 1 ? half : Rational(0);
        expect("k=" + std::to_string(k) + " <sigma_" + std::to_string(i) + ", sigma_" + std::to_string(j) + ">",
               tau_form(g, transitional(g, n, 0, i), transitional(g, n, 0, j)), want);
      }
    if (k % 2 == 0) continue;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const int d = j - i;
        const std::string tag = "k=" + std::to_string(k) + " <omega_" + std::to_string(i);
        expect(tag + ", sigma_" + std::to_string(j) + ">", tau_form(g, terminal(g, n, 0, i), transitional(g, n, 0, j)),
               d == 0 ? -half : d == k - 1 ? half : Rational(0));
        expect(tag + ", omega_" + std::to_string(j) + ">", tau_form(g, terminal(g, n, 0, i), terminal(g, n, 0, j)),
               d == 0 ? Rational(0) : d % 2 ? -half : half);
      }
  }
}

TrainTrackMap mirrored(TrainTrackMap m) {
  for (auto& o : m.cyclic_order) std::reverse(o.begin(), o.end());
  return m;
}

struct Polys {
  std::optional<IntPolynomial> homology, puncture, symplectic;
  bool operator==(const Polys&) const = default;
};

Polys polys(const InvariantReport& r) { return {r.homology, r.puncture, r.symplectic}; }

std::string describe(const Polys& p) {
  auto one = [](const std::optional<IntPolynomial>& q) { return q ? to_string(*q) : std::string("none"); };
  return one(p.homology) + " | " + one(p.puncture) + " | " + one(p.symplectic);
}

bool check_passed(const InvariantReport& r, const std::string& name) {
  const Check* c = r.find(name);
  return c && c->passed;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const std::string& fixture_dir, const std::string& power_fixture) {
  std::vector<SuiteResult> suites = {
      {"a", "local form table", 0, {}},
      {"b", "chi = vertex * puncture * symplectic", 0, {}},
      {"c", "degree formulas", 0, {}},
      {"d", "palindromicity", 0, {}},
      {"e", "det A = +-1", 0, {}},
      {"f", "A^T J A = J", 0, {}},
      {"g", "basis choice independence", 0, {}},
      {"h", "power law", 0, {}},
      {"i", "T(f^2) = T^2", 0, {}},
      {"j", "orientation and cover labeling flips", 0, {}},
  };
  auto suite = [&](char id) -> SuiteResult& { return suites[static_cast<std::size_t>(id - 'a')]; };
  auto guarded = [&](char id, const std::string& tag, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      suite(id).failures.push_back(tag + ": " + e.what());
    }
  };

  form_table(suite('a'));

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir))
    if (entry.path().extension() == ".tt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) suite('b').failures.push_back("no .tt fixtures in " + fixture_dir);

  for (const auto& path : files) {
    const std::string tag = path.filename().string();
    const TrainTrackMap m = load_spec(path.string());
    InvariantReport r;
    try {
      r = full_report(m);
    } catch (const std::exception& e) {
      suite('b').failures.push_back(tag + ": " + e.what());
      continue;
    }

    guarded('b', tag, [&] {
      SuiteResult& s = suite('b');
      ++s.cases;
      if (!r.vertex || !r.puncture || !r.symplectic)
        s.failures.push_back(tag + ": polynomials missing");
      else if (divide_exact(divide_exact(divide_exact(r.char_poly, *r.vertex), *r.puncture), *r.symplectic) !=
               IntPolynomial::constant(1))
        s.failures.push_back(tag + ": product differs from chi");
    });
    for (const char* name : {"dim_W", "dim_Z", "vertex_degree", "homology_degree", "puncture_degree",
                             "symplectic_degree"}) {
      ++suite('c').cases;
      if (!check_passed(r, name)) suite('c').failures.push_back(tag + ": " + name);
    }
    for (const char* name : {"homology_palindromic", "puncture_palindromic", "symplectic_palindromic"}) {
      ++suite('d').cases;
      if (!check_passed(r, name)) suite('d').failures.push_back(tag + ": " + name);
    }
    ++suite('e').cases;
    if (!r.det_A || (*r.det_A != 1 && *r.det_A != -1)) suite('e').failures.push_back(tag + ": det A not +-1");
    guarded('f', tag, [&] {
      ++suite('f').cases;
      if (!r.A || !r.J) {
        suite('f').failures.push_back(tag + ": no form");
        return;
      }
      const RatMatrix A = to_rational(*r.A);
      if (A.transpose() * *r.J * A != *r.J) suite('f').failures.push_back(tag + ": A^T J A != J");
    });
    guarded('g', tag, [&] {
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        ++suite('g').cases;
        ReportOptions o;
        o.basis.seed = seed;
        const InvariantReport rs = full_report(m, o);
        if (polys(rs) != polys(r))
          suite('g').failures.push_back(tag + " seed " + std::to_string(seed) + ": " + describe(polys(rs)));
      }
    });
    if (tag == power_fixture)
      guarded('h', tag, [&] {
        for (unsigned n : {2u, 3u}) {
          ++suite('h').cases;
          const InvariantReport rn = full_report(compose(m, n));
          const Polys want{power_roots_poly(*r.homology, n), power_roots_poly(*r.puncture, n),
                           power_roots_poly(*r.symplectic, n)};
          if (polys(rn) != want)
            suite('h').failures.push_back(tag + " n=" + std::to_string(n) + ": " + describe(polys(rn)));
        }
      });
    guarded('i', tag, [&] {
      ++suite('i').cases;
      const IntMatrix T = transition_matrix(m);
      if (transition_matrix(compose(m, 2)) != T * T) suite('i').failures.push_back(tag + ": T(f^2) != T^2");
    });
    guarded('j', tag, [&] {
      ++suite('j').cases;
      const InvariantReport flipped = full_report(mirrored(m));
      if (polys(flipped) != polys(r) || !flipped.valid())
        suite('j').failures.push_back(tag + " mirrored: " + describe(polys(flipped)));
      if (r.orientable) return;
      const GateStructure g = analyze_gates(m);
      const OrientabilityVerdict verdict = orientability(m, g);
      const LiftedMaps ref = lift_map(m, build_cover(m, g, verdict));
      const Polys op = polys(full_report(ref.op)), orr = polys(full_report(ref.orr));
      for (unsigned mask = 1; mask < (1u << (m.num_vertices() + 1)); ++mask) {
        ++suite('j').cases;
        CoverOptions opt;
        opt.reverse_orientation = mask & 1u;
        for (std::size_t v = 0; v < m.num_vertices(); ++v) opt.flip_sheets.push_back((mask >> (v + 1)) & 1u);
        const LiftedMaps l = lift_map(m, build_cover(m, g, verdict, opt));
        if (l.A != ref.A || l.B != ref.B || polys(full_report(l.op)) != op || polys(full_report(l.orr)) != orr)
          suite('j').failures.push_back(tag + " cover labeling " + std::to_string(mask));
      }
    });
  }
  if (suite('h').cases == 0) suite('h').failures.push_back(power_fixture + " not found in " + fixture_dir);
  return suites;
}

}  // namespace trackpoly
