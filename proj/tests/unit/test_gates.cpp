#include "fixtures.hpp"

#include "trackpoly/errors.hpp"
#include "trackpoly/gates.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace trackpoly;

namespace {

Direction dir(const TrainTrackMap& m, const std::string& text) {
  auto e = m.find_edge(text.substr(0, text.size() - 1));
  REQUIRE(e.has_value());
  return {*e, text.back() == '+' ? End::Initial : End::Terminal};
}

// Gate relation by explicit search for a common iterate, with a generous bound.
bool same_gate_oracle(const TrainTrackMap& m, const std::vector<int>& df, int a, int b) {
  if (m.vertex_of(Direction::from_id(a)) != m.vertex_of(Direction::from_id(b))) return false;
  for (std::size_t r = 0; r <= 4 * df.size(); ++r) {
    if (a == b) return true;
    a = df[a];
    b = df[b];
  }
  return false;
}

// Internal turns of the words f^r(e), r = 1..depth: the definition of taken turns.
std::set<Turn> turns_of_iterates(const TrainTrackMap& m, unsigned depth) {
  std::set<Turn> out;
  for (unsigned r = 1; r <= depth; ++r) {
    TrainTrackMap mr = compose(m, r);
    for (const Word& w : mr.edge_map)
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        int x = w[i].finish().id(), y = w[i + 1].start().id();
        out.insert({std::min(x, y), std::max(x, y)});
      }
  }
  return out;
}

const char* kIdentity = R"(
vertex v0
edge a v0 v0
edge b v0 v0
order v0 a+ b+ a- b-
map a -> a
map b -> b
)";

}  // namespace

TEST_CASE("derivative map") {
  TrainTrackMap k = load_fixture("k8_9.tt");
  auto df = derivative_map(k);
  CHECK(df[dir(k, "d+").id()] == dir(k, "b+").id());
  CHECK(df[dir(k, "e-").id()] == dir(k, "d-").id());  // e -> h e d read backwards starts with ~d

  TrainTrackMap p = load_fixture("penner.tt");
  CHECK(derivative_map(p)[dir(p, "b+").id()] == dir(p, "d+").id());

  TrainTrackMap id = parse_spec(kIdentity);
  auto dfi = derivative_map(id);
  for (std::size_t i = 0; i < dfi.size(); ++i) CHECK(dfi[i] == int(i));
}

TEST_CASE("gate classes") {
  TrainTrackMap id = parse_spec(kIdentity);
  auto cls = gate_classes(id, derivative_map(id));
  for (std::size_t i = 0; i < cls.size(); ++i) CHECK(cls[i] == int(i));

  // a+ and b+ have the same image direction, so they share a gate after one step
  TrainTrackMap m = parse_spec("vertex v0\nedge a v0 v0\nedge b v0 v0\norder v0 a+ b+ a- b-\nmap a -> a b\nmap b -> a\n");
  auto c2 = gate_classes(m, derivative_map(m));
  CHECK(c2[dir(m, "a+").id()] == c2[dir(m, "b+").id()]);

  for (const char* name : kAllFixtures) {
    TrainTrackMap f = load_fixture(name);
    auto df = derivative_map(f);
    auto c = gate_classes(f, df);
    CHECK(gate_classes(f, df, 2 * df.size()) == c);
    for (std::size_t a = 0; a < df.size(); ++a)
      for (std::size_t b = 0; b < df.size(); ++b)
        CHECK((c[a] == c[b]) == same_gate_oracle(f, df, int(a), int(b)));
  }
}

TEST_CASE("taken turns agree with turns of iterates") {
  TrainTrackMap k = load_fixture("k8_9.tt");
  auto turns = taken_turns(k, derivative_map(k));
  // e -> h e d contributes {h-, e+} and {e-, d+}
  auto has = [&](const char* x, const char* y) {
    int a = dir(k, x).id(), b = dir(k, y).id();
    return turns.count({std::min(a, b), std::max(a, b)}) > 0;
  };
  CHECK(has("h-", "e+"));
  CHECK(has("e-", "d+"));
  CHECK(turns == turns_of_iterates(k, 8));

  TrainTrackMap p = load_fixture("penner.tt");
  CHECK(taken_turns(p, derivative_map(p)) == turns_of_iterates(p, 4));
  for (const char* name : kOddFixtures) {
    TrainTrackMap f = load_fixture(name);
    CHECK(taken_turns(f, derivative_map(f)) == turns_of_iterates(f, 8));
  }
}

TEST_CASE("vertex classification of the fixtures") {
  GateStructure k = analyze_gates(load_fixture("k8_9.tt"));
  for (int v = 0; v < 4; ++v) {
    CHECK(k.type[v] == VertexType::Even);
    CHECK(k.gate_count[v] == 4);
    CHECK(k.infinitesimal_count(v) == 4);
  }
  GateStructure p = analyze_gates(load_fixture("penner.tt"));
  CHECK(p.type[0] == VertexType::Partial);
  CHECK(p.gate_count[0] == 10);
  CHECK(p.infinitesimal_count(0) == 9);

  GateStructure r = analyze_gates(load_fixture("odd_rose.tt"));
  CHECK(r.type[0] == VertexType::Odd);
  CHECK(r.gate_count[0] == 3);

  GateStructure g = analyze_gates(load_fixture("genus2_odd.tt"));
  CHECK(g.type == std::vector<VertexType>{VertexType::Odd, VertexType::Odd});
}

TEST_CASE("gate numbering and infinitesimal edges") {
  TrainTrackMap p = load_fixture("penner.tt");
  GateStructure g = analyze_gates(p);
  // every infinitesimal edge corresponds to a taken turn between its gates
  for (int v = 0; v < int(p.num_vertices()); ++v)
    for (auto [i, j] : g.infinitesimal[v]) {
      bool found = false;
      for (const Turn& t : g.turns) {
        int gi = g.gate_of[t.first], gj = g.gate_of[t.second];
        if ((gi == g.gate(v, i) && gj == g.gate(v, j)) || (gi == g.gate(v, j) && gj == g.gate(v, i))) found = true;
      }
      CHECK(found);
    }
  // gate directions are contiguous and follow the cyclic order
  for (int id = 0; id < g.num_gates(); ++id)
    for (const auto& d : g.gate_dirs[id]) CHECK(g.gate_of[d.id()] == id);
  // b+ and d+ share a gate, as do e+ and f+
  CHECK(g.gate_of[dir(p, "b+").id()] == g.gate_of[dir(p, "d+").id()]);
  CHECK(g.gate_of[dir(p, "e+").id()] == g.gate_of[dir(p, "f+").id()]);
}

TEST_CASE("embedding and efficiency errors") {
  // Not efficient: every direction eventually maps to a+, so the turn {a-, b+}
  // inside "a b" lies in a single gate.
  TrainTrackMap bad = parse_spec("vertex v0\nedge a v0 v0\nedge b v0 v0\norder v0 a+ b+ a- b-\nmap a -> a b\nmap b -> ~a\n");
  CHECK_THROWS_AS(analyze_gates(bad), InputError);

  // Penner with two directions of different gates swapped: a gate is no longer contiguous.
  std::string text = serialize(load_fixture("penner.tt"));
  std::string broken = text;
  broken.replace(broken.find("order v0 f- c+ d- a+ b+ d+"), 26, "order v0 f- c+ d- a+ d+ b+");
  CHECK_NOTHROW(analyze_gates(parse_spec(broken)));  // reordering inside a gate is harmless
  broken = text;
  broken.replace(broken.find("order v0 f- c+ d- a+ b+ d+"), 26, "order v0 f- c+ d- b+ a+ d+");
  CHECK_THROWS_AS(analyze_gates(parse_spec(broken)), InputError);
}

TEST_CASE("orientability") {
  TrainTrackMap k = load_fixture("k8_9.tt");
  GateStructure gk = analyze_gates(k);
  OrientabilityVerdict vk = orientability(k, gk);
  CHECK(vk.orientable);
  // adjacent gates and the two ends of each edge carry opposite signs
  for (int v = 0; v < 4; ++v)
    for (auto [i, j] : gk.infinitesimal[v]) CHECK(vk.sign[gk.gate(v, i)] == -vk.sign[gk.gate(v, j)]);
  for (int e = 0; e < 9; ++e)
    CHECK(vk.sign[gk.gate_of[Direction{e, End::Initial}.id()]] == -vk.sign[gk.gate_of[Direction{e, End::Terminal}.id()]]);
  CHECK(orientation_action(k, gk, vk) == OrientationAction::Preserving);

  TrainTrackMap p = load_fixture("penner.tt");
  GateStructure gp = analyze_gates(p);
  OrientabilityVerdict vp = orientability(p, gp);
  CHECK(!vp.orientable);
  // the witness is an odd cycle and passes through a, d or f
  CHECK(vp.witness.size() % 2 == 1);
  bool through = false;
  for (const auto& s : vp.witness)
    if (s.real && (p.edges[s.edge].name == "a" || p.edges[s.edge].name == "d" || p.edges[s.edge].name == "f"))
      through = true;
  CHECK(through);
  CHECK_THROWS_AS(orientation_action(p, gp, vp), InputError);

  for (const char* name : kOddFixtures) {
    TrainTrackMap m = load_fixture(name);
    CHECK(!orientability(m, analyze_gates(m)).orientable);
  }
}

TEST_CASE("witness cycles are closed odd walks") {
  for (const char* name : kNonOrientableFixtures) {
    TrainTrackMap m = load_fixture(name);
    GateStructure g = analyze_gates(m);
    OrientabilityVerdict v = orientability(m, g);
    REQUIRE(!v.orientable);
    CHECK(v.witness.size() % 2 == 1);
    // each gate is touched an even number of times by the steps of a closed walk
    std::map<int, int> degree;
    for (const auto& s : v.witness) {
      if (s.real) {
        degree[g.gate_of[Direction{s.edge, End::Initial}.id()]]++;
        degree[g.gate_of[Direction{s.edge, End::Terminal}.id()]]++;
      } else {
        int k = g.gate_count[s.vertex];
        degree[g.gate(s.vertex, s.index)]++;
        degree[g.gate(s.vertex, (s.index + 1) % k)]++;
      }
    }
    for (auto [gate, d] : degree) CHECK(d % 2 == 0);
  }
}

TEST_CASE("orientation action") {
  // Two orientable maps on the same ribbon graph (a twice-punctured torus).
  // The second differs from the first by the orientation-reversing symmetry
  // that inverts every petal.
  const std::string graph = "vertex v0\nedge a v0 v0\nedge b v0 v0\nedge c v0 v0\norder v0 c- b- a- c+ b+ a+\n";
  TrainTrackMap rev = parse_spec(graph + "map a -> c\nmap b -> ~b a ~b\nmap c -> ~b a ~b a ~b\n");
  TrainTrackMap pres = parse_spec(graph + "map a -> ~c\nmap b -> b ~a b\nmap c -> b ~a b ~a b\n");
  for (auto* m : {&rev, &pres}) {
    GateStructure g = analyze_gates(*m);
    OrientabilityVerdict v = orientability(*m, g);
    REQUIRE(v.orientable);
    OrientationAction act = orientation_action(*m, g, v);
    CHECK(act == (m == &rev ? OrientationAction::Reversing : OrientationAction::Preserving));
    // independent of which of the two orientations is chosen
    OrientabilityVerdict flipped = v;
    for (auto& s : flipped.sign) s = -s;
    CHECK(orientation_action(*m, g, flipped) == act);
  }
}

TEST_CASE("boundary cycles and Euler characteristic") {
  SUBCASE("8_9") {
    TrainTrackMap k = load_fixture("k8_9.tt");
    SurfaceStats s = boundary_cycles(k, analyze_gates(k));
    CHECK(s.boundary.size() == 1);
    CHECK(s.s == 1);
    CHECK(s.r == 0);
    CHECK(s.boundary[0].passages.size() == 18);
    CHECK(s.euler == -5);
    CHECK(s.genus == 3);
  }
  SUBCASE("Penner") {
    TrainTrackMap p = load_fixture("penner.tt");
    SurfaceStats s = boundary_cycles(p, analyze_gates(p));
    CHECK(s.boundary.size() == 1);
    CHECK(s.boundary[0].corners == 10);
    CHECK(s.s == 1);
    CHECK(s.r == 0);
    CHECK(s.n - s.v == 5);  // dim W = n - v for a single partial vertex
  }
  SUBCASE("odd rose") {
    TrainTrackMap m = load_fixture("odd_rose.tt");
    SurfaceStats s = boundary_cycles(m, analyze_gates(m));
    CHECK(s.boundary.size() == 5);
    CHECK(s.r == 5);
    CHECK(s.genus == 0);
    CHECK(s.cover_genus == 2);
  }
  for (const char* name : kAllFixtures) {
    TrainTrackMap m = load_fixture(name);
    SurfaceStats s = boundary_cycles(m, analyze_gates(m));
    CHECK(s.euler == s.v_odd + s.v_even + s.v_partial - s.n);
    CHECK(s.euler == 2 - 2 * s.genus - (s.r + s.s));
    CHECK(s.cover_euler == s.v_odd + 2 * s.v_even + 2 * s.v_partial - 2 * s.n);
    CHECK(s.cover_euler == 2 - 2 * s.cover_genus - (s.r + 2 * s.s));
    std::size_t passages = 0;
    for (const auto& c : s.boundary) passages += c.passages.size();
    CHECK(passages == m.num_directions());
  }
}

TEST_CASE("gate map permutes polygons and preserves cyclic order") {
  for (const char* name : kAllFixtures) {
    TrainTrackMap m = load_fixture(name);
    GateMapCheck c = check_gate_map(m, analyze_gates(m));
    CHECK(c.ok);
  }
}

TEST_CASE("mixed vertex types") {
  GateStructure a = analyze_gates(load_fixture("odd_evanescent.tt"));
  CHECK(a.type == std::vector<VertexType>{VertexType::Evanescent, VertexType::Odd});
  GateStructure b = analyze_gates(load_fixture("pentagon.tt"));
  CHECK(b.type == std::vector<VertexType>{VertexType::Evanescent, VertexType::Odd});
  CHECK(b.gate_count[1] == 5);
  TrainTrackMap m = load_fixture("pentagon.tt");
  SurfaceStats s = boundary_cycles(m, b);
  CHECK(s.r == 3);
  CHECK(s.genus == 1);
}
