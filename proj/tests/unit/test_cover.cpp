#include "fixtures.hpp"
#include "oracles.hpp"

#include "trackpoly/cover.hpp"
#include "trackpoly/errors.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace trackpoly;
using oracle::char_value;

namespace {

IntPolynomial P(const std::string& s) { return parse_polynomial(s); }

IntMatrix rows(std::initializer_list<std::initializer_list<int>> r) {
  IntMatrix m(r.size(), r.begin()->size());
  std::size_t i = 0;
  for (const auto& row : r) {
    std::size_t j = 0;
    for (int v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

struct Lifted {
  TrainTrackMap base;
  GateStructure g;
  Cover cover;
  LiftedMaps maps;
};

Lifted lift(const TrainTrackMap& m, const CoverOptions& options = {}) {
  Lifted l{m, analyze_gates(m), {}, {}};
  l.cover = build_cover(m, l.g, orientability(m, l.g), options);
  l.maps = lift_map(m, l.cover);
  return l;
}

const IntPolynomial kQuartic = P("x^4 - 11*x^3 + 22*x^2 - 11*x + 1");

}  // namespace

TEST_CASE("penner cover graph") {
  const Lifted l = lift(load_fixture("penner.tt"));
  const TrainTrackMap& G = l.cover.graph;
  CHECK(G.num_edges() == 12);
  CHECK(G.num_vertices() == 2);
  std::set<std::string> consistent;
  for (std::size_t e = 0; e < 6; ++e)
    if (l.cover.sign_consistent[e]) consistent.insert(l.base.edges[e].name);
  CHECK(consistent == std::set<std::string>{"b", "c", "e"});
  for (std::size_t e = 0; e < 6; ++e) {
    CHECK(G.edges[e].name == l.base.edges[e].name);
    CHECK(G.edges[e + 6].name == l.base.edges[e].name + "'");
    // Consistent edges stay on one sheet, the others join the two lifts.
    CHECK((G.edges[e].origin == G.edges[e].terminus) == bool(l.cover.sign_consistent[e]));
  }
}

TEST_CASE("penner lifted words") {
  const Lifted l = lift(load_fixture("penner.tt"));
  const TrainTrackMap& op = l.maps.op;
  CHECK(op.word_text(op.edge_map[1]) == "d a c' d' a' b");
  CHECK(op.word_text(op.edge_map[0]) == "a d a");
  CHECK(op.word_text(op.edge_map[7]) == "b' a d c a' d'");
  const TrainTrackMap& orr = l.maps.orr;
  CHECK(orr.word_text(orr.edge_map[0]) == "~a' ~d' ~a'");
  CHECK(orr.word_text(orr.edge_map[1]) == "~d' ~a' ~c ~d ~a ~b'");
  // Vertex lifts as listed with the endpoints of each lift: b and e are loops
  // at one lift, c at the other, a, d, f join them.
  CHECK(op.edges[1].origin == op.edges[4].origin);
  CHECK(op.edges[1].origin != op.edges[2].origin);
  CHECK(op.edges[2].origin == op.edges[2].terminus);
}

TEST_CASE("penner blocks") {
  const Lifted l = lift(load_fixture("penner.tt"));
  const IntMatrix A = rows({{2, 1, 1, 2, 3, 3},
                            {0, 1, 0, 1, 1, 1},
                            {0, 0, 2, 1, 1, 1},
                            {1, 1, 1, 2, 2, 2},
                            {0, 0, 0, 1, 2, 2},
                            {0, 0, 0, 1, 1, 2}});
  const IntMatrix B = rows({{0, 1, 0, 1, 1, 1},
                            {0, 0, 1, 1, 1, 1},
                            {0, 1, 0, 1, 1, 1},
                            {0, 1, 0, 1, 1, 1},
                            {0, 0, 1, 1, 1, 1},
                            {0, 0, 0, 0, 0, 0}});
  CHECK(l.maps.A == A);
  CHECK(l.maps.B == B);
  CHECK(l.maps.A + l.maps.B == transition_matrix(l.base));
  CHECK(transition_matrix(l.maps.op) == block(A, B, B, A));
  CHECK(transition_matrix(l.maps.orr) == block(B, A, A, B));
}

TEST_CASE("penner cover identities") {
  const Lifted l = lift(load_fixture("penner.tt"));
  const CoverIdentities id = cover_identities(transition_matrix(l.base), l.maps.A, l.maps.B);
  CHECK(id.op_holds);
  CHECK(id.or_holds);
  CHECK(id.chi_op == P("(x-1)^4*(x^2-4*x+1)*(x^2-3*x+1)") * kQuartic);
  CHECK(id.chi_or == P("(x-1)^2*(x+1)^2*(x^2+3*x+1)*(x^2+4*x+1)") * kQuartic);
}

TEST_CASE("cover identities toy and random blocks") {
  const CoverIdentities toy = cover_identities(rows({{2}}), rows({{1}}), rows({{1}}));
  CHECK(toy.op_holds);
  CHECK(toy.or_holds);
  CHECK(toy.chi_op == P("(x-2)*x"));
  CHECK(toy.chi_or == P("(x-2)*x"));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix A = oracle::random_matrix(rng, 3, 3, 0, 3);
    const IntMatrix B = oracle::random_matrix(rng, 3, 3, 0, 3);
    const CoverIdentities id = cover_identities(A + B, A, B);
    CHECK(id.op_holds);
    CHECK(id.or_holds);
    for (long t = -3; t <= 3; ++t) {
      CHECK(id.chi_op.evaluate(Integer(t)) == char_value(block(A, B, B, A), t));
      CHECK(id.chi_or.evaluate(Integer(t)) == char_value(block(B, A, A, B), t));
      CHECK(id.det_op.evaluate(Integer(t)) == char_value(A - B, t));
    }
  }
  CHECK_THROWS_AS(cover_identities(rows({{1, 0}, {0, 1}}), rows({{1}}), rows({{1}})), InputError);
}

TEST_CASE("orientable input has no cover") {
  const TrainTrackMap m = load_fixture("k8_9.tt");
  const GateStructure g = analyze_gates(m);
  try {
    build_cover(m, g, orientability(m, g));
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("train track is orientable") != std::string::npos);
  }
  const Lifted l = lift(load_fixture("penner.tt"));
  const GateStructure gg = analyze_gates(l.maps.op);
  CHECK_THROWS_AS(build_cover(l.maps.op, gg, orientability(l.maps.op, gg)), InputError);
}

TEST_CASE("cover structure on every non-orientable fixture") {
  for (std::string name : kNonOrientableFixtures) {
    CAPTURE(name);
    const Lifted l = lift(load_fixture(name));
    const Cover& c = l.cover;
    const std::size_t n = l.base.num_edges();

    for (std::size_t v = 0; v < l.base.num_vertices(); ++v) {
      const bool odd = l.g.type[v] == VertexType::Odd;
      CHECK((c.vertex_lifts[v][0] == c.vertex_lifts[v][1]) == odd);
      CHECK(c.iota_vertex[c.vertex_lifts[v][0]] == c.vertex_lifts[v][1]);
      CHECK(c.graph.cyclic_order[c.vertex_lifts[v][0]].size() == (odd ? 2 : 1) * l.base.cyclic_order[v].size());
    }
    for (std::size_t w = 0; w < c.graph.num_vertices(); ++w) {
      CHECK(c.iota_vertex[c.iota_vertex[w]] == static_cast<int>(w));
      CHECK(c.vertex_base[c.iota_vertex[w]] == c.vertex_base[w]);
    }
    for (int e = 0; e < static_cast<int>(2 * n); ++e) {
      CHECK(c.iota_edge(e) != e);
      CHECK(c.iota_edge(c.iota_edge(e)) == e);
      // The deck involution reverses: iota(e) runs between the images of e's ends.
      const Edge& up = c.graph.edges[e];
      const Edge& twin = c.graph.edges[c.iota_edge(e)];
      CHECK(twin.origin == c.iota_vertex[up.terminus]);
      CHECK(twin.terminus == c.iota_vertex[up.origin]);
      // Projection: e over e, e' over e reversed.
      const Edge& below = l.base.edges[c.edge_base(e)];
      CHECK(c.vertex_base[up.origin] == (c.primed(e) ? below.terminus : below.origin));
    }

    const GateStructure gop = analyze_gates(l.maps.op);
    const OrientabilityVerdict vop = orientability(l.maps.op, gop);
    CHECK(vop.orientable);
    CHECK(orientation_action(l.maps.op, gop, vop) == OrientationAction::Preserving);
    const GateStructure gor = analyze_gates(l.maps.orr);
    const OrientabilityVerdict vor = orientability(l.maps.orr, gor);
    CHECK(vor.orientable);
    CHECK(orientation_action(l.maps.orr, gor, vor) == OrientationAction::Reversing);

    CHECK(projects_to(c, l.maps.op, l.base));
    CHECK(projects_to(c, l.maps.orr, l.base));
    CHECK(l.maps.A + l.maps.B == transition_matrix(l.base));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(l.maps.A(i, j) >= 0);
        CHECK(l.maps.B(i, j) >= 0);
      }
    const CoverIdentities id = cover_identities(transition_matrix(l.base), l.maps.A, l.maps.B);
    CHECK(id.op_holds);
    CHECK(id.or_holds);
  }
}

TEST_CASE("punctures lift by corner parity") {
  for (std::string name : kNonOrientableFixtures) {
    CAPTURE(name);
    const Lifted l = lift(load_fixture(name));
    const SurfaceStats below = boundary_cycles(l.base, l.g);
    const SurfaceStats above = boundary_cycles(l.maps.op, analyze_gates(l.maps.op));
    CHECK(puncture_lifting_holds(below, above));
    CHECK(above.boundary.size() == static_cast<std::size_t>(2 * below.s + below.r));
    CHECK(above.genus == below.cover_genus);
  }
  SurfaceStats base, cover;
  base.boundary = {BoundaryCycle{{Direction{0, End::Initial}}, 1}};
  cover.boundary = {BoundaryCycle{{Direction{0, End::Initial}}, 1}, BoundaryCycle{{Direction{1, End::Initial}}, 1}};
  CHECK_FALSE(puncture_lifting_holds(base, cover));
}

TEST_CASE("labeling choices leave the blocks unchanged") {
  for (std::string name : kNonOrientableFixtures) {
    CAPTURE(name);
    const TrainTrackMap m = load_fixture(name);
    const Lifted ref = lift(m);
    const std::size_t nv = m.num_vertices();
    for (unsigned mask = 0; mask < (1u << (nv + 1)); ++mask) {
      CoverOptions opt;
      opt.reverse_orientation = mask & 1u;
      for (std::size_t v = 0; v < nv; ++v) opt.flip_sheets.push_back((mask >> (v + 1)) & 1u);
      CAPTURE(mask);
      const Lifted l = lift(m, opt);
      CHECK(l.maps.A == ref.maps.A);
      CHECK(l.maps.B == ref.maps.B);
      CHECK(char_poly(transition_matrix(l.maps.op)) == char_poly(transition_matrix(ref.maps.op)));
    }
  }
  const TrainTrackMap m = load_fixture("penner.tt");
  CoverOptions flip;
  flip.reverse_orientation = true;
  const Lifted l = lift(m, flip);
  const InvariantReport a = full_report(l.maps.op);
  const InvariantReport b = full_report(lift(m).maps.op);
  CHECK(a.homology == b.homology);
  CHECK(a.puncture == b.puncture);
  CHECK(a.symplectic == b.symplectic);
  CHECK_THROWS_AS(lift(m, CoverOptions{false, {true, false}}), InputError);
}

TEST_CASE("penner lifts analyzed") {
  const TrainTrackMap m = load_fixture("penner.tt");
  const Lifted l = lift(m);
  const InvariantReport base = full_report(m);
  const InvariantReport op = analyze_lift(m, l.maps.op);
  const InvariantReport orr = analyze_lift(m, l.maps.orr);
  CHECK(op.valid());
  CHECK(orr.valid());
  REQUIRE(op.symplectic.has_value());
  REQUIRE(orr.symplectic.has_value());
  CHECK(*op.symplectic == P("(x-1)^2*(x^2-4*x+1)*(x^2-3*x+1)") * kQuartic);
  CHECK(*orr.symplectic == P("(x+1)^2*(x^2+3*x+1)*(x^2+4*x+1)") * kQuartic);
  CHECK(op.action == OrientationAction::Preserving);
  CHECK(orr.action == OrientationAction::Reversing);
  const Rational tol = Rational(1) / 1000000;
  for (const InvariantReport* r : {&op, &orr}) {
    Rational gap = r->dilatation.value - base.dilatation.value;
    if (gap < 0) gap = -gap;
    CHECK(gap <= tol);
    for (const char* check : {"lift_orientable", "base_homology_divides", "same_dilatation"}) {
      CAPTURE(check);
      REQUIRE(r->find(check) != nullptr);
      CHECK(r->find(check)->passed);
    }
  }
}

TEST_CASE("lifted specs round trip and analyze on every fixture") {
  for (std::string name : kNonOrientableFixtures) {
    CAPTURE(name);
    const TrainTrackMap m = load_fixture(name);
    const Lifted l = lift(m);
    for (const TrainTrackMap* t : {&l.maps.op, &l.maps.orr}) {
      const TrainTrackMap back = parse_spec(serialize(*t));
      CHECK(serialize(back) == serialize(*t));
      CHECK(transition_matrix(back) == transition_matrix(*t));
      const InvariantReport r = analyze_lift(m, back);
      CHECK(r.valid());
      for (const Check& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
      }
    }
  }
}
