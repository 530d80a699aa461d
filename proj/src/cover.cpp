#include "trackpoly/cover.hpp"

#include "trackpoly/errors.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace trackpoly {

namespace {

int parity_sign(int i) { return i % 2 == 0 ? 1 : -1; }
int sheet_slot(int s) { return s == 1 ? 0 : 1; }

}  // namespace

Cover build_cover(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                  const CoverOptions& options) {
  if (verdict.orientable) throw InputError("train track is orientable; it is its own orientation cover");
  const std::size_t n = m.num_edges();
  const std::size_t nv = m.num_vertices();
  if (!options.flip_sheets.empty() && options.flip_sheets.size() != nv)
    throw InputError("flip_sheets has " + std::to_string(options.flip_sheets.size()) + " entries for " +
                     std::to_string(nv) + " vertices");

  Cover c;
  c.base_edges = n;
  std::vector<int> vsign(nv, options.reverse_orientation ? -1 : 1);
  for (std::size_t v = 0; v < options.flip_sheets.size(); ++v)
    if (options.flip_sheets[v]) vsign[v] = -vsign[v];

  c.vertex_lifts.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const int plus = static_cast<int>(c.graph.vertices.size());
    c.graph.vertices.push_back(m.vertices[v]);
    c.vertex_base.push_back(static_cast<int>(v));
    if (g.type[v] == VertexType::Odd) {
      c.vertex_lifts[v] = {plus, plus};
      c.iota_vertex.push_back(plus);
      c.polygon_size.push_back(2 * g.gate_count[v]);
      continue;
    }
    c.graph.vertices.push_back(m.vertices[v] + "'");
    c.vertex_base.push_back(static_cast<int>(v));
    c.vertex_lifts[v] = {plus, plus + 1};
    c.iota_vertex.push_back(plus + 1);
    c.iota_vertex.push_back(plus);
    c.polygon_size.push_back(g.gate_count[v]);
    c.polygon_size.push_back(g.gate_count[v]);
  }

  // lifted[d][slot]: the cover direction over base direction d on sheet +1 (slot 0) or -1.
  std::vector<std::array<Direction, 2>> lifted(m.num_directions());
  c.graph.edges.resize(2 * n);
  c.corner.assign(4 * n, -1);
  c.sign_consistent.resize(n);
  auto place = [&](Direction base, int sheet, Direction up) {
    lifted[base.id()][sheet_slot(sheet)] = up;
    const int v = m.vertex_of(base);
    const int i = g.index_of(base);
    c.corner[up.id()] = (g.type[v] == VertexType::Odd && sheet == -1) ? i + g.gate_count[v] : i;
  };
  for (std::size_t e = 0; e < n; ++e) {
    const Edge& edge = m.edges[e];
    const Direction init{static_cast<int>(e), End::Initial};
    const Direction term{static_cast<int>(e), End::Terminal};
    const int i0 = g.index_of(init);
    const int i1 = g.index_of(term);
    c.sign_consistent[e] = parity_sign(i0) == -parity_sign(i1);
    // The lift e leaves through an outgoing gate (sign -1) and enters an incoming one.
    const int s0 = -vsign[edge.origin] * parity_sign(i0);
    const int s1 = vsign[edge.terminus] * parity_sign(i1);
    const int up = static_cast<int>(e);
    const int twin = static_cast<int>(e + n);
    c.graph.edges[up] = {edge.name, c.vertex_lifts[edge.origin][sheet_slot(s0)],
                         c.vertex_lifts[edge.terminus][sheet_slot(s1)]};
    c.graph.edges[twin] = {edge.name + "'", c.vertex_lifts[edge.terminus][sheet_slot(-s1)],
                           c.vertex_lifts[edge.origin][sheet_slot(-s0)]};
    place(init, s0, {up, End::Initial});
    place(term, s1, {up, End::Terminal});
    place(term, -s1, {twin, End::Initial});
    place(init, -s0, {twin, End::Terminal});
  }

  c.graph.cyclic_order.resize(c.graph.vertices.size());
  for (std::size_t v = 0; v < nv; ++v) {
    if (g.type[v] == VertexType::Odd) {
      auto& order = c.graph.cyclic_order[c.vertex_lifts[v][0]];
      for (int sheet : {1, -1})
        for (int i = 0; i < g.gate_count[v]; ++i)
          for (const Direction& d : g.gate_dirs[g.gate(static_cast<int>(v), i)])
            order.push_back(lifted[d.id()][sheet_slot(sheet)]);
      continue;
    }
    for (int sheet : {1, -1}) {
      auto& order = c.graph.cyclic_order[c.vertex_lifts[v][sheet_slot(sheet)]];
      for (const Direction& d : m.cyclic_order[v]) order.push_back(lifted[d.id()][sheet_slot(sheet)]);
    }
  }
  c.graph.vertex_map.assign(c.graph.vertices.size(), -1);
  return c;
}

namespace {

// The two lifts of a base letter, as cover letters.
std::array<Letter, 2> letter_lifts(Letter l, int n) {
  if (!l.inverse) return {Letter{l.edge, false}, Letter{l.edge + n, true}};
  return {Letter{l.edge + n, false}, Letter{l.edge, true}};
}

// Lifts a base word starting with `head`; later letters are fixed by
// connectivity, and at a branch point by adjacency in the unrolled polygon.
Word lift_word(const Cover& c, const Word& w, Letter head) {
  const TrainTrackMap& G = c.graph;
  const int n = static_cast<int>(c.base_edges);
  Word out{head};
  for (std::size_t p = 1; p < w.size(); ++p) {
    const Letter prev = out.back();
    const int at = G.end_vertex(prev);
    std::vector<Letter> options;
    for (Letter cand : letter_lifts(w[p], n)) {
      if (G.start_vertex(cand) != at) continue;
      const int size = c.polygon_size[at];
      const int gap = ((c.corner[cand.start().id()] - c.corner[prev.finish().id()]) % size + size) % size;
      if (size > 2 && gap != 1 && gap != size - 1) continue;
      options.push_back(cand);
    }
    if (options.size() != 1)
      throw InvariantError("lifting letter " + std::to_string(p) + " of an image word: " +
                           std::to_string(options.size()) + " connected choices");
    out.push_back(options.front());
  }
  return out;
}

Word prime_swap_reverse(const Word& w, int n) {
  Word out(w.rbegin(), w.rend());
  for (Letter& l : out) l.edge = l.edge < n ? l.edge + n : l.edge - n;
  return out;
}

void infer_vertex_map(TrainTrackMap& t) {
  t.vertex_map.assign(t.num_vertices(), -1);
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    const Word& w = t.edge_map[e];
    const std::pair<int, int> ends[2] = {{t.edges[e].origin, t.start_vertex(w.front())},
                                         {t.edges[e].terminus, t.end_vertex(w.back())}};
    for (auto [v, image] : ends) {
      if (t.vertex_map[v] != -1 && t.vertex_map[v] != image)
        throw InvariantError("lifted map sends vertex " + t.vertices[v] + " to two vertices");
      t.vertex_map[v] = image;
    }
  }
}

void require_valid_lift(const TrainTrackMap& t, const char* which) {
  const ValidationReport report = validate(t);
  if (!report.ok()) throw InvariantError(std::string(which) + " lift is not a graph map: " + report.text());
}

}  // namespace

LiftedMaps lift_map(const TrainTrackMap& m, const Cover& cover) {
  const int n = static_cast<int>(m.num_edges());
  LiftedMaps out;
  out.op = cover.graph;
  out.op.edge_map.assign(2 * n, {});
  for (int e = 0; e < n; ++e) {
    const Word& w = m.edge_map[e];
    if (w.empty()) throw InputError("edge " + m.edges[e].name + " has no image");
    Word up = lift_word(cover, w, letter_lifts(w.front(), n)[0]);
    for (const Letter& l : up)
      if (l.inverse)
        throw InvariantError("lift of the image of " + m.edges[e].name + " runs against the cover orientation");
    Word twin = prime_swap_reverse(up, n);
    const Word inv = inverse_word(w);
    if (lift_word(cover, inv, letter_lifts(inv.front(), n)[0]) != twin)
      throw InvariantError("lift of the image of " + m.edges[e].name + "' disagrees with its reversal");
    out.op.edge_map[e] = std::move(up);
    out.op.edge_map[e + n] = std::move(twin);
  }
  infer_vertex_map(out.op);
  require_valid_lift(out.op, "orientation preserving");

  out.orr = cover.graph;
  out.orr.edge_map.assign(2 * n, {});
  for (int e = 0; e < 2 * n; ++e)
    for (const Letter& l : out.op.edge_map[e]) out.orr.edge_map[e].push_back({cover.iota_edge(l.edge), !l.inverse});
  infer_vertex_map(out.orr);
  require_valid_lift(out.orr, "orientation reversing");

  out.A = IntMatrix(n, n);
  out.B = IntMatrix(n, n);
  for (int j = 0; j < n; ++j)
    for (const Letter& l : out.op.edge_map[j]) {
      if (l.edge < n)
        out.A(l.edge, j) += 1;
      else
        out.B(l.edge - n, j) += 1;
    }
  return out;
}

CoverIdentities cover_identities(const IntMatrix& T, const IntMatrix& A, const IntMatrix& B) {
  if (T.rows() != T.cols() || A.rows() != T.rows() || A.cols() != T.cols() || B.rows() != T.rows() ||
      B.cols() != T.cols())
    throw InputError("cover blocks must be square and match T");
  CoverIdentities r;
  const IntPolynomial chi = char_poly(T);
  r.chi_op = char_poly(block(A, B, B, A));
  r.chi_or = char_poly(block(B, A, A, B));
  r.det_op = char_poly(A - B);
  r.det_or = char_poly(B - A);
  r.op_holds = r.chi_op == chi * r.det_op;
  r.or_holds = r.chi_or == chi * r.det_or;
  return r;
}

bool puncture_lifting_holds(const SurfaceStats& base, const SurfaceStats& cover) {
  std::multiset<std::pair<std::size_t, int>> expected, seen;
  for (const BoundaryCycle& b : base.boundary) {
    const std::pair<std::size_t, int> shape{b.passages.size(), b.corners};
    if (b.corners % 2 == 0) {
      expected.insert(shape);
      expected.insert(shape);
    } else {
      expected.insert({2 * shape.first, 2 * shape.second});
    }
  }
  for (const BoundaryCycle& b : cover.boundary) seen.insert({b.passages.size(), b.corners});
  return expected == seen;
}

bool projects_to(const Cover& cover, const TrainTrackMap& lift, const TrainTrackMap& base) {
  const int n = static_cast<int>(cover.base_edges);
  auto project = [&](Letter l) { return Letter{l.edge % n, l.inverse != (l.edge >= n)}; };
  for (int e = 0; e < 2 * n; ++e) {
    Word down;
    for (const Letter& l : lift.edge_map.at(e)) down.push_back(project(l));
    const Word& image = base.edge_map.at(e % n);
    if (down != (e < n ? image : inverse_word(image))) return false;
  }
  return true;
}

InvariantReport analyze_lift(const TrainTrackMap& base, const TrainTrackMap& lift, const ReportOptions& options) {
  const InvariantReport below = full_report(base, options);
  InvariantReport r = full_report(lift, options);

  r.checks.push_back({"lift_orientable", r.orientable,
                      r.orientable ? "the lifted track is orientable" : "the lifted track is not orientable"});
  if (below.homology) {
    // The deck-invariant weights form a copy of W(G,f) on which both lifts act as f does.
    const IntPolynomial& above = r.homology ? *r.homology : r.char_poly;
    const bool divides = divmod(to_rational(above), to_rational(*below.homology)).remainder.is_zero();
    r.checks.push_back({"base_homology_divides", divides,
                        "base homology " + to_string(*below.homology) + (divides ? " divides " : " does not divide ") +
                            to_string(above)});
  }
  Rational gap = r.dilatation.value - below.dilatation.value;
  if (gap < 0) gap = -gap;
  const bool same = gap <= options.tol;
  r.checks.push_back({"same_dilatation", same,
                      "lift " + to_decimal(r.dilatation.value, r.digits) + ", base " +
                          to_decimal(below.dilatation.value, r.digits)});
  return r;
}

}  // namespace trackpoly
