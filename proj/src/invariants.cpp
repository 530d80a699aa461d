#include "trackpoly/invariants.hpp"

#include "trackpoly/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace trackpoly {

namespace {

int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

int vertex_count(const GateStructure& g) { return static_cast<int>(g.type.size()); }

}  // namespace

Rational alternating_sum(const TrainTrackMap& m, const GateStructure& g, int v, const std::vector<Rational>& w) {
  Rational s = 0;
  for (const Direction& d : m.cyclic_order[v]) {
    if (g.index_of(d) % 2 == 0)
      s += w[d.edge];
    else
      s -= w[d.edge];
  }
  return s;
}

bool membership_check(const TrainTrackMap& m, const GateStructure& g, const std::vector<Rational>& w) {
  for (int v = 0; v < vertex_count(g); ++v)
    if (g.type[v] != VertexType::Odd && alternating_sum(m, g, v, w) != 0) return false;
  return true;
}

bool membership_check(const TrainTrackMap& m, const GateStructure& g, const std::vector<Integer>& w) {
  return membership_check(m, g, std::vector<Rational>(w.begin(), w.end()));
}

int passage_sign(const GateStructure& g, Direction in, Direction out) {
  return parity_sign(g.index_of(out) - g.index_of(in) + 1);
}

int loop_parity(const GateStructure& g, const Word& loop) {
  int p = 1;
  for (std::size_t k = 0; k < loop.size(); ++k)
    p *= passage_sign(g, loop[k].finish(), loop[(k + 1) % loop.size()].start());
  return p;
}

std::string to_string(BasisCase c) {
  switch (c) {
    case BasisCase::Orientable: return "orientable";
    case BasisCase::OddVertices: return "odd-vertices";
    case BasisCase::NoOddNonorientable: return "no-odd-nonorientable";
  }
  return "?";
}

std::vector<int> WeightBasis::basis_edges() const {
  std::vector<int> r;
  for (const auto& e : elements) r.push_back(e.edge);
  return r;
}

namespace {

int start_vertex_of(const TrainTrackMap& m, const Letter& l) { return m.vertex_of(l.start()); }
int finish_vertex_of(const TrainTrackMap& m, const Letter& l) { return m.vertex_of(l.finish()); }

bool is_closed_walk(const TrainTrackMap& m, const Word& w) {
  if (w.empty()) return false;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (finish_vertex_of(m, w[k]) != start_vertex_of(m, w[(k + 1) % w.size()])) return false;
  return true;
}

/// Weights of the letters of a walk, fixed by w0 at `anchor` and the passage
/// signs at each interior vertex.
std::vector<Integer> propagate(const GateStructure& g, const Word& walk, std::size_t anchor, const Integer& w0) {
  std::vector<Integer> w(walk.size());
  w[anchor] = w0;
  for (std::size_t k = anchor + 1; k < walk.size(); ++k)
    w[k] = passage_sign(g, walk[k - 1].finish(), walk[k].start()) * w[k - 1];
  for (std::size_t k = anchor; k-- > 0;)
    w[k] = passage_sign(g, walk[k].finish(), walk[k + 1].start()) * w[k + 1];
  return w;
}

void accumulate(std::vector<Integer>& eta, const Word& walk, const std::vector<Integer>& w) {
  for (std::size_t k = 0; k < walk.size(); ++k) eta[walk[k].edge] += w[k];
}

Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// A forest given by parent edges; roots have parent edge -1.
struct Forest {
  std::vector<int> parent_edge;
  std::vector<int> parent;
  std::vector<bool> in_forest;  // per edge

  /// Letters from u up to the root of its component.
  Word up(const TrainTrackMap& m, int u) const {
    Word w;
    while (parent_edge[u] >= 0) {
      int e = parent_edge[u];
      w.push_back({e, m.edges[e].origin != u});
      u = parent[u];
    }
    return w;
  }

  int root_of(int u) const {
    while (parent_edge[u] >= 0) u = parent[u];
    return u;
  }

  void cut(int v) {
    if (parent_edge[v] >= 0) in_forest[parent_edge[v]] = false;
    parent_edge[v] = -1;
    parent[v] = -1;
  }
};

/// Spanning tree rooted at `root`. Seed 0 gives breadth-first search in edge
/// declaration order; otherwise edges are added in shuffled order.
Forest spanning_tree(const TrainTrackMap& m, int root, std::uint64_t seed, std::mt19937_64& rng) {
  const int nv = static_cast<int>(m.num_vertices());
  const int ne = static_cast<int>(m.num_edges());
  std::vector<bool> chosen(ne, false);
  if (seed == 0) {
    std::vector<std::vector<int>> adj(nv);
    for (int e = 0; e < ne; ++e) {
      adj[m.edges[e].origin].push_back(e);
      adj[m.edges[e].terminus].push_back(e);
    }
    std::vector<bool> seen(nv, false);
    seen[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int e : adj[u]) {
        int w = m.edges[e].origin == u ? m.edges[e].terminus : m.edges[e].origin;
        if (seen[w]) continue;
        seen[w] = true;
        chosen[e] = true;
        queue.push_back(w);
      }
    }
  } else {
    std::vector<int> order(ne);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> uf(nv);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&uf](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    for (int e : order) {
      int a = find(m.edges[e].origin), b = find(m.edges[e].terminus);
      if (a == b) continue;
      uf[a] = b;
      chosen[e] = true;
    }
  }
  Forest f;
  f.parent_edge.assign(nv, -1);
  f.parent.assign(nv, -1);
  f.in_forest = chosen;
  std::vector<std::vector<int>> tadj(nv);
  for (int e = 0; e < ne; ++e)
    if (chosen[e]) {
      tadj[m.edges[e].origin].push_back(e);
      tadj[m.edges[e].terminus].push_back(e);
    }
  std::vector<bool> seen(nv, false);
  seen[root] = true;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int e : tadj[u]) {
      int w = m.edges[e].origin == u ? m.edges[e].terminus : m.edges[e].origin;
      if (seen[w]) continue;
      seen[w] = true;
      f.parent_edge[w] = e;
      f.parent[w] = u;
      queue.push_back(w);
    }
  }
  return f;
}

/// Drops the common tail of two root paths, leaving the paths to their meeting vertex.
void trim_common_tail(Word& a, Word& b) {
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.pop_back();
    b.pop_back();
  }
}

/// Real letters of the odd constraint cycle, as a closed walk in G.
Word witness_walk(const TrainTrackMap& m, const GateStructure& g, const std::vector<ConstraintStep>& steps) {
  auto ends = [&](const ConstraintStep& s) {
    if (s.real)
      return std::pair{g.gate_of[Direction{s.edge, End::Initial}.id()], g.gate_of[Direction{s.edge, End::Terminal}.id()]};
    int k = g.gate_count[s.vertex];
    return std::pair{g.gate(s.vertex, s.index), g.gate(s.vertex, (s.index + 1) % k)};
  };
  for (int start : {ends(steps.front()).first, ends(steps.front()).second}) {
    int cur = start;
    Word w;
    bool ok = true;
    for (const auto& s : steps) {
      auto [a, b] = ends(s);
      if (a == cur) {
        if (s.real) w.push_back({s.edge, false});
        cur = b;
      } else if (b == cur) {
        if (s.real) w.push_back({s.edge, true});
        cur = a;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && cur == start && is_closed_walk(m, w)) return w;
  }
  throw InvariantError("constraint cycle does not close up");
}

/// Cuts a closed walk at repeated vertices, keeping a piece with parity -1,
/// until the walk is a simple loop.
Word simple_odd_loop(const TrainTrackMap& m, const GateStructure& g, Word w) {
  if (loop_parity(g, w) != -1) throw InvariantError("constraint cycle is not odd");
  for (;;) {
    std::map<int, std::size_t> first;
    std::optional<std::pair<std::size_t, std::size_t>> rep;
    for (std::size_t k = 0; k < w.size() && !rep; ++k) {
      int v = start_vertex_of(m, w[k]);
      auto [it, inserted] = first.emplace(v, k);
      if (!inserted) rep = std::pair{it->second, k};
    }
    if (!rep) return w;
    auto [p, q] = *rep;
    Word inner(w.begin() + p, w.begin() + q);
    Word outer(w.begin() + q, w.end());
    outer.insert(outer.end(), w.begin(), w.begin() + p);
    w = loop_parity(g, inner) == -1 ? inner : outer;
  }
}

BasisElement make_element(int e, Word support, std::vector<Integer> weights) {
  BasisElement b;
  b.edge = e;
  b.support = std::move(support);
  b.weights = std::move(weights);
  return b;
}

void orientable_basis(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                      const BasisOptions& opt, std::mt19937_64& rng, WeightBasis& basis) {
  const int nv = static_cast<int>(m.num_vertices());
  int root = opt.seed == 0 ? 0 : static_cast<int>(rng() % nv);
  Forest y = spanning_tree(m, root, opt.seed, rng);
  // A letter agrees with the orientation iff it leaves through an outgoing gate.
  auto weight = [&](const Letter& l) -> Integer { return verdict.sign[g.gate_of[l.start().id()]] < 0 ? 1 : -1; };
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    if (y.in_forest[e]) {
      basis.subgraph.push_back(e);
      continue;
    }
    Letter le{e, weight(Letter{e, false}) < 0};
    Word ux = y.up(m, start_vertex_of(m, le));
    Word uy = y.up(m, finish_vertex_of(m, le));
    trim_common_tail(ux, uy);
    Word walk = concat(concat({le}, uy), inverse_word(ux));
    std::vector<Integer> eta(m.num_edges(), 0);
    for (const Letter& l : walk) eta[l.edge] += weight(l);
    basis.elements.push_back(make_element(e, walk, eta));
  }
}

void odd_vertex_basis(const TrainTrackMap& m, const GateStructure& g, const BasisOptions& opt, std::mt19937_64& rng,
                      WeightBasis& basis) {
  std::vector<int> odd;
  for (int v = 0; v < vertex_count(g); ++v)
    if (g.type[v] == VertexType::Odd) odd.push_back(v);
  int root = opt.seed == 0 ? odd.front() : odd[rng() % odd.size()];
  basis.root = root;
  Forest y = spanning_tree(m, root, opt.seed, rng);
  // Each odd vertex other than the root loses the edge to its parent, the
  // unique neighbour of smaller height.
  for (int v : odd)
    if (v != root) y.cut(v);
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
    if (y.in_forest[e]) {
      basis.subgraph.push_back(e);
      continue;
    }
    Word head = inverse_word(y.up(m, m.edges[e].origin));
    Word tail = y.up(m, m.edges[e].terminus);
    std::size_t anchor = head.size();
    Word walk = concat(concat(head, {Letter{e, false}}), tail);
    std::vector<Integer> eta(m.num_edges(), 0);
    accumulate(eta, walk, propagate(g, walk, anchor, 1));
    basis.elements.push_back(make_element(e, walk, eta));
  }
}

void no_odd_basis(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                  const BasisOptions& opt, std::mt19937_64& rng, WeightBasis& basis) {
  Word core;
  if (opt.loop_hint) {
    core = *opt.loop_hint;
    if (!is_closed_walk(m, core)) throw InputError("loop hint is not a closed walk");
    std::vector<int> seen;
    for (const Letter& l : core) seen.push_back(start_vertex_of(m, l));
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw InputError("loop hint is not a simple loop");
    if (loop_parity(g, core) != -1) throw InputError("loop hint admits an orientation consistent with the train track");
  } else {
    if (verdict.witness.empty()) throw InvariantError("non-orientable track without an odd constraint cycle");
    core = simple_odd_loop(m, g, witness_walk(m, g, verdict.witness));
  }
  basis.core_loop = core;

  const int nv = static_cast<int>(m.num_vertices());
  const int ne = static_cast<int>(m.num_edges());
  Forest grow;
  grow.parent_edge.assign(nv, -1);
  grow.parent.assign(nv, -1);
  grow.in_forest.assign(ne, false);
  std::vector<bool> covered(nv, false);
  std::vector<bool> in_sub(ne, false);
  for (const Letter& l : core) {
    covered[start_vertex_of(m, l)] = true;
    in_sub[l.edge] = true;
  }
  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  if (opt.seed != 0) std::shuffle(order.begin(), order.end(), rng);
  for (bool added = true; added;) {
    added = false;
    for (int e : order) {
      int a = m.edges[e].origin, b = m.edges[e].terminus;
      if (covered[a] == covered[b]) continue;
      int old = covered[a] ? a : b;
      int fresh = covered[a] ? b : a;
      covered[fresh] = true;
      grow.parent_edge[fresh] = e;
      grow.parent[fresh] = old;
      in_sub[e] = true;
      added = true;
      break;
    }
  }
  for (int e = 0; e < ne; ++e)
    if (in_sub[e]) basis.subgraph.push_back(e);

  auto position = [&](int v) {
    for (std::size_t k = 0; k < core.size(); ++k)
      if (start_vertex_of(m, core[k]) == v) return k;
    throw InvariantError("vertex is not on the core loop");
  };

  for (int e = 0; e < ne; ++e) {
    if (in_sub[e]) continue;
    Word head = inverse_word(grow.up(m, m.edges[e].origin));
    Word tail = grow.up(m, m.edges[e].terminus);
    std::size_t anchor = head.size();
    Word bullet = concat(concat(head, {Letter{e, false}}), tail);
    std::vector<Integer> wb = propagate(g, bullet, anchor, 1);
    std::vector<Integer> eta0(ne, 0);
    accumulate(eta0, bullet, wb);

    int va = start_vertex_of(m, bullet.front());
    int vb = finish_vertex_of(m, bullet.back());
    std::size_t pb = position(vb), pa = position(va);
    Word rotated(core.begin() + pb, core.end());
    rotated.insert(rotated.end(), core.begin(), core.begin() + pb);
    std::size_t split = (pa + core.size() - pb) % core.size();
    Word arc1, arc2;
    if (split == 0) {
      arc1 = rotated;
    } else {
      arc1.assign(rotated.begin(), rotated.begin() + split);
      arc2 = inverse_word(Word(rotated.begin() + split, rotated.end()));
    }

    std::optional<std::pair<Word, std::vector<Integer>>> chosen;
    for (const Word* arc : {&arc1, &arc2}) {
      std::vector<Integer> eta = eta0;
      if (!arc->empty()) {
        Integer w0 = passage_sign(g, bullet.back().finish(), arc->front().start()) * wb.back();
        accumulate(eta, *arc, propagate(g, *arc, 0, w0));
      }
      if (membership_check(m, g, eta)) {
        chosen = std::pair{concat(bullet, *arc), eta};
        break;
      }
    }
    if (!chosen) throw InvariantError("neither arc of the core loop closes the weight path of edge " + m.edges[e].name);
    basis.elements.push_back(make_element(e, chosen->first, chosen->second));
  }
}

}  // namespace

WeightBasis w_basis(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                    const BasisOptions& options) {
  std::mt19937_64 rng(options.seed);
  WeightBasis basis;
  if (verdict.orientable) {
    basis.kind = BasisCase::Orientable;
  } else if (g.has_odd_vertex()) {
    basis.kind = BasisCase::OddVertices;
  } else {
    basis.kind = BasisCase::NoOddNonorientable;
  }
  if (options.loop_hint && basis.kind != BasisCase::NoOddNonorientable)
    throw InputError("a loop hint applies only to non-orientable tracks without odd vertices");
  switch (basis.kind) {
    case BasisCase::Orientable: orientable_basis(m, g, verdict, options, rng, basis); break;
    case BasisCase::OddVertices: odd_vertex_basis(m, g, options, rng, basis); break;
    case BasisCase::NoOddNonorientable: no_odd_basis(m, g, verdict, options, rng, basis); break;
  }
  std::vector<std::vector<Integer>> cols;
  for (const auto& el : basis.elements) {
    if (!membership_check(m, g, el.weights))
      throw InvariantError("basis element for edge " + m.edges[el.edge].name + " violates a switch condition");
    for (const auto& other : basis.elements)
      if (el.weights[other.edge] != (other.edge == el.edge ? 1 : 0))
        throw InvariantError("basis element for edge " + m.edges[el.edge].name + " is not unit on the basis edges");
    cols.push_back(el.weights);
  }
  basis.Q = from_columns(cols, m.num_edges());
  return basis;
}

Word parse_loop(const TrainTrackMap& m, const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  Word w;
  while (in >> tok) {
    bool inv = !tok.empty() && tok[0] == '~';
    std::string name = inv ? tok.substr(1) : tok;
    auto e = m.find_edge(name);
    if (!e) throw InputError("unknown edge '" + name + "' in loop");
    w.push_back({*e, inv});
  }
  if (w.empty()) throw InputError("empty loop");
  return w;
}

IntMatrix homology_matrix(const IntMatrix& T, const WeightBasis& basis) {
  const IntMatrix TQ = T * basis.Q;
  const auto rows = basis.basis_edges();
  IntMatrix A(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) A(i, j) = TQ(rows[i], j);
  if (!(basis.Q * A == TQ)) throw InputError("the span of the basis is not invariant under T (QA != TQ)");
  return A;
}

IntMatrix restrict_to_span(const IntMatrix& T, const IntMatrix& Q) {
  if (!T.square()) throw InputError("T is not square: " + T.shape());
  if (Q.rows() != T.rows()) throw InputError("Q has " + std::to_string(Q.rows()) + " rows, T has " + std::to_string(T.rows()));
  if (rank(Q) != Q.cols()) throw InputError("the columns of Q are linearly dependent");
  RatMatrix X;
  try {
    X = solve_in_span(to_rational(Q), to_rational(T * Q));
  } catch (const InvariantError&) {
    throw InputError("the span of Q is not invariant under T (QA != TQ)");
  }
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j)
      if (!is_integral(X(i, j))) throw InputError("the restriction of T to the span of Q is not integral");
  return to_integer(X);
}

IntPolynomial vertex_polynomial_quotient(const IntPolynomial& chi, const IntPolynomial& homology) {
  return divide_exact(chi, homology);
}

namespace {

IntPolynomial monic_integral(const RatPolynomial& p, const std::string& what) {
  std::vector<Integer> c;
  for (const auto& q : p.coeffs()) {
    if (!is_integral(q)) throw InvariantError(what + " has non-integral coefficients");
    c.push_back(numerator_of(q));
  }
  return IntPolynomial(std::move(c));
}

RatMatrix sub_block(const RatMatrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  RatMatrix b(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = m(i, j);
  return b;
}

}  // namespace

IntPolynomial vertex_polynomial_block(const IntMatrix& T, const IntMatrix& Q, const std::vector<int>& rows) {
  const std::size_t n = T.rows(), l = Q.cols();
  IntMatrix U(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) U(i, j) = Q(i, j);
  std::size_t col = l;
  for (std::size_t e = 0; e < n; ++e)
    if (std::find(rows.begin(), rows.end(), static_cast<int>(e)) == rows.end()) U(e, col++) = 1;
  if (col != n) throw std::invalid_argument("vertex_polynomial_block: basis rows do not match Q");
  RatMatrix Ur = to_rational(U);
  RatMatrix M = inverse(Ur) * to_rational(T) * Ur;
  if (!sub_block(M, l, n, 0, l).is_zero()) throw InvariantError("U^-1 T U is not block upper triangular");
  return monic_integral(char_poly_rational(sub_block(M, l, n, l, n)), "vertex block polynomial");
}

IntMatrix delta_map(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict) {
  std::vector<int> rows;
  for (int v = 0; v < vertex_count(g); ++v)
    if (g.type[v] != VertexType::Odd) rows.push_back(v);
  IntMatrix D(rows.size(), m.num_edges());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const Direction& d : m.cyclic_order[rows[r]]) {
      int gid = g.gate_of[d.id()];
      int s = verdict.orientable ? verdict.sign[gid] : parity_sign(g.gate_index[gid]);
      D(r, d.edge) += s;
    }
  return D;
}

TauWeights zero_tau(const GateStructure& g, std::size_t edges) {
  TauWeights t;
  t.real.assign(edges, 0);
  for (int v = 0; v < vertex_count(g); ++v) t.infinitesimal.emplace_back(g.infinitesimal_count(v), 0);
  return t;
}

Rational infinitesimal_sum(const GateStructure& g, const TauWeights& t, int v, int i) {
  const int k = g.gate_count[v], c = g.infinitesimal_count(v);
  const auto& x = t.infinitesimal[v];
  Rational s = 0;
  if (i < c) s += x[i];
  if (i >= 1)
    s += x[i - 1];
  else if (c == k)
    s += x[k - 1];
  return s;
}

namespace {

std::vector<Rational> gate_weights(const GateStructure& g, const std::vector<Rational>& real, int v) {
  std::vector<Rational> w(g.gate_count[v], 0);
  for (int i = 0; i < g.gate_count[v]; ++i)
    for (const Direction& d : g.gate_dirs[g.gate(v, i)]) w[i] += real[d.edge];
  return w;
}

}  // namespace

bool switch_condition(const GateStructure& g, const TauWeights& t) {
  for (int v = 0; v < vertex_count(g); ++v) {
    auto w = gate_weights(g, t.real, v);
    for (int i = 0; i < g.gate_count[v]; ++i)
      if (infinitesimal_sum(g, t, v, i) != w[i]) return false;
  }
  return true;
}

TauWeights lift_to_tau(const TrainTrackMap& m, const GateStructure& g, const std::vector<Rational>& eta) {
  TauWeights t = zero_tau(g, m.num_edges());
  t.real = eta;
  for (int v = 0; v < vertex_count(g); ++v) {
    const int k = g.gate_count[v];
    auto w = gate_weights(g, eta, v);
    auto& x = t.infinitesimal[v];
    if (g.type[v] == VertexType::Odd) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) x[j] += w[i] * Rational(parity_sign(((j - i) % k + k) % k), 2);
    } else {
      Rational prev = 0;
      for (int j = 0; j < k - 1; ++j) {
        x[j] = w[j] - prev;
        prev = x[j];
      }
    }
  }
  if (!switch_condition(g, t)) throw InvariantError("lifted weights violate a switch condition");
  return t;
}

TauWeights transitional(const GateStructure& g, std::size_t edges, int v, int i) {
  TauWeights t = zero_tau(g, edges);
  t.infinitesimal.at(v).at(i) = 1;
  return t;
}

TauWeights terminal(const GateStructure& g, std::size_t edges, int v, int i) {
  if (g.type.at(v) != VertexType::Odd) throw std::invalid_argument("terminal elements live at odd vertices");
  TauWeights t = zero_tau(g, edges);
  const int k = g.gate_count[v];
  for (int j = 0; j < k; ++j) t.infinitesimal[v][j] = Rational(parity_sign(((j - i) % k + k) % k), 2);
  return t;
}

namespace {

Rational pair_dets(const std::vector<std::pair<Rational, Rational>>& br) {
  Rational s = 0;
  for (std::size_t p = 0; p < br.size(); ++p)
    for (std::size_t q = p + 1; q < br.size(); ++q) s += br[p].first * br[q].second - br[q].first * br[p].second;
  return s;
}

}  // namespace

Rational tau_form(const GateStructure& g, const TauWeights& a, const TauWeights& b) {
  Rational total = 0;
  for (int gid = 0; gid < g.num_gates(); ++gid) {
    const int v = g.gate_vertex[gid], i = g.gate_index[gid];
    const int k = g.gate_count[v], c = g.infinitesimal_count(v);
    std::vector<std::pair<Rational, Rational>> real;
    for (const Direction& d : g.gate_dirs[gid]) real.emplace_back(a.real[d.edge], b.real[d.edge]);
    total += pair_dets(real);
    std::vector<std::pair<Rational, Rational>> inf;
    if (i < c) inf.emplace_back(a.infinitesimal[v][i], b.infinitesimal[v][i]);
    int prev = i >= 1 ? i - 1 : (c == k ? k - 1 : -1);
    if (prev >= 0) inf.emplace_back(a.infinitesimal[v][prev], b.infinitesimal[v][prev]);
    total += pair_dets(inf);
  }
  return total / 2;
}

RatMatrix form_matrix(const GateStructure& g, const std::vector<TauWeights>& lifts) {
  const std::size_t l = lifts.size();
  RatMatrix J(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i + 1; j < l; ++j) {
      J(i, j) = tau_form(g, lifts[i], lifts[j]);
      J(j, i) = -J(i, j);
    }
  return J;
}

RadicalSplit radical_and_split(const RatMatrix& J, const IntMatrix& A, const IntPolynomial& homology) {
  RadicalSplit r;
  r.Z = kernel_basis(J);
  const std::size_t l = J.rows();
  RatMatrix Zm = to_rational(from_columns(r.Z, l));
  try {
    r.restriction = solve_in_span(Zm, to_rational(A) * Zm);
  } catch (const InvariantError&) {
    throw InvariantError("the homology matrix does not preserve the radical of the form");
  }
  r.puncture = monic_integral(char_poly_rational(r.restriction), "puncture polynomial");
  r.symplectic = divide_exact(homology, r.puncture);
  return r;
}

bool is_irreducible(const IntMatrix& T) {
  const std::size_t n = T.rows();
  if (n == 0) return false;
  auto reach_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::deque<std::size_t> q{0};
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        const Integer& x = transpose ? T(u, w) : T(w, u);
        if (x != 0 && !seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(false) && reach_all(true);
}

bool InvariantReport::valid() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* InvariantReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

bool is_permutation_matrix(const IntMatrix& T) {
  for (std::size_t j = 0; j < T.cols(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < T.rows(); ++i) s += T(i, j);
    if (s != 1) return false;
  }
  return true;
}

struct FormData {
  GateStructure g;
  OrientabilityVerdict verdict;
  WeightBasis basis;
  IntMatrix A;
  RatMatrix J;
};

FormData form_data(const TrainTrackMap& m, const IntMatrix& T, const BasisOptions& opt) {
  FormData f;
  f.g = analyze_gates(m);
  f.verdict = orientability(m, f.g);
  f.basis = w_basis(m, f.g, f.verdict, opt);
  f.A = homology_matrix(T, f.basis);
  std::vector<TauWeights> lifts;
  for (const auto& el : f.basis.elements)
    lifts.push_back(lift_to_tau(m, f.g, std::vector<Rational>(el.weights.begin(), el.weights.end())));
  f.J = form_matrix(f.g, lifts);
  return f;
}

bool preserves_form(const IntMatrix& A, const RatMatrix& J) {
  RatMatrix Ar = to_rational(A);
  return Ar.transpose() * J * Ar == J;
}

/// Vertex whose reflected cyclic order makes the form invariant, if any.
std::optional<int> repairing_reflection(const TrainTrackMap& m, const IntMatrix& T, const BasisOptions& opt) {
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    TrainTrackMap r = m;
    std::reverse(r.cyclic_order[v].begin(), r.cyclic_order[v].end());
    try {
      FormData f = form_data(r, T, opt);
      if (preserves_form(f.A, f.J)) return static_cast<int>(v);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

bool pal_or_anti(const IntPolynomial& p) { return is_palindromic(p) || is_antipalindromic(p); }

}  // namespace

InvariantReport full_report(const TrainTrackMap& m, const ReportOptions& options) {
  if (options.tol <= 0) throw InputError("tolerance must be positive");
  require_valid(m);
  InvariantReport r;
  r.n = m.num_edges();
  r.v = m.num_vertices();
  r.digits = decimal_places_for(options.tol);
  r.T = transition_matrix(m);
  r.char_poly = char_poly(r.T);
  auto check = [&r](const std::string& name, bool ok, const std::string& detail) { r.checks.push_back({name, ok, detail}); };

  if (!is_irreducible(r.T) || is_permutation_matrix(r.T)) {
    r.warnings.push_back("T not irreducible");
    r.dilatation = largest_real_root(r.char_poly, options.tol);
    return r;
  }
  r.dilatation = largest_real_root(r.char_poly, options.tol);

  FormData f = form_data(m, r.T, options.basis);
  const GateStructure& g = f.g;
  r.types = g.type;
  r.orientable = f.verdict.orientable;
  if (r.orientable) r.action = orientation_action(m, g, f.verdict);
  r.basis_case = f.basis.kind;
  r.surface = boundary_cycles(m, g);
  const SurfaceStats& st = *r.surface;

  GateMapCheck gm = check_gate_map(m, g);
  {
    std::string detail = "f permutes the gates of each vertex type";
    for (const auto& p : gm.problems) detail = p;
    check("gate_map", gm.ok, detail);
  }

  r.A = f.A;
  r.dim_W = f.basis.size();
  r.homology = char_poly(f.A);
  r.det_A = determinant(f.A);
  const int m_nonodd = st.v - st.v_odd;
  {
    std::size_t want = static_cast<std::size_t>(r.orientable ? st.n - st.v + 1 : st.n - st.v + st.v_odd);
    check("dim_W", r.dim_W == want,
          "dim W = " + std::to_string(r.dim_W) + ", expected " + std::to_string(want));
  }
  check("det_A", *r.det_A == 1 || *r.det_A == -1, "det A = " + to_string(*r.det_A));

  IntMatrix D = delta_map(m, g, f.verdict);
  {
    std::size_t rk = rank(D);
    std::size_t want = static_cast<std::size_t>(r.orientable ? m_nonodd - 1 : m_nonodd);
    bool kernel_ok = (D * f.basis.Q).is_zero() && rk + r.dim_W == static_cast<std::size_t>(st.n);
    check("delta_rank", rk == want, "rank delta = " + std::to_string(rk) + ", expected " + std::to_string(want));
    check("delta_kernel", kernel_ok, "ker delta equals the span of the basis");
  }

  try {
    r.vertex = vertex_polynomial_quotient(r.char_poly, *r.homology);
    check("first_decomposition", true, "chi(T) = homology * vertex");
  } catch (const NonzeroRemainder& e) {
    check("first_decomposition", false, "chi(T) / homology leaves remainder " + to_string(e.remainder()));
    return r;
  }
  {
    IntPolynomial block = vertex_polynomial_block(r.T, f.basis.Q, f.basis.basis_edges());
    check("vertex_block", block == *r.vertex, "block polynomial " + to_string(block));
    int want = r.orientable ? m_nonodd - 1 : m_nonodd;
    check("vertex_degree", r.vertex->degree() == want,
          "deg vertex = " + std::to_string(r.vertex->degree()) + ", expected " + std::to_string(want));
    int hw = r.orientable ? st.n - st.v + 1 : st.n - st.v + st.v_odd;
    check("homology_degree", r.homology->degree() == hw,
          "deg homology = " + std::to_string(r.homology->degree()) + ", expected " + std::to_string(hw));
  }

  r.J = f.J;
  check("form_skew", f.J.transpose() == -f.J, "J^T = -J");
  if (preserves_form(f.A, f.J)) {
    check("form_invariant", true, "A^T J A = J");
  } else {
    std::string detail = "A^T J A != J; the cyclic orders are inconsistent";
    if (auto v = repairing_reflection(m, r.T, options.basis))
      detail += "; reversing the cyclic order at " + m.vertices[*v] + " repairs it";
    check("form_invariant", false, detail);
    return r;
  }

  RadicalSplit rs;
  try {
    rs = radical_and_split(f.J, f.A, *r.homology);
  } catch (const NonzeroRemainder& e) {
    check("second_decomposition", false, "homology / puncture leaves remainder " + to_string(e.remainder()));
    return r;
  } catch (const InvariantError& e) {
    check("second_decomposition", false, e.what());
    return r;
  }
  check("second_decomposition", true, "homology = puncture * symplectic");
  r.puncture = rs.puncture;
  r.symplectic = rs.symplectic;
  r.dim_Z = rs.Z.size();
  {
    int want = r.orientable ? st.s - 1 : st.s;
    check("dim_Z", static_cast<int>(r.dim_Z) == want,
          "dim Z = " + std::to_string(r.dim_Z) + ", expected " + std::to_string(want) + " from the puncture corners");
    check("puncture_degree", r.puncture->degree() == want,
          "deg puncture = " + std::to_string(r.puncture->degree()) + ", expected " + std::to_string(want));
    int sw = r.orientable ? 2 * st.genus : 2 * (st.cover_genus - st.genus);
    check("symplectic_degree", r.symplectic->degree() == sw,
          "deg symplectic = " + std::to_string(r.symplectic->degree()) + ", expected " + std::to_string(sw));
  }
  check("factorization", *r.vertex * *r.puncture * *r.symplectic == r.char_poly,
        "chi(T) = vertex * puncture * symplectic");

  r.palindromic_homology = pal_or_anti(*r.homology);
  r.palindromic_puncture = pal_or_anti(*r.puncture);
  r.palindromic_symplectic = is_palindromic(*r.symplectic);
  check("homology_palindromic", r.palindromic_homology, "homology is palindromic or anti-palindromic");
  check("puncture_palindromic", r.palindromic_puncture, "puncture is palindromic or anti-palindromic");
  check("symplectic_palindromic", r.palindromic_symplectic, "symplectic is palindromic");
  {
    auto order = matrix_finite_order(rs.restriction, 1000);
    check("puncture_finite_order", order.has_value(),
          order ? "f* restricted to Z has order " + std::to_string(*order) : "f* restricted to Z has no finite order up to 1000");
  }

  auto agree = [&](const std::string& name, const IntPolynomial& p) {
    if (p.degree() < 1) return;
    try {
      RootEstimate e = largest_real_root(p, options.tol);
      Rational diff = e.value - r.dilatation.value;
      if (diff < 0) diff = -diff;
      check(name, diff <= options.tol, "largest root " + to_decimal(e.value, r.digits));
    } catch (const InputError&) {
      check(name, false, "no real root");
    }
  };
  agree("dilatation_homology", *r.homology);
  agree("dilatation_symplectic", *r.symplectic);
  return r;
}

namespace {

std::string poly_or_none(const std::optional<IntPolynomial>& p) { return p ? to_string(*p) : "n/a"; }

std::string type_list(const InvariantReport& r, const TrainTrackMap& m) {
  std::string s;
  for (std::size_t v = 0; v < r.types.size(); ++v) {
    if (v) s += ", ";
    s += m.vertices[v] + " " + to_string(r.types[v]);
  }
  return s;
}

}  // namespace

std::string to_text(const InvariantReport& r, const TrainTrackMap& m) {
  std::ostringstream o;
  o << "edges: " << r.n << "\n";
  o << "vertices: " << r.v << "\n";
  if (!r.types.empty()) o << "vertex types: " << type_list(r, m) << "\n";
  o << "orientable: " << yes_no(r.orientable) << "\n";
  if (r.action) o << "orientation action: " << to_string(*r.action) << "\n";
  if (r.basis_case) o << "basis: " << to_string(*r.basis_case) << "\n";
  if (r.surface)
    o << "punctures: " << r.surface->s + r.surface->r << " (even corners " << r.surface->s << ", odd corners "
      << r.surface->r << "), genus " << r.surface->genus << ", cover genus " << r.surface->cover_genus << "\n";
  o << "dim W: " << r.dim_W << "\n";
  o << "dim Z: " << r.dim_Z << "\n";
  o << "char_poly: " << to_string(r.char_poly) << "\n";
  o << "homology_poly: " << poly_or_none(r.homology) << "\n";
  o << "vertex_poly: " << poly_or_none(r.vertex) << "\n";
  o << "puncture_poly: " << poly_or_none(r.puncture) << "\n";
  o << "symplectic_poly: " << poly_or_none(r.symplectic) << "\n";
  if (r.det_A) o << "det A: " << to_string(*r.det_A) << "\n";
  o << "dilatation: " << to_decimal(r.dilatation.value, r.digits) << "\n";
  if (r.symplectic)
    o << "palindromic: homology " << yes_no(r.palindromic_homology) << ", puncture " << yes_no(r.palindromic_puncture)
      << ", symplectic " << yes_no(r.palindromic_symplectic) << "\n";
  if (r.A) {
    o << "A:\n";
    std::istringstream rows(to_string(*r.A));
    for (std::string line; std::getline(rows, line);) o << "  " << line << "\n";
  }
  if (!r.checks.empty()) {
    o << "checks:\n";
    for (const auto& c : r.checks) o << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
  }
  for (const auto& w : r.warnings) o << "warning: " << w << "\n";
  o << "status: " << (r.valid() ? "ok" : "invalid") << "\n";
  return o.str();
}

namespace {

nlohmann::ordered_json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return to_string(v);
}

nlohmann::ordered_json matrix_json(const IntMatrix& a) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(integer_json(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::ordered_json poly_json(const std::optional<IntPolynomial>& p) {
  return p ? nlohmann::ordered_json(to_string(*p)) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string to_json(const InvariantReport& r, const TrainTrackMap& m) {
  nlohmann::ordered_json j;
  j["edges"] = r.n;
  j["vertices"] = r.v;
  auto types = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < r.types.size(); ++v) types[m.vertices[v]] = to_string(r.types[v]);
  j["vertex_types"] = types;
  j["orientable"] = r.orientable;
  j["orientation_action"] = r.action ? nlohmann::ordered_json(to_string(*r.action)) : nlohmann::ordered_json(nullptr);
  j["basis"] = r.basis_case ? nlohmann::ordered_json(to_string(*r.basis_case)) : nlohmann::ordered_json(nullptr);
  if (r.surface) {
    j["punctures"] = {{"even_corners", r.surface->s},
                      {"odd_corners", r.surface->r},
                      {"genus", r.surface->genus},
                      {"cover_genus", r.surface->cover_genus}};
  }
  j["dim_W"] = r.dim_W;
  j["dim_Z"] = r.dim_Z;
  j["char_poly"] = to_string(r.char_poly);
  j["homology_poly"] = poly_json(r.homology);
  j["vertex_poly"] = poly_json(r.vertex);
  j["puncture_poly"] = poly_json(r.puncture);
  j["symplectic_poly"] = poly_json(r.symplectic);
  j["dilatation"] = to_decimal(r.dilatation.value, r.digits);
  j["dilatation_interval"] = {to_string(r.dilatation.lower), to_string(r.dilatation.upper)};
  j["det_A"] = r.det_A ? integer_json(*r.det_A) : nlohmann::ordered_json(nullptr);
  if (r.symplectic)
    j["palindromic"] = {{"homology", r.palindromic_homology},
                        {"puncture", r.palindromic_puncture},
                        {"symplectic", r.palindromic_symplectic}};
  j["A"] = r.A ? matrix_json(*r.A) : nlohmann::ordered_json(nullptr);
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  j["warnings"] = r.warnings;
  j["valid"] = r.valid();
  return j.dump(2) + "\n";
}

}  // namespace trackpoly
