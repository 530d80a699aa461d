#include "trackpoly/gates.hpp"

#include "trackpoly/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace trackpoly {

std::vector<int> derivative_map(const TrainTrackMap& m) {
  std::vector<int> df(m.num_directions());
  for (std::size_t id = 0; id < df.size(); ++id) {
    Word w = m.image_from(Direction::from_id(static_cast<int>(id)));
    if (w.empty()) throw InputError("edge " + m.edges[id / 2].name + " has no image");
    df[id] = w.front().start().id();
  }
  return df;
}

std::vector<int> gate_classes(const TrainTrackMap& m, const std::vector<int>& df, std::size_t bound) {
  const std::size_t n = df.size();
  bound = std::max(bound, n);
  std::map<std::pair<int, int>, int> first;  // (vertex, Df^bound image) -> smallest direction id
  std::vector<int> cls(n);
  for (std::size_t id = 0; id < n; ++id) {
    int x = static_cast<int>(id);
    for (std::size_t r = 0; r < bound; ++r) x = df[x];
    auto key = std::make_pair(m.vertex_of(Direction::from_id(static_cast<int>(id))), x);
    auto it = first.emplace(key, static_cast<int>(id)).first;
    cls[id] = it->second;
  }
  return cls;
}

namespace {
Turn make_turn(int a, int b) { return a <= b ? Turn{a, b} : Turn{b, a}; }
}  // namespace

std::set<Turn> taken_turns(const TrainTrackMap& m, const std::vector<int>& df) {
  std::set<Turn> turns;
  std::deque<Turn> work;
  auto add = [&](Turn t) {
    if (turns.insert(t).second) work.push_back(t);
  };
  for (const Word& w : m.edge_map)
    for (std::size_t i = 0; i + 1 < w.size(); ++i) add(make_turn(w[i].finish().id(), w[i + 1].start().id()));
  while (!work.empty()) {
    Turn t = work.front();
    work.pop_front();
    add(make_turn(df[t.first], df[t.second]));
  }
  return turns;
}

std::string to_string(VertexType t) {
  switch (t) {
    case VertexType::Odd: return "odd";
    case VertexType::Even: return "even";
    case VertexType::Partial: return "partial";
    case VertexType::Evanescent: return "evanescent";
  }
  return "?";
}

bool GateStructure::has_odd_vertex() const { return count(VertexType::Odd) > 0; }

std::size_t GateStructure::count(VertexType t) const {
  return static_cast<std::size_t>(std::count(type.begin(), type.end(), t));
}

GateStructure analyze_gates(const TrainTrackMap& m) {
  require_valid(m);
  GateStructure g;
  g.df = derivative_map(m);
  g.turns = taken_turns(m, g.df);
  const std::vector<int> cls = gate_classes(m, g.df);

  auto turn_text = [&m](const Turn& t) {
    return "{" + m.direction_text(Direction::from_id(t.first)) + ", " + m.direction_text(Direction::from_id(t.second)) +
           "}";
  };
  for (const Turn& t : g.turns)
    if (cls[t.first] == cls[t.second])
      throw InputError("map is not efficient: taken turn " + turn_text(t) + " lies inside one gate");

  const std::size_t nv = m.num_vertices();
  g.gate_of.assign(m.num_directions(), -1);
  g.gate_offset.assign(nv, 0);
  g.gate_count.assign(nv, 0);
  g.type.assign(nv, VertexType::Odd);
  g.infinitesimal.assign(nv, {});

  for (std::size_t v = 0; v < nv; ++v) {
    const std::string& vname = m.vertices[v];
    const auto& order = m.cyclic_order[v];
    const std::size_t len = order.size();
    // Runs of equal class, starting at a run boundary.
    std::size_t s = 0;
    while (s < len && cls[order[s].id()] == cls[order[(s + len - 1) % len].id()]) ++s;
    if (s == len) s = 0;
    std::vector<std::vector<Direction>> runs;
    for (std::size_t i = 0; i < len; ++i) {
      Direction d = order[(s + i) % len];
      if (runs.empty() || cls[runs.back().front().id()] != cls[d.id()]) runs.push_back({});
      runs.back().push_back(d);
    }
    for (std::size_t a = 0; a < runs.size(); ++a)
      for (std::size_t b = a + 1; b < runs.size(); ++b)
        if (cls[runs[a].front().id()] == cls[runs[b].front().id()])
          throw InputError("embedding is inconsistent: the gate of " + m.direction_text(runs[a].front()) + " at " +
                           vname + " is not contiguous in the cyclic order");
    // Rotate so that the run holding the first listed direction comes first.
    const int k = static_cast<int>(runs.size());
    int first_run = 0;
    for (int r = 0; r < k; ++r)
      if (std::find(runs[r].begin(), runs[r].end(), order.front()) != runs[r].end()) first_run = r;
    std::rotate(runs.begin(), runs.begin() + first_run, runs.end());
    std::map<int, int> position;  // class -> run position
    for (int r = 0; r < k; ++r) position[cls[runs[r].front().id()]] = r;

    std::set<std::pair<int, int>> sides;  // (i, i+1 mod k), as run positions
    for (const Turn& t : g.turns) {
      Direction a = Direction::from_id(t.first), b = Direction::from_id(t.second);
      if (m.vertex_of(a) != static_cast<int>(v)) continue;
      int pa = position.at(cls[a.id()]), pb = position.at(cls[b.id()]);
      if ((pa + 1) % k == pb)
        sides.insert({pa, pb});
      else if ((pb + 1) % k == pa)
        sides.insert({pb, pa});
      else
        throw InputError("embedding is inconsistent: taken turn " + turn_text(t) + " at " + vname +
                         " joins gates that are not adjacent in the cyclic order");
    }

    if (k == 1) throw InputError("vertex " + vname + " has a single gate");
    int start = 0;
    VertexType type;
    if (k == 2) {
      if (sides.empty()) throw InputError("vertex " + vname + " has two gates and no taken turn between them");
      type = VertexType::Evanescent;
    } else {
      std::vector<int> missing;
      for (int i = 0; i < k; ++i)
        if (!sides.count({i, (i + 1) % k})) missing.push_back(i);
      if (missing.empty()) {
        type = (k % 2) ? VertexType::Odd : VertexType::Even;
      } else if (missing.size() == 1) {
        type = VertexType::Partial;
        start = (missing.front() + 1) % k;
      } else {
        throw InputError("infinitesimal edges at " + vname + " form neither a cycle nor a path through its " +
                         std::to_string(k) + " gates");
      }
    }

    g.gate_offset[v] = static_cast<int>(g.gate_vertex.size());
    g.gate_count[v] = k;
    g.type[v] = type;
    for (int i = 0; i < k; ++i) {
      const auto& run = runs[(start + i) % k];
      const int id = g.gate_offset[v] + i;
      g.gate_vertex.push_back(static_cast<int>(v));
      g.gate_index.push_back(i);
      g.gate_dirs.push_back(run);
      for (const auto& d : run) g.gate_of[d.id()] = id;
    }
    const int sides_count = (type == VertexType::Odd || type == VertexType::Even) ? k : k - 1;
    for (int i = 0; i < sides_count; ++i) g.infinitesimal[v].push_back({i, (i + 1) % k});
  }
  return g;
}

std::string OrientabilityVerdict::witness_text(const TrainTrackMap& m) const {
  std::string out;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ", ";
    const auto& s = witness[i];
    if (s.real)
      out += m.edges[s.edge].name;
    else
      out += m.vertices[s.vertex] + "[" + std::to_string(s.index) + "|" + std::to_string(s.index + 1) + "]";
  }
  return out;
}

OrientabilityVerdict orientability(const TrainTrackMap& m, const GateStructure& g) {
  struct Arc {
    int to;
    ConstraintStep step;
  };
  const int ng = g.num_gates();
  std::vector<std::vector<Arc>> adj(ng);
  auto link = [&adj](int a, int b, ConstraintStep s) {
    adj[a].push_back({b, s});
    if (a != b) adj[b].push_back({a, s});
  };
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    int a = g.gate_of[Direction{static_cast<int>(e), End::Initial}.id()];
    int b = g.gate_of[Direction{static_cast<int>(e), End::Terminal}.id()];
    link(a, b, {true, static_cast<int>(e), -1, -1});
  }
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    for (const auto& [i, j] : g.infinitesimal[v])
      link(g.gate(static_cast<int>(v), i), g.gate(static_cast<int>(v), j),
           {false, -1, static_cast<int>(v), i});

  OrientabilityVerdict verdict;
  std::vector<int> color(ng, 0), depth(ng, 0), parent(ng, -1);
  std::vector<ConstraintStep> parent_step(ng);
  for (int root = 0; root < ng; ++root) {
    if (color[root]) continue;
    color[root] = 1;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const Arc& arc : adj[u]) {
        if (!color[arc.to]) {
          color[arc.to] = -color[u];
          depth[arc.to] = depth[u] + 1;
          parent[arc.to] = u;
          parent_step[arc.to] = arc.step;
          queue.push_back(arc.to);
        } else if (color[arc.to] == color[u]) {
          // Odd cycle: u -> lca, closing step, lca <- w.
          std::vector<ConstraintStep> up, down;
          int a = u, b = arc.to;
          while (a != b) {
            if (depth[a] >= depth[b]) {
              up.push_back(parent_step[a]);
              a = parent[a];
            } else {
              down.push_back(parent_step[b]);
              b = parent[b];
            }
          }
          verdict.orientable = false;
          verdict.witness.assign(up.rbegin(), up.rend());
          verdict.witness.push_back(arc.step);
          verdict.witness.insert(verdict.witness.end(), down.begin(), down.end());
          return verdict;
        }
      }
    }
  }
  verdict.orientable = true;
  verdict.sign = color;
  return verdict;
}

std::string to_string(OrientationAction a) { return a == OrientationAction::Preserving ? "preserving" : "reversing"; }

OrientationAction orientation_action(const TrainTrackMap& m, const GateStructure& g,
                                     const OrientabilityVerdict& verdict) {
  if (!verdict.orientable) throw InputError("train track is not orientable");
  int action = 0;
  for (std::size_t id = 0; id < m.num_directions(); ++id) {
    int p = verdict.sign[g.gate_of[id]] * verdict.sign[g.gate_of[g.df[id]]];
    if (action == 0) action = p;
    if (p != action) throw InvariantError("derivative map does not act consistently on gate signs");
  }
  return action >= 0 ? OrientationAction::Preserving : OrientationAction::Reversing;
}

SurfaceStats boundary_cycles(const TrainTrackMap& m, const GateStructure& g) {
  std::vector<Direction> successor(m.num_directions());
  for (const auto& order : m.cyclic_order)
    for (std::size_t i = 0; i < order.size(); ++i) successor[order[i].id()] = order[(i + 1) % order.size()];

  SurfaceStats st;
  st.n = static_cast<int>(m.num_edges());
  st.v = static_cast<int>(m.num_vertices());
  st.v_odd = static_cast<int>(g.count(VertexType::Odd));
  st.v_even = static_cast<int>(g.count(VertexType::Even));
  st.v_partial = static_cast<int>(g.count(VertexType::Partial) + g.count(VertexType::Evanescent));

  std::vector<bool> seen(m.num_directions());
  for (std::size_t id0 = 0; id0 < m.num_directions(); ++id0) {
    if (seen[id0]) continue;
    BoundaryCycle cyc;
    Direction d = Direction::from_id(static_cast<int>(id0));
    do {
      seen[d.id()] = true;
      cyc.passages.push_back(d);
      Direction arrive = d.opposite();
      Direction next = successor[arrive.id()];
      const int v = m.vertex_of(arrive);
      const int k = g.gate_count[v];
      const int gi = g.index_of(arrive), gj = g.index_of(next);
      if (gi == gj)
        cyc.corners += 1;
      else if (is_partial(g.type[v]) && gi == k - 1 && gj == 0)
        cyc.corners += k - 2;
      d = next;
    } while (d.id() != static_cast<int>(id0));
    (cyc.corners % 2 ? st.r : st.s) += 1;
    st.boundary.push_back(std::move(cyc));
  }

  st.euler = st.v - st.n;
  st.cover_euler = st.v_odd + 2 * st.v_even + 2 * st.v_partial - 2 * st.n;
  const int twice_g = 2 - st.euler - (st.r + st.s);
  const int twice_cover_g = 2 - st.cover_euler - (st.r + 2 * st.s);
  if (twice_g < 0 || twice_g % 2 || twice_cover_g < 0 || twice_cover_g % 2)
    throw InputError("boundary cycles (" + std::to_string(st.s) + " even, " + std::to_string(st.r) +
                     " odd) are inconsistent with the Euler characteristic; the train track does not fill the surface");
  st.genus = twice_g / 2;
  st.cover_genus = twice_cover_g / 2;
  return st;
}

GateMapCheck check_gate_map(const TrainTrackMap& m, const GateStructure& g) {
  GateMapCheck check;
  auto fail = [&check](std::string msg) {
    check.ok = false;
    check.problems.push_back(std::move(msg));
  };
  std::map<int, int> hit;  // image vertex -> preimage
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const int k = g.gate_count[v];
    if (k < 3) continue;
    const int w = m.vertex_map[v];
    const std::string& vn = m.vertices[v];
    if (g.type[w] != g.type[v] || g.gate_count[w] != k) {
      fail("vertex " + vn + " (" + to_string(g.type[v]) + ", " + std::to_string(k) + " gates) maps to " +
           m.vertices[w] + " (" + to_string(g.type[w]) + ", " + std::to_string(g.gate_count[w]) + " gates)");
      continue;
    }
    if (auto [it, fresh] = hit.emplace(w, static_cast<int>(v)); !fresh)
      fail("vertices " + m.vertices[it->second] + " and " + vn + " both map to " + m.vertices[w]);
    std::vector<int> image(k);
    for (int i = 0; i < k; ++i) {
      const auto& dirs = g.gate_dirs[g.gate(static_cast<int>(v), i)];
      image[i] = g.gate_of[g.df[dirs.front().id()]];
      for (const auto& d : dirs)
        if (g.gate_of[g.df[d.id()]] != image[i]) fail("gate " + std::to_string(i) + " at " + vn + " is split by Df");
      image[i] = g.gate_index[image[i]];
    }
    for (int i = 0; i < k; ++i)
      if (image[(i + 1) % k] != (image[i] + 1) % k) {
        fail("gate map at " + vn + " does not preserve the cyclic order");
        break;
      }
  }
  return check;
}

}  // namespace trackpoly
