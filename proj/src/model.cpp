#include "trackpoly/model.hpp"

#include "trackpoly/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace trackpoly {

Word inverse_word(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->inverted());
  return r;
}

std::optional<int> TrainTrackMap::find_edge(const std::string& name) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> TrainTrackMap::find_vertex(const std::string& name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::string TrainTrackMap::word_text(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_text(w[i]);
  }
  return out;
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

bool valid_name(const std::string& s) {
  if (s.empty() || s[0] == '~' || s == "->") return false;
  const char last = s.back();
  return last != '+' && last != '-';
}

}  // namespace

TrainTrackMap parse_spec(const std::string& text) {
  const auto lines = tokenize(text);
  TrainTrackMap m;
  std::map<std::string, int> vertex_ids, edge_ids;

  // Declarations first so that later sections may refer to names in any order.
  for (const auto& line : lines) {
    const auto& t = line.tokens;
    if (t[0] == "vertex") {
      if (t.size() != 2) throw ParseError(line.number, "expected 'vertex <name>'");
      if (!valid_name(t[1])) throw ParseError(line.number, "invalid vertex name '" + t[1] + "'");
      if (vertex_ids.count(t[1])) throw ParseError(line.number, "duplicate vertex '" + t[1] + "'");
      vertex_ids[t[1]] = static_cast<int>(m.vertices.size());
      m.vertices.push_back(t[1]);
    } else if (t[0] != "edge" && t[0] != "order" && t[0] != "map" && t[0] != "vmap") {
      throw ParseError(line.number, "unknown keyword '" + t[0] + "'");
    }
  }
  auto vertex = [&](const Line& line, const std::string& name) {
    auto it = vertex_ids.find(name);
    if (it == vertex_ids.end()) throw ParseError(line.number, "unknown vertex '" + name + "'");
    return it->second;
  };
  for (const auto& line : lines) {
    const auto& t = line.tokens;
    if (t[0] != "edge") continue;
    if (t.size() != 4) throw ParseError(line.number, "expected 'edge <name> <origin> <terminus>'");
    if (!valid_name(t[1])) throw ParseError(line.number, "invalid edge name '" + t[1] + "'");
    if (edge_ids.count(t[1])) throw ParseError(line.number, "duplicate edge '" + t[1] + "'");
    edge_ids[t[1]] = static_cast<int>(m.edges.size());
    m.edges.push_back({t[1], vertex(line, t[2]), vertex(line, t[3])});
  }
  auto edge = [&](const Line& line, const std::string& name) {
    auto it = edge_ids.find(name);
    if (it == edge_ids.end()) throw ParseError(line.number, "unknown edge '" + name + "'");
    return it->second;
  };

  m.cyclic_order.assign(m.vertices.size(), {});
  m.vertex_map.assign(m.vertices.size(), -1);
  m.edge_map.assign(m.edges.size(), {});
  std::vector<bool> have_order(m.vertices.size()), have_vmap(m.vertices.size()), have_map(m.edges.size());

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    if (t[0] == "order") {
      if (t.size() < 2) throw ParseError(line.number, "expected 'order <vertex> <dir>...'");
      int v = vertex(line, t[1]);
      if (have_order[v]) throw ParseError(line.number, "duplicate order for vertex '" + t[1] + "'");
      have_order[v] = true;
      for (std::size_t i = 2; i < t.size(); ++i) {
        const std::string& tok = t[i];
        if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
          throw ParseError(line.number, "direction '" + tok + "' must end in + or -");
        int e = edge(line, tok.substr(0, tok.size() - 1));
        m.cyclic_order[v].push_back({e, tok.back() == '+' ? End::Initial : End::Terminal});
      }
    } else if (t[0] == "map") {
      if (t.size() < 3 || t[2] != "->") throw ParseError(line.number, "expected 'map <edge> -> <letter>...'");
      int e = edge(line, t[1]);
      if (have_map[e]) throw ParseError(line.number, "duplicate map for edge '" + t[1] + "'");
      have_map[e] = true;
      if (t.size() == 3) throw ParseError(line.number, "empty image for edge '" + t[1] + "'");
      for (std::size_t i = 3; i < t.size(); ++i) {
        const std::string& tok = t[i];
        bool inv = !tok.empty() && tok[0] == '~';
        m.edge_map[e].push_back({edge(line, inv ? tok.substr(1) : tok), inv});
      }
    } else if (t[0] == "vmap") {
      if (t.size() != 4 || t[2] != "->") throw ParseError(line.number, "expected 'vmap <vertex> -> <vertex>'");
      int v = vertex(line, t[1]);
      if (have_vmap[v]) throw ParseError(line.number, "duplicate vmap for vertex '" + t[1] + "'");
      have_vmap[v] = true;
      m.vertex_map[v] = vertex(line, t[3]);
    }
  }

  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const Word& w = m.edge_map[e];
    if (w.empty()) continue;
    int& o = m.vertex_map[m.edges[e].origin];
    if (o < 0) o = m.start_vertex(w.front());
    int& t = m.vertex_map[m.edges[e].terminus];
    if (t < 0) t = m.end_vertex(w.back());
  }
  return m;
}

TrainTrackMap load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

std::string serialize(const TrainTrackMap& m) {
  std::ostringstream os;
  for (const auto& v : m.vertices) os << "vertex " << v << "\n";
  os << "\n";
  for (const auto& e : m.edges) os << "edge " << e.name << " " << m.vertices[e.origin] << " " << m.vertices[e.terminus] << "\n";
  os << "\n";
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    os << "order " << m.vertices[v];
    for (const auto& d : m.cyclic_order[v]) os << " " << m.direction_text(d);
    os << "\n";
  }
  os << "\n";
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    if (!m.edge_map[e].empty()) os << "map " << m.edges[e].name << " -> " << m.word_text(m.edge_map[e]) << "\n";
  os << "\n";
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (m.vertex_map[v] >= 0) os << "vmap " << m.vertices[v] << " -> " << m.vertices[m.vertex_map[v]] << "\n";
  return os.str();
}

std::size_t ValidationReport::count(IssueKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [kind](const ValidationIssue& i) { return i.kind == kind; }));
}

std::string ValidationReport::text() const {
  std::string out;
  for (const auto& i : issues) out += i.message + "\n";
  return out;
}

ValidationReport validate(const TrainTrackMap& m) {
  ValidationReport r;
  auto add = [&r](IssueKind k, std::string msg) { r.issues.push_back({k, std::move(msg)}); };

  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const Word& w = m.edge_map[e];
    const std::string& name = m.edges[e].name;
    if (w.empty()) {
      add(IssueKind::MissingImage, "edge " + name + " has no image");
      continue;
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (m.end_vertex(w[i]) != m.start_vertex(w[i + 1]))
        add(IssueKind::PathConnectivity, "image of " + name + " is not a path: " + m.letter_text(w[i]) + " ends at " +
                                             m.vertices[m.end_vertex(w[i])] + " but " + m.letter_text(w[i + 1]) +
                                             " starts at " + m.vertices[m.start_vertex(w[i + 1])]);
      if (w[i + 1] == w[i].inverted())
        add(IssueKind::Backtracking, "image of " + name + " backtracks at " + m.letter_text(w[i]) + " " +
                                         m.letter_text(w[i + 1]));
    }
    const int o = m.vertex_map[m.edges[e].origin], t = m.vertex_map[m.edges[e].terminus];
    if (o >= 0 && m.start_vertex(w.front()) != o)
      add(IssueKind::EndpointConsistency, "image of " + name + " starts at " + m.vertices[m.start_vertex(w.front())] +
                                              ", expected " + m.vertices[o]);
    if (t >= 0 && m.end_vertex(w.back()) != t)
      add(IssueKind::EndpointConsistency, "image of " + name + " ends at " + m.vertices[m.end_vertex(w.back())] +
                                              ", expected " + m.vertices[t]);
  }
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (m.vertex_map[v] < 0) add(IssueKind::VertexMap, "image of vertex " + m.vertices[v] + " is undetermined");

  std::vector<int> seen(m.num_directions(), 0);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    for (const auto& d : m.cyclic_order[v]) {
      if (m.vertex_of(d) != static_cast<int>(v))
        add(IssueKind::CyclicOrder, "order at " + m.vertices[v] + " lists " + m.direction_text(d) + ", which is at " +
                                        m.vertices[m.vertex_of(d)]);
      else if (seen[d.id()]++)
        add(IssueKind::CyclicOrder, "order at " + m.vertices[v] + " lists " + m.direction_text(d) + " twice");
    }
  }
  for (std::size_t id = 0; id < m.num_directions(); ++id)
    if (!seen[id]) {
      Direction d = Direction::from_id(static_cast<int>(id));
      add(IssueKind::CyclicOrder, "order at " + m.vertices[m.vertex_of(d)] + " is missing " + m.direction_text(d));
    }

  // connectivity of G
  std::vector<int> parent(m.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> touched(m.vertices.size());
  for (const auto& e : m.edges) {
    parent[find(e.origin)] = find(e.terminus);
    touched[e.origin] = touched[e.terminus] = true;
  }
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (!touched[v]) add(IssueKind::GraphConnectivity, "vertex " + m.vertices[v] + " has no incident edges");
    else if (find(static_cast<int>(v)) != find(0))
      add(IssueKind::GraphConnectivity, "graph is disconnected: " + m.vertices[v] + " is not connected to " + m.vertices[0]);
  }
  if (m.vertices.empty()) add(IssueKind::GraphConnectivity, "graph has no vertices");
  return r;
}

void require_valid(const TrainTrackMap& m) {
  ValidationReport r = validate(m);
  if (!r.ok()) throw InputError("invalid train track map:\n" + r.text());
}

TrainTrackMap compose(const TrainTrackMap& m, unsigned n, std::size_t word_cap) {
  if (n == 0) throw std::invalid_argument("compose needs n >= 1");
  require_valid(m);
  TrainTrackMap out = m;
  std::vector<Word> inverse_images(m.edges.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) inverse_images[e] = inverse_word(m.edge_map[e]);
  for (unsigned step = 1; step < n; ++step) {
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      Word next;
      for (const Letter& l : out.edge_map[e]) {
        const Word& piece = l.inverse ? inverse_images[l.edge] : m.edge_map[l.edge];
        if (next.size() + piece.size() > word_cap)
          throw ResourceLimit("image of " + m.edges[e].name + " under f^" + std::to_string(n) + " exceeds " +
                              std::to_string(word_cap) + " letters");
        next.insert(next.end(), piece.begin(), piece.end());
      }
      out.edge_map[e] = std::move(next);
    }
    for (std::size_t v = 0; v < m.vertices.size(); ++v) out.vertex_map[v] = m.vertex_map[out.vertex_map[v]];
  }
  return out;
}

IntMatrix transition_matrix(const TrainTrackMap& m) {
  IntMatrix t(m.edges.size(), m.edges.size());
  for (std::size_t j = 0; j < m.edges.size(); ++j)
    for (const Letter& l : m.edge_map[j]) t(l.edge, j) += 1;
  return t;
}

}  // namespace trackpoly
