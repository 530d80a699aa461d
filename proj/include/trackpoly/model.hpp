#pragma once

#include "trackpoly/matrix.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace trackpoly {

enum class End { Initial, Terminal };

/// An edge end at a vertex. Encoded densely as 2*edge + (end == Terminal).
struct Direction {
  int edge = 0;
  End end = End::Initial;

  int id() const { return 2 * edge + (end == End::Terminal ? 1 : 0); }
  static Direction from_id(int id) { return {id / 2, (id % 2) ? End::Terminal : End::Initial}; }
  Direction opposite() const { return {edge, end == End::Initial ? End::Terminal : End::Initial}; }
  friend bool operator==(const Direction&, const Direction&) = default;
};

/// One letter of an edge path: an edge traversed forwards or backwards.
struct Letter {
  int edge = 0;
  bool inverse = false;

  Letter inverted() const { return {edge, !inverse}; }
  /// Direction through which the letter leaves its starting vertex.
  Direction start() const { return {edge, inverse ? End::Terminal : End::Initial}; }
  /// Direction through which the letter enters its final vertex.
  Direction finish() const { return {edge, inverse ? End::Initial : End::Terminal}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

Word inverse_word(const Word& w);

struct Edge {
  std::string name;
  int origin = 0;
  int terminus = 0;
};

/// A graph map f: G -> G together with the ribbon structure of G.
struct TrainTrackMap {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  /// Per vertex, the incident directions in counterclockwise order.
  std::vector<std::vector<Direction>> cyclic_order;
  /// Image vertex of each vertex; -1 if unknown.
  std::vector<int> vertex_map;
  std::vector<Word> edge_map;

  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_directions() const { return 2 * edges.size(); }

  int vertex_of(Direction d) const {
    const Edge& e = edges.at(d.edge);
    return d.end == End::Initial ? e.origin : e.terminus;
  }
  int start_vertex(Letter l) const { return vertex_of(l.start()); }
  int end_vertex(Letter l) const { return vertex_of(l.finish()); }

  std::optional<int> find_edge(const std::string& name) const;
  std::optional<int> find_vertex(const std::string& name) const;

  /// Image of an edge end read outward from the vertex: the image word for an
  /// initial end, its inverse for a terminal end.
  Word image_from(Direction d) const {
    return d.end == End::Initial ? edge_map.at(d.edge) : inverse_word(edge_map.at(d.edge));
  }

  std::string letter_text(Letter l) const { return (l.inverse ? "~" : "") + edges.at(l.edge).name; }
  std::string direction_text(Direction d) const {
    return edges.at(d.edge).name + (d.end == End::Initial ? "+" : "-");
  }
  std::string word_text(const Word& w) const;
};

/// Parses the line-oriented spec format:
///   vertex <name>
///   edge <name> <origin> <terminus>
///   order <vertex> <dir>...        (a+ initial end, a- terminal end, counterclockwise)
///   map <edge> -> <letter>...      (a or ~a)
///   vmap <vertex> -> <vertex>      (optional; inferred from the edge maps otherwise)
/// Throws ParseError on syntax errors, unknown names and duplicate declarations.
TrainTrackMap parse_spec(const std::string& text);
TrainTrackMap load_spec(const std::string& path);

/// Canonical text form; parse_spec(serialize(m)) reproduces m.
std::string serialize(const TrainTrackMap& m);

enum class IssueKind {
  MissingImage,
  PathConnectivity,
  Backtracking,
  EndpointConsistency,
  VertexMap,
  CyclicOrder,
  GraphConnectivity,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::size_t count(IssueKind kind) const;
  std::string text() const;
};

ValidationReport validate(const TrainTrackMap& m);
/// Throws InputError listing every issue when validation fails.
void require_valid(const TrainTrackMap& m);

inline constexpr std::size_t kDefaultWordCap = 1000000;

/// The map f^n on the same graph. Throws ResourceLimit when an image word
/// would exceed `word_cap` letters.
TrainTrackMap compose(const TrainTrackMap& m, unsigned n, std::size_t word_cap = kDefaultWordCap);

/// T[i][j] = occurrences of edge i (either orientation) in the image of edge j.
IntMatrix transition_matrix(const TrainTrackMap& m);

}  // namespace trackpoly
