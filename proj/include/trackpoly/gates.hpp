#pragma once

#include "trackpoly/model.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace trackpoly {

/// Df on direction ids: the direction of the first letter of the image of an
/// edge end, read outward from its vertex.
std::vector<int> derivative_map(const TrainTrackMap& m);

/// Class id per direction: d1 ~ d2 iff Df^r(d1) = Df^r(d2) for some r >= 1.
/// Ids are the smallest direction id of each class. With N directions every
/// Df-orbit is periodic after N steps and Df is injective on periodic points,
/// so equality at r = bound with bound >= N decides the relation.
std::vector<int> gate_classes(const TrainTrackMap& m, const std::vector<int>& df, std::size_t bound = 0);

using Turn = std::pair<int, int>;  // direction ids, first <= second

/// Turns occurring inside edge images, closed under Df. Does not check efficiency.
std::set<Turn> taken_turns(const TrainTrackMap& m, const std::vector<int>& df);

enum class VertexType { Odd, Even, Partial, Evanescent };
std::string to_string(VertexType t);
inline bool is_partial(VertexType t) { return t == VertexType::Partial || t == VertexType::Evanescent; }

/// Gates, infinitesimal edges and vertex types of a train track map.
///
/// Gates at a vertex are numbered 0..k-1 counterclockwise. For a complete
/// polygon gate 0 contains the first direction of the vertex's cyclic order;
/// for a partial polygon gate 0 is the gate following the missing side, so
/// the infinitesimal edges are {i, i+1} for i < k-1. Gate ids are global:
/// gate i at vertex v has id gate_offset[v] + i.
struct GateStructure {
  std::vector<int> df;
  std::set<Turn> turns;

  std::vector<int> gate_of;                        // direction id -> gate id
  std::vector<int> gate_vertex;                    // gate id -> vertex
  std::vector<int> gate_index;                     // gate id -> index at its vertex
  std::vector<std::vector<Direction>> gate_dirs;   // gate id -> directions, counterclockwise
  std::vector<int> gate_offset;                    // vertex -> first gate id
  std::vector<int> gate_count;                     // vertex -> k
  std::vector<VertexType> type;                    // vertex -> type
  /// Per vertex, the infinitesimal edges as gate index pairs (i, i+1 mod k).
  std::vector<std::vector<std::pair<int, int>>> infinitesimal;

  int num_gates() const { return static_cast<int>(gate_vertex.size()); }
  int gate(int v, int index) const { return gate_offset[v] + index; }
  int index_of(Direction d) const { return gate_index[gate_of[d.id()]]; }
  bool has_odd_vertex() const;
  std::size_t count(VertexType t) const;
  /// Number of infinitesimal edges at v: k for complete polygons, k-1 for partial ones.
  int infinitesimal_count(int v) const { return static_cast<int>(infinitesimal[v].size()); }
};

/// Builds the gate structure. Throws InputError when the input is not an
/// efficient map on a consistently embedded graph: a taken turn inside one
/// gate, a gate that is not contiguous in the cyclic order, an infinitesimal
/// edge between non-adjacent gates, or a vertex whose infinitesimal edges are
/// neither a cycle nor a Hamiltonian path of its gates.
GateStructure analyze_gates(const TrainTrackMap& m);

/// One step of a constraint cycle: a real edge joining its two end gates, or
/// an infinitesimal edge joining gates (index, index+1) at a vertex.
struct ConstraintStep {
  bool real = true;
  int edge = -1;     // real edge
  int vertex = -1;   // infinitesimal edge
  int index = -1;
};

struct OrientabilityVerdict {
  bool orientable = false;
  /// Per gate id: +1 for incoming gates, -1 for outgoing gates (orientable only).
  std::vector<int> sign;
  /// Odd cycle of the constraint graph (non-orientable only).
  std::vector<ConstraintStep> witness;

  std::string witness_text(const TrainTrackMap& m) const;
};

/// Two-colors the gate graph whose edges are infinitesimal edges and real edges.
OrientabilityVerdict orientability(const TrainTrackMap& m, const GateStructure& g);

enum class OrientationAction { Preserving, Reversing };
std::string to_string(OrientationAction a);

/// Whether Df maps incoming gates to incoming gates. Throws InputError if the
/// track is not orientable and InvariantError if the action is inconsistent.
OrientationAction orientation_action(const TrainTrackMap& m, const GateStructure& g,
                                     const OrientabilityVerdict& verdict);

/// A boundary component of the ribbon surface of G.
struct BoundaryCycle {
  /// Directions along which the cycle leaves each vertex it visits.
  std::vector<Direction> passages;
  int corners = 0;
};

struct SurfaceStats {
  int n = 0, v = 0, v_odd = 0, v_even = 0, v_partial = 0;
  std::vector<BoundaryCycle> boundary;
  int s = 0;  // punctures with an even number of corners
  int r = 0;  // punctures with an odd number of corners
  int euler = 0;        // chi(S)
  int cover_euler = 0;  // chi of the orientation double cover
  int genus = 0;
  int cover_genus = 0;
};

/// Traces the boundary of the ribbon surface: from a direction, cross its
/// edge and continue with the counterclockwise successor at the far vertex.
/// Throws InputError if the Euler characteristic relations have no solution.
SurfaceStats boundary_cycles(const TrainTrackMap& m, const GateStructure& g);

struct GateMapCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Checks that f permutes the vertices of each type with k >= 3 gates and
/// induces on their gates a bijection that preserves the cyclic order.
GateMapCheck check_gate_map(const TrainTrackMap& m, const GateStructure& g);

}  // namespace trackpoly
