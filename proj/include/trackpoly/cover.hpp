#pragma once

#include "trackpoly/invariants.hpp"

#include <array>
#include <vector>

namespace trackpoly {

struct CoverOptions {
  /// Swap the roles of incoming and outgoing gates in the cover.
  bool reverse_orientation = false;
  /// Per base vertex: exchange the names of its two lifts.
  std::vector<bool> flip_sheets;
};

/// Orientation double cover of G, branched over the odd vertices.
///
/// Gate i of a vertex on sheet s (s = +1 or -1) has sign s * (-1)^i, +1 for
/// incoming. The lift e of an edge leaves through an outgoing gate and enters
/// through an incoming one, so it projects to e; its twin e' projects to e
/// reversed. Edges are numbered e_1..e_n, then e_1'..e_n'.
struct Cover {
  TrainTrackMap graph;  // edge_map empty
  std::vector<std::array<int, 2>> vertex_lifts;  // base vertex -> cover vertex on sheet +1, -1
  std::vector<int> vertex_base;                  // cover vertex -> base vertex
  std::vector<int> iota_vertex;                  // deck involution on vertices
  std::vector<bool> sign_consistent;             // per base edge: end gates of opposite sign
  /// Per cover direction id, the position of its gate in the polygon of its
  /// vertex lift; an odd vertex lift has 2k positions, sheet -1 after sheet +1.
  std::vector<int> corner;
  std::vector<int> polygon_size;  // per cover vertex
  std::size_t base_edges = 0;

  int iota_edge(int e) const {
    const int n = static_cast<int>(base_edges);
    return e < n ? e + n : e - n;
  }
  int edge_base(int e) const { return e % static_cast<int>(base_edges); }
  bool primed(int e) const { return e >= static_cast<int>(base_edges); }
};

/// Builds the cover with lifted cyclic orders: each lift of a non-odd vertex
/// copies the base order, the lift of an odd vertex runs twice around it,
/// once per sheet. Throws InputError when the track is orientable.
Cover build_cover(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                  const CoverOptions& options = {});

struct LiftedMaps {
  TrainTrackMap op;  // orientation preserving lift
  TrainTrackMap orr;  // orientation reversing lift, iota composed with op
  IntMatrix A;       // occurrences of unprimed lifts in the images of unprimed edges
  IntMatrix B;       // occurrences of primed lifts in the images of unprimed edges
};

/// Lifts f letter by letter: a letter e becomes e, a letter ~e becomes e'.
/// The image of e' is the image of e read backwards with primes exchanged.
/// Throws InvariantError if a lifted word is not an edge path or the lift is
/// not a valid graph map.
LiftedMaps lift_map(const TrainTrackMap& m, const Cover& cover);

struct CoverIdentities {
  IntPolynomial chi_op, chi_or;  // characteristic polynomials of [[A,B],[B,A]] and [[B,A],[A,B]]
  IntPolynomial det_op, det_or;  // det(xI - (A-B)), det(xI - (B-A))
  bool op_holds = false;
  bool or_holds = false;
};

/// chi([[A,B],[B,A]]) = chi(T) det(xI-(A-B)) and chi([[B,A],[A,B]]) = chi(T) det(xI-(B-A)).
CoverIdentities cover_identities(const IntMatrix& T, const IntMatrix& A, const IntMatrix& B);

/// Checks that boundary cycles with an even number of corners lift to two
/// cycles of the same length and odd ones to one cycle of twice the length.
bool puncture_lifting_holds(const SurfaceStats& base, const SurfaceStats& cover);

/// True iff every image word of `lift` projects to the image of the base
/// edge: e and e' map to e and e reversed, deck images project like their
/// preimages.
bool projects_to(const Cover& cover, const TrainTrackMap& lift, const TrainTrackMap& base);

/// Full report on a lifted map, with extra checks tying it to the base map.
InvariantReport analyze_lift(const TrainTrackMap& base, const TrainTrackMap& lift, const ReportOptions& options = {});

}  // namespace trackpoly
