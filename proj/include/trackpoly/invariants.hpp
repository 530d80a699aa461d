#pragma once

#include "trackpoly/gates.hpp"
#include "trackpoly/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trackpoly {

/// Alternating sum of gate weights at a vertex: sum over gates i of (-1)^i
/// times the total weight of the real branches in gate i.
Rational alternating_sum(const TrainTrackMap& m, const GateStructure& g, int v, const std::vector<Rational>& w);

/// True iff w extends to a transverse measure: the alternating sum vanishes
/// at every vertex that is not odd.
bool membership_check(const TrainTrackMap& m, const GateStructure& g, const std::vector<Rational>& w);
bool membership_check(const TrainTrackMap& m, const GateStructure& g, const std::vector<Integer>& w);

/// Sign relating the weights of two consecutive letters of a walk that enters
/// a non-odd vertex through `in` and leaves through `out`: (-1)^(j-i+1) for
/// gate indices i and j.
int passage_sign(const GateStructure& g, Direction in, Direction out);

/// Product of passage signs around a closed walk. -1 means the loop admits no
/// orientation consistent with the train track.
int loop_parity(const GateStructure& g, const Word& loop);

enum class BasisCase { Orientable, OddVertices, NoOddNonorientable };
std::string to_string(BasisCase c);

struct BasisElement {
  int edge = -1;
  /// The walk L_e carrying the weights; a loop or an arc between odd vertices.
  Word support;
  std::vector<Integer> weights;
};

struct BasisOptions {
  /// 0 selects a deterministic breadth-first tree; other values shuffle the
  /// tree, root and growth order.
  std::uint64_t seed = 0;
  /// Closed walk to use as the non-orientable core loop when the track has no
  /// odd vertices.
  std::optional<Word> loop_hint;
};

struct WeightBasis {
  BasisCase kind = BasisCase::Orientable;
  std::vector<BasisElement> elements;  // in edge declaration order
  IntMatrix Q;                         // n x l, column j is elements[j].weights
  /// Edges of the spanning tree, the forest or the unicyclic subgraph.
  std::vector<int> subgraph;
  /// Core loop in the no-odd non-orientable case.
  Word core_loop;
  /// Root odd vertex in the odd-vertex case.
  int root = -1;

  std::size_t size() const { return elements.size(); }
  std::vector<int> basis_edges() const;
};

/// Basis of W(G,f) with one element per edge outside the chosen subgraph.
/// Every element is checked for membership.
WeightBasis w_basis(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict,
                    const BasisOptions& options = {});

/// Parses a loop hint such as "f" or "a ~b" against the edge names of m.
Word parse_loop(const TrainTrackMap& m, const std::string& text);

/// A = PTQ, the rows of TQ at the basis edges. Throws InputError unless QA = TQ.
IntMatrix homology_matrix(const IntMatrix& T, const WeightBasis& basis);

/// The matrix A with QA = TQ for an arbitrary integer basis Q of an invariant
/// subspace. Throws InputError on a dimension mismatch, dependent columns, a
/// non-invariant span or a non-integral solution.
IntMatrix restrict_to_span(const IntMatrix& T, const IntMatrix& Q);

/// chi(T) / homology, exact. Throws NonzeroRemainder otherwise.
IntPolynomial vertex_polynomial_quotient(const IntPolynomial& chi, const IntPolynomial& homology);

/// Characteristic polynomial of the lower diagonal block of U^-1 T U, where
/// U = [Q | R] and R holds the standard vectors of the edges outside `rows`.
/// `rows` are edges at which Q restricts to the identity. Throws
/// InvariantError if the lower left block is not zero.
IntPolynomial vertex_polynomial_block(const IntMatrix& T, const IntMatrix& Q, const std::vector<int>& rows);

/// Signed incidence matrix of non-odd vertices against edges. The gate signs
/// are the global orientation signs for an orientable track and (-1)^i
/// otherwise.
IntMatrix delta_map(const TrainTrackMap& m, const GateStructure& g, const OrientabilityVerdict& verdict);

/// Weights on the branches of the train track.
struct TauWeights {
  std::vector<Rational> real;                       // per edge
  std::vector<std::vector<Rational>> infinitesimal;  // per vertex, x_i on the edge (i, i+1)
};

/// Zero weights shaped for g.
TauWeights zero_tau(const GateStructure& g, std::size_t edges);

/// Infinitesimal weight sum at gate index i of vertex v.
Rational infinitesimal_sum(const GateStructure& g, const TauWeights& t, int v, int i);

/// True iff at every gate the real weight equals the infinitesimal weight.
bool switch_condition(const GateStructure& g, const TauWeights& t);

/// Lift of a member of W(G,f) to W(tau). At an odd vertex the infinitesimal
/// weights are the combination of terminal elements sum_i w_i omega_i; at
/// other vertices x_0 = w_0 and x_j = w_j - x_(j-1), with the closing edge of
/// an even polygon set to zero. Throws InvariantError if a switch fails.
TauWeights lift_to_tau(const TrainTrackMap& m, const GateStructure& g, const std::vector<Rational>& eta);

/// Transitional element sigma_i and terminal element omega_i at vertex v.
TauWeights transitional(const GateStructure& g, std::size_t edges, int v, int i);
TauWeights terminal(const GateStructure& g, std::size_t edges, int v, int i);

/// The skew-symmetric form on W(tau): half the sum over gates of the 2x2
/// determinants of all branch pairs on each side of the switch, the real
/// branches in counterclockwise order and the infinitesimal ones ordered
/// (x_g, x_(g-1)).
Rational tau_form(const GateStructure& g, const TauWeights& a, const TauWeights& b);

/// J[i][j] = <lift_i, lift_j>.
RatMatrix form_matrix(const GateStructure& g, const std::vector<TauWeights>& lifts);

struct RadicalSplit {
  std::vector<std::vector<Integer>> Z;  // kernel basis of J
  RatMatrix restriction;                // action of A on Z
  IntPolynomial puncture;
  IntPolynomial symplectic;
};

/// Radical of J and the splitting of the homology polynomial. Throws
/// InvariantError if A does not preserve the radical.
RadicalSplit radical_and_split(const RatMatrix& J, const IntMatrix& A, const IntPolynomial& homology);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReportOptions {
  Rational tol = Rational(1) / 1000000;
  BasisOptions basis;
};

struct InvariantReport {
  std::size_t n = 0, v = 0;
  bool orientable = false;
  std::optional<OrientationAction> action;
  std::optional<BasisCase> basis_case;
  std::vector<VertexType> types;
  std::optional<SurfaceStats> surface;

  IntMatrix T;
  IntPolynomial char_poly;
  std::optional<IntMatrix> A;
  std::optional<RatMatrix> J;
  std::optional<IntPolynomial> homology, vertex, puncture, symplectic;
  std::optional<Integer> det_A;
  std::size_t dim_W = 0, dim_Z = 0;
  RootEstimate dilatation;
  int digits = 6;

  bool palindromic_homology = false;
  bool palindromic_puncture = false;
  bool palindromic_symplectic = false;

  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool valid() const;
  const Check* find(const std::string& name) const;
};

/// Runs the whole pipeline and every consistency check. Input errors throw;
/// failed identities are recorded in `checks`.
InvariantReport full_report(const TrainTrackMap& m, const ReportOptions& options = {});

std::string to_text(const InvariantReport& r, const TrainTrackMap& m);
/// Structured document with the keys char_poly, homology_poly, vertex_poly,
/// puncture_poly, symplectic_poly, dilatation, orientable, dim_W, dim_Z, checks.
std::string to_json(const InvariantReport& r, const TrainTrackMap& m);

/// True iff the directed graph of T is strongly connected.
bool is_irreducible(const IntMatrix& T);

}  // namespace trackpoly
