// The box-removing bijection Phi between rigged configurations and tensor
// products of Kirillov--Reshetikhin crystals, built from four local moves:
//
//   * delta_minuscule: removes a leading B^{r,1} factor for a minuscule node
//     r by walking B(varpi_r) from the highest weight element, at each step
//     selecting a shortest as-yet-unselected singular row of length >= the
//     previous selection among the nodes with an outgoing arrow.  Selected
//     rows lose one box and are re-singularized; all other riggings are kept.
//
//   * delta_adjoint: removes a leading B^{theta,1} factor (leading
//     B^{n,1} (x) B^{1,1} pair in type A) by a two-phase walk on the (little)
//     adjoint crystal B(theta) |_| {emptyset}.  Phase one descends from
//     x_theta through the positive roots; at x_{alpha_a} one of the cases
//     (S)/(E)/(Q)/(T) applies, where (Q) selects a quasisingular row (rigging
//     = vacancy - 1).  Phase two descends from y_a through the negative
//     roots; a row selected in phase one may be selected a second time
//     (case (D)), losing two boxes.
//
//   * lb_rc (left box): splits a leading B^{r,1} into B^{sigma,1} (x)
//     B^{r',1} along a registered lb-diagram edge r -> r', adding one
//     singular row of length 1 to nu^{(a)} for every color a on the path in
//     B(varpi_sigma) from the edge label to the highest weight element.
//
//   * ls_rc (left split): splits a leading B^{r,s} (s >= 2) into
//     B^{r,1} (x) B^{r,s-1}; the partitions and riggings are unchanged.
//
// Factors at the non-simply-laced untwisted special nodes (B_n: r = n, C_n:
// r = 1, F_4: r = 4, G_2: r = 1, 2) are removed through the virtualization
// embedding into the dual twisted ambient type, applying the ambient moves to
// the virtual image and decoding the returned letters through the embedding.
//
// Each removed factor contributes one column of its Kirillov--Reshetikhin
// tableau; cell entries are elements of the letter crystal of the factor's
// alphabet node, listed top to bottom in reverse return order.  phi iterates
// the moves until the configuration is exhausted; phi_inv rebuilds the rigged
// configuration by the mirrored inverse moves (each inverse re-runs the
// forward move internally and verifies the round trip).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crystal.hpp"
#include "rc.hpp"

namespace rcbij {

// --------------------------------------------------------------------------
// Letter alphabets

// The classical crystal whose elements label tableau cells for factors with
// alphabet node `node`.  node = 0 names the adjoint walk alphabet
// B(theta) |_| {emptyset} (the only alphabet of type A_n's two-factor
// delta_adjoint).  Cached; throws Err::Unsupported for nodes that are not an
// alphabet node of the type.
const Crystal& letter_crystal(const std::string& type, int node);

// An element of letter_crystal(type, node).
struct Letter {
  int node = 0;
  int idx = -1;
  friend bool operator==(const Letter&, const Letter&) = default;
};

// --------------------------------------------------------------------------
// lb-diagrams and routing

struct LbEdge {
  int from = 0;
  int to = 0;
  int label = -1;               // index into letter_crystal(type, sink)
  std::vector<int> raise_path;  // colors of one e-path from label to the
                                // highest weight element
};

struct LbDiagram {
  int sink = 0;                 // 0 when the type has no lb-diagram (G_2)
  bool sink_adjoint = false;    // delta at the sink is the adjoint walk
  std::vector<LbEdge> edges;
  std::vector<int> direct_minuscule;  // spin nodes removed by a direct
                                      // minuscule delta (no edge, not sink)

  const LbEdge* edge_from(int r) const;
  // Number of tableau cells contributed by one B^{r,1} factor.
  int column_height(int r) const;
};

const LbDiagram& lb_diagram(const std::string& type);

// How phi removes a leading B^{r,1} factor.
enum class Route {
  LbEdge,           // split along the lb-diagram edge from r
  SinkMinuscule,    // direct minuscule walk at the diagram sink
  SinkAdjoint,      // adjoint walk at the diagram sink
  DirectMinuscule,  // direct minuscule walk at a spin node
  Ambient,          // virtualization into the dual twisted ambient type
};
Route node_route(const std::string& type, int r);

// Alphabet node of the cells produced by a B^{r,1} factor: 0 when the factor
// resolves to the adjoint walk, else the diagram sink for lb-routed nodes and
// r itself otherwise.
int alphabet_node(const std::string& type, int r);

// --------------------------------------------------------------------------
// Box-removing maps

struct DeltaStep {
  int phase = 1;   // 1 or 2 (minuscule walks only use phase 1)
  int node = 0;    // color of the selected row
  i64 length = 0;  // its length at selection time
  char tag = 'G';  // 'G' generic, 'S'/'E'/'Q' at x_{alpha_a}, 'D'/'N' phase 2
};

struct DeltaResult {
  RC rc;                        // the rigged configuration after removal
  Letter ret;                   // returned letter
  std::vector<DeltaStep> steps;
  bool qflag = false;           // case (Q) occurred
};

// Minuscule walk removing a leading (r, 1) factor; r must be a minuscule
// node of the (dual untwisted) type.
DeltaResult delta_minuscule(const RC& rc, int r);
// Inverse: prepend the factor B^{r,1} whose removal returns `b`.
RC delta_minuscule_inv(const RC& rc, int r, const Letter& b);

// Adjoint walk removing a leading (N_g, 1) factor (dual untwisted types and
// E_8), or the leading (n,1),(1,1) pair in type A_n.
DeltaResult delta_adjoint(const RC& rc);
RC delta_adjoint_inv(const RC& rc, const Letter& b);

// Ambient removal of a leading (r, 1) factor at an untwisted special node
// (B_n: n, C_n: 1, F_4: 4, G_2: 1 and 2).
DeltaResult delta_ambient(const RC& rc);
RC delta_ambient_inv(const RC& rc, int r, const Letter& b);

// Dispatch on node_route (ls-splitting is not included: the leading factor
// must be (r, 1)).
DeltaResult delta(const RC& rc);
RC delta_inv(const RC& rc, int r, const Letter& b);

// --------------------------------------------------------------------------
// Splitting maps

// Left box along the registered edge r -> r'.
RC lb_rc(const RC& rc);
// Inverse: merge a leading (sigma,1),(r',1) pair back into (r,1); `r` selects
// the edge (several edges may share a target).
RC lb_inverse(const RC& rc, int r);

// Left split of a leading (r, s) factor, s >= 2.
RC ls_rc(const RC& rc);
// Inverse: merge a leading (r,1),(r,s) pair into (r,s+1).
RC ls_inverse(const RC& rc);

// --------------------------------------------------------------------------
// Full bijection

struct KRTableau {
  Factor factor;
  int alphabet = 0;  // alphabet node of the cells
  // cells[c][k]: cell k (top to bottom) of column c (left to right), as an
  // index into letter_crystal(type, alphabet).
  std::vector<std::vector<int>> cells;
  friend bool operator==(const KRTableau&, const KRTableau&) = default;
};

struct PhiStep {
  enum class Op { Ls, Lb, Delta } op = Op::Delta;
  RC before;                          // rc the move was applied to
  std::optional<DeltaResult> delta;   // for Op::Delta
};

// Phi: one tableau per tensor factor, leftmost first.  The input must be a
// valid rigged configuration (riggings within [0, vacancy]).
std::vector<KRTableau> phi(const RC& rc, std::vector<PhiStep>* trace = nullptr);

// Phi^{-1}: rebuild the rigged configuration from the tableaux.
RC phi_inv(const std::string& type, const std::vector<KRTableau>& tabs);

// Tensor-product order of the cells of phi's output (leftmost factor first,
// each column bottom to top): the image of the rc as an element of the
// tensor product of letter crystals.
std::vector<Letter> tableau_word(const std::vector<KRTableau>& tabs);

// --------------------------------------------------------------------------
// Star-conjugated maps

// Complement riggings (x -> vacancy - x) and reverse the tensor factors.
// Requires all riggings within [0, vacancy].
RC theta_rc(const RC& rc);

// Lusztig involution on each classical component of a letter crystal:
// star(u_lambda) = lowest weight element, star(f_a x) = e_{xi(a)} star(x)
// with xi induced by -w_0.  Returns the image index.
int lusztig_star(const Crystal& c, int idx);

// delta acting on the rightmost factor: theta conjugation of delta, with
// starred return letter.
DeltaResult delta_star(const RC& rc);
// Right box: theta conjugation of lb_rc (rightmost (r,1) factor splits into
// (r',1),(sigma,1) appended at the right end).
RC rb_rc(const RC& rc);

// --------------------------------------------------------------------------
// Fillings (type E6~1, r in {2, 3, 5})

// The Kirillov--Reshetikhin tableau of the classically highest weight
// element of the component B(lambda_k) inside B^{r,s}, where lambda_k is the
// k-th member of the decomposition chain of B^{r,s} (k = 0 gives s varpi_r).
KRTableau filling_map(const std::string& type, int r, i64 s, i64 k);

}  // namespace rcbij
