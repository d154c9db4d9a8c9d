// Affine type registry: Dynkin data, marks/comarks, scaling factors, root
// systems, and the embeddings used for virtualization.
//
// Type names use the ASCII form "X<k>~<t>", e.g. "A3~1", "D5~2", "E6~2",
// "D4~3".  Classical node labels are 1..n; the affine node is 0.
//
// Conventions: the Cartan matrix is A[a][b] = <alpha_a^vee, alpha_b>; marks c
// satisfy A c = 0 and comarks c^vee satisfy (c^vee)^T A = 0, both normalized
// with c_0 = c_0^vee = 1 .. gcd 1 and positive.  The normalized invariant form
// is (alpha_a | alpha_b) = (c_a^vee / c_a) A[a][b].

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace rcbij {

struct TypeName {
  char family = 0;  // 'A'..'G'
  int index = 0;    // subscript in the affine name, e.g. 5 in A5~2
  int twist = 1;    // superscript (1, 2, or 3)

  std::string str() const;
  bool operator==(const TypeName& o) const {
    return family == o.family && index == o.index && twist == o.twist;
  }
};

TypeName parse_type_name(const std::string& s);

// One virtualization embedding X -> X^ ("ambient").  Base classical nodes are
// 1..n; preimage[a] lists the ambient classical nodes sitting over node a.
// gamma[a] (a = 0..n) are the scaling factors: row lengths at node a scale by
// gamma[a], riggings and vacancies by gamma[a], and B^{r,s} maps to
// (x)_{b in preimage[r]} B^{b, gamma[r] s}.
struct Folding {
  std::string ambient;
  std::vector<std::vector<int>> preimage;  // index 0 unused; size n+1
  IntVec gamma;                            // size n+1, gamma[0] included
};

class Cartan {
 public:
  explicit Cartan(const std::string& type_name);

  const TypeName& type() const { return type_; }
  const std::string& name() const { return name_; }
  int rank() const { return n_; }  // classical rank

  bool untwisted() const { return type_.twist == 1; }
  // Every in-scope twisted type is the (Langlands-style) dual of an untwisted
  // affine algebra; the single-column algorithms branch on this.
  bool dual_untwisted() const { return type_.twist > 1; }
  bool simply_laced() const;  // untwisted with simply-laced classical diagram

  // Affine Cartan matrix entry, indices 0..n.
  i64 a(int i, int j) const { return affine_[i][j]; }
  const IntMat& affine_matrix() const { return affine_; }
  // Classical Cartan matrix (n x n; [a-1][b-1] holds A[a][b]).
  const IntMat& classical_matrix() const { return classical_; }
  // Inverse of the classical Cartan matrix (rational).
  const RatMat& inv_cartan() const { return inv_classical_; }

  const IntVec& marks() const { return c_; }      // c_a, a = 0..n
  const IntVec& comarks() const { return cv_; }   // c_a^vee
  i64 t(int a) const { return t_[a]; }            // max(c_a/c_a^vee, c_0^vee)
  i64 tvee(int a) const { return tv_[a]; }        // max(c_a^vee/c_a, c_0)
  i64 gamma(int a) const { return gamma_[a]; }    // (max_b t_b) / t_a, or 1 if twisted
  // Row-length convention factor for the alternative (non-normative) vacancy
  // and cocharge pairing; 1 except at selected nodes of B/C/F/G untwisted.
  Rat upsilon(int a) const;

  // Invariant form (alpha_a | alpha_b) on classical nodes (1-based).
  Rat alpha_pair(int a, int b) const { return pair_[a - 1][b - 1]; }
  // Squared length |alpha_a|^2 = (alpha_a | alpha_a).
  Rat alpha_norm2(int a) const { return pair_[a - 1][a - 1]; }
  bool node_is_short(int a) const;

  // --- weights -------------------------------------------------------------
  // Weight vectors are integer vectors of length n in fundamental-weight
  // coordinates: wt[a-1] = <h_a, lambda>.  Root vectors are integer vectors of
  // length n in simple-root coordinates: root[a-1] = coefficient of alpha_a.

  IntVec fundamental_weight(int a) const;          // e_a in weight coords
  IntVec alpha_in_weights(int a) const;            // alpha_a in weight coords
  IntVec root_to_weight(const IntVec& root) const; // multiply by A^T.. see impl
  RatVec weight_to_root(const IntVec& wt) const;   // solve A^T x = wt
  Rat pair_weight_root(const IntVec& wt, const IntVec& root) const;  // (wt|root)
  Rat pair_root_root(const IntVec& r1, const IntVec& r2) const;

  // --- roots ---------------------------------------------------------------
  const std::vector<IntVec>& positive_roots() const { return pos_roots_; }
  // All roots (positives then negatives, same order negated).
  const std::vector<IntVec>& roots() const { return all_roots_; }
  const std::vector<IntVec>& short_positive_roots() const { return short_pos_roots_; }
  bool is_root(const IntVec& root) const;
  bool root_is_short(const IntVec& root) const;

  // theta = sum_{a>=1} c_a alpha_a: the highest root (untwisted) or the
  // highest short root (dual untwisted), in root coordinates.
  const IntVec& theta() const { return theta_; }
  // Height of theta.
  i64 theta_height() const;
  // Classical nodes adjacent to the affine node.
  const std::vector<int>& adjoint_nodes() const { return adjoint_nodes_; }

  // --- foldings ------------------------------------------------------------
  // Embedding into an untwisted simply-laced ambient (used by virtual Kleber
  // and the weight-level virtualization identities).  Empty for types that are
  // already untwisted simply-laced.
  std::optional<Folding> simply_laced_folding() const;
  // Embedding into the dual twisted ambient (used to define the box-removing
  // map for B_n/C_n/F_4/G_2).  Only untwisted non-simply-laced types have one.
  std::optional<Folding> dual_folding() const;

 private:
  void build_diagram();
  void solve_marks();
  void build_roots();
  void build_foldings();

  TypeName type_;
  std::string name_;
  int n_ = 0;
  IntMat affine_;     // (n+1) x (n+1)
  IntMat classical_;  // n x n
  RatMat inv_classical_;
  IntVec c_, cv_, t_, tv_, gamma_;
  RatMat pair_;  // n x n invariant form on simple roots
  std::vector<IntVec> pos_roots_, all_roots_, short_pos_roots_;
  std::map<IntVec, int> root_index_;  // root -> index into all_roots_
  IntVec theta_;
  std::vector<int> adjoint_nodes_;
  std::optional<Folding> sl_folding_, dual_folding_;
};

// Shared cache keyed by type name (Cartan construction is deterministic).
const Cartan& cartan(const std::string& type_name);

}  // namespace rcbij
