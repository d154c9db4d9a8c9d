// Concrete finite crystals.
//
// Three element models cover every single-column crystal used here:
//   * minuscule:  elements are the weights of the Weyl orbit of a fundamental
//                 weight (each weight space is one dimensional);
//   * root model: elements x_beta for beta in a root set S (all roots, or the
//                 short roots), plus one null element y_a for each simple root
//                 alpha_a in S, plus optionally the trivial element;
//   * tensor:     pairs built with the combinatorial tensor rule, with the
//                 LEFT factor screened first (e moves left iff
//                 eps(left) > phi(right), f moves left iff eps(left) >=
//                 phi(right)).
//
// Affine (node 0) arrows are attached where the bijection needs them: by
// weight shifts through theta on minuscule columns, and by the
// x_{-theta} -> trivial -> x_theta chain plus beta -> beta + theta shifts on
// the root-model columns.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cartan.hpp"
#include "common.hpp"

namespace rcbij {

struct Elem {
  enum class Kind { Weight, Root, Null, Trivial, Pair };
  Kind kind = Kind::Trivial;
  IntVec v;                 // Weight: fundamental coords; Root: root coords
  int node = 0;             // Null: index a of y_a
  std::vector<Elem> parts;  // Pair: exactly {left, right}

  static Elem weight(IntVec wt);
  static Elem root(IntVec beta);
  static Elem null(int a);
  static Elem trivial();
  static Elem pair(Elem left, Elem right);

  // Flatten nested pairs into the display order (left factor first).
  std::vector<const Elem*> flatten() const;
};

std::string elem_key(const Elem& e);
bool operator==(const Elem& x, const Elem& y);

class Crystal {
 public:
  std::string type;  // cartan type name
  int n = 0;         // classical rank
  bool affine = false;
  std::vector<Elem> elems;
  std::vector<std::vector<int>> e_op, f_op;  // [a][idx], a = 0..n; -1 = none
  std::vector<IntVec> wts;                   // classical weights

  int size() const { return int(elems.size()); }
  int e(int a, int idx) const { return e_op[a][idx]; }
  int f(int a, int idx) const { return f_op[a][idx]; }
  i64 eps(int a, int idx) const { return eps_tab[a][idx]; }
  i64 phi(int a, int idx) const { return phi_tab[a][idx]; }
  const IntVec& weight(int idx) const { return wts[idx]; }
  const Elem& elem(int idx) const { return elems[idx]; }

  // Index lookup by element payload; -1 if absent.
  int find(const Elem& e) const;
  int index_of(const Elem& e) const;  // like find but throws

  // Elements with eps_a = 0 for all classical a.
  std::vector<int> highest_weight_elements() const;
  // Walk e-arrows (classical) to the component's highest weight element.
  int to_highest_weight(int idx, std::vector<int>* path_colors = nullptr) const;

  // Fill eps/phi tables, build the index, and run structural checks.
  void finalize();

 private:
  std::vector<std::vector<i64>> eps_tab, phi_tab;
  std::map<std::string, int> index_;
};

// B(varpi_r) for minuscule varpi_r, as a weight-set crystal.
// with_affine attaches the theta weight-shift 0-arrows.
Crystal minuscule_crystal(const std::string& type, int r, bool with_affine);

// Root-model crystal: B(theta) (little = false) or B(theta_s) (little =
// true), optionally plus the trivial element, optionally with 0-arrows.
Crystal root_model_crystal(const std::string& type, bool little, bool with_trivial,
                           bool with_affine);

// Tensor product with the left-first convention described above.
Crystal tensor(const Crystal& left, const Crystal& right);

// The classical connected component containing idx, as a standalone crystal
// (affine arrows are dropped).  Elements keep their payloads.
Crystal component_of(const Crystal& big, int idx);

// Restriction of `big` to the given element set (must be closed under the
// classical and, if present, affine arrows within the set).
Crystal subcrystal(const Crystal& big, const std::vector<int>& keep);

// Virtual embedding of `base` into `ambient` along a folding: the image of
// each base element under the aligned-operator map determined by
// img(seed_base) = seed_ambient.  Returns img, one ambient index per base
// element.  Checks eps/phi scaling on every element.
std::vector<int> virtual_embedding(const Crystal& base, const Crystal& ambient,
                                   const Folding& fold, int seed_base, int seed_ambient);

}  // namespace rcbij
