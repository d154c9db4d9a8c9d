// Kleber algorithm: enumeration of the highest weight rigged configurations of
// a tensor product of KR crystals.
//
// For simply-laced classical subdiagrams the tree is grown directly: starting
// from weight 0, step ell first adds sum_a fw_a sum_{i>=ell} L_i^{(a)} to every
// node, then attaches children y to each depth-(ell-1) node x whenever
// d_{xy} = x - y is a nonzero sum of positive simple roots, y is dominant, and
// (for non-root x with parent w) d_{wx} - d_{xy} has no negative coefficient.
// A node at depth p with path edge labels d_1, ..., d_p (in simple-root
// coordinates k_i) yields the configuration with m_i^{(a)} = k_i^{(a)} -
// k_{i+1}^{(a)}; its riggings range over 0..p_i^{(a)} independently per row.
//
// Other types run the virtual variant: the tree is grown in the simply-laced
// ambient type over the virtualized tensor product, children additionally
// satisfy the orbit-symmetry condition (V1) and the gamma-divisibility
// condition (V2), nodes are selected by depth (A1) or edge support (A2), and
// selected configurations are devirtualized.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cartan.hpp"
#include "common.hpp"
#include "rc.hpp"

namespace rcbij {

struct KleberNode {
  IntVec weight;   // classical weight, fundamental-weight coordinates
  IntVec edge;     // d_{parent,node} in simple-root coordinates; empty for root
  int parent = -1;  // index into KleberTree::nodes; -1 for the root
  int depth = 0;
};

struct KleberTree {
  std::string type;  // affine type the tree lives in
  Spec spec;         // tensor product it enumerates
  std::vector<KleberNode> nodes;  // nodes[0] is the root; parents precede children
};

// Direct Kleber tree.  Requires an untwisted simply-laced type; other types
// fail with Err::InvalidArgument directing the caller to the virtual variant.
KleberTree kleber_tree(const std::string& type, const Spec& spec,
                       i64 budget = kDefaultBudget);

// Ambient tree of the virtual Kleber algorithm together with the (A1)/(A2)
// node selection.  Requires a type with a registered simply-laced folding.
struct VirtualKleberTree {
  Folding fold;        // base -> ambient embedding used
  KleberTree ambient;  // tree of the virtualized tensor product
  std::vector<char> selected;  // per node: subject to devirtualization?
};
VirtualKleberTree virtual_kleber_tree(const std::string& type, const Spec& spec,
                                      i64 budget = kDefaultBudget);

// Configuration of a tree node: partitions from the path's edge labels, all
// riggings zero.
RC tree_node_configuration(const KleberTree& tree, int node);

// All configurations of highest weight rigged configurations (riggings
// zeroed), in tree order; dispatches to the virtual algorithm as needed.
std::vector<RC> kleber_configurations(const std::string& type, const Spec& spec,
                                      i64 budget = kDefaultBudget);

// Number of highest weight rigged configurations sharing a configuration:
// prod_{(a,i)} binom(p_i^{(a)} + m_i^{(a)}, m_i^{(a)}).
i64 rigging_count(const RC& config);

// Visit every highest weight rigging of a configuration (rows of equal length
// weakly decreasing); stops early when fn returns false.
void for_each_rigging(const RC& config, const std::function<bool(const RC&)>& fn);

// Materialized highest weight rigged configurations, optionally restricted to
// a classical weight lambda (fundamental-weight coordinates).  The budget
// bounds both tree size and output count.
std::vector<RC> highest_weight_rcs(const std::string& type, const Spec& spec,
                                   i64 budget = kDefaultBudget);
std::vector<RC> highest_weight_rcs_of_weight(const std::string& type,
                                             const Spec& spec,
                                             const IntVec& lambda,
                                             i64 budget = kDefaultBudget);

}  // namespace rcbij
