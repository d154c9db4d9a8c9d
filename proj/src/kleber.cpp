#include "kleber.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>

namespace rcbij {

namespace {

// Floor of a nonnegative rational.
i64 rat_floor(const Rat& r) {
  require(r >= Rat(0), Err::Internal, "kleber: negative dominance bound");
  return r.numerator() / r.denominator();
}

// L[a][s] = number of factors B^{a,s}; L[a].size() == max_s + 1.
std::vector<std::vector<i64>> factor_table(const Cartan& C, const Spec& spec) {
  std::vector<std::vector<i64>> L(C.rank() + 1);
  i64 max_s = 0;
  for (const Factor& f : spec) {
    require(f.r >= 1 && f.r <= C.rank(), Err::InvalidArgument, "kleber: bad factor node");
    require(f.s >= 1, Err::InvalidArgument, "kleber: bad factor width");
    max_s = std::max(max_s, f.s);
  }
  for (int a = 0; a <= C.rank(); ++a) L[a].assign(max_s + 1, 0);
  for (const Factor& f : spec) ++L[f.r][f.s];
  return L;
}

struct TreeBuilder {
  const Cartan& C;  // Cartan data of the tree's own (possibly ambient) type
  i64 budget;
  // Virtual runs only: base Cartan and the folding into C's type.
  const Cartan* vbase = nullptr;
  const Folding* fold = nullptr;

  int n = 0;
  std::vector<std::vector<i64>> L;  // from factor_table
  i64 max_s = 0;
  // final_rows[b] = classical nodes a whose weight coordinate is unchanged by
  // any column after b (used to prune non-dominant partial candidates).
  std::vector<std::vector<int>> final_rows;
  KleberTree tree;

  TreeBuilder(const Cartan& cartan_data, const std::string& tree_type,
              const Spec& tree_spec, i64 budget_limit)
      : C(cartan_data), budget(budget_limit), n(C.rank()) {
    L = factor_table(C, tree_spec);
    max_s = static_cast<i64>(L[1].size()) - 1;
    tree.type = tree_type;
    tree.spec = tree_spec;
    final_rows.assign(n + 1, {});
    for (int a = 1; a <= n; ++a) {
      int last = a;
      for (int b = 1; b <= n; ++b)
        if (C.a(a, b) != 0) last = std::max(last, b);
      final_rows[last].push_back(a);
    }
  }

  void run() {
    tree.nodes.push_back(KleberNode{IntVec(n, 0), {}, -1, 0});
    std::vector<int> frontier{0};
    for (i64 ell = 1;; ++ell) {
      bool shifted = false;
      IntVec shift(n, 0);
      for (int a = 1; a <= n; ++a) {
        i64 s = 0;
        for (i64 i = ell; i <= max_s; ++i) s += L[a][i];
        shift[a - 1] = s;
        if (s != 0) shifted = true;
      }
      if (shifted)
        for (KleberNode& node : tree.nodes)
          for (int a = 0; a < n; ++a) node.weight[a] += shift[a];
      std::vector<int> next;
      for (int x : frontier) attach_children(x, ell, next);
      require(static_cast<i64>(tree.nodes.size()) <= budget, Err::Budget,
              "kleber: tree size exceeds budget");
      if (!shifted && next.empty()) break;
      frontier = std::move(next);
    }
  }

  // (V1)/(V2) of the virtual algorithm; k is 1-based, y is 0-based, cap is the
  // parent edge of the node being extended (empty only for the root).
  bool virtual_ok(const IntVec& k, const IntVec& y, const IntVec& cap,
                  i64 ell) const {
    if (fold == nullptr) return true;
    for (int a = 1; a <= vbase->rank(); ++a) {
      const std::vector<int>& pre = fold->preimage[a];
      for (size_t t = 1; t < pre.size(); ++t)
        if (y[pre[t] - 1] != y[pre[0] - 1]) return false;
      if ((ell - 1) % fold->gamma[a] != 0)
        for (int b : pre)
          if (k[b] != cap[b - 1]) return false;
    }
    return true;
  }

  void attach_children(int xi, i64 ell, std::vector<int>& next) {
    const IntVec wx = tree.nodes[xi].weight;
    const IntVec cap = tree.nodes[xi].edge;
    const RatMat& inv = C.inv_cartan();
    // d must stay within the simple-root coordinates of wx (dominance of y)
    // and, off the root, within the parent edge label.
    IntVec bound(n + 1, 0);
    for (int b = 1; b <= n; ++b) {
      Rat coord(0);
      for (int c = 1; c <= n; ++c) coord += inv[b - 1][c - 1] * Rat(wx[c - 1]);
      bound[b] = rat_floor(coord);
      if (!cap.empty()) bound[b] = std::min(bound[b], cap[b - 1]);
    }
    IntVec k(n + 1, 0);
    IntVec y(wx);
    std::function<void(int, bool)> rec = [&](int b, bool nonzero) {
      if (b > n) {
        if (!nonzero || !virtual_ok(k, y, cap, ell)) return;
        require(static_cast<i64>(tree.nodes.size()) < budget, Err::Budget,
                "kleber: tree size exceeds budget");
        next.push_back(static_cast<int>(tree.nodes.size()));
        tree.nodes.push_back(KleberNode{
            y, IntVec(k.begin() + 1, k.end()), xi,
            tree.nodes[xi].depth + 1});
        return;
      }
      for (i64 kb = 0;; ++kb) {
        k[b] = kb;
        bool dominant = true;
        for (int a : final_rows[b])
          if (y[a - 1] < 0) {
            dominant = false;
            break;
          }
        if (dominant) rec(b + 1, nonzero || kb > 0);
        if (kb == bound[b]) break;
        for (int a = 1; a <= n; ++a) y[a - 1] -= C.a(a, b);
      }
      for (int a = 1; a <= n; ++a) y[a - 1] += bound[b] * C.a(a, b);
      k[b] = 0;
    };
    rec(1, false);
  }
};

// String groups of a configuration in canonical order; rows are assumed to sit
// in canonical (len desc) order with contiguous equal-length blocks.
struct StringGroup {
  int a = 0;
  i64 len = 0;
  i64 mult = 0;
  i64 p = 0;
  size_t first = 0;
};

std::vector<StringGroup> string_groups(const RC& config) {
  std::vector<StringGroup> groups;
  for (int a = 1; a <= config.rank(); ++a) {
    const auto& rows = config.nu[a - 1];
    for (size_t i = 0; i < rows.size();) {
      size_t j = i;
      while (j < rows.size() && rows[j].len == rows[i].len) ++j;
      groups.push_back(StringGroup{a, rows[i].len, static_cast<i64>(j - i),
                                   vacancy(config, a, rows[i].len), i});
      i = j;
    }
  }
  return groups;
}

i64 binom_checked(i64 nn, i64 kk) {
  require(nn >= 0 && kk >= 0 && kk <= nn, Err::Internal, "kleber: bad binomial");
  kk = std::min(kk, nn - kk);
  __int128 r = 1;
  for (i64 t = 1; t <= kk; ++t) {
    r = r * (nn - kk + t) / t;
    require(r <= std::numeric_limits<i64>::max(), Err::Budget,
            "kleber: rigging count overflows");
  }
  return static_cast<i64>(r);
}

}  // namespace

KleberTree kleber_tree(const std::string& type, const Spec& spec, i64 budget) {
  const Cartan& C = cartan(type);
  require(C.simply_laced(), Err::InvalidArgument,
          "kleber_tree: classical subdiagram is not simply laced; use the "
          "virtual Kleber algorithm");
  TreeBuilder builder(C, type, spec, budget);
  builder.run();
  return std::move(builder.tree);
}

VirtualKleberTree virtual_kleber_tree(const std::string& type, const Spec& spec,
                                      i64 budget) {
  const Cartan& C = cartan(type);
  std::optional<Folding> fold = C.simply_laced_folding();
  require(fold.has_value(), Err::InvalidArgument,
          "virtual_kleber_tree: type is simply laced; use kleber_tree");
  const Cartan& ambient = cartan(fold->ambient);
  VirtualKleberTree out;
  out.fold = *fold;
  TreeBuilder builder(ambient, fold->ambient, virtualize_spec(type, spec, *fold),
                      budget);
  builder.vbase = &C;
  builder.fold = &out.fold;
  builder.run();
  out.ambient = std::move(builder.tree);

  i64 gamma_max = 1;
  for (int a = 0; a <= C.rank(); ++a) gamma_max = std::max(gamma_max, out.fold.gamma[a]);
  out.selected.assign(out.ambient.nodes.size(), 0);
  for (size_t i = 0; i < out.ambient.nodes.size(); ++i) {
    const KleberNode& node = out.ambient.nodes[i];
    if (node.depth % gamma_max == 0) {  // (A1)
      out.selected[i] = 1;
      continue;
    }
    if (node.parent < 0) continue;
    bool a2 = true;  // (A2): last edge avoids the maximally scaled orbits
    for (int a = 1; a <= C.rank() && a2; ++a) {
      if (out.fold.gamma[a] != gamma_max) continue;
      for (int b : out.fold.preimage[a])
        if (node.edge[b - 1] != 0) {
          a2 = false;
          break;
        }
    }
    out.selected[i] = a2 ? 1 : 0;
  }
  return out;
}

RC tree_node_configuration(const KleberTree& tree, int node) {
  require(node >= 0 && node < static_cast<int>(tree.nodes.size()),
          Err::InvalidArgument, "tree_node_configuration: bad node index");
  std::vector<const IntVec*> path;  // edge labels, walked node -> root
  for (int cur = node; tree.nodes[cur].parent >= 0; cur = tree.nodes[cur].parent)
    path.push_back(&tree.nodes[cur].edge);
  std::reverse(path.begin(), path.end());
  const i64 p = static_cast<i64>(path.size());
  RC rc(tree.type, tree.spec);
  for (int a = 1; a <= rc.rank(); ++a)
    for (i64 i = 1; i <= p; ++i) {
      i64 m = (*path[i - 1])[a - 1] - (i < p ? (*path[i])[a - 1] : 0);
      require(m >= 0, Err::Internal,
              "tree_node_configuration: edge labels not weakly decreasing");
      for (i64 c = 0; c < m; ++c) rc.nu[a - 1].push_back(RCRow{i, 0});
    }
  rc.canonicalize();
  return rc;
}

std::vector<RC> kleber_configurations(const std::string& type, const Spec& spec,
                                      i64 budget) {
  const Cartan& C = cartan(type);
  std::vector<RC> out;
  if (C.simply_laced()) {
    KleberTree tree = kleber_tree(type, spec, budget);
    out.reserve(tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i)
      out.push_back(tree_node_configuration(tree, static_cast<int>(i)));
  } else {
    VirtualKleberTree vt = virtual_kleber_tree(type, spec, budget);
    for (size_t i = 0; i < vt.ambient.nodes.size(); ++i) {
      if (!vt.selected[i]) continue;
      RC amb = tree_node_configuration(vt.ambient, static_cast<int>(i));
      try {
        out.push_back(devirtualize_rc(amb, type, spec, vt.fold));
      } catch (const Error& e) {
        fail(Err::Internal,
             std::string("virtual Kleber: selected node not devirtualizable: ") +
                 e.what());
      }
    }
  }
  for (const RC& rc : out)
    require(rc_valid(rc, true), Err::Internal,
            "kleber: emitted configuration is not highest weight");
  return out;
}

i64 rigging_count(const RC& config) {
  RC c = config;
  c.canonicalize();
  i64 count = 1;
  for (const StringGroup& g : string_groups(c)) {
    require(g.p >= 0, Err::Internal, "rigging_count: negative vacancy");
    i64 ways = binom_checked(g.p + g.mult, g.mult);
    require(count <= std::numeric_limits<i64>::max() / ways, Err::Budget,
            "rigging_count: overflow");
    count *= ways;
  }
  return count;
}

void for_each_rigging(const RC& config, const std::function<bool(const RC&)>& fn) {
  RC rc = config;
  rc.canonicalize();
  for (auto& rows : rc.nu)
    for (RCRow& row : rows) row.rig = 0;
  const std::vector<StringGroup> groups = string_groups(rc);
  bool stop = false;
  std::function<void(size_t)> visit_group = [&](size_t gi) {
    if (stop) return;
    if (gi == groups.size()) {
      if (!fn(rc)) stop = true;
      return;
    }
    const StringGroup& g = groups[gi];
    // Weakly decreasing riggings within the group keep rows canonical.
    std::function<void(i64, i64)> fill = [&](i64 off, i64 cap) {
      if (stop) return;
      if (off == g.mult) {
        visit_group(gi + 1);
        return;
      }
      for (i64 v = 0; v <= cap && !stop; ++v) {
        rc.nu[g.a - 1][g.first + off].rig = v;
        fill(off + 1, v);
      }
    };
    fill(0, g.p);
  };
  visit_group(0);
}

std::vector<RC> highest_weight_rcs(const std::string& type, const Spec& spec,
                                   i64 budget) {
  return highest_weight_rcs_of_weight(type, spec, {}, budget);
}

std::vector<RC> highest_weight_rcs_of_weight(const std::string& type,
                                             const Spec& spec,
                                             const IntVec& lambda, i64 budget) {
  std::vector<RC> configs = kleber_configurations(type, spec, budget);
  if (!lambda.empty()) {
    require(static_cast<int>(lambda.size()) == cartan(type).rank(),
            Err::InvalidArgument, "highest_weight_rcs: bad weight length");
    std::erase_if(configs, [&](const RC& rc) { return rc_weight(rc) != lambda; });
  }
  i64 total = 0;
  for (const RC& c : configs) {
    total += rigging_count(c);
    require(total <= budget, Err::Budget,
            "highest_weight_rcs: output exceeds budget");
  }
  std::vector<RC> out;
  out.reserve(total);
  for (const RC& c : configs)
    for_each_rigging(c, [&](const RC& rigged) {
      out.push_back(rigged);
      return true;
    });
  return out;
}

}  // namespace rcbij
