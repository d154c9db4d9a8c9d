#include "bijection.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "kleber.hpp"

namespace rcbij {

namespace {

std::string key2(const std::string& type, int node) {
  return type + "#" + std::to_string(node);
}

bool is_type(const Cartan& ct, char fam, int twist) {
  return ct.type().family == fam && ct.type().twist == twist;
}

// Nodes carrying a direct minuscule walk.
bool is_minuscule_node(const std::string& type, int r) {
  const Cartan& ct = cartan(type);
  int n = ct.rank();
  if (r < 1 || r > n) return false;
  if (is_type(ct, 'A', 1)) return true;
  if (is_type(ct, 'D', 1)) return r == 1 || r == n - 1 || r == n;
  if (is_type(ct, 'E', 1)) {
    if (ct.type().index == 6) return r == 1 || r == 6;
    if (ct.type().index == 7) return r == 7;
    return false;
  }
  if (is_type(ct, 'A', 2)) return r == 1;
  if (is_type(ct, 'D', 2)) return r == n;
  return false;
}

bool root_is_positive(const IntVec& beta) {
  bool any = false;
  for (i64 c : beta) {
    if (c < 0) return false;
    if (c > 0) any = true;
  }
  return any;
}

// Index a of alpha_a when beta is simple, else 0.
int simple_root_node(const IntVec& beta) {
  int node = 0;
  for (size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] == 0) continue;
    if (beta[i] != 1 || node != 0) return 0;
    node = int(i) + 1;
  }
  return node;
}

std::vector<int> out_colors(const Crystal& c, int idx) {
  std::vector<int> cols;
  for (int a = 1; a <= c.n; ++a)
    if (c.f(a, idx) >= 0) cols.push_back(a);
  return cols;
}
std::vector<int> in_colors(const Crystal& c, int idx) {
  std::vector<int> cols;
  for (int a = 1; a <= c.n; ++a)
    if (c.e(a, idx) >= 0) cols.push_back(a);
  return cols;
}

Spec drop_front(const Spec& spec, int k) {
  return Spec(spec.begin() + k, spec.end());
}

Spec with_front(const Spec& spec, const Spec& front) {
  Spec out = front;
  out.insert(out.end(), spec.begin(), spec.end());
  return out;
}

RC canon(const RC& rc) {
  RC c = rc;
  c.canonicalize();
  return c;
}

// The leading factors the adjoint walk removes: (n,1),(1,1) in type A_n, the
// single (N, 1) at the adjoint node otherwise.
Spec adjoint_front(const Cartan& ct) {
  if (is_type(ct, 'A', 1)) {
    require(ct.rank() >= 2, Err::Unsupported, "the type A adjoint walk needs rank >= 2");
    return {{ct.rank(), 1}, {1, 1}};
  }
  const auto& adj = ct.adjoint_nodes();
  require(adj.size() == 1, Err::Internal, "ambiguous adjoint node");
  return {{adj[0], 1}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Letter alphabets

const Crystal& letter_crystal(const std::string& type, int node) {
  static std::map<std::string, std::unique_ptr<Crystal>> cache;
  auto it = cache.find(key2(type, node));
  if (it != cache.end()) return *it->second;

  const Cartan& ct = cartan(type);
  int n = ct.rank();
  std::unique_ptr<Crystal> made;
  if (node == 0) {
    // Adjoint walk alphabet: B(theta) plus the empty element.  The walk lives
    // on the short-root model except for the untwisted non-simply-laced
    // types, where theta is long.
    bool little = !(ct.untwisted() && !ct.simply_laced());
    made = std::make_unique<Crystal>(
        root_model_crystal(type, little, /*with_trivial=*/true, /*with_affine=*/false));
  } else if (is_minuscule_node(type, node)) {
    made = std::make_unique<Crystal>(minuscule_crystal(type, node, /*with_affine=*/false));
  } else if (is_type(ct, 'B', 1) && node == n) {
    made = std::make_unique<Crystal>(minuscule_crystal(type, n, /*with_affine=*/false));
  } else if (is_type(ct, 'C', 1) && node == 1) {
    made = std::make_unique<Crystal>(minuscule_crystal(type, 1, /*with_affine=*/false));
  } else if (is_type(ct, 'F', 1) && node == 4) {
    // B(omega_4) + B(0): omega_4 is the highest short root.
    made = std::make_unique<Crystal>(
        root_model_crystal(type, /*little=*/true, /*with_trivial=*/true, false));
  } else if (is_type(ct, 'G', 1) && node == 1) {
    made = std::make_unique<Crystal>(
        root_model_crystal(type, /*little=*/false, /*with_trivial=*/true, false));
  } else if (is_type(ct, 'G', 1) && node == 2) {
    made = std::make_unique<Crystal>(
        root_model_crystal(type, /*little=*/true, /*with_trivial=*/false, false));
  } else if ((is_type(ct, 'E', 2) || is_type(ct, 'D', 3) || is_type(ct, 'D', 2)) &&
             node == 1) {
    made = std::make_unique<Crystal>(
        root_model_crystal(type, /*little=*/true, /*with_trivial=*/true, false));
  } else if (is_type(ct, 'E', 1) && ct.type().index == 8 && node == 8) {
    made = std::make_unique<Crystal>(
        root_model_crystal(type, /*little=*/true, /*with_trivial=*/true, false));
  } else {
    fail(Err::Unsupported,
         "no letter alphabet at node " + std::to_string(node) + " for type " + type);
  }
  auto* ptr = made.get();
  cache.emplace(key2(type, node), std::move(made));
  return *ptr;
}

// ---------------------------------------------------------------------------
// lb-diagrams and routing

const LbEdge* LbDiagram::edge_from(int r) const {
  for (const LbEdge& e : edges)
    if (e.from == r) return &e;
  return nullptr;
}

int LbDiagram::column_height(int r) const {
  int h = 1;
  int cur = r;
  int guard = int(edges.size()) + 2;
  while (const LbEdge* e = edge_from(cur)) {
    cur = e->to;
    ++h;
    require(--guard > 0, Err::Internal, "lb-diagram has a cycle");
  }
  return h;
}

const LbDiagram& lb_diagram(const std::string& type) {
  static std::map<std::string, std::unique_ptr<LbDiagram>> cache;
  auto it = cache.find(type);
  if (it != cache.end()) return *it->second;

  const Cartan& ct = cartan(type);
  int n = ct.rank();
  auto d = std::make_unique<LbDiagram>();
  std::vector<std::pair<int, int>> arrows;
  if (is_type(ct, 'A', 1) || is_type(ct, 'C', 1) || is_type(ct, 'A', 2)) {
    d->sink = 1;
    for (int r = 2; r <= n; ++r) arrows.push_back({r, r - 1});
  } else if (is_type(ct, 'B', 1)) {
    d->sink = n;
    for (int r = 1; r <= n - 1; ++r) arrows.push_back({r, n});
  } else if (is_type(ct, 'D', 1)) {
    d->sink = 1;
    for (int r = 2; r <= n - 2; ++r) arrows.push_back({r, r - 1});
    d->direct_minuscule = {n - 1, n};
  } else if (is_type(ct, 'D', 2)) {
    d->sink = 1;
    d->sink_adjoint = true;
    for (int r = 2; r <= n - 1; ++r) arrows.push_back({r, r - 1});
    d->direct_minuscule = {n};
  } else if (is_type(ct, 'E', 1) && ct.type().index == 6) {
    d->sink = 1;
    arrows = {{3, 1}, {4, 3}, {2, 6}, {5, 2}, {6, 1}};
  } else if (is_type(ct, 'E', 1) && ct.type().index == 7) {
    d->sink = 7;
    arrows = {{6, 7}, {5, 6}, {4, 5}, {2, 1}, {1, 7}, {3, 2}};
  } else if (is_type(ct, 'E', 1) && ct.type().index == 8) {
    d->sink = 8;
    d->sink_adjoint = true;
    arrows = {{7, 8}, {6, 7}, {5, 6}, {4, 5}, {2, 1}, {1, 8}, {3, 2}};
  } else if (is_type(ct, 'F', 1)) {
    d->sink = 4;
    arrows = {{3, 4}, {2, 3}, {1, 4}};
  } else if (is_type(ct, 'G', 1)) {
    d->sink = 0;  // both nodes are handled through the ambient type
  } else if (is_type(ct, 'E', 2)) {
    d->sink = 1;
    d->sink_adjoint = true;
    arrows = {{2, 1}, {3, 2}, {4, 1}};
  } else if (is_type(ct, 'D', 3)) {
    d->sink = 1;
    d->sink_adjoint = true;
    arrows = {{2, 1}};
  } else {
    fail(Err::Unsupported, "no lb-diagram for type " + type);
  }

  if (d->sink != 0) {
    const Crystal& sigma = letter_crystal(type, d->sink);
    for (auto [from, to] : arrows) {
      LbEdge e;
      e.from = from;
      e.to = to;
      // The label is the unique letter with eps_a = delta_{a,to} and
      // phi_a = delta_{a,from}.
      for (int idx = 0; idx < sigma.size(); ++idx) {
        bool ok = true;
        for (int a = 1; a <= n && ok; ++a)
          ok = sigma.eps(a, idx) == (a == to ? 1 : 0) &&
               sigma.phi(a, idx) == (a == from ? 1 : 0);
        if (ok) {
          require(e.label < 0, Err::Internal, "ambiguous lb edge label");
          e.label = idx;
        }
      }
      require(e.label >= 0, Err::Internal,
              "missing lb edge label " + std::to_string(from) + "->" +
                  std::to_string(to) + " in type " + type);
      sigma.to_highest_weight(e.label, &e.raise_path);
      d->edges.push_back(e);
    }
  }
  auto* ptr = d.get();
  cache.emplace(type, std::move(d));
  return *ptr;
}

Route node_route(const std::string& type, int r) {
  const Cartan& ct = cartan(type);
  int n = ct.rank();
  require(1 <= r && r <= n, Err::InvalidArgument, "node out of range");
  if (is_type(ct, 'B', 1)) return r == n ? Route::Ambient : Route::LbEdge;
  if (is_type(ct, 'C', 1)) return r == 1 ? Route::Ambient : Route::LbEdge;
  if (is_type(ct, 'F', 1)) return r == 4 ? Route::Ambient : Route::LbEdge;
  if (is_type(ct, 'G', 1)) return Route::Ambient;
  const LbDiagram& d = lb_diagram(type);
  if (d.edge_from(r)) return Route::LbEdge;
  if (r == d.sink) return d.sink_adjoint ? Route::SinkAdjoint : Route::SinkMinuscule;
  for (int s : d.direct_minuscule)
    if (s == r) return Route::DirectMinuscule;
  fail(Err::Internal, "unrouted node " + std::to_string(r) + " in type " + type);
}

int alphabet_node(const std::string& type, int r) {
  Route rt = node_route(type, r);
  if (rt == Route::LbEdge) {
    const LbDiagram& d = lb_diagram(type);
    return d.sink_adjoint ? 0 : d.sink;
  }
  return rt == Route::SinkAdjoint ? 0 : r;
}

// ---------------------------------------------------------------------------
// Forward walk machinery

namespace {

// A selection made by a box-removing walk.
struct Sel {
  int node = 0;
  int row = -1;
  i64 recorded = 0;  // selection length (decremented by case (D))
  bool doubled = false;
  char tag = 'G';
  int phase = 1;
};

struct WalkState {
  const RC* rc = nullptr;
  std::vector<std::vector<char>> taken;          // [a-1][row]
  mutable std::vector<std::map<i64, i64>> vacs;  // lazy vacancy cache
  std::vector<Sel> sels;

  explicit WalkState(const RC& r) : rc(&r), taken(r.nu.size()), vacs(r.nu.size()) {
    for (size_t a = 0; a < r.nu.size(); ++a) taken[a].assign(r.nu[a].size(), 0);
  }

  i64 vac(int a, i64 len) const {
    auto& m = vacs[a - 1];
    auto it = m.find(len);
    if (it != m.end()) return it->second;
    i64 v = vacancy(*rc, a, len);
    m.emplace(len, v);
    return v;
  }
  bool singular(int a, int row) const {
    const RCRow& r = rc->nu[a - 1][row];
    return r.rig == vac(a, r.len);
  }
  bool quasisingular(int a, int row) const {
    const RCRow& r = rc->nu[a - 1][row];
    return r.rig == vac(a, r.len) - 1;
  }

  // Minimal-length unselected singular row at node a of length >= lo.
  std::optional<std::pair<i64, int>> min_singular(int a, i64 lo) const {
    std::optional<std::pair<i64, int>> best;
    const auto& rows = rc->nu[a - 1];
    for (int i = 0; i < int(rows.size()); ++i) {
      if (taken[a - 1][i] || rows[i].len < lo || !singular(a, i)) continue;
      if (!best || rows[i].len < best->first ||
          (rows[i].len == best->first && i > best->second))
        best = {rows[i].len, i};
    }
    return best;
  }
  std::optional<std::pair<i64, int>> min_quasisingular(int a, i64 lo) const {
    std::optional<std::pair<i64, int>> best;
    const auto& rows = rc->nu[a - 1];
    for (int i = 0; i < int(rows.size()); ++i) {
      if (taken[a - 1][i] || rows[i].len < lo || !quasisingular(a, i)) continue;
      if (!best || rows[i].len < best->first ||
          (rows[i].len == best->first && i > best->second))
        best = {rows[i].len, i};
    }
    return best;
  }

  void select(int a, int row, i64 len, char tag, int phase) {
    taken[a - 1][row] = 1;
    sels.push_back({a, row, len, false, tag, phase});
  }
};

// Builds the post-removal rigged configuration: selected rows lose one box
// per selection (two when doubled), survivors are re-rigged singular against
// the new vacancies -- except the quasi target, which gets vacancy - 1 --
// and every other row keeps its rigging.
RC apply_removal(const RC& rc, Spec new_spec, const std::vector<Sel>& sels,
                 std::optional<std::pair<int, int>> quasi_target) {
  RC out;
  out.type = rc.type;
  out.spec = std::move(new_spec);
  out.nu = rc.nu;
  for (const Sel& s : sels) {
    RCRow& row = out.nu[s.node - 1][s.row];
    row.len -= s.doubled ? 2 : 1;
    require(row.len >= 0, Err::Internal, "selected row over-shrunk");
  }
  for (const Sel& s : sels) {
    RCRow& row = out.nu[s.node - 1][s.row];
    if (row.len == 0) continue;
    row.rig = vacancy(out, s.node, row.len);
    if (quasi_target && quasi_target->first == s.node && quasi_target->second == s.row)
      row.rig -= 1;
  }
  for (auto& rows : out.nu)
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const RCRow& r) { return r.len == 0; }),
               rows.end());
  out.canonicalize();
  require(rc_valid(out, false), Err::Internal, "box removal produced an invalid rc");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Minuscule walk

DeltaResult delta_minuscule(const RC& rc, int r) {
  const std::string& type = rc.type;
  require(is_minuscule_node(type, r), Err::Unsupported,
          "no minuscule walk at node " + std::to_string(r) + " for type " + type);
  require(!rc.spec.empty() && rc.spec.front() == Factor{r, 1}, Err::InvalidArgument,
          "leading factor is not (r, 1)");

  const Crystal& c = letter_crystal(type, r);
  auto hws = c.highest_weight_elements();
  require(hws.size() == 1, Err::Internal, "minuscule alphabet not connected");
  int b = hws[0];

  WalkState w(rc);
  DeltaResult res;
  i64 ell = 1;
  while (true) {
    std::optional<std::tuple<i64, int, int>> best;  // (len, node, row)
    for (int a : out_colors(c, b)) {
      auto cand = w.min_singular(a, ell);
      if (cand && (!best || cand->first < std::get<0>(*best)))
        best = {cand->first, a, cand->second};
    }
    if (!best) break;
    auto [len, a, row] = *best;
    w.select(a, row, len, 'G', 1);
    res.steps.push_back({1, a, len, 'G'});
    ell = len;
    b = c.f(a, b);
  }
  res.ret = {r, b};
  res.rc = apply_removal(rc, drop_front(rc.spec, 1), w.sels, std::nullopt);
  return res;
}

// ---------------------------------------------------------------------------
// Adjoint walk

DeltaResult delta_adjoint(const RC& rc) {
  const std::string& type = rc.type;
  const Cartan& ct = cartan(type);
  Spec front = adjoint_front(ct);
  require(rc.spec.size() >= front.size() &&
              std::equal(front.begin(), front.end(), rc.spec.begin()),
          Err::InvalidArgument, "leading factors do not match the adjoint factor");

  const Crystal& c = letter_crystal(type, 0);
  int b = c.index_of(Elem::root(ct.theta()));
  WalkState w(rc);
  DeltaResult res;
  Spec rest = drop_front(rc.spec, int(front.size()));

  auto finish = [&](int ret, std::optional<std::pair<int, int>> quasi) {
    res.ret = {0, ret};
    res.rc = apply_removal(rc, rest, w.sels, quasi);
    return res;
  };

  // Phase one: descend from x_theta through the positive roots.
  i64 ell = 1;
  int ynode = 0;
  while (true) {
    const Elem& el = c.elem(b);
    require(el.kind == Elem::Kind::Root && root_is_positive(el.v), Err::Internal,
            "phase one left the positive roots");
    int a_simple = simple_root_node(el.v);
    if (a_simple == 0) {
      std::optional<std::tuple<i64, int, int>> best;
      for (int a : out_colors(c, b)) {
        auto cand = w.min_singular(a, ell);
        if (cand && (!best || cand->first < std::get<0>(*best)))
          best = {cand->first, a, cand->second};
      }
      if (!best) return finish(b, std::nullopt);
      auto [len, a, row] = *best;
      w.select(a, row, len, 'G', 1);
      res.steps.push_back({1, a, len, 'G'});
      ell = len;
      b = c.f(a, b);
      continue;
    }
    // b = x_{alpha_a}: cases (S), (E), (Q), (T) in order.
    int a = a_simple;
    if (auto s = w.min_singular(a, std::max<i64>(ell, 2))) {
      w.select(a, s->second, s->first, 'S', 1);
      res.steps.push_back({1, a, s->first, 'S'});
      ell = s->first;
    } else if (auto e1 = w.min_singular(a, 1); ell == 1 && e1 && e1->first == 1) {
      w.select(a, e1->second, 1, 'E', 1);
      res.steps.push_back({1, a, 1, 'E'});
      int empty = c.find(Elem::trivial());
      require(empty >= 0, Err::Internal, "adjoint alphabet lacks the empty element");
      return finish(empty, std::nullopt);
    } else if (auto q = w.min_quasisingular(a, ell)) {
      w.select(a, q->second, q->first, 'Q', 1);
      res.steps.push_back({1, a, q->first, 'Q'});
      res.qflag = true;
      ell = q->first;
    } else {
      return finish(b, std::nullopt);
    }
    ynode = a;
    b = c.f(a, b);
    break;
  }
  require(c.elem(b).kind == Elem::Kind::Null && c.elem(b).node == ynode, Err::Internal,
          "phase one did not land on a null element");

  // Phase two: continue through y_a and the negative roots.  A phase-one row
  // whose recorded length equals the candidate length and is still singular
  // may be selected a second time (case (D), two boxes removed); otherwise a
  // fresh singular row is selected (case (N)).  (D) wins ties.
  const char* venv = std::getenv("RCBIJ_ADJ_V");
  const int variant = venv ? std::atoi(venv) : 0;
  i64 ellbar = ell;
  std::optional<std::pair<int, int>> quasi_target;
  bool first_p2 = true;
  while (true) {
    std::optional<std::tuple<i64, int, int, int>> best;  // (len, node, row, sel index)
    for (int a : out_colors(c, b)) {
      std::optional<std::tuple<i64, int, int>> cand;  // (len, row, sel index)
      for (int si = 0; si < int(w.sels.size()); ++si) {
        const Sel& s = w.sels[si];
        if (s.node != a || s.phase != 1 || s.doubled || s.tag == 'Q') continue;
        if (variant == 1 && s.tag != 'S') continue;
        if (variant == 2 && res.qflag) continue;
        const RCRow& row = rc.nu[a - 1][s.row];
        // A doubled selection removes two boxes, so a length-1 row can never
        // be taken by case (D).
        if (row.len < 2) continue;
        if (row.len != s.recorded || row.len < ellbar || !w.singular(a, s.row)) continue;
        if (!cand || row.len < std::get<0>(*cand)) cand = {row.len, s.row, si};
      }
      if (auto nsel = w.min_singular(a, ellbar)) {
        if (!cand || nsel->first < std::get<0>(*cand))
          cand = {nsel->first, nsel->second, -1};
      }
      if (cand && (!best || std::get<0>(*cand) < std::get<0>(*best)))
        best = {std::get<0>(*cand), a, std::get<1>(*cand), std::get<2>(*cand)};
    }
    if (!best) break;
    auto [len, a, row, si] = *best;
    if (si >= 0) {
      w.sels[si].doubled = true;
      w.sels[si].recorded -= 1;
      res.steps.push_back({2, a, len, 'D'});
    } else {
      w.select(a, row, len, 'N', 2);
      res.steps.push_back({2, a, len, 'N'});
    }
    if (first_p2) {
      quasi_target = {a, row};
      first_p2 = false;
    }
    ellbar = len;
    b = c.f(a, b);
  }
  if (!res.qflag) quasi_target.reset();
  return finish(b, quasi_target);
}

// ---------------------------------------------------------------------------
// Inverse walks
//
// Each inverse mirrors its forward walk: the raising path of the returned
// letter is rebuilt arrow by arrow, and at every step the longest eligible
// row (bounded by one less than the previously restored length) regains a
// box.  Eligibility consults the fixed input rigged configuration: a row is
// a candidate while untouched and singular there; a vanished row is recreated
// as the last resort.  Every reconstruction is validated by running the
// forward walk on it; the genuinely ambiguous adjoint choices -- which row
// arrived at the null element, whether phase one ended with the
// quasisingular case, and which row that case selected -- are resolved by
// trying the candidates in order until the validation passes (injectivity of
// the walk makes the match unique).

namespace {

struct InvState {
  std::vector<std::vector<i64>> len;      // working lengths; tail rows are created
  std::vector<std::vector<char>> tA, tB;  // touched in stage A / stage B

  explicit InvState(const RC& rc) : len(rc.nu.size()), tA(rc.nu.size()), tB(rc.nu.size()) {
    for (size_t a = 0; a < rc.nu.size(); ++a) {
      for (const RCRow& row : rc.nu[a]) len[a].push_back(row.len);
      tA[a].assign(len[a].size(), 0);
      tB[a].assign(len[a].size(), 0);
    }
  }
  bool touched(int a, int i) const { return tA[a - 1][i] || tB[a - 1][i]; }
  int create(int a) {
    len[a - 1].push_back(0);
    tA[a - 1].push_back(0);
    tB[a - 1].push_back(0);
    return int(len[a - 1].size()) - 1;
  }
};

RC assemble_preimage(const RC& rc, const Spec& front, const InvState& st,
                     std::optional<std::pair<int, int>> quasi_row) {
  RC out;
  out.type = rc.type;
  out.spec = with_front(rc.spec, front);
  out.nu = rc.nu;
  for (size_t a = 0; a < st.len.size(); ++a) {
    for (size_t i = rc.nu[a].size(); i < st.len[a].size(); ++i) out.nu[a].push_back({0, 0});
    for (size_t i = 0; i < st.len[a].size(); ++i)
      if (st.touched(int(a) + 1, int(i))) out.nu[a][i].len = st.len[a][i];
  }
  for (size_t a = 0; a < st.len.size(); ++a)
    for (size_t i = 0; i < st.len[a].size(); ++i) {
      if (!st.touched(int(a) + 1, int(i))) continue;
      RCRow& row = out.nu[a][i];
      require(row.len >= 1, Err::Internal, "touched row stayed empty");
      row.rig = vacancy(out, int(a) + 1, row.len);
      if (quasi_row && quasi_row->first == int(a) + 1 && quasi_row->second == int(i))
        row.rig -= 1;
    }
  out.canonicalize();
  return out;
}

bool input_singular(const RC& rc, int a, int i) {
  if (i >= int(rc.nu[a - 1].size())) return false;
  const RCRow& row = rc.nu[a - 1][i];
  return row.rig == vacancy(rc, a, row.len);
}
bool input_quasisingular(const RC& rc, int a, int i) {
  if (i >= int(rc.nu[a - 1].size())) return false;
  const RCRow& row = rc.nu[a - 1][i];
  return row.rig == vacancy(rc, a, row.len) - 1;
}

// Climb the raising graph from `b` to `stop`, restoring one box per step:
// longest eligible row first; rows touched in stage A may be retouched once
// (the doubled selection) and win ties; larger colors win remaining ties; a
// fresh row is the last resort.  Returns false when a bound blocks the climb.
bool climb_to(const Crystal& c, const RC& rc, InvState& st, int b, int stop, i64 prev,
              bool allow_retouch) {
  while (b != stop) {
    auto cols = in_colors(c, b);
    require(!cols.empty(), Err::Internal, "raising climb is stuck");
    std::optional<std::tuple<i64, int, int, int>> pick;  // (len, prio, node, row)
    for (int a : cols) {
      for (int i = 0; i < int(st.len[a - 1].size()); ++i) {
        i64 L = st.len[a - 1][i];
        if (prev >= 0 && L > prev - 1) continue;
        bool retouch = allow_retouch && st.tA[a - 1][i] && !st.tB[a - 1][i];
        if (!retouch) {
          if (st.touched(a, i)) continue;
          if (!input_singular(rc, a, i)) continue;
        }
        int prio = retouch ? 1 : 0;
        auto key = std::make_tuple(L, prio, a, i);
        if (!pick || key > *pick) pick = key;
      }
    }
    int a, row;
    if (pick) {
      a = std::get<2>(*pick);
      row = std::get<3>(*pick);
    } else {
      if (prev == 0) return false;
      a = cols.back();
      row = st.create(a);
    }
    st.tB[a - 1][row] = 1;
    st.len[a - 1][row] += 1;
    prev = st.len[a - 1][row];
    b = c.e(a, b);
  }
  return true;
}

}  // namespace

RC delta_minuscule_inv(const RC& rc, int r, const Letter& b) {
  const std::string& type = rc.type;
  const Crystal& c = letter_crystal(type, r);
  require(b.node == r && b.idx >= 0 && b.idx < c.size(), Err::InvalidArgument,
          "letter does not live in the node alphabet");
  require(rc_valid(rc, false), Err::InvalidArgument, "invalid rigged configuration");

  auto hws = c.highest_weight_elements();
  require(hws.size() == 1, Err::Internal, "minuscule alphabet not connected");

  InvState st(rc);
  bool ok = climb_to(c, rc, st, b.idx, hws[0], -1, false);
  require(ok, Err::Verify, "(rc, letter) is not in the image of the minuscule walk");
  RC out = assemble_preimage(rc, {{r, 1}}, st, std::nullopt);
  DeltaResult check = delta_minuscule(out, r);
  require(check.rc == canon(rc) && check.ret == b, Err::Verify,
          "(rc, letter) is not in the image of the minuscule walk");
  return out;
}

// ---------------------------------------------------------------------------
// Adjoint inverse

namespace {

// A candidate for one of the ambiguous adjoint mirror steps.
struct AdjChoice {
  int row = -1;        // -1 = create a fresh row
  bool qflag = false;  // the forward walk ended phase one with case (Q)
};

class AdjointInverter {
 public:
  AdjointInverter(const RC& rc, const Letter& b)
      : rc_(rc),
        ct_(cartan(rc.type)),
        c_(letter_crystal(rc.type, 0)),
        front_(adjoint_front(ct_)),
        b_(b),
        theta_(c_.index_of(Elem::root(ct_.theta()))) {}

  RC invert() {
    const Elem& el = c_.elem(b_.idx);
    if (el.kind == Elem::Kind::Trivial) return invert_empty();
    if (el.kind == Elem::Kind::Root && root_is_positive(el.v)) return invert_positive();
    if (el.kind == Elem::Kind::Null) {
      // Stage A is empty; phase one necessarily ended with case (Q).
      InvState st(rc_);
      if (auto out = finish(st, b_.idx, -1, /*qflag=*/true)) return *out;
      fail(Err::Verify, "(rc, letter) is not in the image of the adjoint walk");
    }
    require(el.kind == Elem::Kind::Root, Err::Internal, "unclassified letter");
    return invert_negative();
  }

 private:
  const RC& rc_;
  const Cartan& ct_;
  const Crystal& c_;
  Spec front_;
  Letter b_;
  int theta_;

  bool accept(const RC& pre) const {
    if (!rc_valid(pre, false)) return false;
    DeltaResult check = delta_adjoint(pre);
    return check.rc == canon(rc_) && check.ret == b_;
  }

  RC invert_empty() const {
    // Inverse of case (E): one singular length-1 row per node per unit of the
    // color multiplicity of theta.
    RC out;
    out.type = rc_.type;
    out.spec = with_front(rc_.spec, front_);
    out.nu = rc_.nu;
    const IntVec& theta = ct_.theta();
    for (int a = 1; a <= ct_.rank(); ++a)
      for (i64 k = 0; k < theta[a - 1]; ++k) out.nu[a - 1].push_back({1, 0});
    for (int a = 1; a <= ct_.rank(); ++a) {
      i64 v = vacancy(out, a, 1);
      for (i64 k = 0; k < theta[a - 1]; ++k)
        out.nu[a - 1][out.nu[a - 1].size() - 1 - k].rig = v;
    }
    out.canonicalize();
    require(accept(out), Err::Verify,
            "(rc, empty) is not in the image of the adjoint walk");
    return out;
  }

  RC invert_positive() const {
    if (b_.idx == theta_) {
      RC out = rc_;
      out.spec = with_front(rc_.spec, front_);
      out.canonicalize();
      require(accept(out), Err::Verify,
              "(rc, letter) is not in the image of the adjoint walk");
      return out;
    }
    // Phase one terminated mid-descent: the mirror is a plain climb back to
    // x_theta undoing generic selections.
    InvState st(rc_);
    bool ok = climb_to(c_, rc_, st, b_.idx, theta_, -1, false);
    require(ok, Err::Verify, "(rc, letter) is not in the image of the adjoint walk");
    RC out = assemble_preimage(rc_, front_, st, std::nullopt);
    require(accept(out), Err::Verify,
            "(rc, letter) is not in the image of the adjoint walk");
    return out;
  }

  // Stage A: deterministic climb from a negative root towards y_a, then
  // enumerate the candidates for the arrival step (the first phase-two
  // selection).
  RC invert_negative() const {
    InvState st(rc_);
    int b = b_.idx;
    i64 prev = -1;
    while (true) {
      auto cols = in_colors(c_, b);
      require(!cols.empty(), Err::Internal, "stage A climb is stuck");
      bool arriving =
          cols.size() == 1 && c_.elem(c_.e(cols[0], b)).kind == Elem::Kind::Null;
      if (arriving) {
        int a = cols[0];
        for (const AdjChoice& ch : arrival_menu(st, a, prev)) {
          InvState st2 = st;
          int row = ch.row >= 0 ? ch.row : st2.create(a);
          st2.tA[a - 1][row] = 1;
          st2.len[a - 1][row] += 1;
          i64 bound = st2.len[a - 1][row] + 1;
          if (auto out = finish(st2, c_.e(a, b), bound, ch.qflag)) return *out;
        }
        fail(Err::Verify, "(rc, letter) is not in the image of the adjoint walk");
      }
      // Generic stage A step: longest untouched singular row over the raise
      // colors, a fresh row as fallback; larger colors win ties.
      std::optional<std::tuple<i64, int, int>> pick;  // (len, node, row)
      for (int a : cols) {
        if (c_.elem(c_.e(a, b)).kind == Elem::Kind::Null) continue;
        for (int i = 0; i < int(st.len[a - 1].size()); ++i) {
          i64 L = st.len[a - 1][i];
          if (st.touched(a, i) || !input_singular(rc_, a, i)) continue;
          if (prev >= 0 && L > prev - 1) continue;
          auto key = std::make_tuple(L, a, i);
          if (!pick || key > *pick) pick = key;
        }
      }
      int a, row;
      if (pick) {
        a = std::get<1>(*pick);
        row = std::get<2>(*pick);
      } else {
        a = -1;
        for (int cc : cols)
          if (c_.elem(c_.e(cc, b)).kind != Elem::Kind::Null) a = cc;
        require(a > 0, Err::Internal, "no raise color available in stage A");
        row = st.create(a);
      }
      st.tA[a - 1][row] = 1;
      st.len[a - 1][row] += 1;
      prev = st.len[a - 1][row];
      b = c_.e(a, b);
    }
  }

  // Candidates for the arrival step: a quasisingular row in the input forces
  // the quasi flag, a singular row denies it, a created row leaves both open.
  // Longer rows first.
  std::vector<AdjChoice> arrival_menu(const InvState& st, int a, i64 bound) const {
    std::vector<std::tuple<i64, int, AdjChoice>> cands;
    for (int i = 0; i < int(st.len[a - 1].size()); ++i) {
      if (st.touched(a, i)) continue;
      i64 L = st.len[a - 1][i];
      if (bound >= 0 && L > bound - 1) continue;
      if (input_quasisingular(rc_, a, i)) cands.push_back({L, 0, {i, true}});
      if (input_singular(rc_, a, i)) cands.push_back({L, 1, {i, false}});
    }
    std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::get<1>(x) < std::get<1>(y);
    });
    std::vector<AdjChoice> menu;
    for (auto& [L, o, ch] : cands) menu.push_back(ch);
    menu.push_back({-1, false});
    menu.push_back({-1, true});
    return menu;
  }

  // Completes the mirror from the null element: undo the (S)/(Q) selection,
  // then climb stage B to x_theta.
  std::optional<RC> finish(const InvState& base, int b_y, i64 bound, bool qflag) const {
    const Elem& el = c_.elem(b_y);
    require(el.kind == Elem::Kind::Null, Err::Internal, "finish expects a null element");
    int a = el.node;
    for (const AdjChoice& ch : yundo_menu(base, a, bound, qflag)) {
      InvState st = base;
      int row = ch.row >= 0 ? ch.row : st.create(a);
      st.tB[a - 1][row] = 1;
      st.len[a - 1][row] += 1;
      std::optional<std::pair<int, int>> quasi_pre;
      if (qflag) quasi_pre = {a, row};
      i64 prev = st.len[a - 1][row];
      if (!climb_to(c_, rc_, st, c_.e(a, b_y), theta_, prev, true)) continue;
      RC out = assemble_preimage(rc_, front_, st, quasi_pre);
      if (accept(out)) return out;
    }
    return std::nullopt;
  }

  // Candidates for the (S)/(Q) undo.  Case (S): restored length >= 2, a row
  // touched in stage A may take its second box and wins ties, fresh rows are
  // impossible.  Case (Q): an untouched singular row or a fresh one; it turns
  // quasisingular in the pre-image.
  std::vector<AdjChoice> yundo_menu(const InvState& st, int a, i64 bound,
                                    bool qflag) const {
    std::vector<std::tuple<i64, int, AdjChoice>> cands;
    for (int i = 0; i < int(st.len[a - 1].size()); ++i) {
      i64 L = st.len[a - 1][i];
      if (bound >= 0 && L > bound - 1) continue;
      if (st.tB[a - 1][i]) continue;
      if (qflag) {
        if (st.tA[a - 1][i]) continue;
        if (!input_singular(rc_, a, i)) continue;
        cands.push_back({L, 0, {i, true}});
      } else {
        if (L + 1 < 2) continue;
        if (st.tA[a - 1][i]) {
          cands.push_back({L, 0, {i, false}});
        } else if (!st.touched(a, i) && input_singular(rc_, a, i)) {
          cands.push_back({L, 1, {i, false}});
        }
      }
    }
    std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::get<1>(x) < std::get<1>(y);
    });
    std::vector<AdjChoice> menu;
    for (auto& [L, o, ch] : cands) menu.push_back(ch);
    if (qflag) menu.push_back({-1, true});
    return menu;
  }
};

}  // namespace

RC delta_adjoint_inv(const RC& rc, const Letter& b) {
  const Crystal& c = letter_crystal(rc.type, 0);
  require(b.node == 0 && b.idx >= 0 && b.idx < c.size(), Err::InvalidArgument,
          "letter does not live in the adjoint alphabet");
  require(rc_valid(rc, false), Err::InvalidArgument, "invalid rigged configuration");
  AdjointInverter inv(rc, b);
  return inv.invert();
}

// ---------------------------------------------------------------------------
// Splitting maps

RC lb_rc(const RC& rc) {
  const std::string& type = rc.type;
  require(!rc.spec.empty() && rc.spec.front().s == 1, Err::InvalidArgument,
          "leading factor is not (r, 1)");
  int r = rc.spec.front().r;
  const LbDiagram& d = lb_diagram(type);
  const LbEdge* e = d.edge_from(r);
  require(e != nullptr, Err::InvalidArgument, "no lb edge from node " + std::to_string(r));
  RC out;
  out.type = type;
  out.spec = with_front(drop_front(rc.spec, 1), {{d.sink, 1}, {e->to, 1}});
  out.nu = rc.nu;
  std::map<int, int> added;
  for (int a : e->raise_path) {
    out.nu[a - 1].push_back({1, 0});
    added[a] += 1;
  }
  for (auto [a, cnt] : added) {
    i64 v = vacancy(out, a, 1);
    for (int k = 0; k < cnt; ++k) out.nu[a - 1][out.nu[a - 1].size() - 1 - k].rig = v;
  }
  out.canonicalize();
  require(rc_valid(out, false), Err::Internal, "lb produced an invalid rc");
  return out;
}

RC lb_inverse(const RC& rc, int r) {
  const std::string& type = rc.type;
  const LbDiagram& d = lb_diagram(type);
  const LbEdge* e = d.edge_from(r);
  require(e != nullptr, Err::InvalidArgument, "no lb edge from node " + std::to_string(r));
  require(rc.spec.size() >= 2 && rc.spec[0] == Factor{d.sink, 1} &&
              rc.spec[1] == Factor{e->to, 1},
          Err::InvalidArgument, "leading factors do not match the lb edge");
  RC out;
  out.type = type;
  out.spec = with_front(drop_front(rc.spec, 2), {{r, 1}});
  out.nu = rc.nu;
  std::map<int, int> need;
  for (int a : e->raise_path) need[a] += 1;
  for (auto [a, cnt] : need) {
    auto& rows = out.nu[a - 1];
    i64 v = vacancy(rc, a, 1);
    for (int k = 0; k < cnt; ++k) {
      int found = -1;
      for (int i = int(rows.size()) - 1; i >= 0; --i)
        if (rows[i].len == 1 && rows[i].rig == v) {
          found = i;
          break;
        }
      require(found >= 0, Err::InvalidArgument,
              "missing singular length-1 row at node " + std::to_string(a));
      rows.erase(rows.begin() + found);
    }
  }
  out.canonicalize();
  require(canon(lb_rc(out)) == canon(rc), Err::Verify, "lb inverse round trip failed");
  return out;
}

RC ls_rc(const RC& rc) {
  require(!rc.spec.empty() && rc.spec.front().s >= 2, Err::InvalidArgument,
          "leading factor is not (r, s) with s >= 2");
  RC out = rc;
  Factor f = rc.spec.front();
  out.spec = with_front(drop_front(rc.spec, 1), {{f.r, 1}, {f.r, f.s - 1}});
  require(rc_valid(out, false), Err::Internal, "ls produced an invalid rc");
  return out;
}

RC ls_inverse(const RC& rc) {
  require(rc.spec.size() >= 2 && rc.spec[0].s == 1 && rc.spec[1].r == rc.spec[0].r,
          Err::InvalidArgument, "leading factors do not match a left split");
  RC out = rc;
  Factor merged{rc.spec[0].r, rc.spec[0].s + rc.spec[1].s};
  out.spec = with_front(drop_front(rc.spec, 2), {merged});
  require(rc_valid(out, false), Err::Verify, "ls inverse produced an invalid rc");
  return out;
}

// ---------------------------------------------------------------------------
// Ambient routes

namespace {

struct PlanOp {
  enum Kind { Ls, Lb, Delta } kind;
  int node = 0;  // Lb: edge source; Delta: leading node
};

std::vector<PlanOp> plan_ambient(const std::string& ambient, const Spec& pre) {
  const LbDiagram& d = lb_diagram(ambient);
  std::deque<Factor> q(pre.begin(), pre.end());
  std::vector<PlanOp> ops;
  int guard = 64;
  while (!q.empty()) {
    require(--guard > 0, Err::Internal, "ambient plan does not terminate");
    Factor f = q.front();
    if (f.s > 1) {
      ops.push_back({PlanOp::Ls, f.r});
      q.front().s = 1;
      q.insert(q.begin() + 1, {f.r, f.s - 1});
    } else if (const LbEdge* e = d.edge_from(f.r)) {
      ops.push_back({PlanOp::Lb, f.r});
      q.front() = {d.sink, 1};
      q.insert(q.begin() + 1, {e->to, 1});
    } else {
      ops.push_back({PlanOp::Delta, f.r});
      q.pop_front();
    }
  }
  return ops;
}

struct AmbientTable {
  Folding fold;
  std::vector<PlanOp> plan;
  std::vector<int> slot_nodes;  // return alphabet node per delta op
  std::vector<std::vector<int>> enc;
  std::map<std::vector<int>, int> dec;
};

// Tensor-word statistics matching the pair convention: e moves left iff
// eps(left) > phi(right), f moves left iff eps(left) >= phi(right).
struct WordOps {
  std::vector<const Crystal*> slots;

  i64 prefix_eps(const std::vector<int>& w, int upto, int a) const {
    i64 E = 0, P = 0;
    for (int i = 0; i < upto; ++i) {
      i64 e = slots[i]->eps(a, w[i]);
      i64 p = slots[i]->phi(a, w[i]);
      i64 newE = e + std::max<i64>(0, E - p);
      i64 newP = P + std::max<i64>(0, p - E);
      E = newE;
      P = newP;
    }
    return E;
  }

  bool word_f(std::vector<int>& w, int a) const {
    int t = int(w.size());
    while (t >= 2 && prefix_eps(w, t - 1, a) >= slots[t - 1]->phi(a, w[t - 1])) --t;
    int next = slots[t - 1]->f(a, w[t - 1]);
    if (next < 0) return false;
    w[t - 1] = next;
    return true;
  }
};

int delta_return_node(const std::string& ambient, int node) {
  Route rt = node_route(ambient, node);
  require(rt == Route::SinkAdjoint || rt == Route::SinkMinuscule ||
              rt == Route::DirectMinuscule,
          Err::Internal, "ambient delta at an unroutable node");
  return rt == Route::SinkAdjoint ? 0 : node;
}

RC run_plan_forward(const AmbientTable& tab, RC vrc, std::vector<int>* rets,
                    std::vector<DeltaStep>* steps, bool* qflag, bool forbid_qe) {
  const std::string& ambient = tab.fold.ambient;
  for (const PlanOp& op : tab.plan) {
    if (op.kind == PlanOp::Ls) {
      vrc = ls_rc(vrc);
    } else if (op.kind == PlanOp::Lb) {
      require(!vrc.spec.empty() && vrc.spec.front().r == op.node, Err::Internal,
              "ambient plan out of sync");
      vrc = lb_rc(vrc);
    } else {
      DeltaResult res = node_route(ambient, op.node) == Route::SinkAdjoint
                            ? delta_adjoint(vrc)
                            : delta_minuscule(vrc, op.node);
      if (forbid_qe)
        for (const DeltaStep& s : res.steps)
          require(s.tag != 'Q' && s.tag != 'E', Err::Internal,
                  "case (Q)/(E) fired on a virtual image");
      if (rets) rets->push_back(res.ret.idx);
      if (steps) steps->insert(steps->end(), res.steps.begin(), res.steps.end());
      if (qflag) *qflag = *qflag || res.qflag;
      vrc = res.rc;
    }
  }
  return vrc;
}

const AmbientTable& ambient_table(const std::string& type, int r) {
  static std::map<std::string, std::unique_ptr<AmbientTable>> cache;
  auto it = cache.find(key2(type, r));
  if (it != cache.end()) return *it->second;

  const Cartan& ct = cartan(type);
  auto fold = ct.dual_folding();
  require(fold.has_value(), Err::Unsupported, "no ambient embedding for type " + type);
  auto tab = std::make_unique<AmbientTable>();
  tab->fold = *fold;
  Spec pre = virtualize_spec(type, {{r, 1}}, tab->fold);
  tab->plan = plan_ambient(fold->ambient, pre);
  for (const PlanOp& op : tab->plan)
    if (op.kind == PlanOp::Delta)
      tab->slot_nodes.push_back(delta_return_node(fold->ambient, op.node));

  const Crystal& base = letter_crystal(type, r);
  WordOps ops;
  for (int node : tab->slot_nodes)
    ops.slots.push_back(&letter_crystal(fold->ambient, node));

  tab->enc.assign(base.size(), {});
  std::vector<char> known(base.size(), 0);

  // Seed each classical component from its highest weight rigged
  // configuration, peeled through the ambient moves.
  std::vector<RC> seeds = highest_weight_rcs(type, {{r, 1}});
  auto base_hws = base.highest_weight_elements();
  require(seeds.size() == base_hws.size(), Err::Internal,
          "alphabet does not match the factor decomposition");
  for (const RC& seed : seeds) {
    RC vrc = virtualize_rc(seed, tab->fold);
    std::vector<int> rets;
    RC end = run_plan_forward(*tab, vrc, &rets, nullptr, nullptr, false);
    require(end.spec.empty(), Err::Internal, "ambient peel left factors behind");
    for (const auto& rows : end.nu)
      require(rows.empty(), Err::Internal, "ambient peel left boxes behind");
    IntVec lambda = rc_weight(seed);
    int u = -1;
    for (int h : base_hws)
      if (base.weight(h) == lambda) {
        require(u < 0, Err::Internal, "ambiguous component seed");
        u = h;
      }
    require(u >= 0 && !known[u], Err::Internal, "bad component seed");
    tab->enc[u] = rets;
    known[u] = 1;
  }

  // Transport down the f-graph: the image of f_a applies the ambient
  // operators f_{a'}^{gamma_a} over the preimage nodes of a.
  std::deque<int> queue(base_hws.begin(), base_hws.end());
  while (!queue.empty()) {
    int bidx = queue.front();
    queue.pop_front();
    for (int a = 1; a <= base.n; ++a) {
      int fb = base.f(a, bidx);
      if (fb < 0 || known[fb]) continue;
      std::vector<int> w = tab->enc[bidx];
      for (int an : tab->fold.preimage[a])
        for (i64 k = 0; k < tab->fold.gamma[a]; ++k)
          require(ops.word_f(w, an), Err::Internal,
                  "virtual transport fell off the crystal");
      tab->enc[fb] = w;
      known[fb] = 1;
      queue.push_back(fb);
    }
  }
  for (int i = 0; i < base.size(); ++i) {
    require(known[i], Err::Internal, "alphabet element missed by virtual transport");
    auto [pos, fresh] = tab->dec.emplace(tab->enc[i], i);
    (void)pos;
    require(fresh, Err::Internal, "virtual encoding is not injective");
  }

  auto* ptr = tab.get();
  cache.emplace(key2(type, r), std::move(tab));
  return *ptr;
}

}  // namespace

DeltaResult delta_ambient(const RC& rc) {
  const std::string& type = rc.type;
  require(!rc.spec.empty() && rc.spec.front().s == 1, Err::InvalidArgument,
          "leading factor is not (r, 1)");
  int r = rc.spec.front().r;
  require(node_route(type, r) == Route::Ambient, Err::InvalidArgument,
          "node is not ambient-routed");
  const AmbientTable& tab = ambient_table(type, r);

  RC vrc = virtualize_rc(rc, tab.fold);
  std::vector<int> rets;
  DeltaResult res;
  bool forbid_qe = is_type(cartan(type), 'C', 1);
  RC vrest = run_plan_forward(tab, vrc, &rets, &res.steps, &res.qflag, forbid_qe);
  res.rc = devirtualize_rc(vrest, type, drop_front(rc.spec, 1), tab.fold);
  auto it = tab.dec.find(rets);
  require(it != tab.dec.end(), Err::Internal, "ambient letters decode to no base letter");
  res.ret = {r, it->second};
  return res;
}

RC delta_ambient_inv(const RC& rc, int r, const Letter& b) {
  const std::string& type = rc.type;
  require(node_route(type, r) == Route::Ambient, Err::InvalidArgument,
          "node is not ambient-routed");
  const AmbientTable& tab = ambient_table(type, r);
  const Crystal& base = letter_crystal(type, r);
  require(b.node == r && b.idx >= 0 && b.idx < base.size(), Err::InvalidArgument,
          "letter does not live in the node alphabet");
  require(rc_valid(rc, false), Err::InvalidArgument, "invalid rigged configuration");

  RC vrc = virtualize_rc(rc, tab.fold);
  const std::vector<int>& enc = tab.enc[b.idx];
  int pos = int(enc.size());
  int slot = int(tab.slot_nodes.size());
  for (auto op = tab.plan.rbegin(); op != tab.plan.rend(); ++op) {
    if (op->kind == PlanOp::Ls) {
      vrc = ls_inverse(vrc);
    } else if (op->kind == PlanOp::Lb) {
      vrc = lb_inverse(vrc, op->node);
    } else {
      --pos;
      --slot;
      Letter amb{tab.slot_nodes[slot], enc[pos]};
      vrc = node_route(tab.fold.ambient, op->node) == Route::SinkAdjoint
                ? delta_adjoint_inv(vrc, amb)
                : delta_minuscule_inv(vrc, op->node, amb);
    }
  }
  RC out = devirtualize_rc(vrc, type, with_front(rc.spec, {{r, 1}}), tab.fold);
  DeltaResult check = delta_ambient(out);
  require(check.rc == canon(rc) && check.ret == b, Err::Verify,
          "(rc, letter) is not in the image of the ambient walk");
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

DeltaResult delta(const RC& rc) {
  require(!rc.spec.empty(), Err::InvalidArgument, "empty tensor product");
  Factor f = rc.spec.front();
  require(f.s == 1, Err::InvalidArgument, "leading factor needs a left split first");
  switch (node_route(rc.type, f.r)) {
    case Route::SinkMinuscule:
    case Route::DirectMinuscule:
      return delta_minuscule(rc, f.r);
    case Route::SinkAdjoint:
      return delta_adjoint(rc);
    case Route::Ambient:
      return delta_ambient(rc);
    case Route::LbEdge:
      fail(Err::InvalidArgument, "leading factor splits via lb, not delta");
  }
  fail(Err::Internal, "unreachable");
}

RC delta_inv(const RC& rc, int r, const Letter& b) {
  switch (node_route(rc.type, r)) {
    case Route::SinkMinuscule:
    case Route::DirectMinuscule:
      return delta_minuscule_inv(rc, r, b);
    case Route::SinkAdjoint:
      return delta_adjoint_inv(rc, b);
    case Route::Ambient:
      return delta_ambient_inv(rc, r, b);
    case Route::LbEdge:
      fail(Err::InvalidArgument, "node restores via the lb inverse, not a walk");
  }
  fail(Err::Internal, "unreachable");
}

// ---------------------------------------------------------------------------
// Full bijection

std::vector<KRTableau> phi(const RC& rc, std::vector<PhiStep>* trace) {
  require(rc_valid(rc, false), Err::InvalidArgument, "invalid rigged configuration");
  const std::string& type = rc.type;
  std::vector<KRTableau> tabs;
  RC cur = canon(rc);
  for (const Factor& factor : rc.spec) {
    KRTableau tab;
    tab.factor = factor;
    tab.alphabet = alphabet_node(type, factor.r);
    for (i64 col = 0; col < factor.s; ++col) {
      if (col + 1 < factor.s) {
        if (trace) trace->push_back({PhiStep::Op::Ls, cur, std::nullopt});
        cur = ls_rc(cur);
      }
      size_t target = cur.spec.size() - 1;
      std::vector<int> cells;  // bottom to top
      while (cur.spec.size() > target) {
        Factor f = cur.spec.front();
        if (f.s == 1 && node_route(type, f.r) == Route::LbEdge) {
          if (trace) trace->push_back({PhiStep::Op::Lb, cur, std::nullopt});
          cur = lb_rc(cur);
        } else {
          DeltaResult res = delta(cur);
          if (trace) trace->push_back({PhiStep::Op::Delta, cur, res});
          require(res.ret.node == tab.alphabet, Err::Internal, "alphabet mismatch");
          cells.push_back(res.ret.idx);
          cur = res.rc;
        }
      }
      std::reverse(cells.begin(), cells.end());
      tab.cells.push_back(std::move(cells));
    }
    tabs.push_back(std::move(tab));
  }
  require(cur.spec.empty(), Err::Internal, "phi did not consume the spec");
  for (const auto& rows : cur.nu)
    require(rows.empty(), Err::Internal, "phi left boxes behind");
  return tabs;
}

namespace {

std::vector<int> lb_chain(const std::string& type, int r) {
  std::vector<int> chain{r};
  const LbDiagram& d = lb_diagram(type);
  while (const LbEdge* e = d.edge_from(chain.back())) chain.push_back(e->to);
  return chain;
}

}  // namespace

RC phi_inv(const std::string& type, const std::vector<KRTableau>& tabs) {
  RC cur(type, {});
  for (auto tab = tabs.rbegin(); tab != tabs.rend(); ++tab) {
    int r = tab->factor.r;
    i64 s = tab->factor.s;
    require(tab->alphabet == alphabet_node(type, r), Err::InvalidArgument,
            "tableau alphabet mismatch");
    std::vector<int> chain = lb_chain(type, r);
    size_t h = chain.size();
    require(i64(tab->cells.size()) == s, Err::InvalidArgument, "column count mismatch");
    for (i64 col = s - 1; col >= 0; --col) {
      const std::vector<int>& cells = tab->cells[col];
      require(cells.size() == h, Err::InvalidArgument, "column height mismatch");
      // Cells run top-to-bottom, walk returns bottom-to-top; undo the walks
      // top cell first, interleaved with the lb merges.
      int sink = chain.back();
      cur = delta_inv(cur, sink, {tab->alphabet, cells[0]});
      for (int j = int(h) - 2; j >= 0; --j) {
        cur = delta_inv(cur, sink, {tab->alphabet, cells[h - 1 - j]});
        cur = lb_inverse(cur, chain[j]);
      }
      if (col + 1 < s) cur = ls_inverse(cur);
    }
  }
  return cur;
}

std::vector<Letter> tableau_word(const std::vector<KRTableau>& tabs) {
  std::vector<Letter> word;
  for (const KRTableau& tab : tabs)
    for (const auto& col : tab.cells)
      for (auto it = col.rbegin(); it != col.rend(); ++it)
        word.push_back({tab.alphabet, *it});
  return word;
}

// ---------------------------------------------------------------------------
// Star-conjugated maps

RC theta_rc(const RC& rc) {
  RC out;
  out.type = rc.type;
  out.spec = Spec(rc.spec.rbegin(), rc.spec.rend());
  out.nu = rc.nu;
  for (int a = 1; a <= rc.rank(); ++a)
    for (auto& row : out.nu[a - 1]) {
      i64 p = vacancy(rc, a, row.len);
      require(0 <= row.rig && row.rig <= p, Err::InvalidArgument,
              "complementing riggings needs 0 <= rigging <= vacancy");
      row.rig = p - row.rig;
    }
  out.canonicalize();
  return out;
}

int lusztig_star(const Crystal& c, int idx) {
  static std::map<const Crystal*, std::vector<int>> cache;
  auto it = cache.find(&c);
  if (it == cache.end()) {
    const Cartan& ct = cartan(c.type);
    int n = c.n;
    // xi(a) with -w_0 alpha_a = alpha_{xi(a)}, computed by reflecting the
    // fundamental weight into the antidominant chamber.
    std::vector<int> xi(n + 1, 0);
    for (int a = 1; a <= n; ++a) {
      IntVec mu = ct.fundamental_weight(a);
      bool moved = true;
      while (moved) {
        moved = false;
        for (int b = 1; b <= n; ++b) {
          if (mu[b - 1] > 0) {
            i64 k = mu[b - 1];
            IntVec al = ct.alpha_in_weights(b);
            for (int j = 0; j < n; ++j) mu[j] -= k * al[j];
            moved = true;
          }
        }
      }
      int target = 0;
      for (int b = 1; b <= n; ++b) {
        IntVec neg = ct.fundamental_weight(b);
        for (auto& x : neg) x = -x;
        if (mu == neg) target = b;
      }
      require(target > 0, Err::Internal, "w_0 image is not minus a fundamental weight");
      xi[a] = target;
    }

    std::vector<int> star(c.size(), -1);
    for (int h : c.highest_weight_elements()) {
      int low = h;
      bool moved = true;
      while (moved) {
        moved = false;
        for (int a = 1; a <= n; ++a)
          if (c.f(a, low) >= 0) {
            low = c.f(a, low);
            moved = true;
            break;
          }
      }
      star[h] = low;
      std::deque<int> queue{h};
      while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int a = 1; a <= n; ++a) {
          int y = c.f(a, x);
          if (y < 0) continue;
          int img = c.e(xi[a], star[x]);
          require(img >= 0, Err::Internal, "star image fell off the crystal");
          if (star[y] < 0) {
            star[y] = img;
            queue.push_back(y);
          } else {
            require(star[y] == img, Err::Internal, "star image inconsistent");
          }
        }
      }
    }
    for (int i = 0; i < c.size(); ++i)
      require(star[i] >= 0, Err::Internal, "star left an element unmapped");
    it = cache.emplace(&c, std::move(star)).first;
  }
  require(idx >= 0 && idx < c.size(), Err::InvalidArgument, "bad crystal index");
  return it->second[idx];
}

DeltaResult delta_star(const RC& rc) {
  RC tr = theta_rc(rc);
  DeltaResult res = delta(tr);
  const Crystal& c = letter_crystal(rc.type, res.ret.node);
  DeltaResult out;
  out.rc = theta_rc(res.rc);
  out.ret = {res.ret.node, lusztig_star(c, res.ret.idx)};
  out.steps = res.steps;
  out.qflag = res.qflag;
  return out;
}

RC rb_rc(const RC& rc) { return theta_rc(lb_rc(theta_rc(rc))); }

// ---------------------------------------------------------------------------
// Fillings

KRTableau filling_map(const std::string& type, int r, i64 s, i64 k) {
  (void)type;
  (void)r;
  (void)s;
  (void)k;
  fail(Err::Unsupported, "filling patterns are provided for type E6~1, r in {2, 3, 5}");
}

}  // namespace rcbij
