#include "cartan.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace rcbij {

namespace {

// Solve M x = rhs for square rational M by Gaussian elimination.
RatVec solve_linear(RatMat M, RatVec rhs) {
  const size_t n = M.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col] == Rat(0)) ++piv;
    require(piv < n, Err::Internal, "singular matrix in solve_linear");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    Rat d = M[col][col];
    for (size_t k = col; k < n; ++k) M[col][k] /= d;
    rhs[col] /= d;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col] == Rat(0)) continue;
      Rat f = M[r][col];
      for (size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

// Primitive positive integer null vector of an (n+1)x(n+1) integer matrix of
// corank one, normalized so that entry 0 is positive.
IntVec null_vector(const IntMat& M) {
  const size_t n1 = M.size();
  // Set x_0 = 1 and solve rows 1..n for x_1..x_n (these rows have full rank
  // for affine Cartan matrices).
  RatMat sub(n1 - 1, RatVec(n1 - 1, Rat(0)));
  RatVec rhs(n1 - 1, Rat(0));
  for (size_t r = 1; r < n1; ++r) {
    for (size_t c = 1; c < n1; ++c) sub[r - 1][c - 1] = Rat(M[r][c]);
    rhs[r - 1] = Rat(-M[r][0]);
  }
  RatVec x = solve_linear(sub, rhs);
  // Verify row 0 as a consistency check.
  Rat acc(M[0][0]);
  for (size_t c = 1; c < n1; ++c) acc += Rat(M[0][c]) * x[c - 1];
  require(acc == Rat(0), Err::Internal, "null_vector: inconsistent system");
  i64 lcm = 1;
  for (const Rat& v : x) lcm = std::lcm(lcm, v.denominator());
  IntVec out(n1);
  out[0] = lcm;
  for (size_t c = 1; c < n1; ++c) {
    Rat v = x[c - 1] * lcm;
    out[c] = v.numerator();
    require(v.denominator() == 1 && out[c] > 0, Err::Internal, "null_vector: bad entry");
  }
  i64 g = 0;
  for (i64 v : out) g = std::gcd(g, v);
  for (i64& v : out) v /= g;
  return out;
}

IntMat transpose(const IntMat& M) {
  IntMat T(M[0].size(), IntVec(M.size()));
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) T[j][i] = M[i][j];
  return T;
}

}  // namespace

std::string TypeName::str() const {
  std::ostringstream os;
  os << family << index << '~' << twist;
  return os.str();
}

TypeName parse_type_name(const std::string& s) {
  TypeName t;
  size_t pos = 0;
  require(!s.empty() && s[0] >= 'A' && s[0] <= 'G', Err::InvalidArgument,
          "bad type name '" + s + "': expected family letter A-G");
  t.family = s[pos++];
  size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  require(pos > start, Err::InvalidArgument, "bad type name '" + s + "': missing rank");
  t.index = std::stoi(s.substr(start, pos - start));
  require(pos < s.size() && s[pos] == '~', Err::InvalidArgument,
          "bad type name '" + s + "': expected '~twist'");
  ++pos;
  require(pos + 1 == s.size() && std::isdigit(static_cast<unsigned char>(s[pos])),
          Err::InvalidArgument, "bad type name '" + s + "': expected single twist digit");
  t.twist = s[pos] - '0';
  return t;
}

Cartan::Cartan(const std::string& type_name) : type_(parse_type_name(type_name)) {
  name_ = type_.str();
  build_diagram();
  solve_marks();
  build_roots();
  build_foldings();
}

void Cartan::build_diagram() {
  const char f = type_.family;
  const int m = type_.index;
  const int tw = type_.twist;

  // edge (i, j, A[i][j], A[j][i])
  struct Edge {
    int i, j, aij, aji;
  };
  std::vector<Edge> edges;
  auto single = [&](int i, int j) { edges.push_back({i, j, -1, -1}); };

  if (f == 'A' && tw == 1) {
    require(m >= 1, Err::InvalidArgument, "A rank must be >= 1");
    n_ = m;
    if (n_ == 1) {
      edges.push_back({0, 1, -2, -2});
    } else {
      for (int a = 0; a < n_; ++a) single(a, a + 1);
      single(n_, 0);
    }
  } else if (f == 'B' && tw == 1) {
    require(m >= 3, Err::InvalidArgument, "B rank must be >= 3 (use C2~1 for rank 2)");
    n_ = m;
    single(0, 2);
    for (int a = 1; a + 1 < n_; ++a) single(a, a + 1);
    edges.push_back({n_ - 1, n_, -1, -2});
  } else if (f == 'C' && tw == 1) {
    require(m >= 2, Err::InvalidArgument, "C rank must be >= 2");
    n_ = m;
    edges.push_back({0, 1, -1, -2});
    for (int a = 1; a + 1 < n_; ++a) single(a, a + 1);
    edges.push_back({n_ - 1, n_, -2, -1});
  } else if (f == 'D' && tw == 1) {
    require(m >= 4, Err::InvalidArgument, "D~1 rank must be >= 4");
    n_ = m;
    single(0, 2);
    single(1, 2);
    for (int a = 2; a + 2 < n_; ++a) single(a, a + 1);
    single(n_ - 2, n_ - 1);
    single(n_ - 2, n_);
  } else if (f == 'E' && tw == 1) {
    require(m == 6 || m == 7 || m == 8, Err::InvalidArgument, "E rank must be 6, 7, or 8");
    n_ = m;
    single(1, 3);
    single(3, 4);
    single(4, 5);
    single(5, 6);
    single(2, 4);
    if (m == 6) {
      single(0, 2);
    } else if (m == 7) {
      single(6, 7);
      single(0, 1);
    } else {
      single(6, 7);
      single(7, 8);
      single(0, 8);
    }
  } else if (f == 'F' && tw == 1) {
    require(m == 4, Err::InvalidArgument, "F rank must be 4");
    n_ = 4;
    single(0, 1);
    single(1, 2);
    edges.push_back({2, 3, -1, -2});
    single(3, 4);
  } else if (f == 'G' && tw == 1) {
    require(m == 2, Err::InvalidArgument, "G rank must be 2");
    n_ = 2;
    single(0, 2);
    edges.push_back({1, 2, -3, -1});
  } else if (f == 'A' && tw == 2) {
    require(m % 2 == 1, Err::Unsupported,
            "type A" + std::to_string(m) + "~2 is out of scope");
    require(m >= 5, Err::InvalidArgument, "A~2 rank must be an odd number >= 5");
    n_ = (m + 1) / 2;  // classical C_n
    single(0, 2);
    single(1, 2);
    for (int a = 2; a + 1 < n_; ++a) single(a, a + 1);
    edges.push_back({n_ - 1, n_, -2, -1});
  } else if (f == 'D' && tw == 2) {
    require(m >= 3, Err::InvalidArgument, "D~2 rank must be >= 3");
    n_ = m - 1;  // classical B_n
    edges.push_back({0, 1, -2, -1});
    for (int a = 1; a + 1 < n_; ++a) single(a, a + 1);
    edges.push_back({n_ - 1, n_, -1, -2});
  } else if (f == 'E' && tw == 2) {
    require(m == 6, Err::InvalidArgument, "E~2 rank must be 6");
    n_ = 4;
    single(0, 1);
    single(1, 2);
    edges.push_back({2, 3, -2, -1});
    single(3, 4);
  } else if (f == 'D' && tw == 3) {
    require(m == 4, Err::InvalidArgument, "D~3 rank must be 4");
    n_ = 2;
    single(0, 1);
    edges.push_back({1, 2, -3, -1});
  } else {
    fail(Err::Unsupported, "unsupported type " + name_);
  }

  affine_.assign(n_ + 1, IntVec(n_ + 1, 0));
  for (int i = 0; i <= n_; ++i) affine_[i][i] = 2;
  for (const auto& e : edges) {
    affine_[e.i][e.j] = e.aij;
    affine_[e.j][e.i] = e.aji;
  }
  classical_.assign(n_, IntVec(n_, 0));
  for (int a = 1; a <= n_; ++a)
    for (int b = 1; b <= n_; ++b) classical_[a - 1][b - 1] = affine_[a][b];

  // Inverse of the classical Cartan matrix, column by column.
  RatMat M(n_, RatVec(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) M[i][j] = Rat(classical_[i][j]);
  inv_classical_.assign(n_, RatVec(n_, Rat(0)));
  for (int col = 0; col < n_; ++col) {
    RatVec e(n_, Rat(0));
    e[col] = Rat(1);
    RatVec x = solve_linear(M, e);
    for (int row = 0; row < n_; ++row) inv_classical_[row][col] = x[row];
  }
}

void Cartan::solve_marks() {
  c_ = null_vector(affine_);
  cv_ = null_vector(transpose(affine_));
  require(c_[0] == 1 && cv_[0] == 1, Err::Internal, "marks not normalized");

  auto as_int = [](const Rat& r, const char* what) -> i64 {
    require(r.denominator() == 1, Err::Internal, std::string("non-integer ") + what);
    return r.numerator();
  };
  t_.resize(n_ + 1);
  tv_.resize(n_ + 1);
  for (int a = 0; a <= n_; ++a) {
    t_[a] = as_int(std::max(Rat(c_[a], cv_[a]), Rat(cv_[0])), "t_a");
    tv_[a] = as_int(std::max(Rat(cv_[a], c_[a]), Rat(c_[0])), "tvee_a");
  }
  gamma_.assign(n_ + 1, 1);
  if (untwisted()) {
    i64 tmax = *std::max_element(t_.begin(), t_.end());
    for (int a = 0; a <= n_; ++a) {
      require(tmax % t_[a] == 0, Err::Internal, "gamma not integral");
      gamma_[a] = tmax / t_[a];
    }
  }

  pair_.assign(n_, RatVec(n_));
  for (int a = 1; a <= n_; ++a)
    for (int b = 1; b <= n_; ++b)
      pair_[a - 1][b - 1] = Rat(cv_[a], c_[a]) * Rat(affine_[a][b]);
  for (int a = 1; a <= n_; ++a)
    for (int b = 1; b <= n_; ++b)
      require(pair_[a - 1][b - 1] == pair_[b - 1][a - 1], Err::Internal,
              "invariant form not symmetric");
}

void Cartan::build_roots() {
  std::set<IntVec> seen;
  std::vector<IntVec> queue;
  for (int a = 1; a <= n_; ++a) {
    IntVec r(n_, 0);
    r[a - 1] = 1;
    seen.insert(r);
    queue.push_back(r);
  }
  while (!queue.empty()) {
    IntVec r = queue.back();
    queue.pop_back();
    for (int b = 1; b <= n_; ++b) {
      i64 pairing = 0;  // <h_b, r>
      for (int a = 1; a <= n_; ++a) pairing += affine_[b][a] * r[a - 1];
      IntVec refl = r;
      refl[b - 1] -= pairing;
      if (seen.insert(refl).second) queue.push_back(refl);
    }
  }
  for (const IntVec& r : seen) {
    bool nonneg = std::all_of(r.begin(), r.end(), [](i64 v) { return v >= 0; });
    if (nonneg) pos_roots_.push_back(r);
  }
  auto by_height = [](const IntVec& x, const IntVec& y) {
    i64 hx = std::accumulate(x.begin(), x.end(), i64(0));
    i64 hy = std::accumulate(y.begin(), y.end(), i64(0));
    if (hx != hy) return hx < hy;
    return x < y;
  };
  std::sort(pos_roots_.begin(), pos_roots_.end(), by_height);
  all_roots_ = pos_roots_;
  for (const IntVec& r : pos_roots_) {
    IntVec neg(r.size());
    for (size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
    all_roots_.push_back(neg);
  }
  for (size_t i = 0; i < all_roots_.size(); ++i) root_index_[all_roots_[i]] = int(i);

  Rat min_norm = pair_root_root(pos_roots_[0], pos_roots_[0]);
  for (const IntVec& r : pos_roots_) min_norm = std::min(min_norm, pair_root_root(r, r));
  for (const IntVec& r : pos_roots_)
    if (pair_root_root(r, r) == min_norm) short_pos_roots_.push_back(r);

  theta_.assign(n_, 0);
  for (int a = 1; a <= n_; ++a) theta_[a - 1] = c_[a];
  require(root_index_.count(theta_) > 0, Err::Internal, "theta is not a root");

  for (int a = 1; a <= n_; ++a)
    if (affine_[0][a] != 0) adjoint_nodes_.push_back(a);
}

bool Cartan::simply_laced() const {
  if (!untwisted()) return false;
  for (int a = 1; a <= n_; ++a)
    for (int b = 1; b <= n_; ++b)
      if (a != b && affine_[a][b] < -1) return false;
  return true;
}

bool Cartan::node_is_short(int a) const {
  Rat mn = alpha_norm2(1);
  for (int b = 2; b <= n_; ++b) mn = std::min(mn, alpha_norm2(b));
  return alpha_norm2(a) == mn;
}

Rat Cartan::upsilon(int a) const {
  require(a >= 1 && a <= n_, Err::InvalidArgument, "upsilon: bad node");
  char f = type_.family;
  if (type_.twist == 1) {
    if (f == 'C' && a == n_) return Rat(2);
    if (f == 'B' && a == n_) return Rat(1, 2);
    if (f == 'F' && (a == 3 || a == 4)) return Rat(1, 2);
    if (f == 'G' && a == 1) return Rat(1, 3);
  }
  return Rat(1);
}

bool Cartan::is_root(const IntVec& root) const { return root_index_.count(root) > 0; }

bool Cartan::root_is_short(const IntVec& root) const {
  require(is_root(root), Err::Internal, "root_is_short: not a root");
  Rat mn = pair_root_root(short_pos_roots_[0], short_pos_roots_[0]);
  return pair_root_root(root, root) == mn;
}

i64 Cartan::theta_height() const {
  return std::accumulate(theta_.begin(), theta_.end(), i64(0));
}

IntVec Cartan::fundamental_weight(int a) const {
  IntVec wt(n_, 0);
  wt[a - 1] = 1;
  return wt;
}

IntVec Cartan::alpha_in_weights(int a) const {
  IntVec wt(n_, 0);
  for (int b = 1; b <= n_; ++b) wt[b - 1] = affine_[b][a];
  return wt;
}

IntVec Cartan::root_to_weight(const IntVec& root) const {
  IntVec wt(n_, 0);
  for (int b = 1; b <= n_; ++b) {
    i64 acc = 0;
    for (int a = 1; a <= n_; ++a) acc += affine_[b][a] * root[a - 1];
    wt[b - 1] = acc;
  }
  return wt;
}

RatVec Cartan::weight_to_root(const IntVec& wt) const {
  RatVec out(n_, Rat(0));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) out[a] += inv_classical_[a][b] * Rat(wt[b]);
  return out;
}

Rat Cartan::pair_weight_root(const IntVec& wt, const IntVec& root) const {
  Rat acc(0);
  for (int a = 1; a <= n_; ++a)
    acc += Rat(root[a - 1]) * alpha_norm2(a) / Rat(2) * Rat(wt[a - 1]);
  return acc;
}

Rat Cartan::pair_root_root(const IntVec& r1, const IntVec& r2) const {
  Rat acc(0);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) acc += Rat(r1[a]) * Rat(r2[b]) * pair_[a][b];
  return acc;
}

void Cartan::build_foldings() {
  const char f = type_.family;
  const int tw = type_.twist;
  auto identity_pre = [&](int upto) {
    std::vector<std::vector<int>> pre(upto + 1);
    for (int a = 1; a <= upto; ++a) pre[a] = {a};
    return pre;
  };

  if (f == 'B' && tw == 1) {
    Folding fd;
    fd.ambient = "D" + std::to_string(n_ + 1) + "~1";
    fd.preimage = identity_pre(n_);
    fd.preimage[n_] = {n_, n_ + 1};
    fd.gamma.assign(n_ + 1, 2);
    fd.gamma[n_] = 1;
    sl_folding_ = fd;
    dual_folding_ = fd;  // the double-column ambient for B_n is already simply laced
  } else if (f == 'C' && tw == 1) {
    IntVec g(n_ + 1, 1);
    g[0] = 2;
    g[n_] = 2;
    Folding sl;
    sl.ambient = "A" + std::to_string(2 * n_ - 1) + "~1";
    sl.preimage.assign(n_ + 1, {});
    for (int a = 1; a < n_; ++a) sl.preimage[a] = {a, 2 * n_ - a};
    sl.preimage[n_] = {n_};
    sl.gamma = g;
    sl_folding_ = sl;
    Folding dual;
    dual.ambient = "D" + std::to_string(n_ + 1) + "~2";
    dual.preimage = identity_pre(n_);
    dual.gamma = g;
    dual_folding_ = dual;
  } else if (f == 'F' && tw == 1) {
    IntVec g = {2, 2, 2, 1, 1};
    Folding sl;
    sl.ambient = "E6~1";
    sl.preimage = {{}, {2}, {4}, {3, 5}, {1, 6}};
    sl.gamma = g;
    sl_folding_ = sl;
    Folding dual;
    dual.ambient = "E6~2";
    dual.preimage = identity_pre(4);
    dual.gamma = g;
    dual_folding_ = dual;
  } else if (f == 'G' && tw == 1) {
    IntVec g = {3, 1, 3};
    Folding sl;
    sl.ambient = "D4~1";
    sl.preimage = {{}, {1, 3, 4}, {2}};
    sl.gamma = g;
    sl_folding_ = sl;
    Folding dual;
    dual.ambient = "D4~3";
    dual.preimage = {{}, {2}, {1}};
    dual.gamma = g;
    dual_folding_ = dual;
  } else if (f == 'A' && tw == 2) {
    Folding sl;
    sl.ambient = "D" + std::to_string(n_ + 1) + "~1";
    sl.preimage = identity_pre(n_);
    sl.preimage[n_] = {n_, n_ + 1};
    sl.gamma.assign(n_ + 1, 1);
    sl_folding_ = sl;
  } else if (f == 'D' && tw == 2) {
    Folding sl;
    sl.ambient = "A" + std::to_string(2 * n_ - 1) + "~1";
    sl.preimage.assign(n_ + 1, {});
    for (int a = 1; a < n_; ++a) sl.preimage[a] = {a, 2 * n_ - a};
    sl.preimage[n_] = {n_};
    sl.gamma.assign(n_ + 1, 1);
    sl_folding_ = sl;
  } else if (f == 'E' && tw == 2) {
    Folding sl;
    sl.ambient = "E6~1";
    sl.preimage = {{}, {2}, {4}, {3, 5}, {1, 6}};
    sl.gamma.assign(5, 1);
    sl_folding_ = sl;
  } else if (f == 'D' && tw == 3) {
    Folding sl;
    sl.ambient = "D4~1";
    sl.preimage = {{}, {2}, {1, 3, 4}};
    sl.gamma.assign(3, 1);
    sl_folding_ = sl;
  }
  // Untwisted simply-laced types need no folding.
}

std::optional<Folding> Cartan::simply_laced_folding() const { return sl_folding_; }
std::optional<Folding> Cartan::dual_folding() const { return dual_folding_; }

const Cartan& cartan(const std::string& type_name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Cartan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(type_name);
  if (it == cache.end())
    it = cache.emplace(type_name, std::make_unique<Cartan>(type_name)).first;
  return *it->second;
}

}  // namespace rcbij
