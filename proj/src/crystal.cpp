#include "crystal.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <sstream>

namespace rcbij {

Elem Elem::weight(IntVec wt) {
  Elem e;
  e.kind = Kind::Weight;
  e.v = std::move(wt);
  return e;
}

Elem Elem::root(IntVec beta) {
  Elem e;
  e.kind = Kind::Root;
  e.v = std::move(beta);
  return e;
}

Elem Elem::null(int a) {
  Elem e;
  e.kind = Kind::Null;
  e.node = a;
  return e;
}

Elem Elem::trivial() { return Elem{}; }

Elem Elem::pair(Elem left, Elem right) {
  Elem e;
  e.kind = Kind::Pair;
  e.parts.reserve(2);
  e.parts.push_back(std::move(left));
  e.parts.push_back(std::move(right));
  return e;
}

std::vector<const Elem*> Elem::flatten() const {
  std::vector<const Elem*> out;
  if (kind == Kind::Pair) {
    for (const Elem& p : parts) {
      auto sub = p.flatten();
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else {
    out.push_back(this);
  }
  return out;
}

std::string elem_key(const Elem& e) {
  std::ostringstream os;
  switch (e.kind) {
    case Elem::Kind::Weight:
      os << 'W';
      for (i64 x : e.v) os << ',' << x;
      break;
    case Elem::Kind::Root:
      os << 'R';
      for (i64 x : e.v) os << ',' << x;
      break;
    case Elem::Kind::Null:
      os << 'N' << e.node;
      break;
    case Elem::Kind::Trivial:
      os << 'T';
      break;
    case Elem::Kind::Pair:
      os << "P(" << elem_key(e.parts[0]) << ")(" << elem_key(e.parts[1]) << ')';
      break;
  }
  return os.str();
}

bool operator==(const Elem& x, const Elem& y) { return elem_key(x) == elem_key(y); }

int Crystal::find(const Elem& e) const {
  auto it = index_.find(elem_key(e));
  return it == index_.end() ? -1 : it->second;
}

int Crystal::index_of(const Elem& e) const {
  int i = find(e);
  require(i >= 0, Err::InvalidArgument, "crystal: element not found: " + elem_key(e));
  return i;
}

std::vector<int> Crystal::highest_weight_elements() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    bool hw = true;
    for (int a = 1; a <= n && hw; ++a) hw = (e_op[a][i] < 0);
    if (hw) out.push_back(i);
  }
  return out;
}

int Crystal::to_highest_weight(int idx, std::vector<int>* path_colors) const {
  if (path_colors) path_colors->clear();
  int guard = 0;
  for (;;) {
    int a = 0;
    for (int b = 1; b <= n; ++b) {
      if (e_op[b][idx] >= 0) {
        a = b;
        break;
      }
    }
    if (a == 0) return idx;
    idx = e_op[a][idx];
    if (path_colors) path_colors->push_back(a);
    require(++guard <= size(), Err::Internal, "crystal: raising did not terminate");
  }
}

void Crystal::finalize() {
  const Cartan& C = cartan(type);
  const int N = size();
  require(int(e_op.size()) == n + 1 && int(f_op.size()) == n + 1, Err::Internal,
          "crystal: operator tables misshapen");
  require(int(wts.size()) == N && int(elems.size()) == N, Err::Internal,
          "crystal: element tables misshapen");

  IntVec theta_w = C.root_to_weight(C.theta());
  std::vector<IntVec> alpha_w(n + 1);
  for (int a = 1; a <= n; ++a) alpha_w[a] = C.alpha_in_weights(a);

  for (int a = 0; a <= n; ++a) {
    if (a == 0 && !affine) continue;
    for (int i = 0; i < N; ++i) {
      int j = f_op[a][i];
      if (j >= 0) {
        require(e_op[a][j] == i, Err::Internal, "crystal: e is not inverse to f");
        IntVec expect = wts[i];
        for (int k = 0; k < n; ++k)
          expect[k] += (a == 0 ? theta_w[k] : -alpha_w[a][k]);
        require(wts[j] == expect, Err::Internal, "crystal: arrow breaks weight");
      }
      int k = e_op[a][i];
      if (k >= 0) require(f_op[a][k] == i, Err::Internal, "crystal: f is not inverse to e");
    }
  }

  auto walk = [&](const std::vector<int>& ops, int i) {
    i64 cnt = 0;
    int cur = i;
    while (ops[cur] >= 0) {
      cur = ops[cur];
      require(++cnt <= N, Err::Internal, "crystal: cyclic string");
    }
    return cnt;
  };
  eps_tab.assign(n + 1, std::vector<i64>(N, 0));
  phi_tab.assign(n + 1, std::vector<i64>(N, 0));
  for (int a = 0; a <= n; ++a) {
    if (a == 0 && !affine) continue;
    for (int i = 0; i < N; ++i) {
      eps_tab[a][i] = walk(e_op[a], i);
      phi_tab[a][i] = walk(f_op[a], i);
    }
  }

  for (int a = 1; a <= n; ++a)
    for (int i = 0; i < N; ++i)
      require(phi_tab[a][i] - eps_tab[a][i] == wts[i][a - 1], Err::Internal,
              "crystal: string length clashes with weight");
  if (affine) {
    for (int i = 0; i < N; ++i) {
      RatVec x = C.weight_to_root(wts[i]);
      Rat h0(0);
      for (int b = 1; b <= n; ++b) h0 += Rat(C.a(0, b)) * x[b - 1];
      require(Rat(phi_tab[0][i] - eps_tab[0][i]) == h0, Err::Internal,
              "crystal: affine string length clashes with weight");
    }
  }

  index_.clear();
  for (int i = 0; i < N; ++i) {
    auto [it, fresh] = index_.emplace(elem_key(elems[i]), i);
    (void)it;
    require(fresh, Err::Internal, "crystal: duplicate element");
  }
}

Crystal minuscule_crystal(const std::string& type, int r, bool with_affine) {
  const Cartan& C = cartan(type);
  const int n = C.rank();
  require(1 <= r && r <= n, Err::InvalidArgument, "minuscule crystal: node out of range");

  Crystal B;
  B.type = C.name();
  B.n = n;
  B.affine = with_affine;

  std::vector<IntVec> alpha_w(n + 1);
  for (int a = 1; a <= n; ++a) alpha_w[a] = C.alpha_in_weights(a);

  std::map<IntVec, int> idx;
  std::vector<IntVec> order;
  order.push_back(C.fundamental_weight(r));
  idx[order[0]] = 0;
  // Every element of a highest weight crystal is reachable from the highest
  // weight by lowering, so closing under f suffices.
  std::vector<std::array<int, 2>> pending;  // (element, node) f-arrows
  for (size_t h = 0; h < order.size(); ++h) {
    IntVec mu = order[h];
    for (int a = 1; a <= n; ++a) {
      i64 k = mu[a - 1];
      require(-1 <= k && k <= 1, Err::Internal, "minuscule crystal: weight is not minuscule");
      if (k != 1) continue;
      IntVec nu = mu;
      for (int j = 0; j < n; ++j) nu[j] -= alpha_w[a][j];
      auto [it, fresh] = idx.emplace(nu, int(order.size()));
      if (fresh) order.push_back(nu);
      pending.push_back({int(h) * (n + 1) + a, it->second});
    }
  }

  const int N = int(order.size());
  B.elems.reserve(N);
  for (const IntVec& mu : order) B.elems.push_back(Elem::weight(mu));
  B.wts = order;
  B.e_op.assign(n + 1, std::vector<int>(N, -1));
  B.f_op.assign(n + 1, std::vector<int>(N, -1));
  for (auto [src_a, dst] : pending) {
    int src = src_a / (n + 1), a = src_a % (n + 1);
    B.f_op[a][src] = dst;
    B.e_op[a][dst] = src;
  }

  if (with_affine) {
    const IntVec& theta = C.theta();
    IntVec theta_w = C.root_to_weight(theta);
    for (int i = 0; i < N; ++i) {
      Rat p = C.pair_weight_root(order[i], theta);
      require(p == Rat(-1) || p == Rat(0) || p == Rat(1), Err::Internal,
              "minuscule crystal: theta string too long");
      if (p == Rat(-1)) {
        IntVec nu = order[i];
        for (int j = 0; j < n; ++j) nu[j] += theta_w[j];
        auto it = idx.find(nu);
        require(it != idx.end(), Err::Internal, "minuscule crystal: 0-arrow leaves crystal");
        B.f_op[0][i] = it->second;
        B.e_op[0][it->second] = i;
      }
    }
  }

  B.finalize();
  return B;
}

Crystal root_model_crystal(const std::string& type, bool little, bool with_trivial,
                           bool with_affine) {
  require(!with_affine || with_trivial, Err::InvalidArgument,
          "root model crystal: 0-arrows need the trivial element");
  const Cartan& C = cartan(type);
  const int n = C.rank();

  Crystal B;
  B.type = C.name();
  B.n = n;
  B.affine = with_affine;

  std::map<IntVec, int> root_idx;
  for (const IntVec& beta : C.roots()) {
    if (little && !C.root_is_short(beta)) continue;
    root_idx[beta] = int(B.elems.size());
    B.elems.push_back(Elem::root(beta));
    B.wts.push_back(C.root_to_weight(beta));
  }
  std::vector<int> null_idx(n + 1, -1);
  for (int a = 1; a <= n; ++a) {
    if (little && !C.node_is_short(a)) continue;
    null_idx[a] = int(B.elems.size());
    B.elems.push_back(Elem::null(a));
    B.wts.push_back(IntVec(n, 0));
  }
  int trivial_idx = -1;
  if (with_trivial) {
    trivial_idx = int(B.elems.size());
    B.elems.push_back(Elem::trivial());
    B.wts.push_back(IntVec(n, 0));
  }

  const int N = int(B.elems.size());
  B.e_op.assign(n + 1, std::vector<int>(N, -1));
  B.f_op.assign(n + 1, std::vector<int>(N, -1));

  auto link = [&](int a, int src, int dst) {
    B.f_op[a][src] = dst;
    B.e_op[a][dst] = src;
  };
  for (int a = 1; a <= n; ++a) {
    IntVec alpha(n, 0);
    alpha[a - 1] = 1;
    IntVec malpha(n, 0);
    malpha[a - 1] = -1;
    for (const auto& [beta, i] : root_idx) {
      if (beta == alpha) {
        link(a, i, null_idx[a]);
        continue;
      }
      IntVec down = beta;
      down[a - 1] -= 1;
      auto it = root_idx.find(down);
      if (it != root_idx.end()) link(a, i, it->second);
    }
    if (null_idx[a] >= 0) link(a, null_idx[a], root_idx.at(malpha));
  }

  if (with_affine) {
    const IntVec& theta = C.theta();
    IntVec mtheta = theta;
    for (i64& x : mtheta) x = -x;
    link(0, trivial_idx, root_idx.at(theta));
    link(0, root_idx.at(mtheta), trivial_idx);
    for (const auto& [beta, i] : root_idx) {
      if (beta == mtheta) continue;
      IntVec up = beta;
      bool zero = true;
      for (int j = 0; j < n; ++j) {
        up[j] += theta[j];
        zero = zero && up[j] == 0;
      }
      if (zero) continue;
      auto it = root_idx.find(up);
      if (it != root_idx.end()) link(0, i, it->second);
    }
  }

  B.finalize();
  return B;
}

Crystal tensor(const Crystal& L, const Crystal& R) {
  require(L.type == R.type, Err::InvalidArgument, "tensor: type mismatch");
  const int n = L.n;
  Crystal T;
  T.type = L.type;
  T.n = n;
  T.affine = L.affine && R.affine;

  const int p = L.size(), q = R.size();
  require(i64(p) * q <= 4000000, Err::Budget, "tensor: crystal too large");
  T.elems.reserve(size_t(p) * q);
  T.wts.reserve(size_t(p) * q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      T.elems.push_back(Elem::pair(L.elem(i), R.elem(j)));
      IntVec wt = L.weight(i);
      for (int k = 0; k < n; ++k) wt[k] += R.weight(j)[k];
      T.wts.push_back(std::move(wt));
    }

  const int N = p * q;
  T.e_op.assign(n + 1, std::vector<int>(N, -1));
  T.f_op.assign(n + 1, std::vector<int>(N, -1));
  for (int a = T.affine ? 0 : 1; a <= n; ++a) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < q; ++j) {
        int at = i * q + j;
        // f moves the left factor iff eps(left) >= phi(right).
        if (L.eps(a, i) >= R.phi(a, j)) {
          int fi = L.f(a, i);
          if (fi >= 0) T.f_op[a][at] = fi * q + j;
        } else {
          int fj = R.f(a, j);
          if (fj >= 0) T.f_op[a][at] = i * q + fj;
        }
        // e moves the left factor iff eps(left) > phi(right).
        if (L.eps(a, i) > R.phi(a, j)) {
          int ei = L.e(a, i);
          if (ei >= 0) T.e_op[a][at] = ei * q + j;
        } else {
          int ej = R.e(a, j);
          if (ej >= 0) T.e_op[a][at] = i * q + ej;
        }
      }
  }

  T.finalize();
  return T;
}

Crystal subcrystal(const Crystal& big, const std::vector<int>& keep) {
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<int, int> renum;
  for (int i = 0; i < int(sorted.size()); ++i) renum[sorted[i]] = i;

  Crystal S;
  S.type = big.type;
  S.n = big.n;
  S.affine = big.affine;
  const int N = int(sorted.size());
  S.e_op.assign(big.n + 1, std::vector<int>(N, -1));
  S.f_op.assign(big.n + 1, std::vector<int>(N, -1));
  for (int i = 0; i < N; ++i) {
    S.elems.push_back(big.elem(sorted[i]));
    S.wts.push_back(big.weight(sorted[i]));
  }
  for (int a = big.affine ? 0 : 1; a <= big.n; ++a)
    for (int i = 0; i < N; ++i) {
      int j = big.f(a, sorted[i]);
      if (j >= 0) {
        auto it = renum.find(j);
        require(it != renum.end(), Err::InvalidArgument, "subcrystal: set not closed");
        S.f_op[a][i] = it->second;
      }
      int k = big.e(a, sorted[i]);
      if (k >= 0) {
        auto it = renum.find(k);
        require(it != renum.end(), Err::InvalidArgument, "subcrystal: set not closed");
        S.e_op[a][i] = it->second;
      }
    }
  S.finalize();
  return S;
}

Crystal component_of(const Crystal& big, int idx) {
  std::set<int> seen{idx};
  std::deque<int> queue{idx};
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int a = 1; a <= big.n; ++a)
      for (int j : {big.e(a, i), big.f(a, i)})
        if (j >= 0 && seen.insert(j).second) queue.push_back(j);
  }
  Crystal classical = big;
  classical.affine = false;
  std::fill(classical.e_op[0].begin(), classical.e_op[0].end(), -1);
  std::fill(classical.f_op[0].begin(), classical.f_op[0].end(), -1);
  return subcrystal(classical, std::vector<int>(seen.begin(), seen.end()));
}

std::vector<int> virtual_embedding(const Crystal& base, const Crystal& ambient,
                                   const Folding& fold, int seed_base, int seed_ambient) {
  require(ambient.type == fold.ambient, Err::InvalidArgument,
          "virtual embedding: ambient type mismatch");
  std::vector<int> img(base.size(), -1);
  img[seed_base] = seed_ambient;
  std::deque<int> queue{seed_base};
  auto push_image = [&](int elt, int image) {
    if (img[elt] < 0) {
      img[elt] = image;
      queue.push_back(elt);
    } else {
      require(img[elt] == image, Err::Internal, "virtual embedding: inconsistent images");
    }
  };
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    for (int a = 1; a <= base.n; ++a) {
      i64 g = fold.gamma[a];
      if (int nb = base.f(a, b); nb >= 0) {
        int cur = img[b];
        for (int bb : fold.preimage[a])
          for (i64 s = 0; s < g; ++s) {
            cur = ambient.f(bb, cur);
            require(cur >= 0, Err::Internal, "virtual embedding: aligned f undefined");
          }
        push_image(nb, cur);
      }
      if (int nb = base.e(a, b); nb >= 0) {
        int cur = img[b];
        for (int bb : fold.preimage[a])
          for (i64 s = 0; s < g; ++s) {
            cur = ambient.e(bb, cur);
            require(cur >= 0, Err::Internal, "virtual embedding: aligned e undefined");
          }
        push_image(nb, cur);
      }
    }
  }

  std::set<int> images;
  for (int b = 0; b < base.size(); ++b) {
    if (img[b] < 0) continue;
    require(images.insert(img[b]).second, Err::Internal, "virtual embedding: not injective");
    for (int a = 1; a <= base.n; ++a)
      for (int bb : fold.preimage[a]) {
        require(ambient.eps(bb, img[b]) == fold.gamma[a] * base.eps(a, b), Err::Internal,
                "virtual embedding: eps does not scale");
        require(ambient.phi(bb, img[b]) == fold.gamma[a] * base.phi(a, b), Err::Internal,
                "virtual embedding: phi does not scale");
      }
  }
  return img;
}

}  // namespace rcbij
