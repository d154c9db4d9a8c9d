#include "rc.hpp"

#include <algorithm>

namespace rcbij {

namespace {

// Sum_j L_j^{(a)} min(i, j) over the tensor factors.
i64 l_min_sum(const RC& rc, int a, i64 i) {
  i64 out = 0;
  for (const auto& f : rc.spec)
    if (f.r == a) out += std::min(i, f.s);
  return out;
}

// Sum_j L_j^{(a)} j (the i -> infinity limit of l_min_sum).
i64 l_total(const RC& rc, int a) {
  i64 out = 0;
  for (const auto& f : rc.spec)
    if (f.r == a) out += f.s;
  return out;
}

bool row_order(const RCRow& x, const RCRow& y) {
  return x.len != y.len ? x.len > y.len : x.rig > y.rig;
}

}  // namespace

RC::RC(const std::string& type_name, Spec s) : type(type_name), spec(std::move(s)) {
  const Cartan& C = cartan(type);
  for (const auto& f : spec) {
    require(f.r >= 1 && f.r <= C.rank(), Err::InvalidArgument,
            "tensor factor node out of range for " + type);
    require(f.s >= 1, Err::InvalidArgument, "tensor factor level must be >= 1");
  }
  nu.assign(C.rank(), {});
}

void RC::canonicalize() {
  for (auto& part : nu) std::sort(part.begin(), part.end(), row_order);
}

bool RC::operator==(const RC& o) const {
  if (type != o.type || spec != o.spec || nu.size() != o.nu.size()) return false;
  for (size_t a = 0; a < nu.size(); ++a) {
    auto x = nu[a], y = o.nu[a];
    std::sort(x.begin(), x.end(), row_order);
    std::sort(y.begin(), y.end(), row_order);
    if (x != y) return false;
  }
  return true;
}

i64 row_multiplicity(const RC& rc, int a, i64 i) {
  i64 out = 0;
  for (const auto& row : rc.nu[a - 1]) out += (row.len == i) ? 1 : 0;
  return out;
}

i64 partition_size(const RC& rc, int a) {
  i64 out = 0;
  for (const auto& row : rc.nu[a - 1]) out += row.len;
  return out;
}

i64 vacancy(const RC& rc, int a, i64 i) {
  const Cartan& C = cartan(rc.type);
  require(a >= 1 && a <= C.rank(), Err::InvalidArgument, "vacancy: bad node");
  require(i >= 1, Err::InvalidArgument, "vacancy: row length must be >= 1");
  Rat acc(l_min_sum(rc, a, i));
  for (int b = 1; b <= C.rank(); ++b) {
    if (C.a(a, b) == 0) continue;
    i64 inner = 0;
    for (const auto& row : rc.nu[b - 1])
      inner += std::min(C.gamma(a) * i, C.gamma(b) * row.len);
    acc -= Rat(C.a(a, b), C.gamma(b)) * inner;
  }
  require(acc.denominator() == 1, Err::Internal, "vacancy: non-integral value");
  return acc.numerator();
}

Rat vacancy_upsilon(const RC& rc, int a, i64 i) {
  const Cartan& C = cartan(rc.type);
  Rat acc(l_min_sum(rc, a, i));
  for (int b = 1; b <= C.rank(); ++b) {
    Rat pair = C.alpha_pair(a, b);
    if (pair == Rat(0)) continue;
    Rat sum(0);
    for (const auto& row : rc.nu[b - 1])
      sum += std::min(Rat(C.t(b)) * C.upsilon(a) * i,
                      Rat(C.t(a)) * C.upsilon(b) * row.len);
    acc -= pair * sum / C.tvee(a);
  }
  return acc;
}

i64 p_infinity(const RC& rc, int a) {
  const Cartan& C = cartan(rc.type);
  require(a >= 1 && a <= C.rank(), Err::InvalidArgument, "p_infinity: bad node");
  i64 acc = l_total(rc, a);
  for (int b = 1; b <= C.rank(); ++b) acc -= C.a(a, b) * partition_size(rc, b);
  return acc;
}

IntVec rc_weight(const RC& rc) {
  IntVec wt(rc.rank());
  for (int a = 1; a <= rc.rank(); ++a) wt[a - 1] = p_infinity(rc, a);
  return wt;
}

bool rc_valid(const RC& rc, bool highest_weight) {
  for (int a = 1; a <= rc.rank(); ++a)
    for (const auto& row : rc.nu[a - 1]) {
      if (row.len <= 0) return false;
      if (row.rig > vacancy(rc, a, row.len)) return false;
      if (highest_weight && row.rig < 0) return false;
    }
  return true;
}

std::pair<i64, i64> rc_eps_phi(const RC& rc, int a) {
  i64 x = 0;  // length-0 row with rigging 0 convention
  for (const auto& row : rc.nu[a - 1]) x = std::min(x, row.rig);
  return {-x, p_infinity(rc, a) - x};
}

namespace {

// Vacancy numbers of every row, parallel to rc.nu.
std::vector<IntVec> all_vacancies(const RC& rc) {
  std::vector<IntVec> p(rc.rank());
  for (int b = 1; b <= rc.rank(); ++b) {
    p[b - 1].reserve(rc.nu[b - 1].size());
    for (const auto& row : rc.nu[b - 1]) p[b - 1].push_back(vacancy(rc, b, row.len));
  }
  return p;
}

// After the row (a, sel) of `out` changed length, shift every other rigging so
// coriggings stay fixed relative to the vacancies recorded in old_p.
void preserve_coriggings(RC& out, int a, size_t sel,
                         const std::vector<IntVec>& old_p) {
  for (int b = 1; b <= out.rank(); ++b)
    for (size_t k = 0; k < out.nu[b - 1].size(); ++k) {
      if (b == a && k == sel) continue;
      auto& row = out.nu[b - 1][k];
      row.rig += vacancy(out, b, row.len) - old_p[b - 1][k];
    }
}

}  // namespace

std::optional<RC> rc_e(const RC& rc, int a) {
  const Cartan& C = cartan(rc.type);
  require(a >= 1 && a <= C.rank(), Err::InvalidArgument, "rc_e: bad node");
  i64 x = 0;
  for (const auto& row : rc.nu[a - 1]) x = std::min(x, row.rig);
  if (x == 0) return std::nullopt;

  size_t sel = rc.nu[a - 1].size();
  for (size_t k = 0; k < rc.nu[a - 1].size(); ++k) {
    const auto& row = rc.nu[a - 1][k];
    if (row.rig == x && (sel == rc.nu[a - 1].size() || row.len < rc.nu[a - 1][sel].len))
      sel = k;
  }

  std::vector<IntVec> old_p = all_vacancies(rc);
  RC out = rc;
  out.nu[a - 1][sel].len -= 1;
  preserve_coriggings(out, a, sel, old_p);
  if (out.nu[a - 1][sel].len == 0) {
    out.nu[a - 1].erase(out.nu[a - 1].begin() + static_cast<long>(sel));
  } else {
    out.nu[a - 1][sel].rig = x + 1;
  }
  out.canonicalize();
  require(rc_valid(out, false), Err::Internal, "rc_e produced an invalid rc");
  return out;
}

std::optional<RC> rc_f(const RC& rc, int a) {
  const Cartan& C = cartan(rc.type);
  require(a >= 1 && a <= C.rank(), Err::InvalidArgument, "rc_f: bad node");
  i64 x = 0;
  for (const auto& row : rc.nu[a - 1]) x = std::min(x, row.rig);
  if (p_infinity(rc, a) - x == 0) return std::nullopt;

  std::vector<IntVec> old_p = all_vacancies(rc);
  RC out = rc;
  auto& part = out.nu[a - 1];
  size_t sel = part.size();
  for (size_t k = 0; k < part.size(); ++k)
    if (part[k].rig == x && (sel == part.size() || part[k].len > part[sel].len))
      sel = k;
  if (sel == part.size()) {  // grow the length-0 rigging-0 row; sel indexes it
    part.push_back({0, 0});
    old_p[a - 1].push_back(0);  // placeholder; this row's rigging is set explicitly
  }
  part[sel].len += 1;
  preserve_coriggings(out, a, sel, old_p);
  part[sel].rig = x - 1;
  out.canonicalize();
  require(rc_valid(out, false), Err::Internal,
          "rc_f: phi > 0 but the result is not a valid rc");
  return out;
}

namespace {

// (1/2) sum_{(a,i),(b,j)} tvee_a (A_ab / gamma_b) min(gamma_a i, gamma_b j)
// m_i^{(a)} m_j^{(b)}: the pairing form of the configuration cocharge.
Rat cocharge_pairing(const RC& rc) {
  const Cartan& C = cartan(rc.type);
  Rat acc(0);
  for (int a = 1; a <= C.rank(); ++a)
    for (int b = 1; b <= C.rank(); ++b) {
      if (C.a(a, b) == 0) continue;
      i64 s = 0;
      for (const auto& ra : rc.nu[a - 1])
        for (const auto& rb : rc.nu[b - 1])
          s += std::min(C.gamma(a) * ra.len, C.gamma(b) * rb.len);
      acc += Rat(C.tvee(a) * C.a(a, b), C.gamma(b)) * s;
    }
  return acc / 2;
}

// (1/2) sum_{(a,i)} tvee_a (sum_j L_j^{(a)} min(i,j) - p_i^{(a)}) m_i^{(a)}:
// the vacancy rearrangement of the same quantity.
Rat cocharge_vacancy_form(const RC& rc) {
  const Cartan& C = cartan(rc.type);
  Rat acc(0);
  for (int a = 1; a <= C.rank(); ++a)
    for (const auto& row : rc.nu[a - 1])
      acc += Rat(C.tvee(a)) *
             (l_min_sum(rc, a, row.len) - vacancy(rc, a, row.len));
  return acc / 2;
}

}  // namespace

i64 configuration_cocharge(const RC& rc) {
  Rat c1 = cocharge_pairing(rc);
  Rat c2 = cocharge_vacancy_form(rc);
  require(c1 == c2, Err::Internal, "cocharge: pairing and vacancy forms disagree");
  require(c1.denominator() == 1, Err::Internal, "cocharge: non-integral value");
  return c1.numerator();
}

i64 cocharge(const RC& rc) {
  const Cartan& C = cartan(rc.type);
  i64 rig = 0;
  for (int a = 1; a <= C.rank(); ++a)
    for (const auto& row : rc.nu[a - 1]) rig += C.tvee(a) * row.rig;
  return configuration_cocharge(rc) + rig;
}

RC eta_hw(const RC& rc) {
  require(rc_valid(rc, true), Err::InvalidArgument,
          "eta is defined on highest weight rigged configurations only");
  RC out = rc;
  std::reverse(out.spec.begin(), out.spec.end());
  for (int a = 1; a <= rc.rank(); ++a)
    for (size_t k = 0; k < rc.nu[a - 1].size(); ++k)
      out.nu[a - 1][k].rig =
          vacancy(rc, a, rc.nu[a - 1][k].len) - rc.nu[a - 1][k].rig;
  out.canonicalize();
  return out;
}

Spec virtualize_spec(const std::string& base_type, const Spec& spec,
                     const Folding& fold) {
  cartan(base_type);  // validates the type name
  require(!fold.preimage.empty(), Err::Internal, "virtualize_spec: empty folding");
  Spec out;
  for (const auto& f : spec) {
    require(f.r >= 1 && f.r < static_cast<int>(fold.preimage.size()),
            Err::InvalidArgument, "virtualize_spec: node out of range");
    std::vector<int> pre = fold.preimage[f.r];
    std::sort(pre.rbegin(), pre.rend());
    for (int b : pre) out.push_back({b, fold.gamma[f.r] * f.s});
  }
  return out;
}

RC virtualize_rc(const RC& rc, const Folding& fold) {
  RC out(fold.ambient, virtualize_spec(rc.type, rc.spec, fold));
  for (int a = 1; a <= rc.rank(); ++a)
    for (int b : fold.preimage[a])
      for (const auto& row : rc.nu[a - 1])
        out.nu[b - 1].push_back({fold.gamma[a] * row.len, fold.gamma[a] * row.rig});
  out.canonicalize();
  return out;
}

RC devirtualize_rc(const RC& ambient_rc, const std::string& base_type,
                   const Spec& base_spec, const Folding& fold) {
  require(ambient_rc.type == fold.ambient, Err::InvalidArgument,
          "devirtualize: rc is not over the folding's ambient type");
  RC out(base_type, base_spec);
  {
    Spec expect = virtualize_spec(base_type, base_spec, fold);
    require(expect == ambient_rc.spec, Err::Verify,
            "devirtualize: tensor spec is not in the virtual image");
  }
  RC sorted = ambient_rc;
  sorted.canonicalize();
  for (int a = 1; a <= out.rank(); ++a) {
    const auto& pre = fold.preimage[a];
    require(!pre.empty(), Err::Internal, "devirtualize: node without preimage");
    const auto& first = sorted.nu[pre[0] - 1];
    for (size_t k = 1; k < pre.size(); ++k)
      require(sorted.nu[pre[k] - 1] == first, Err::Verify,
              "devirtualize: rc not in virtual image (asymmetric preimage copies)");
    i64 g = fold.gamma[a];
    for (const auto& row : first) {
      require(row.len % g == 0 && row.rig % g == 0, Err::Verify,
              "devirtualize: rc not in virtual image (row not divisible by gamma)");
      out.nu[a - 1].push_back({row.len / g, row.rig / g});
    }
  }
  out.canonicalize();
  return out;
}

}  // namespace rcbij
