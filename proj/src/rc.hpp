// Rigged configurations: data model, vacancy numbers, classical crystal
// operators, cocharge, complement rigging, and virtualization.
//
// A rigged configuration over a tensor product B = B^{r_1,s_1} x ... x
// B^{r_N,s_N} is a sequence of partitions nu^{(a)} (a = 1..n), each row
// carrying an integer rigging.  Vacancy numbers are
//
//   p_i^{(a)} = sum_j L_j^{(a)} min(i,j)
//             - sum_b (A_ab / gamma_b) sum_j min(gamma_a i, gamma_b j) m_j^{(b)},
//
// where L_s^{(r)} counts factors B^{r,s} and m_j^{(b)} counts rows of length j
// in nu^{(b)}.  Validity requires every rigging <= the row's vacancy number;
// highest weight additionally requires every rigging >= 0.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cartan.hpp"
#include "common.hpp"

namespace rcbij {

// One tensor factor B^{r,s}.
struct Factor {
  int r = 0;
  i64 s = 0;
  friend bool operator==(const Factor&, const Factor&) = default;
};

// Ordered tensor factors, leftmost first.
using Spec = std::vector<Factor>;

struct RCRow {
  i64 len = 0;
  i64 rig = 0;
  friend bool operator==(const RCRow&, const RCRow&) = default;
};

struct RC {
  std::string type;
  Spec spec;
  std::vector<std::vector<RCRow>> nu;  // nu[a-1] = rows of nu^{(a)}

  RC() = default;
  RC(const std::string& type_name, Spec s);

  int rank() const { return static_cast<int>(nu.size()); }
  // Sorts each nu^{(a)} by (len desc, rig desc) -- the canonical row order.
  void canonicalize();
  bool operator==(const RC& o) const;
};

// Multiplicity m_i^{(a)} of rows of length i in nu^{(a)}.
i64 row_multiplicity(const RC& rc, int a, i64 i);
// Number of boxes |nu^{(a)}|.
i64 partition_size(const RC& rc, int a);

// Vacancy number p_i^{(a)} (normative gamma form above).
i64 vacancy(const RC& rc, int a, i64 i);
// Alternative-convention vacancy number built from the invariant form and the
// upsilon table; agrees with vacancy() exactly when t_a = 1 for all nodes.
Rat vacancy_upsilon(const RC& rc, int a, i64 i);
// p_infinity^{(a)} = <alpha_a^vee, wt>.
i64 p_infinity(const RC& rc, int a);

// Classical weight in fundamental-weight coordinates.
IntVec rc_weight(const RC& rc);
// All riggings <= vacancy numbers; if highest_weight, also all riggings >= 0.
bool rc_valid(const RC& rc, bool highest_weight);

// (epsilon_a, phi_a): with x = min(0, smallest rigging in nu^{(a)}),
// epsilon_a = -x and phi_a = p_infinity^{(a)} - x.
std::pair<i64, i64> rc_eps_phi(const RC& rc, int a);
// Classical crystal operators; nullopt when the operator vanishes.
std::optional<RC> rc_e(const RC& rc, int a);
std::optional<RC> rc_f(const RC& rc, int a);

// Cocharge cc(nu) of the bare configuration (riggings ignored).
i64 configuration_cocharge(const RC& rc);
// cc(nu, J) = cc(nu) + sum_a tvee_a * (sum of riggings in nu^{(a)}).
// Computed two independent ways (pairing sum and vacancy rearrangement) and
// cross-checked internally.
i64 cocharge(const RC& rc);

// Complement rigging: each rigging x |-> p - x, tensor factors reversed.
// Defined on highest weight rcs only.
RC eta_hw(const RC& rc);

// Ambient tensor spec under a folding: B^{r,s} |-> (x)_{b in preimage[r]}
// B^{b, gamma_r s}, preimage nodes in descending order.
Spec virtualize_spec(const std::string& base_type, const Spec& spec,
                     const Folding& fold);
// Virtualization v(nu, J): rows of nu^{(a)} map to rows (gamma_a len,
// gamma_a rig) of every ambient nu^{(b)}, b in preimage[a].
RC virtualize_rc(const RC& rc, const Folding& fold);
// Inverse of virtualize_rc; fails with Err::Verify when the ambient rc is not
// in the image (asymmetric preimage copies or non-divisible rows).
RC devirtualize_rc(const RC& ambient_rc, const std::string& base_type,
                   const Spec& base_spec, const Folding& fold);

}  // namespace rcbij
