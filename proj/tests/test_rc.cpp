#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rc.hpp"

using namespace rcbij;

namespace {

std::string rc_key(const RC& rc) {
  RC c = rc;
  c.canonicalize();
  std::ostringstream os;
  for (const auto& part : c.nu) {
    for (const auto& row : part) os << row.len << ':' << row.rig << ',';
    os << '|';
  }
  return os.str();
}

// Closure of an rc under rc_e / rc_f over all classical nodes.
std::vector<RC> closure(const RC& seed, size_t budget = 20000) {
  std::map<std::string, RC> seen;
  std::deque<RC> queue{seed};
  seen.emplace(rc_key(seed), seed);
  while (!queue.empty()) {
    RC cur = queue.front();
    queue.pop_front();
    REQUIRE(seen.size() <= budget);
    for (int a = 1; a <= cur.rank(); ++a) {
      for (auto next : {rc_e(cur, a), rc_f(cur, a)}) {
        if (!next) continue;
        auto key = rc_key(*next);
        if (seen.emplace(key, *next).second) queue.push_back(*next);
      }
    }
  }
  std::vector<RC> out;
  out.reserve(seen.size());
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

RC make_rc(const std::string& type, Spec spec,
           const std::vector<std::vector<RCRow>>& rows) {
  RC rc(type, std::move(spec));
  REQUIRE(rows.size() == rc.nu.size());
  rc.nu = rows;
  rc.canonicalize();
  return rc;
}

// Deterministic pseudo-random walk downward from the empty (highest weight) rc.
RC random_rc(const std::string& type, const Spec& spec, int steps,
             std::mt19937& rng) {
  RC cur(type, spec);
  std::uniform_int_distribution<int> pick(1, cur.rank());
  for (int s = 0; s < steps; ++s) {
    for (int tries = 0; tries < 8; ++tries) {
      auto next = rc_f(cur, pick(rng));
      if (next) {
        cur = *next;
        break;
      }
    }
  }
  return cur;
}

struct Sample {
  std::string type;
  Spec spec;
};

const std::vector<Sample> kSamples = {
    {"A2~1", {{1, 1}, {1, 1}}},          {"A3~1", {{2, 1}, {1, 2}}},
    {"C2~1", {{1, 1}, {2, 1}}},          {"B3~1", {{1, 1}, {1, 1}}},
    {"G2~1", {{1, 1}, {1, 1}}},          {"F4~1", {{4, 1}}},
    {"E6~2", {{1, 1}, {1, 1}, {1, 1}}},  {"D3~2", {{1, 1}, {1, 1}}},
    {"A5~2", {{1, 1}, {2, 1}}},          {"D4~3", {{1, 1}, {1, 1}}},
    {"D4~1", {{2, 1}}},                  {"C3~1", {{3, 1}, {1, 1}}},
};

}  // namespace

TEST_CASE("vacancy numbers: base cases") {
  // Empty configuration over a single B^{1,1}: p_i^{(1)} = min(i, 1) = 1.
  for (const std::string type : {"A1~1", "A2~1", "C2~1", "E6~1", "D4~3"}) {
    RC rc(type, {{1, 1}});
    for (i64 i : {1, 2, 5}) {
      INFO(type, " i=", i);
      CHECK(vacancy(rc, 1, i) == 1);
    }
    CHECK(p_infinity(rc, 1) == 1);
    IntVec wt = rc_weight(rc);
    CHECK(wt[0] == 1);
    for (size_t k = 1; k < wt.size(); ++k) CHECK(wt[k] == 0);
    CHECK(rc_valid(rc, true));
  }
}

TEST_CASE("E6~1 B^{2,1}: weight-zero configuration has vacancies 0, cocharge 1") {
  // One column of theta = alpha_1 + 2 alpha_2 + 2 alpha_3 + 3 alpha_4
  //                      + 2 alpha_5 + alpha_6.
  const Cartan& C = cartan("E6~1");
  IntVec theta = C.theta();
  std::vector<std::vector<RCRow>> rows(6);
  for (int a = 1; a <= 6; ++a)
    for (i64 k = 0; k < theta[a - 1]; ++k) rows[a - 1].push_back({1, 0});
  RC rc = make_rc("E6~1", {{2, 1}}, rows);

  for (int a = 1; a <= 6; ++a) {
    CHECK(vacancy(rc, a, 1) == 0);
    CHECK(p_infinity(rc, a) == 0);
  }
  CHECK(rc_valid(rc, true));
  CHECK(rc_weight(rc) == IntVec(6, 0));
  CHECK(configuration_cocharge(rc) == 1);
  CHECK(cocharge(rc) == 1);
  // Weight zero => closure is the singleton B(0).
  CHECK(closure(rc).size() == 1);
}

TEST_CASE("E6~2 worked-example rc: vacancies and validity") {
  RC rc = make_rc(
      "E6~2", {{1, 1}, {1, 1}, {1, 1}, {1, 1}},
      {{{2, 1}, {2, 0}, {1, 2}, {1, 1}},
       {{2, 0}, {2, 0}, {2, 0}, {1, 0}, {1, 0}, {1, 0}},
       {{2, 0}, {2, 0}, {1, 0}, {1, 0}},
       {{2, 0}, {1, 0}}});
  CHECK(vacancy(rc, 1, 1) == 2);
  CHECK(vacancy(rc, 1, 2) == 1);
  CHECK(rc_valid(rc, true));
}

TEST_CASE("A1~1 B^{1,1}: f/e chain") {
  RC rc("A1~1", {{1, 1}});
  CHECK(rc_eps_phi(rc, 1) == std::pair<i64, i64>{0, 1});

  auto f1 = rc_f(rc, 1);
  REQUIRE(f1.has_value());
  REQUIRE(f1->nu[0].size() == 1);
  CHECK(f1->nu[0][0].len == 1);
  CHECK(f1->nu[0][0].rig == -1);
  CHECK(vacancy(*f1, 1, 1) == -1);
  CHECK(rc_valid(*f1, false));
  CHECK_FALSE(rc_valid(*f1, true));
  CHECK(rc_eps_phi(*f1, 1) == std::pair<i64, i64>{1, 0});

  CHECK_FALSE(rc_f(*f1, 1).has_value());
  auto back = rc_e(*f1, 1);
  REQUIRE(back.has_value());
  CHECK(*back == rc);
  CHECK_FALSE(rc_e(rc, 1).has_value());

  CHECK(closure(rc).size() == 2);
}

TEST_CASE("closures of handmade highest weight rcs match Weyl dimensions") {
  struct Case {
    std::string type;
    Spec spec;
    std::vector<std::vector<RCRow>> rows;
  };
  const std::vector<Case> cases = {
      // A_2, (B^{1,1})^{x2}: empty rc has weight 2 w_1.
      {"A2~1", {{1, 1}, {1, 1}}, {{}, {}}},
      // A_2, (B^{1,1})^{x2}: weight w_2 component.
      {"A2~1", {{1, 1}, {1, 1}}, {{{1, 0}}, {}}},
      // C_2, B^{1,1} x B^{2,1}: weight w_1 component.
      {"C2~1", {{1, 1}, {2, 1}}, {{{1, 0}}, {{1, 0}}}},
      // G_2, B^{1,1}: empty rc, weight w_1 (the 7-dimensional crystal).
      {"G2~1", {{1, 1}}, {{}, {}}},
      // D_4, B^{2,1}: empty rc, weight w_2 (the 28-dimensional adjoint).
      {"D4~1", {{2, 1}}, {{}, {}, {}, {}}},
  };
  for (const auto& c : cases) {
    RC rc = make_rc(c.type, c.spec, c.rows);
    INFO(c.type);
    REQUIRE(rc_valid(rc, true));
    const Cartan& C = cartan(c.type);
    i64 expect = oracle::weyl_dim(C, rc_weight(rc));
    CHECK(i64(closure(rc).size()) == expect);
  }
}

TEST_CASE("E6~2 B^{1,1}: weight-zero rc exists with cocharge 1") {
  const Cartan& C = cartan("E6~2");
  IntVec theta = C.theta();  // (2, 3, 2, 1) in root coordinates
  std::vector<std::vector<RCRow>> rows(4);
  for (int a = 1; a <= 4; ++a)
    for (i64 k = 0; k < theta[a - 1]; ++k) rows[a - 1].push_back({1, 0});
  RC rc = make_rc("E6~2", {{1, 1}}, rows);
  REQUIRE(rc_valid(rc, true));
  CHECK(rc_weight(rc) == IntVec(4, 0));
  CHECK(cocharge(rc) == 1);
  CHECK(closure(rc).size() == 1);
}

TEST_CASE("eps/phi agree with iterated operator counts; weight steps by alpha") {
  std::mt19937 rng(20260813);
  for (const auto& sample : kSamples) {
    const Cartan& C = cartan(sample.type);
    for (int rep = 0; rep < 6; ++rep) {
      RC rc = random_rc(sample.type, sample.spec, 5 + rep, rng);
      REQUIRE(rc_valid(rc, false));
      for (int a = 1; a <= rc.rank(); ++a) {
        auto [eps, phi] = rc_eps_phi(rc, a);
        INFO(sample.type, " node ", a);
        // phi - eps = <alpha_a^vee, wt>.
        CHECK(phi - eps == rc_weight(rc)[a - 1]);
        i64 ne = 0;
        for (RC cur = rc;; ++ne) {
          auto up = rc_e(cur, a);
          if (!up) break;
          cur = *up;
        }
        CHECK(ne == eps);
        i64 nf = 0;
        for (RC cur = rc;; ++nf) {
          auto down = rc_f(cur, a);
          if (!down) break;
          // Weight drops by alpha_a.
          IntVec expect = rc_weight(cur);
          IntVec alpha = C.alpha_in_weights(a);
          for (size_t k = 0; k < expect.size(); ++k) expect[k] -= alpha[k];
          CHECK(rc_weight(*down) == expect);
          cur = *down;
        }
        CHECK(nf == phi);
      }
    }
  }
}

TEST_CASE("e and f are mutually inverse on rcs") {
  std::mt19937 rng(7);
  for (const auto& sample : kSamples) {
    for (int rep = 0; rep < 8; ++rep) {
      RC rc = random_rc(sample.type, sample.spec, 4 + rep, rng);
      for (int a = 1; a <= rc.rank(); ++a) {
        INFO(sample.type, " node ", a);
        if (auto down = rc_f(rc, a)) {
          auto up = rc_e(*down, a);
          REQUIRE(up.has_value());
          CHECK(*up == rc);
        }
        if (auto up = rc_e(rc, a)) {
          auto down = rc_f(*up, a);
          REQUIRE(down.has_value());
          CHECK(*down == rc);
        }
      }
    }
  }
}

TEST_CASE("cocharge is constant on classical components") {
  const std::vector<Sample> small = {
      {"A2~1", {{1, 1}, {1, 1}}},
      {"C2~1", {{1, 1}, {2, 1}}},
      {"D3~2", {{1, 1}, {1, 1}}},
      {"G2~1", {{1, 1}}},
  };
  for (const auto& sample : small) {
    RC seed(sample.type, sample.spec);
    i64 cc = cocharge(seed);
    for (const RC& rc : closure(seed)) {
      INFO(sample.type);
      CHECK(cocharge(rc) == cc);
    }
  }
}

TEST_CASE("eta: involution on highest weight rcs, coriggings swapped") {
  // Handmade hw rc for A_2 (B^{1,1})^{x3} with a nonzero rigging.
  RC rc = make_rc("A2~1", {{1, 1}, {1, 1}, {1, 1}}, {{{1, 0}}, {}});
  REQUIRE(rc_valid(rc, true));
  CHECK(vacancy(rc, 1, 1) == 1);

  RC flip = eta_hw(rc);
  CHECK(flip.spec == rc.spec);  // (1,1)^3 reversed is itself
  CHECK(flip.nu[0][0].rig == 1);
  REQUIRE(rc_valid(flip, true));
  CHECK(eta_hw(flip) == rc);

  // eta fixes an rc whose riggings and vacancies all vanish.
  const Cartan& C = cartan("E6~1");
  std::vector<std::vector<RCRow>> rows(6);
  for (int a = 1; a <= 6; ++a)
    for (i64 k = 0; k < C.theta()[a - 1]; ++k) rows[a - 1].push_back({1, 0});
  RC zero = make_rc("E6~1", {{2, 1}}, rows);
  CHECK(eta_hw(zero) == zero);

  // Non-highest-weight input is rejected.
  RC low = *rc_f(RC("A1~1", {{1, 1}}), 1);
  CHECK_THROWS_AS(eta_hw(low), Error);

  // eta across every hw rc of A_2 (B^{1,1})^{x3}: enumerate hw rcs by scanning
  // the full crystal closure from the empty rc plus the handmade seeds.
  std::vector<RC> hw;
  for (const RC& cand : closure(RC("A2~1", {{1, 1}, {1, 1}, {1, 1}}))) {
    auto e1 = rc_e(cand, 1), e2 = rc_e(cand, 2);
    if (!e1 && !e2) hw.push_back(cand);
  }
  CHECK(!hw.empty());
  for (const RC& h : hw) {
    if (!rc_valid(h, true)) continue;
    RC ee = eta_hw(eta_hw(h));
    CHECK(ee == h);
  }
}

TEST_CASE("convexity identity holds when t == 1") {
  std::mt19937 rng(99);
  for (const std::string type : {"A3~1", "D4~1", "E6~2", "D3~2", "A5~2", "D4~3"}) {
    const Cartan& C = cartan(type);
    bool t_one = true;
    for (int a = 1; a <= C.rank(); ++a) t_one = t_one && C.t(a) == 1;
    REQUIRE(t_one);
    Spec spec = {{1, 1}, {C.rank(), 2}};
    for (int rep = 0; rep < 5; ++rep) {
      RC rc = random_rc(type, spec, 6, rng);
      for (int a = 1; a <= C.rank(); ++a) {
        i64 maxlen = 2;
        for (const auto& row : rc.nu[a - 1]) maxlen = std::max(maxlen, row.len);
        for (i64 i = 1; i <= maxlen + 1; ++i) {
          i64 pm = i == 1 ? 0 : vacancy(rc, a, i - 1);
          i64 p0 = vacancy(rc, a, i);
          i64 pp = vacancy(rc, a, i + 1);
          i64 li = 0;
          for (const auto& f : rc.spec)
            if (f.r == a && f.s == i) ++li;
          i64 rhs = li;
          for (int b = 1; b <= C.rank(); ++b)
            rhs -= C.a(a, b) * row_multiplicity(rc, b, i);
          INFO(type, " node ", a, " i=", i);
          CHECK(-pm + 2 * p0 - pp == rhs);
        }
      }
    }
  }
}

TEST_CASE("upsilon-form vacancies coincide with the gamma form when t == 1") {
  std::mt19937 rng(4242);
  for (const std::string type : {"A2~1", "D4~1", "E6~1", "E6~2", "D3~2", "A5~2", "D4~3"}) {
    const Cartan& C = cartan(type);
    Spec spec = {{1, 1}, {1, 1}, {C.rank() >= 2 ? 2 : 1, 1}};
    for (int rep = 0; rep < 4; ++rep) {
      RC rc = random_rc(type, spec, 5 + rep, rng);
      for (int a = 1; a <= C.rank(); ++a)
        for (i64 i = 1; i <= 4; ++i) {
          INFO(type, " node ", a, " i=", i);
          CHECK(vacancy_upsilon(rc, a, i) == Rat(vacancy(rc, a, i)));
        }
    }
  }
}

TEST_CASE("virtualization: vacancy scaling, round trip, statistics, operators") {
  std::mt19937 rng(1234);
  for (const auto& sample : kSamples) {
    const Cartan& C = cartan(sample.type);
    std::vector<Folding> folds;
    if (auto sl = C.simply_laced_folding()) folds.push_back(*sl);
    if (auto dual = C.dual_folding()) folds.push_back(*dual);
    for (const auto& fold : folds) {
      for (int rep = 0; rep < 6; ++rep) {
        RC rc = random_rc(sample.type, sample.spec, 3 + rep, rng);
        RC amb = virtualize_rc(rc, fold);
        INFO(sample.type, " -> ", fold.ambient, " rep ", rep);

        // p^hat_{gamma_a i}^{(b)} = gamma_a p_i^{(a)}.
        for (int a = 1; a <= rc.rank(); ++a)
          for (i64 i = 1; i <= 4; ++i)
            for (int b : fold.preimage[a])
              CHECK(vacancy(amb, b, fold.gamma[a] * i) ==
                    fold.gamma[a] * vacancy(rc, a, i));

        // Round trip.
        RC back = devirtualize_rc(amb, sample.type, sample.spec, fold);
        CHECK(back == rc);

        // cc(v(rc)) = gamma_0 cc(rc).
        CHECK(cocharge(amb) == fold.gamma[0] * cocharge(rc));

        // eps/phi scale by gamma_a.
        for (int a = 1; a <= rc.rank(); ++a) {
          auto [eps, phi] = rc_eps_phi(rc, a);
          for (int b : fold.preimage[a]) {
            auto [veps, vphi] = rc_eps_phi(amb, b);
            CHECK(veps == fold.gamma[a] * eps);
            CHECK(vphi == fold.gamma[a] * phi);
          }
        }

        // v intertwines f_a with prod_{b in pre(a)} fhat_b^{gamma_a}.
        for (int a = 1; a <= rc.rank(); ++a) {
          auto base_step = rc_f(rc, a);
          bool ok = true;
          RC cur = amb;
          for (int b : fold.preimage[a])
            for (i64 k = 0; ok && k < fold.gamma[a]; ++k) {
              auto next = rc_f(cur, b);
              if (!next)
                ok = false;
              else
                cur = *next;
            }
          CHECK(base_step.has_value() == ok);
          if (base_step && ok) CHECK(virtualize_rc(*base_step, fold) == cur);
        }
      }
    }
  }
}

TEST_CASE("devirtualize rejects rcs outside the virtual image") {
  const Cartan& C = cartan("C2~1");
  auto fold = C.dual_folding();
  REQUIRE(fold.has_value());
  RC rc("C2~1", {{1, 1}});
  RC amb = virtualize_rc(rc, *fold);

  // Non-divisible row at a gamma=2 node (node 2 has gamma_2 = 2).
  RC bad1 = amb;
  bad1.nu[1].push_back({1, 0});
  CHECK_THROWS_AS(devirtualize_rc(bad1, "C2~1", rc.spec, *fold), Error);

  // Asymmetric preimage copies under the simply-laced folding to A3~1.
  auto sl = C.simply_laced_folding();
  REQUIRE(sl.has_value());
  RC amb2 = virtualize_rc(rc, *sl);
  RC bad2 = amb2;
  bad2.nu[0].push_back({1, 0});  // node 1 copy changed, node 3 copy not
  CHECK_THROWS_AS(devirtualize_rc(bad2, "C2~1", rc.spec, *sl), Error);
}

TEST_CASE("weight formula: explicit sum matches p_infinity") {
  std::mt19937 rng(55);
  for (const auto& sample : kSamples) {
    const Cartan& C = cartan(sample.type);
    for (int rep = 0; rep < 4; ++rep) {
      RC rc = random_rc(sample.type, sample.spec, 6, rng);
      // wt = sum_{(a,i)} i (L_i^{(a)} w_a - m_i^{(a)} alpha_a)
      IntVec wt(C.rank(), 0);
      for (const auto& f : rc.spec) wt[f.r - 1] += f.s;
      for (int a = 1; a <= C.rank(); ++a) {
        IntVec alpha = C.alpha_in_weights(a);
        for (const auto& row : rc.nu[a - 1])
          for (int k = 0; k < C.rank(); ++k) wt[k] -= row.len * alpha[k];
      }
      CHECK(wt == rc_weight(rc));
    }
  }
}
