#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>

#include "crystal.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace rcbij;

namespace {

std::map<IntVec, i64> crystal_char(const Crystal& B) {
  std::map<IntVec, i64> mults;
  for (int i = 0; i < B.size(); ++i) ++mults[B.weight(i)];
  return mults;
}

// Split into classical components and return {hw weight, size} pairs sorted.
std::vector<std::pair<IntVec, int>> component_profile(const Crystal& B) {
  std::vector<std::pair<IntVec, int>> out;
  std::set<int> seen;
  for (int hw : B.highest_weight_elements()) {
    Crystal comp = component_of(B, hw);
    out.push_back({B.weight(hw), comp.size()});
    seen.insert(hw);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("minuscule crystals match the Weyl and Freudenthal oracles") {
  struct Case {
    const char* type;
    int r;
  };
  const Case cases[] = {
      {"A3~1", 1}, {"A3~1", 2}, {"A3~1", 3}, {"A4~1", 2}, {"A4~1", 3}, {"C2~1", 1},
      {"C3~1", 1}, {"D4~1", 1}, {"D4~1", 3}, {"D4~1", 4}, {"D5~1", 1}, {"D5~1", 4},
      {"D5~1", 5}, {"E6~1", 1}, {"E6~1", 6}, {"E7~1", 7},
  };
  for (const Case& c : cases) {
    CAPTURE(c.type);
    CAPTURE(c.r);
    const Cartan& C = cartan(c.type);
    Crystal B = minuscule_crystal(c.type, c.r, false);
    CHECK(i64(B.size()) == oracle::weyl_dim(C, C.fundamental_weight(c.r)));
    auto mults = crystal_char(B);
    for (const auto& [wt, m] : mults) {
      CAPTURE(wt);
      CHECK(m == 1);
    }
    CHECK(mults == oracle::weight_multiplicities(C, C.fundamental_weight(c.r)));
  }
}

TEST_CASE("root model crystals match the Freudenthal oracle") {
  struct Case {
    const char* type;
    bool little;
    int want_size;
  };
  const Case cases[] = {
      {"A3~1", false, 15}, {"D4~1", false, 28}, {"E6~1", false, 78}, {"E7~1", false, 133},
      {"E8~1", false, 248}, {"E6~2", false, 52}, {"G2~1", true, 7},   {"F4~1", true, 26},
      {"E6~2", true, 26},  {"D3~2", true, 5},   {"D5~2", true, 9},   {"A5~2", true, 14},
      {"D4~3", true, 7},
  };
  for (const Case& c : cases) {
    CAPTURE(c.type);
    CAPTURE(c.little);
    const Cartan& C = cartan(c.type);
    Crystal B = root_model_crystal(c.type, c.little, false, false);
    CHECK(B.size() == c.want_size);
    auto hw = B.highest_weight_elements();
    REQUIRE(hw.size() == 1);
    CHECK(crystal_char(B) == oracle::weight_multiplicities(C, B.weight(hw[0])));

    Crystal Bt = root_model_crystal(c.type, c.little, true, false);
    CHECK(Bt.size() == c.want_size + 1);
    CHECK(Bt.highest_weight_elements().size() == 2);
  }
}

TEST_CASE("theta crystal highest weights sit at theta for dual untwisted types") {
  for (const char* t : {"E6~2", "D3~2", "D5~2", "A5~2", "D4~3"}) {
    CAPTURE(t);
    const Cartan& C = cartan(t);
    Crystal B = root_model_crystal(t, true, false, false);
    auto hw = B.highest_weight_elements();
    REQUIRE(hw.size() == 1);
    CHECK(B.elem(hw[0]) == Elem::root(C.theta()));
    CHECK(B.weight(hw[0]) == C.root_to_weight(C.theta()));
  }
}

TEST_CASE("tensor products decompose correctly") {
  SUBCASE("A2 vector squared") {
    Crystal V = minuscule_crystal("A2~1", 1, false);
    Crystal T = tensor(V, V);
    CHECK(T.size() == 9);
    auto profile = component_profile(T);
    REQUIRE(profile.size() == 2);
    CHECK(profile[0] == std::pair<IntVec, int>{IntVec{0, 1}, 3});
    CHECK(profile[1] == std::pair<IntVec, int>{IntVec{2, 0}, 6});
  }
  SUBCASE("G2 seven-crystal squared") {
    Crystal L = root_model_crystal("G2~1", true, false, false);
    Crystal T = tensor(L, L);
    CHECK(T.size() == 49);
    auto profile = component_profile(T);
    REQUIRE(profile.size() == 4);
    CHECK(profile[0] == std::pair<IntVec, int>{IntVec{0, 0}, 1});
    CHECK(profile[1] == std::pair<IntVec, int>{IntVec{0, 1}, 14});
    CHECK(profile[2] == std::pair<IntVec, int>{IntVec{1, 0}, 7});
    CHECK(profile[3] == std::pair<IntVec, int>{IntVec{2, 0}, 27});
    // Each component's character matches the oracle for its highest weight.
    const Cartan& C = cartan("G2~1");
    for (int hw : T.highest_weight_elements()) {
      Crystal comp = component_of(T, hw);
      CHECK(crystal_char(comp) == oracle::weight_multiplicities(C, T.weight(hw)));
    }
  }
  SUBCASE("E6~2 column squared") {
    Crystal L = root_model_crystal("E6~2", true, true, false);
    Crystal T = tensor(L, L);
    CHECK(T.size() == 729);
    const Cartan& C = cartan("E6~2");
    i64 total = 0;
    for (int hw : T.highest_weight_elements()) {
      i64 d = oracle::weyl_dim(C, T.weight(hw));
      Crystal comp = component_of(T, hw);
      CHECK(i64(comp.size()) == d);
      total += d;
    }
    CHECK(total == 729);
  }
}

TEST_CASE("tensor eps and phi follow the combining rule") {
  Crystal L = root_model_crystal("G2~1", true, false, false);
  Crystal R = L;
  Crystal T = tensor(L, R);
  const int q = R.size();
  for (int i = 0; i < L.size(); ++i)
    for (int j = 0; j < R.size(); ++j)
      for (int a = 1; a <= T.n; ++a) {
        int at = i * q + j;
        CHECK(T.eps(a, at) == R.eps(a, j) + std::max<i64>(0, L.eps(a, i) - R.phi(a, j)));
        CHECK(T.phi(a, at) == L.phi(a, i) + std::max<i64>(0, R.phi(a, j) - L.eps(a, i)));
      }
}

TEST_CASE("affine arrows on single columns") {
  SUBCASE("A2 vector column has one 0-arrow") {
    Crystal B = minuscule_crystal("A2~1", 1, true);
    int arrows = 0, src = -1;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) {
        ++arrows;
        src = i;
      }
    CHECK(arrows == 1);
    CHECK(B.weight(src) == IntVec{0, -1});
    CHECK(B.weight(B.f(0, src)) == IntVec{1, 0});
  }
  SUBCASE("C2 vector column has one 0-arrow") {
    Crystal B = minuscule_crystal("C2~1", 1, true);
    int arrows = 0, src = -1;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) {
        ++arrows;
        src = i;
      }
    CHECK(arrows == 1);
    CHECK(B.weight(src) == IntVec{-1, 0});
    CHECK(B.weight(B.f(0, src)) == IntVec{1, 0});
  }
  SUBCASE("A3 two-column has two 0-arrows") {
    Crystal B = minuscule_crystal("A3~1", 2, true);
    int arrows = 0;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) ++arrows;
    CHECK(arrows == 2);
  }
  SUBCASE("D4 adjoint column") {
    const Cartan& C = cartan("D4~1");
    Crystal B = root_model_crystal("D4~1", false, true, true);
    CHECK(B.size() == 29);
    int top = B.index_of(Elem::root(C.theta()));
    IntVec mtheta = C.theta();
    for (i64& x : mtheta) x = -x;
    int bottom = B.index_of(Elem::root(mtheta));
    int triv = B.index_of(Elem::trivial());
    CHECK(B.f(0, triv) == top);
    CHECK(B.f(0, bottom) == triv);
    CHECK(B.eps(0, top) == 2);
    CHECK(B.phi(0, bottom) == 2);
    int arrows = 0;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) ++arrows;
    CHECK(arrows == 10);
    for (int a = 1; a <= 4; ++a) CHECK(B.f(0, B.index_of(Elem::null(a))) == -1);
  }
  SUBCASE("E6~2 little adjoint column") {
    Crystal B = root_model_crystal("E6~2", true, true, true);
    CHECK(B.size() == 27);
    int arrows = 0;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) ++arrows;
    CHECK(arrows == 10);
  }
  SUBCASE("D3~2 little adjoint column has only the chain") {
    const Cartan& C = cartan("D3~2");
    Crystal B = root_model_crystal("D3~2", true, true, true);
    CHECK(B.size() == 6);
    int arrows = 0;
    for (int i = 0; i < B.size(); ++i)
      if (B.f(0, i) >= 0) ++arrows;
    CHECK(arrows == 2);
    int top = B.index_of(Elem::root(C.theta()));
    CHECK(B.eps(0, top) == 2);
  }
}

TEST_CASE("virtual embeddings scale string data") {
  SUBCASE("C2 vector into D3~2 column") {
    const Cartan& C = cartan("C2~1");
    auto fold = C.dual_folding();
    REQUIRE(fold.has_value());
    Crystal base = minuscule_crystal("C2~1", 1, false);
    Crystal amb = root_model_crystal("D3~2", true, true, false);
    int seed_b = base.index_of(Elem::weight(C.fundamental_weight(1)));
    int seed_a = amb.index_of(Elem::root(cartan("D3~2").theta()));
    auto img = virtual_embedding(base, amb, *fold, seed_b, seed_a);
    int visited = 0;
    for (int x : img)
      if (x >= 0) ++visited;
    CHECK(visited == 4);
    // The null element and the trivial element are skipped over.
    std::set<int> image(img.begin(), img.end());
    CHECK(!image.count(amb.index_of(Elem::null(2))));
    CHECK(!image.count(amb.index_of(Elem::trivial())));
  }
  SUBCASE("E6~2 column into the E6 adjoint") {
    const Cartan& C = cartan("E6~2");
    auto fold = C.simply_laced_folding();
    REQUIRE(fold.has_value());
    Crystal base = root_model_crystal("E6~2", true, false, false);
    Crystal amb = root_model_crystal("E6~1", false, false, false);
    auto bh = base.highest_weight_elements(), ah = amb.highest_weight_elements();
    REQUIRE(bh.size() == 1);
    REQUIRE(ah.size() == 1);
    auto img = virtual_embedding(base, amb, *fold, bh[0], ah[0]);
    int visited = 0;
    for (int x : img)
      if (x >= 0) ++visited;
    CHECK(visited == 26);
  }
  SUBCASE("D4~3 column into the D4 adjoint") {
    const Cartan& C = cartan("D4~3");
    auto fold = C.simply_laced_folding();
    REQUIRE(fold.has_value());
    Crystal base = root_model_crystal("D4~3", true, false, false);
    Crystal amb = root_model_crystal("D4~1", false, false, false);
    auto bh = base.highest_weight_elements(), ah = amb.highest_weight_elements();
    REQUIRE(bh.size() == 1);
    REQUIRE(ah.size() == 1);
    auto img = virtual_embedding(base, amb, *fold, bh[0], ah[0]);
    int visited = 0;
    for (int x : img)
      if (x >= 0) ++visited;
    CHECK(visited == 7);
  }
  SUBCASE("G2 seven-crystal into a D4 minuscule triple") {
    const Cartan& C = cartan("G2~1");
    auto fold = C.simply_laced_folding();
    REQUIRE(fold.has_value());
    Crystal base = root_model_crystal("G2~1", true, false, false);
    Crystal amb = tensor(minuscule_crystal("D4~1", 1, false),
                         tensor(minuscule_crystal("D4~1", 3, false),
                                minuscule_crystal("D4~1", 4, false)));
    IntVec want{1, 0, 1, 1};
    std::vector<int> seeds;
    for (int hw : amb.highest_weight_elements())
      if (amb.weight(hw) == want) seeds.push_back(hw);
    REQUIRE(seeds.size() == 1);
    auto img = virtual_embedding(base, amb, *fold, base.highest_weight_elements()[0], seeds[0]);
    int visited = 0;
    for (int x : img)
      if (x >= 0) ++visited;
    CHECK(visited == 7);
  }
  SUBCASE("G2 seven-crystal into a D4~3 column pair") {
    const Cartan& C = cartan("G2~1");
    auto fold = C.dual_folding();
    REQUIRE(fold.has_value());
    Crystal col = root_model_crystal("D4~3", true, true, false);
    Crystal amb = tensor(col, col);
    Crystal base = root_model_crystal("G2~1", true, false, false);
    IntVec want{0, 1};
    std::vector<int> seeds;
    for (int hw : amb.highest_weight_elements())
      if (amb.weight(hw) == want) seeds.push_back(hw);
    REQUIRE(seeds.size() == 1);
    auto img = virtual_embedding(base, amb, *fold, base.highest_weight_elements()[0], seeds[0]);
    int visited = 0;
    for (int x : img)
      if (x >= 0) ++visited;
    CHECK(visited == 7);
  }
}

TEST_CASE("raising walks reach the component highest weight") {
  Crystal B = root_model_crystal("D4~1", false, true, false);
  for (int i = 0; i < B.size(); ++i) {
    int hw = B.to_highest_weight(i);
    for (int a = 1; a <= B.n; ++a) CHECK(B.e(a, hw) == -1);
  }
}
