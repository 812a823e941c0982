#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mv/massey.hpp"

#include <algorithm>
#include <set>

using namespace mv;

namespace {

FiniteGroup v4() { return group_product(group_cyclic(2), group_cyclic(2)); }

// The quotient of the tabulated unitriangular group by its one-parameter
// center, elements = corner-free dense codes.
FiniteGroup uni_mod_z(const UniContext& c, std::vector<i64>& codes) {
  KernelPattern kz = kernel_z(c);
  codes.clear();
  std::vector<int> idx_of((size_t)group_size(c, 1), -1);
  for (i64 cd = 0; cd < group_size(c, 1); ++cd) {
    UniTri u = decode(c, cd, 1);
    if (u.get(0, c.n) == 0) {
      idx_of[(size_t)cd] = (int)codes.size();
      codes.push_back(cd);
    }
  }
  int n = (int)codes.size();
  std::vector<int> table((size_t)n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      UniTri p = mul_masked(decode(c, codes[(size_t)x], 1), decode(c, codes[(size_t)y], 1), kz);
      table[(size_t)x * n + y] = idx_of[(size_t)encode(p, 1)];
    }
  return group_from_table(table);
}

// Independent count and value computation for classical problems: enumerate
// homomorphisms into U mod center through the UniTri masked arithmetic.
struct OracleReport {
  i64 hom_count = 0;
  std::vector<std::vector<i64>> classes;
};

OracleReport oracle_classical(const FiniteGroup& g, const UniContext& c,
                              const std::vector<std::vector<i64>>& alpha) {
  KernelPattern kz = kernel_z(c);
  auto words = element_words(g);
  std::vector<int> free_pos;
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (j - i >= 2 && !(i == 0 && j == c.n)) free_pos.push_back(k);
  }
  int ngens = (int)g.gens.size();
  int nfree = (int)free_pos.size() * ngens;
  i64 total = 1;
  for (int k = 0; k < nfree; ++k) total *= c.m;

  GModule mod = trivial_module(g, c.m, 1);
  auto same_class = [&](const std::vector<i64>& x, const std::vector<i64>& y) {
    Cochain2 d(g.order, 1, c.m);
    for (int s = 0; s < g.order; ++s)
      for (int t = 0; t < g.order; ++t)
        d.at(s, t, 0) = norm_mod(x[(size_t)s * g.order + t] - y[(size_t)s * g.order + t], c.m);
    return coboundary2_test(g, mod, d).has_value();
  };

  OracleReport rep;
  std::vector<i64> digits((size_t)nfree, 0);
  for (i64 code = 0; code < total; ++code) {
    std::vector<UniTri> gi;
    for (int s = 0; s < ngens; ++s) {
      UniTri u(c);
      for (int i = 0; i < c.n; ++i)
        u.set(i, i + 1, alpha[(size_t)i][(size_t)g.gens[(size_t)s]]);
      for (int f = 0; f < (int)free_pos.size(); ++f)
        u.ent[(size_t)free_pos[(size_t)f]] = digits[(size_t)(s * (int)free_pos.size() + f)];
      gi.push_back(std::move(u));
    }
    std::vector<UniTri> hom((size_t)g.order, uni_identity(c));
    for (int x = 0; x < g.order; ++x)
      for (int s : words[(size_t)x]) hom[(size_t)x] = mul_masked(hom[(size_t)x], gi[(size_t)s], kz);
    bool ok = true;
    for (int x = 0; ok && x < g.order; ++x)
      for (int y = 0; ok && y < g.order; ++y)
        if (mul_masked(hom[(size_t)x], hom[(size_t)y], kz) != hom[(size_t)g.mul(x, y)]) ok = false;
    if (ok) {
      ++rep.hom_count;
      std::vector<i64> b((size_t)g.order * g.order, 0);
      for (int s = 0; s < g.order; ++s)
        for (int t = 0; t < g.order; ++t) {
          i64 acc = 0;
          for (int mid = 1; mid < c.n; ++mid)
            acc -= hom[(size_t)s].get(0, mid) * hom[(size_t)t].get(mid, c.n);
          b[(size_t)s * g.order + t] = norm_mod(acc, c.m);
        }
      bool known = false;
      for (auto& cls : rep.classes)
        if (same_class(cls, b)) {
          known = true;
          break;
        }
      if (!known) rep.classes.push_back(std::move(b));
    }
    for (int k = nfree - 1; k >= 0; --k) {
      if (++digits[(size_t)k] < c.m) break;
      digits[(size_t)k] = 0;
    }
  }
  return rep;
}

// All defining systems by brute force over the free cochain values.
std::vector<DefiningSystem> brute_defining_systems(const MasseyProblem& pb) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  std::vector<std::pair<int, int>> slots;  // (pair index, group element)
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (j - i < 2 || (i == 0 && j == c.n)) continue;
    for (int g = 0; g < ord; ++g)
      if (g != pb.gamma.identity) slots.push_back({k, g});
  }
  DefiningSystem ds;
  ds.a.assign((size_t)c.npairs, std::vector<i64>((size_t)ord, 0));
  for (int i = 0; i < c.n; ++i) ds.a[(size_t)c.idx(i, i + 1)] = pb.alpha[(size_t)i];

  std::vector<DefiningSystem> out;
  std::vector<i64> digits(slots.size(), 0);
  i64 total = 1;
  for (size_t k = 0; k < slots.size(); ++k) total *= c.m;
  for (i64 code = 0; code < total; ++code) {
    for (size_t k = 0; k < slots.size(); ++k)
      ds.a[(size_t)slots[k].first][(size_t)slots[k].second] = digits[k];
    if (check_defining_system(pb, ds).ok()) out.push_back(ds);
    for (int k = (int)slots.size() - 1; k >= 0; --k) {
      if (++digits[(size_t)k] < c.m) break;
      digits[(size_t)k] = 0;
    }
  }
  return out;
}

std::vector<UniTri> abar_from_alpha(const FiniteGroup& g, const UniContext& c,
                                    const std::vector<std::vector<i64>>& alpha) {
  KernelPattern k1 = kernel_u1(c);
  std::vector<UniTri> abar;
  for (int x = 0; x < g.order; ++x) {
    AVec s((size_t)c.n, 0);
    for (int i = 0; i < c.n; ++i) s[(size_t)i] = alpha[(size_t)i][(size_t)x];
    abar.push_back(mask_reduce(lift_A(c, s), k1));
  }
  return abar;
}

}  // namespace

TEST_CASE("problem validation") {
  FiniteGroup g = group_cyclic(2);
  std::vector<i64> chi0 = {1, 1}, one = {0, 1}, zero = {0, 0};
  CHECK_THROWS_AS(classical_problem(g, 3, 6, {one, zero, one}), std::invalid_argument);
  CHECK_THROWS_AS(classical_problem(g, 1, 2, {one}), std::invalid_argument);
  CHECK_THROWS_AS(classical_problem(g, 3, 2, {one, zero}), std::invalid_argument);
  // alpha not a cocycle: f(g) = 1 over Z/4 with trivial action needs f(g^2) = 2.
  CHECK_THROWS_AS(classical_problem(g, 3, 4, {{0, 1}, zero, zero}), std::invalid_argument);
  // non-unit character value
  CHECK_THROWS_AS(generalized_problem(g, 3, 4, {{1, 2}, chi0, chi0, chi0},
                                      {zero, zero, zero}),
                  std::invalid_argument);
  // non-multiplicative character: 2 squared is not 1 mod 9
  CHECK_THROWS_AS(generalized_problem(g, 3, 9, {{1, 2}, chi0, chi0, chi0},
                                      {zero, zero, zero}),
                  std::invalid_argument);
  // valid generalized: chi(g) = 7 squares to 1 mod 8
  std::vector<i64> chi7 = {1, 7};
  MasseyProblem pb = generalized_problem(g, 3, 8, {chi0, chi7, chi0, chi7},
                                         {{0, 4}, {0, 4}, {0, 3}});
  CHECK_FALSE(pb.classical);
}

TEST_CASE("n=2 is the cup product") {
  FiniteGroup g = v4();
  auto homs = homs_to_zm(g, 2);  // 0, chi1, chi2, chi1+chi2 in some order
  std::vector<i64> chi1, chi2;
  for (auto& h : homs) {
    if (h[1] == 1 && h[2] == 0) chi1 = h;
    if (h[1] == 0 && h[2] == 1) chi2 = h;
  }
  REQUIRE(!chi1.empty());
  REQUIRE(!chi2.empty());

  MasseyProblem pb = classical_problem(g, 2, 2, {chi1, chi2});
  auto lifts = enumerate_lifts(pb);
  CHECK(lifts.size() == 1);  // no free entries at n = 2
  DefiningSystem ds = hom_to_defining_system(pb, lifts[0]);
  MasseyValue val = massey_value(pb, ds);
  CHECK_FALSE(val.trivial);

  // Agreement with the standalone cup product of the two characters.
  GModule mod = trivial_module(g, 2, 1);
  Pairing mult(2, 1, 1, 1);
  mult.at(0, 0, 0) = 1;
  Cochain1 a, b;
  for (int x = 0; x < g.order; ++x) {
    a.push_back({chi1[(size_t)x]});
    b.push_back({chi2[(size_t)x]});
  }
  Cochain2 cup = cup11(g, mod, mult, a, b);
  for (int s = 0; s < g.order; ++s)
    for (int t = 0; t < g.order; ++t)
      CHECK(val.b[(size_t)s * g.order + t] == norm_mod(-cup.at(s, t, 0), 2));

  CHECK(is_defined(pb));
  CHECK_FALSE(vanishes(pb));
  // chi1 cup 0 vanishes; chi1 cup chi1 is the Bockstein, nontrivial on V4.
  CHECK(vanishes(classical_problem(g, 2, 2, {chi1, homs[0]})));
  CHECK_FALSE(vanishes(classical_problem(g, 2, 2, {chi1, chi1})));
}

TEST_CASE("round trip and bijection with brute-force defining systems") {
  struct Case {
    FiniteGroup g;
    int n;
  };
  std::vector<Case> cases;
  cases.push_back({group_cyclic(2), 3});
  cases.push_back({group_cyclic(4), 3});
  cases.push_back({v4(), 3});
  cases.push_back({group_cyclic(2), 4});
  for (auto& cs : cases) {
    auto homs = homs_to_zm(cs.g, 2);
    // a deterministic sample of alpha tuples
    for (size_t pick = 0; pick < homs.size(); ++pick) {
      std::vector<std::vector<i64>> alpha;
      for (int i = 0; i < cs.n; ++i) alpha.push_back(homs[(pick + (size_t)i) % homs.size()]);
      MasseyProblem pb = classical_problem(cs.g, cs.n, 2, alpha);
      auto lifts = enumerate_lifts(pb);
      for (auto& hom : lifts) {
        DefiningSystem ds = hom_to_defining_system(pb, hom);
        for (int i = 0; i < cs.n; ++i) CHECK(ds.a[(size_t)pb.c.idx(i, i + 1)] == alpha[(size_t)i]);
        HomResult back = defining_system_to_hom(pb, ds);
        REQUIRE(back.hom.has_value());
        CHECK(*back.hom == hom);
      }
      // Dwyer bijection: defining systems and lifts are in natural bijection.
      auto brute = brute_defining_systems(pb);
      CHECK(brute.size() == lifts.size());
      for (auto& ds : brute) {
        HomResult hr = defining_system_to_hom(pb, ds);
        REQUIRE(hr.hom.has_value());
        CHECK(std::count(lifts.begin(), lifts.end(), *hr.hom) == 1);
      }
    }
  }
}

TEST_CASE("zero classes give the zero system and a vanishing product") {
  FiniteGroup g = v4();
  std::vector<std::vector<i64>> alpha(3, std::vector<i64>((size_t)g.order, 0));
  MasseyProblem pb = classical_problem(g, 3, 2, alpha);
  DefiningSystem zero;
  zero.a.assign((size_t)pb.c.npairs, std::vector<i64>((size_t)g.order, 0));
  CHECK(check_defining_system(pb, zero).ok());
  MasseyValue val = massey_value(pb, zero);
  CHECK(val.trivial);
  CHECK(std::all_of(val.b.begin(), val.b.end(), [](i64 x) { return x == 0; }));
  CHECK(vanishes(pb));
}

TEST_CASE("trivializer certificate") {
  FiniteGroup g = group_cyclic(4);
  auto homs = homs_to_zm(g, 2);
  std::vector<i64> chi;
  for (auto& h : homs)
    if (h[1] == 1) chi = h;
  MasseyProblem pb = classical_problem(g, 3, 2, {chi, chi, chi});
  GModule mod = coefficient_module(pb, 0, 3);
  for (auto& hom : enumerate_lifts(pb)) {
    MasseyValue val = massey_value(pb, hom_to_defining_system(pb, hom));
    Cochain2 b(g.order, 1, 2);
    for (int s = 0; s < g.order; ++s)
      for (int t = 0; t < g.order; ++t) b.at(s, t, 0) = val.b[(size_t)s * g.order + t];
    CHECK(is_cocycle2(g, mod, b));
    if (val.trivial) {
      REQUIRE(val.trivializer.has_value());
      Cochain1 f;
      for (int x = 0; x < g.order; ++x) f.push_back({(*val.trivializer)[(size_t)x]});
      CHECK(d1(g, mod, f) == b);
    }
  }
}

TEST_CASE("failure reporting identifies a broken equation") {
  FiniteGroup g = v4();
  auto homs = homs_to_zm(g, 2);
  std::vector<i64> zero((size_t)g.order, 0);
  MasseyProblem pb = classical_problem(g, 3, 2, {homs[1], zero, homs[2]});
  auto lifts = enumerate_lifts(pb);
  REQUIRE(!lifts.empty());
  DefiningSystem ds = hom_to_defining_system(pb, lifts[0]);

  // Corrupt a free entry: the equation for some stored pair must now fail.
  DefiningSystem bad = ds;
  int k02 = pb.c.idx(0, 2);
  bad.a[(size_t)k02][1] = norm_mod(bad.a[(size_t)k02][1] + 1, 2);
  DsFailure f = check_defining_system(pb, bad);
  CHECK_FALSE(f.ok());
  CHECK(pb.c.valid_pair(f.i, f.j));
  CHECK(f.sigma >= 0);
  CHECK(f.sigma < g.order);
  CHECK(f.tau >= 0);
  CHECK(f.tau < g.order);
  HomResult hr = defining_system_to_hom(pb, bad);
  CHECK_FALSE(hr.hom.has_value());
  CHECK(hr.failure.i == f.i);
  CHECK(hr.failure.j == f.j);
  CHECK_THROWS_AS(massey_value(pb, bad), std::invalid_argument);

  // Superdiagonal must match the problem's chosen cocycles exactly.
  DefiningSystem wrong = ds;
  int k01 = pb.c.idx(0, 1);
  wrong.a[(size_t)k01][1] = norm_mod(wrong.a[(size_t)k01][1] + 1, 2);
  CHECK_FALSE(check_defining_system(pb, wrong).ok());
}

TEST_CASE("lifts of one problem can vanish individually or not") {
  // alpha = (chi, 0, chi) on Z/2: every value class is zero or not depending
  // on the chosen lift, and the product itself vanishes.
  FiniteGroup g = group_cyclic(2);
  std::vector<i64> chi = {0, 1}, zero = {0, 0};
  MasseyProblem pb = classical_problem(g, 3, 2, {chi, zero, chi});
  MasseySetReport rep = massey_product_set(pb);
  CHECK(rep.defined);
  CHECK(rep.hom_count == 4);
  CHECK(rep.contains_zero);
  CHECK(std::count(rep.per_hom_trivial.begin(), rep.per_hom_trivial.end(), 1) == 2);
  CHECK(std::count(rep.per_hom_trivial.begin(), rep.per_hom_trivial.end(), 0) == 2);
  CHECK(vanishes(pb));
  // Conjugation by the unipotent radical only moves the quotiented corner
  // here, so every lift sits in its own bucket.
  CHECK(rep.bucket_count == 4);
}

TEST_CASE("defined non-vanishing fourfold product on Z/4") {
  FiniteGroup g = group_cyclic(4);
  std::vector<i64> chi = {0, 1, 0, 1};
  MasseyProblem pb = classical_problem(g, 4, 2, {chi, chi, chi, chi});
  MasseySetReport rep = massey_product_set(pb);
  CHECK(rep.defined);
  CHECK(rep.hom_count == 32);
  CHECK(rep.classes.size() == 1);
  CHECK_FALSE(rep.contains_zero);
  CHECK(is_defined(pb));
  CHECK_FALSE(vanishes(pb));

  // Independent certificate: the embedding problem through the unipotent
  // radical is unsolvable by exhaustive search.
  auto abar = abar_from_alpha(g, pb.c, pb.alpha);
  EmbeddingResult er = solve_embedding(g, pb.c, kernel_u1(pb.c), abar);
  CHECK(er.status == EmbeddingResult::unsolvable);

  // The threefold analogue on Z/4 vanishes and the solver agrees.
  MasseyProblem pb3 = classical_problem(g, 3, 2, {chi, chi, chi});
  CHECK(vanishes(pb3));
  auto abar3 = abar_from_alpha(g, pb3.c, pb3.alpha);
  CHECK(solve_embedding(g, pb3.c, kernel_u1(pb3.c), abar3).status == EmbeddingResult::solved);
}

TEST_CASE("defined non-vanishing triple product on the unitriangular quotient") {
  UniContext c(3, 2);
  std::vector<i64> codes;
  FiniteGroup g = uni_mod_z(c, codes);
  CHECK(g.order == 32);
  // Coordinate characters of the superdiagonal.
  std::vector<std::vector<i64>> alpha(3, std::vector<i64>((size_t)g.order, 0));
  for (int x = 0; x < g.order; ++x) {
    UniTri u = decode(c, codes[(size_t)x], 1);
    for (int i = 0; i < 3; ++i) alpha[(size_t)i][(size_t)x] = u.get(i, i + 1);
  }
  MasseyProblem pb = classical_problem(g, 3, 2, alpha);
  MasseySetReport rep = massey_product_set(pb);
  CHECK(rep.defined);  // the identity embedding is a lift
  CHECK(rep.hom_count == 64);
  CHECK(rep.classes.size() == 8);
  CHECK_FALSE(rep.contains_zero);
  auto abar = abar_from_alpha(g, c, alpha);
  CHECK(solve_embedding(g, c, kernel_u1(c), abar).status == EmbeddingResult::unsolvable);
}

TEST_CASE("product set agrees with the masked unitriangular oracle") {
  std::vector<FiniteGroup> groups = {group_cyclic(2), group_cyclic(4), v4()};
  UniContext c(3, 2);
  for (auto& g : groups) {
    auto homs = homs_to_zm(g, 2);
    GModule mod = trivial_module(g, 2, 1);
    auto same_class = [&](const std::vector<i64>& x, const std::vector<i64>& y) {
      Cochain2 d(g.order, 1, 2);
      for (int s = 0; s < g.order; ++s)
        for (int t = 0; t < g.order; ++t)
          d.at(s, t, 0) = norm_mod(x[(size_t)s * g.order + t] - y[(size_t)s * g.order + t], 2);
      return coboundary2_test(g, mod, d).has_value();
    };
    int seen_nontrivial = 0;
    for (auto& a0 : homs)
      for (auto& a1 : homs)
        for (auto& a2 : homs) {
          MasseyProblem pb = classical_problem(g, 3, 2, {a0, a1, a2});
          MasseySetReport rep = massey_product_set(pb);
          OracleReport orc = oracle_classical(g, c, pb.alpha);
          CHECK(rep.hom_count == orc.hom_count);
          CHECK(rep.defined == (orc.hom_count > 0));
          REQUIRE(rep.classes.size() == orc.classes.size());
          for (auto& cls : orc.classes)
            CHECK(std::count_if(rep.classes.begin(), rep.classes.end(),
                                [&](const std::vector<i64>& x) { return same_class(x, cls); }) == 1);
          // Solvability of the embedding problem matches 0 being a value.
          auto abar = abar_from_alpha(g, c, pb.alpha);
          EmbeddingResult er = solve_embedding(g, c, kernel_u1(c), abar);
          CHECK(rep.contains_zero == (er.status == EmbeddingResult::solved));
          if (rep.defined && !rep.contains_zero) ++seen_nontrivial;
        }
    (void)seen_nontrivial;
  }
}

TEST_CASE("generalized with trivial characters matches classical bit for bit") {
  FiniteGroup g = group_cyclic(4);
  auto homs = homs_to_zm(g, 2);
  std::vector<std::vector<i64>> alpha = {homs[1], homs[0], homs[1]};
  MasseyProblem pc = classical_problem(g, 3, 2, alpha);
  std::vector<std::vector<i64>> chi(4, std::vector<i64>((size_t)g.order, 1));
  MasseyProblem pg = generalized_problem(g, 3, 2, chi, alpha);
  CHECK(pg.classical);

  auto lc = enumerate_lifts(pc);
  auto lg = enumerate_lifts(pg);
  REQUIRE(lc.size() == lg.size());
  for (size_t i = 0; i < lc.size(); ++i) {
    CHECK(lc[i] == lg[i]);
    // Classical lifts are unipotent; their matrices agree with UniTri copies.
    for (auto& t : lc[i]) CHECK(tw_is_unipotent(t));
    MasseyValue vc = massey_value(pc, hom_to_defining_system(pc, lc[i]));
    MasseyValue vg = massey_value(pg, hom_to_defining_system(pg, lg[i]));
    CHECK(vc.b == vg.b);
    CHECK(vc.trivial == vg.trivial);
  }
  MasseySetReport rc = massey_product_set(pc);
  MasseySetReport rg = massey_product_set(pg);
  CHECK(rc.hom_count == rg.hom_count);
  CHECK(rc.bucket_count == rg.bucket_count);
  CHECK(rc.classes == rg.classes);
  CHECK(rc.contains_zero == rg.contains_zero);
}

TEST_CASE("generalized coefficients with nontrivial characters") {
  FiniteGroup g = group_cyclic(2);

  SUBCASE("order 3 with sign action") {
    // chi alternates 1, -1 down the diagonal; every adjacent action is -1,
    // so any value is a 1-cocycle for the superdiagonal modules. The order-2
    // relation forces both free entries of the generator image to vanish.
    std::vector<i64> one = {1, 1}, sgn = {1, 2};
    MasseyProblem pb = generalized_problem(g, 3, 3, {one, sgn, one, sgn},
                                           {{0, 1}, {0, 0}, {0, 2}});
    auto lifts = enumerate_lifts(pb);
    CHECK(lifts.size() == 1);
    GModule mod = coefficient_module(pb, 0, 3);
    CHECK(validate_module(g, mod));
    for (auto& hom : lifts) {
      DefiningSystem ds = hom_to_defining_system(pb, hom);
      CHECK(check_defining_system(pb, ds).ok());
      HomResult back = defining_system_to_hom(pb, ds);
      REQUIRE(back.hom.has_value());
      CHECK(*back.hom == hom);
      MasseyValue val = massey_value(pb, ds);
      Cochain2 b(g.order, 1, 3);
      for (int s = 0; s < g.order; ++s)
        for (int t = 0; t < g.order; ++t) b.at(s, t, 0) = val.b[(size_t)s * g.order + t];
      CHECK(is_cocycle2(g, mod, b));
    }
  }

  SUBCASE("order 8 with unit characters") {
    std::vector<i64> one = {1, 1}, chi7 = {1, 7};
    MasseyProblem pb = generalized_problem(g, 3, 8, {one, chi7, one, chi7},
                                           {{0, 4}, {0, 4}, {0, 3}});
    auto lifts = enumerate_lifts(pb);
    CHECK(!lifts.empty());
    for (auto& hom : lifts) {
      DefiningSystem ds = hom_to_defining_system(pb, hom);
      HomResult back = defining_system_to_hom(pb, ds);
      REQUIRE(back.hom.has_value());
      CHECK(*back.hom == hom);
      massey_value(pb, ds);  // internal obstruction cross-check must hold
    }
    MasseySetReport rep = massey_product_set(pb);
    CHECK(rep.hom_count == (i64)lifts.size());
    CHECK(rep.bucket_count <= rep.hom_count);
  }
}

TEST_CASE("budget and degenerate cases") {
  FiniteGroup g = v4();
  auto homs = homs_to_zm(g, 2);
  MasseyProblem pb = classical_problem(g, 3, 2, {homs[1], homs[2], homs[1]});
  CHECK_THROWS_AS(enumerate_lifts(pb, 1), budget_error);
  try {
    enumerate_lifts(pb, 1);
  } catch (const budget_error& e) {
    CHECK(e.required > 1);
  }

  FiniteGroup triv = group_cyclic(1);
  MasseyProblem pt = classical_problem(triv, 3, 2,
                                       std::vector<std::vector<i64>>(3, {0}));
  MasseySetReport rep = massey_product_set(pt);
  CHECK(rep.hom_count == 1);
  CHECK(rep.contains_zero);
  CHECK(vanishes(pt));
}
