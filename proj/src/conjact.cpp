#include "mv/conjact.hpp"

#include <algorithm>
#include <numeric>

namespace mv {

namespace {

int32_t find_root(std::vector<int32_t>& parent, int32_t x) {
  while (parent[(size_t)x] != x) {
    parent[(size_t)x] = parent[(size_t)parent[(size_t)x]];  // path halving
    x = parent[(size_t)x];
  }
  return x;
}

void unite(std::vector<int32_t>& parent, int32_t a, int32_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b)
    parent[(size_t)b] = a;
  else
    parent[(size_t)a] = b;
}

}  // namespace

ConjClasses conj_classes(const UniContext& c, i64 budget) {
  i64 total = group_size(c, 2);
  if (total > budget)
    throw budget_error("conj_classes: enumeration budget exceeded", total);

  // Entry layout of U^1 elements: the pairs with gap >= 2 in diag-major
  // order, matching the dense code radix order.
  std::vector<std::pair<int, int>> pos;
  for (auto& [i, j] : c.pairs)
    if (j - i >= 2) pos.emplace_back(i, j);
  int ne = (int)pos.size();
  std::vector<int> at((size_t)(c.n + 1) * (c.n + 1), -1);
  for (int t = 0; t < ne; ++t)
    at[(size_t)pos[t].first * (c.n + 1) + pos[t].second] = t;

  std::vector<int32_t> parent((size_t)total);
  std::iota(parent.begin(), parent.end(), 0);

  std::vector<i64> ent((size_t)ne), work((size_t)ne);
  for (i64 code = 0; code < total; ++code) {
    i64 rem = code;
    for (int t = 0; t < ne; ++t) {
      ent[(size_t)t] = rem % c.m;
      rem /= c.m;
    }
    // Conjugation by each generator e_{k,l} of U^1 is a sparse row+column
    // update; the (k,l) contributions of the two updates cancel.
    for (int g = 0; g < ne; ++g) {
      auto [k, l] = pos[(size_t)g];
      std::copy(ent.begin(), ent.end(), work.begin());
      for (int b = l + 2; b <= c.n; ++b) {
        int src = at[(size_t)l * (c.n + 1) + b];
        if (src < 0) continue;
        int dst = at[(size_t)k * (c.n + 1) + b];
        work[(size_t)dst] = (work[(size_t)dst] + ent[(size_t)src]) % c.m;
      }
      for (int a = 0; a + 2 <= k; ++a) {
        int src = at[(size_t)a * (c.n + 1) + k];
        if (src < 0) continue;
        int dst = at[(size_t)a * (c.n + 1) + l];
        work[(size_t)dst] = (work[(size_t)dst] + c.m - ent[(size_t)src]) % c.m;
      }
      i64 code2 = 0;
      for (int t = ne - 1; t >= 0; --t) code2 = code2 * c.m + work[(size_t)t];
      if (code2 != code) unite(parent, (int32_t)code, (int32_t)code2);
    }
  }

  ConjClasses cc;
  cc.ctx = &c;
  cc.class_of.assign((size_t)total, -1);
  for (i64 code = 0; code < total; ++code) {
    int32_t root = find_root(parent, (int32_t)code);
    if (root == (int32_t)code) {
      cc.class_of[(size_t)code] = (int32_t)cc.reps.size();
      cc.reps.push_back(code);
    } else {
      // Roots are always the minimal code of their component, so the root's
      // id is already assigned.
      cc.class_of[(size_t)code] = cc.class_of[(size_t)root];
    }
  }
  return cc;
}

int act_on_class(const ConjClasses& cc, const AVec& s, int cid) {
  const UniContext& c = *cc.ctx;
  UniTri q = cc.rep(cid);
  UniTri m1 = conj(lift_A(c, s), q);
  UniTri m2 = aide_matrix(c, s, q);
  if (!(m1 == m2))
    throw std::logic_error("act_on_class: closed form disagrees with conjugation");
  return cc.class_of_elem(m1);
}

std::vector<int> fixed_classes(const ConjClasses& cc, const AVec& s) {
  std::vector<int> fixed;
  for (int cid = 0; cid < cc.nclasses(); ++cid)
    if (act_on_class(cc, s, cid) == cid) fixed.push_back(cid);
  return fixed;
}

int tau_class(const ConjClasses& cc, int cid) {
  return cc.class_of_elem(tau(cc.rep(cid)));
}

int span_rank_fp(const std::vector<BVec>& vecs, i64 p) {
  if (vecs.empty()) return 0;
  DenseMat m((int)vecs.size(), (int)vecs[0].size(), p);
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = 0; j < vecs[i].size(); ++j) m.at((int)i, (int)j) = vecs[i][j];
  return rref_fp(m).rank;
}

bool span_contains_fp(const std::vector<BVec>& vecs, const BVec& v, i64 p) {
  auto with = vecs;
  with.push_back(v);
  return span_rank_fp(with, p) == span_rank_fp(vecs, p);
}

bool span_equal_fp(const std::vector<BVec>& a, const std::vector<BVec>& b, i64 p) {
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  int r = span_rank_fp(both, p);
  return r == span_rank_fp(a, p) && r == span_rank_fp(b, p);
}

std::vector<BVec> image_span_in_B(const ConjClasses& cc, const AVec& s) {
  const UniContext& c = *cc.ctx;
  std::vector<BVec> vecs;
  for (int cid : fixed_classes(cc, s)) {
    BVec b = to_B(cc.rep(cid));
    if (a_act_on_B(c, s, b) != b)
      throw std::logic_error("image_span_in_B: fixed class image not s-invariant");
    vecs.push_back(std::move(b));
  }
  // Reduce to a basis.
  if (vecs.empty()) return vecs;
  DenseMat m((int)vecs.size(), (int)vecs[0].size(), c.m);
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = 0; j < vecs[i].size(); ++j) m.at((int)i, (int)j) = vecs[i][j];
  auto pivots = row_reduce_fp(m);
  std::vector<BVec> basis;
  for (size_t i = 0; i < pivots.size(); ++i) {
    BVec row((size_t)m.cols);
    for (int j = 0; j < m.cols; ++j) row[(size_t)j] = m.at((int)i, j);
    basis.push_back(std::move(row));
  }
  return basis;
}

std::vector<BVec> b_sigma_space(const UniContext& c, const AVec& s) {
  auto bp = b_pairs(c.n);
  int dim = (int)bp.size();
  DenseMat t(dim, dim, c.m);
  for (int j = 0; j < dim; ++j) {
    BVec unit((size_t)dim, 0);
    unit[(size_t)j] = 1;
    BVec img = a_act_on_B(c, s, unit);
    for (int i = 0; i < dim; ++i)
      t.at(i, j) = norm_mod(img[(size_t)i] - (i == j ? 1 : 0), c.m);
  }
  auto res = rref_fp(t);
  std::vector<BVec> basis;
  for (auto& k : res.kernel) basis.push_back(k);
  return basis;
}

std::vector<BVec> b0_space(const UniContext& c) {
  auto bp = b_pairs(c.n);
  std::vector<std::pair<int, int>> gens = {
      {0, 2}, {0, 3}, {c.n - 3, c.n}, {c.n - 2, c.n}};
  std::vector<BVec> basis;
  std::vector<std::pair<int, int>> seen;
  for (auto& g : gens) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    BVec v(bp.size(), 0);
    size_t t = 0;
    while (bp[t] != g) ++t;
    v[t] = 1;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<BVec> b0_cap_b_sigma(const UniContext& c, const AVec& s) {
  auto b0 = b0_space(c);
  auto bp = b_pairs(c.n);
  int dim = (int)bp.size();
  // Solve (T - 1) B0 x = 0 in the B0 coordinates.
  DenseMat m(dim, (int)b0.size(), c.m);
  for (size_t j = 0; j < b0.size(); ++j) {
    BVec img = a_act_on_B(c, s, b0[j]);
    for (int i = 0; i < dim; ++i)
      m.at(i, (int)j) = norm_mod(img[(size_t)i] - b0[j][(size_t)i], c.m);
  }
  auto res = rref_fp(m);
  std::vector<BVec> basis;
  for (auto& x : res.kernel) {
    BVec v((size_t)dim, 0);
    for (size_t j = 0; j < b0.size(); ++j)
      for (int i = 0; i < dim; ++i)
        v[(size_t)i] = norm_mod(v[(size_t)i] + x[j] * b0[j][(size_t)i], c.m);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<int> lemma_b2_witness(const ConjClasses& cc, const AVec& s, const BVec& b) {
  const UniContext& c = *cc.ctx;
  auto bp = b_pairs(c.n);
  for (size_t t = 0; t < bp.size(); ++t)
    if (bp[t].second - bp[t].first != 2 && b[t] != 0)
      throw std::invalid_argument("lemma_b2_witness: support off the second diagonal");
  if (a_act_on_B(c, s, b) != b)
    throw std::invalid_argument("lemma_b2_witness: element not s-invariant");
  UniTri q = lift_B(c, b);
  int cid = cc.class_of_elem(q);
  if (act_on_class(cc, s, cid) != cid) return std::nullopt;
  return cid;
}

OuterExponentReport outer_exponent(const ConjClasses& cc) {
  OuterExponentReport rep;
  rep.class_count = cc.nclasses();
  i64 d = 1;
  for (int cid = 0; cid < cc.nclasses(); ++cid)
    d = std::lcm(d, elem_order(cc.rep(cid)));  // order is a class invariant
  rep.group_exponent = d;
  for (i64 i = 1; i < d; ++i) {
    if (std::gcd(i, d) != 1) continue;
    bool fixes = true;
    for (int cid = 0; cid < cc.nclasses() && fixes; ++cid) {
      UniTri x = cc.rep(cid);
      if (cc.class_of_elem(power(x, i)) != cid) fixes = false;
    }
    if (fixes) rep.power_fixers.push_back(i);
  }
  // The smallest divisor e of d such that powering by any r congruent to
  // 1 mod e fixes every class; this is what makes [x] -> [x^i] well defined
  // for i ranging over (Z/e)^*.
  for (i64 e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    bool ok = true;
    for (i64 r = 0; r < d && ok; ++r) {
      if (r % e != 1 % e) continue;
      for (int cid = 0; cid < cc.nclasses() && ok; ++cid)
        if (cc.class_of_elem(power(cc.rep(cid), r)) != cid) ok = false;
    }
    if (ok) {
      rep.outer_exponent = e;
      break;
    }
  }
  return rep;
}

ThetaReport theta_surjectivity(const ConjClasses& cc, const BVec& b) {
  const UniContext& c = *cc.ctx;
  if (c.n != 5) throw std::invalid_argument("theta_surjectivity: defined for n = 5");
  auto bp = b_pairs(5);
  auto coeff = [&](int i, int j) {
    size_t t = 0;
    while (bp[t] != std::make_pair(i, j)) ++t;
    return b[t];
  };
  if (coeff(1, 4) != 1 || coeff(0, 3) != 0 || coeff(2, 5) != 0)
    throw std::invalid_argument(
        "theta_surjectivity: third diagonal must be exactly e~_{1,4}");
  i64 b0 = coeff(0, 2), b1 = coeff(1, 3), b2 = coeff(2, 4), b3 = coeff(3, 5);
  if (!((b0 * b1) % c.m != 0 || (b2 * b3) % c.m != 0 || (b0 * b3) % c.m != 0))
    throw std::invalid_argument("theta_surjectivity: case precondition on b fails");

  UniTri q = lift_B(c, b);
  UniTri qi = inv(q);
  auto theta = [&](const UniTri& m) { return mul(mul(mul(inv(m), q), m), qi); };

  ThetaReport rep;
  // Well defined: changing the lift by elements of the commutator subgroup
  // never changes the value.
  rep.well_defined = true;
  std::vector<std::pair<int, int>> u3pos = {{0, 4}, {1, 5}, {0, 5}};
  for (int t = 0; t < (int)bp.size(); ++t) {
    UniTri m = elem_gen(c, bp[(size_t)t].first, bp[(size_t)t].second, 1);
    UniTri base = theta(m);
    if (lcs_level(base) < 3) rep.well_defined = false;
    for (auto& [i, j] : u3pos)
      for (i64 cval = 0; cval < c.m; ++cval)
        if (!(theta(mul(m, elem_gen(c, i, j, cval))) == base)) rep.well_defined = false;
  }

  auto is_power = [&](const UniTri& x, int i, int j, i64 e) {
    return x == elem_gen(c, i, j, e);
  };
  rep.generator_values =
      is_power(theta(elem_gen(c, 2, 4, 1)), 0, 4, b0) &&
      is_power(theta(elem_gen(c, 2, 5, 1)), 0, 5, b0) &&
      is_power(theta(elem_gen(c, 3, 5, 1)), 1, 5, b1) &&
      is_power(theta(elem_gen(c, 0, 2, 1)), 0, 4, -b2) &&
      is_power(theta(elem_gen(c, 0, 3, 1)), 0, 5, -b3) &&
      is_power(theta(elem_gen(c, 1, 3, 1)), 1, 5, -b3);

  // Surjectivity onto U^3, viewed as F_p^3 via the entries (0,4), (1,5), (0,5).
  {
    DenseMat img(3, (int)bp.size(), c.m);
    for (int t = 0; t < (int)bp.size(); ++t) {
      UniTri v = theta(elem_gen(c, bp[(size_t)t].first, bp[(size_t)t].second, 1));
      for (int r = 0; r < 3; ++r)
        img.at(r, t) = v.get(u3pos[(size_t)r].first, u3pos[(size_t)r].second);
    }
    rep.surjective = rref_fp(img).rank == 3;
  }

  // Uniqueness: every lift of e~_{1,4} + b lies in the class of Q.
  rep.unique_class = true;
  int qcid = cc.class_of_elem(q);
  for (i64 z0 = 0; z0 < c.m; ++z0)
    for (i64 z1 = 0; z1 < c.m; ++z1)
      for (i64 z2 = 0; z2 < c.m; ++z2) {
        UniTri x = q;
        x.set(0, 4, z0);
        x.set(1, 5, z1);
        x.set(0, 5, z2);
        if (cc.class_of_elem(x) != qcid) rep.unique_class = false;
      }
  return rep;
}

}  // namespace mv
