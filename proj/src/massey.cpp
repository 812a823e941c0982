#include "mv/massey.hpp"

#include "mv/conjact.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mv {
namespace {

bool is_prime_power(i64 m) {
  if (m < 2) return false;
  i64 p = 2;
  while (p * p <= m && m % p != 0) ++p;
  if (m % p != 0) p = m;  // m prime
  while (m % p == 0) m /= p;
  return m == 1;
}

i64 chi_at(const MasseyProblem& pb, int i, int g) {
  return pb.chi[(size_t)i][(size_t)g];
}

// chi_i(g) chi_j(g)^{-1}, the action of g on M_{i,j}.
i64 act_ij(const MasseyProblem& pb, int i, int j, int g) {
  i64 m = pb.c.m;
  return mul_mod(chi_at(pb, i, g), inv_mod(chi_at(pb, j, g), m), m);
}

void zero_corner(TriW& t) { t.ent[(size_t)t.ctx->idx(0, t.ctx->n)] = 0; }

TriW quot(TriW t) {
  zero_corner(t);
  return t;
}

void validate_problem(const MasseyProblem& pb) {
  int n = pb.c.n;
  i64 m = pb.c.m;
  int ord = pb.gamma.order;
  if (n < 2) throw std::invalid_argument("massey: need n >= 2");
  if (!is_prime_power(m)) throw std::invalid_argument("massey: modulus must be a prime power");
  if ((int)pb.chi.size() != n + 1 || (int)pb.alpha.size() != n)
    throw std::invalid_argument("massey: wrong number of characters or classes");
  for (int i = 0; i <= n; ++i) {
    if ((int)pb.chi[(size_t)i].size() != ord)
      throw std::invalid_argument("massey: character table size mismatch");
    for (int g = 0; g < ord; ++g) {
      i64 v = norm_mod(chi_at(pb, i, g), m);
      if (std::gcd(v, m) != 1)
        throw std::invalid_argument("massey: character value is not a unit");
      for (int h = 0; h < ord; ++h)
        if (chi_at(pb, i, pb.gamma.mul(g, h)) != mul_mod(chi_at(pb, i, g), chi_at(pb, i, h), m))
          throw std::invalid_argument("massey: character is not multiplicative");
    }
  }
  for (int i = 0; i < n; ++i) {
    auto& a = pb.alpha[(size_t)i];
    if ((int)a.size() != ord)
      throw std::invalid_argument("massey: class table size mismatch");
    for (int g = 0; g < ord; ++g) {
      if (norm_mod(a[(size_t)g], m) != a[(size_t)g])
        throw std::invalid_argument("massey: class value out of range");
      for (int h = 0; h < ord; ++h) {
        i64 want = norm_mod(a[(size_t)g] + act_ij(pb, i, i + 1, g) * a[(size_t)h], m);
        if (a[(size_t)pb.gamma.mul(g, h)] != want)
          throw std::invalid_argument("massey: alpha entry is not a 1-cocycle");
      }
    }
  }
}

// Matrix of the lift determined by ds at group element g: diagonal chi,
// entries a_{i,j}(g) chi_j(g), corner zero.
TriW assemble(const MasseyProblem& pb, const DefiningSystem& ds, int g) {
  const UniContext& c = pb.c;
  TriW t(c);
  for (int i = 0; i <= c.n; ++i) t.diag[(size_t)i] = norm_mod(chi_at(pb, i, g), c.m);
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (i == 0 && j == c.n) continue;
    t.ent[(size_t)k] = mul_mod(ds.a[(size_t)k][(size_t)g], chi_at(pb, j, g), c.m);
  }
  return t;
}

bool is_quotient_hom(const MasseyProblem& pb, const std::vector<TriW>& hom) {
  int ord = pb.gamma.order;
  for (int g = 0; g < ord; ++g)
    for (int h = 0; h < ord; ++h)
      if (quot(tw_mul(hom[(size_t)g], hom[(size_t)h])) != hom[(size_t)pb.gamma.mul(g, h)])
        return false;
  return true;
}

std::vector<i64> flatten(const TriW& t) {
  std::vector<i64> v = t.diag;
  v.insert(v.end(), t.ent.begin(), t.ent.end());
  return v;
}

// Representatives of U^1(W)/Z(W): unipotent matrices supported on gaps >= 2
// with corner zero.
std::vector<TriW> radical_mod_corner(const UniContext& c) {
  std::vector<TriW> out;
  i64 total = group_size(c, 2);
  for (i64 code = 0; code < total; ++code) {
    UniTri u = decode(c, code, 2);
    if (u.get(0, c.n) != 0) continue;
    out.push_back(tw_from_uni(u));
  }
  return out;
}

}  // namespace

MasseyProblem classical_problem(FiniteGroup gamma, int n, i64 p,
                                std::vector<std::vector<i64>> alpha) {
  MasseyProblem pb;
  pb.c = UniContext(n, p);
  pb.gamma = std::move(gamma);
  pb.chi.assign((size_t)n + 1, std::vector<i64>((size_t)pb.gamma.order, 1));
  pb.alpha = std::move(alpha);
  pb.classical = true;
  validate_problem(pb);
  return pb;
}

MasseyProblem generalized_problem(FiniteGroup gamma, int n, i64 m,
                                  std::vector<std::vector<i64>> chi,
                                  std::vector<std::vector<i64>> alpha) {
  MasseyProblem pb;
  pb.c = UniContext(n, m);
  pb.gamma = std::move(gamma);
  pb.chi = std::move(chi);
  pb.alpha = std::move(alpha);
  pb.classical = true;
  for (auto& row : pb.chi)
    for (i64 v : row)
      if (v != 1) pb.classical = false;
  validate_problem(pb);
  return pb;
}

GModule coefficient_module(const MasseyProblem& pb, int i, int j) {
  GModule mod;
  mod.m = pb.c.m;
  mod.rank = 1;
  mod.act.resize((size_t)pb.gamma.order);
  for (int g = 0; g < pb.gamma.order; ++g) {
    DenseMat a(1, 1, pb.c.m);
    a.at(0, 0) = act_ij(pb, i, j, g);
    mod.act[(size_t)g] = a;
  }
  return mod;
}

DsFailure check_defining_system(const MasseyProblem& pb, const DefiningSystem& ds) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  if ((int)ds.a.size() != c.npairs)
    throw std::invalid_argument("defining system: wrong number of cochains");
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (i == 0 && j == c.n) continue;
    auto& a = ds.a[(size_t)k];
    if ((int)a.size() != ord)
      throw std::invalid_argument("defining system: cochain table size mismatch");
    for (int g = 0; g < ord; ++g)
      if (norm_mod(a[(size_t)g], c.m) != a[(size_t)g])
        throw std::invalid_argument("defining system: value out of range");
    if (a[(size_t)pb.gamma.identity] != 0) return {i, j, pb.gamma.identity, pb.gamma.identity};
    if (j == i + 1 && a != pb.alpha[(size_t)i]) {
      for (int g = 0; g < ord; ++g)
        if (a[(size_t)g] != pb.alpha[(size_t)i][(size_t)g]) return {i, j, g, g};
    }
  }
  // d a_{i,j}(s, t) = -sum_{i<m<j} a_{i,m}(s) * (s . a_{m,j}(t)).
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (i == 0 && j == c.n) continue;
    auto& a = ds.a[(size_t)k];
    for (int s = 0; s < ord; ++s)
      for (int t = 0; t < ord; ++t) {
        i64 lhs = act_ij(pb, i, j, s) * a[(size_t)t] - a[(size_t)pb.gamma.mul(s, t)] + a[(size_t)s];
        i64 rhs = 0;
        for (int mid = i + 1; mid < j; ++mid)
          rhs -= ds.a[(size_t)c.idx(i, mid)][(size_t)s] *
                 mul_mod(act_ij(pb, mid, j, s), ds.a[(size_t)c.idx(mid, j)][(size_t)t], c.m);
        if (norm_mod(lhs, c.m) != norm_mod(rhs, c.m)) return {i, j, s, t};
      }
  }
  return {};
}

DefiningSystem hom_to_defining_system(const MasseyProblem& pb,
                                      const std::vector<TriW>& hom) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  if ((int)hom.size() != ord) throw std::invalid_argument("lift: wrong table size");
  for (int g = 0; g < ord; ++g) {
    const TriW& t = hom[(size_t)g];
    if (t.ctx != &c && (t.diag.size() != (size_t)c.n + 1 || t.ent.size() != (size_t)c.npairs))
      throw std::invalid_argument("lift: wrong matrix shape");
    if (t.ent[(size_t)c.idx(0, c.n)] != 0)
      throw std::invalid_argument("lift: corner entry must be normalized to zero");
    for (int i = 0; i <= c.n; ++i)
      if (t.diag[(size_t)i] != norm_mod(chi_at(pb, i, g), c.m))
        throw std::invalid_argument("lift: diagonal does not match the characters");
  }
  if (!is_quotient_hom(pb, hom))
    throw std::invalid_argument("lift: not a homomorphism modulo the corner");

  DefiningSystem ds;
  ds.a.assign((size_t)c.npairs, std::vector<i64>((size_t)ord, 0));
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (i == 0 && j == c.n) continue;
    for (int g = 0; g < ord; ++g)
      ds.a[(size_t)k][(size_t)g] =
          mul_mod(hom[(size_t)g].ent[(size_t)k], inv_mod(chi_at(pb, j, g), c.m), c.m);
    if (j == i + 1 && ds.a[(size_t)k] != pb.alpha[(size_t)i])
      throw std::invalid_argument("lift: superdiagonal does not match the given classes");
  }
  DsFailure f = check_defining_system(pb, ds);
  if (!f.ok()) throw std::logic_error("extracted system fails the defining equation");
  return ds;
}

HomResult defining_system_to_hom(const MasseyProblem& pb, const DefiningSystem& ds) {
  HomResult res;
  res.failure = check_defining_system(pb, ds);
  if (!res.failure.ok()) return res;
  std::vector<TriW> hom;
  hom.reserve((size_t)pb.gamma.order);
  for (int g = 0; g < pb.gamma.order; ++g) hom.push_back(assemble(pb, ds, g));
  if (!is_quotient_hom(pb, hom))
    throw std::logic_error("assembled lift is not a homomorphism");
  res.hom = std::move(hom);
  return res;
}

MasseyValue massey_value(const MasseyProblem& pb, const DefiningSystem& ds) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  HomResult hr = defining_system_to_hom(pb, ds);
  if (!hr.hom) throw std::invalid_argument("massey_value: invalid defining system");
  const std::vector<TriW>& hom = *hr.hom;

  MasseyValue out;
  out.b.assign((size_t)ord * ord, 0);
  int corner = c.idx(0, c.n);
  for (int s = 0; s < ord; ++s)
    for (int t = 0; t < ord; ++t) {
      // Cup-product sum: b(s, t) = sum_m a_{0,m}(s) * (s . a_{m,n}(t)).
      i64 cup = 0;
      for (int mid = 1; mid < c.n; ++mid)
        cup += ds.a[(size_t)c.idx(0, mid)][(size_t)s] *
               mul_mod(act_ij(pb, mid, c.n, s), ds.a[(size_t)c.idx(mid, c.n)][(size_t)t], c.m);
      cup = norm_mod(cup, c.m);
      // Obstruction of the corner-free lift: the corner of hom(s) hom(t)
      // equals b(s, t) chi_n(st).
      TriW prod = tw_mul(hom[(size_t)s], hom[(size_t)t]);
      i64 obs = mul_mod(prod.ent[(size_t)corner],
                        inv_mod(chi_at(pb, c.n, pb.gamma.mul(s, t)), c.m), c.m);
      if (obs != cup) throw std::logic_error("massey_value: obstruction mismatch");
      out.b[(size_t)s * ord + t] = norm_mod(-cup, c.m);
    }

  // Class status in H^2(Gamma, M_{0,n}).
  GModule mod = coefficient_module(pb, 0, c.n);
  Cochain2 cb(ord, 1, c.m);
  for (int s = 0; s < ord; ++s)
    for (int t = 0; t < ord; ++t) cb.at(s, t, 0) = out.b[(size_t)s * ord + t];
  auto triv = coboundary2_test(pb.gamma, mod, cb);
  out.trivial = triv.has_value();
  if (triv) {
    std::vector<i64> f((size_t)ord, 0);
    for (int g = 0; g < ord; ++g) f[(size_t)g] = (*triv)[(size_t)g][0];
    out.trivializer = std::move(f);
  }
  return out;
}

std::vector<std::vector<TriW>> enumerate_lifts(const MasseyProblem& pb, i64 max_candidates) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  std::vector<int> free_pos;
  for (int k = 0; k < c.npairs; ++k) {
    auto [i, j] = c.pairs[(size_t)k];
    if (j - i >= 2 && !(i == 0 && j == c.n)) free_pos.push_back(k);
  }
  int ngens = (int)pb.gamma.gens.size();
  int nfree = (int)free_pos.size() * ngens;
  i64 total = 1;
  for (int k = 0; k < nfree; ++k) {
    if (total > max_candidates / c.m)
      throw budget_error("lift enumeration", std::numeric_limits<i64>::max());
    total *= c.m;
  }
  if (total > max_candidates) throw budget_error("lift enumeration", total);

  auto words = element_words(pb.gamma);
  std::vector<std::vector<TriW>> out;
  std::vector<i64> digits((size_t)nfree, 0);
  for (i64 code = 0; code < total; ++code) {
    // Generator images: diagonal and superdiagonal fixed by the problem,
    // free entries from the current digit vector, corner zero.
    std::vector<TriW> gen_img;
    for (int gi = 0; gi < ngens; ++gi) {
      int g = pb.gamma.gens[(size_t)gi];
      TriW t(c);
      for (int i = 0; i <= c.n; ++i) t.diag[(size_t)i] = norm_mod(chi_at(pb, i, g), c.m);
      for (int i = 0; i < c.n; ++i)
        t.set(i, i + 1, mul_mod(pb.alpha[(size_t)i][(size_t)g], chi_at(pb, i + 1, g), c.m));
      for (int f = 0; f < (int)free_pos.size(); ++f)
        t.ent[(size_t)free_pos[(size_t)f]] = digits[(size_t)(gi * (int)free_pos.size() + f)];
      gen_img.push_back(std::move(t));
    }
    // Extend along generator words, then keep only genuine homomorphisms.
    std::vector<TriW> hom((size_t)ord, tw_identity(c));
    for (int x = 0; x < ord; ++x) {
      TriW acc = tw_identity(c);
      for (int s : words[(size_t)x]) acc = tw_mul(acc, gen_img[(size_t)s]);
      zero_corner(acc);
      hom[(size_t)x] = std::move(acc);
    }
    if (is_quotient_hom(pb, hom)) out.push_back(std::move(hom));

    for (int k = nfree - 1; k >= 0; --k) {
      if (++digits[(size_t)k] < c.m) break;
      digits[(size_t)k] = 0;
    }
  }
  return out;
}

MasseySetReport massey_product_set(const MasseyProblem& pb, i64 max_candidates) {
  const UniContext& c = pb.c;
  int ord = pb.gamma.order;
  MasseySetReport rep;
  auto lifts = enumerate_lifts(pb, max_candidates);
  rep.hom_count = (i64)lifts.size();
  rep.defined = !lifts.empty();

  GModule mod = coefficient_module(pb, 0, c.n);
  auto same_class = [&](const std::vector<i64>& x, const std::vector<i64>& y) {
    Cochain2 d(ord, 1, c.m);
    for (int s = 0; s < ord; ++s)
      for (int t = 0; t < ord; ++t)
        d.at(s, t, 0) = norm_mod(x[(size_t)s * ord + t] - y[(size_t)s * ord + t], c.m);
    return coboundary2_test(pb.gamma, mod, d).has_value();
  };

  std::map<std::vector<i64>, int> buckets;
  auto radical = radical_mod_corner(c);
  for (auto& hom : lifts) {
    DefiningSystem ds = hom_to_defining_system(pb, hom);
    MasseyValue val = massey_value(pb, ds);
    rep.per_hom_trivial.push_back(val.trivial ? 1 : 0);
    if (val.trivial) rep.contains_zero = true;
    bool known = false;
    for (auto& cls : rep.classes)
      if (same_class(cls, val.b)) {
        known = true;
        break;
      }
    if (!known) {
      rep.classes.push_back(val.b);
      rep.class_trivial.push_back(val.trivial ? 1 : 0);
    }
    // Conjugacy bucket key: minimum flattened image table over the radical.
    std::vector<i64> best;
    for (auto& u : radical) {
      TriW ui = tw_inv(u);
      std::vector<i64> key;
      for (int g = 0; g < ord; ++g) {
        TriW conj = quot(tw_mul(tw_mul(u, hom[(size_t)g]), ui));
        auto fl = flatten(conj);
        key.insert(key.end(), fl.begin(), fl.end());
      }
      if (best.empty() || key < best) best = std::move(key);
    }
    buckets[best] = 1;
  }
  rep.bucket_count = (i64)buckets.size();
  return rep;
}

bool is_defined(const MasseyProblem& pb, i64 max_candidates) {
  return massey_product_set(pb, max_candidates).defined;
}

bool vanishes(const MasseyProblem& pb, i64 max_candidates) {
  MasseySetReport rep = massey_product_set(pb, max_candidates);
  if (rep.contains_zero && !rep.defined)
    throw std::logic_error("vanishing product must be defined");
  return rep.contains_zero;
}

}  // namespace mv
