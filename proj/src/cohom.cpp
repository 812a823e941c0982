#include "mv/cohom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace mv {

// ---- finite groups --------------------------------------------------------

int FiniteGroup::pow(int a, i64 e) const {
  int base = a, r = identity;
  i64 n = e;
  if (n < 0) {
    base = inv(a);
    n = -n;
  }
  while (n > 0) {
    if (n & 1) r = mul(r, base);
    base = mul(base, base);
    n >>= 1;
  }
  return r;
}

i64 FiniteGroup::elem_order(int a) const {
  i64 o = 1;
  int x = a;
  while (x != identity) {
    x = mul(x, a);
    ++o;
  }
  return o;
}

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> gens) {
  std::vector<char> in((size_t)g.order, 0);
  std::vector<int> queue = {g.identity};
  in[(size_t)g.identity] = 1;
  for (int x : gens)
    if (!in[(size_t)x]) {
      in[(size_t)x] = 1;
      queue.push_back(x);
    }
  for (size_t q = 0; q < queue.size(); ++q)
    for (int s : gens) {
      int y = g.mul(queue[q], s);
      if (!in[(size_t)y]) {
        in[(size_t)y] = 1;
        queue.push_back(y);
      }
    }
  std::vector<int> out;
  for (int x = 0; x < g.order; ++x)
    if (in[(size_t)x]) out.push_back(x);
  return out;
}

FiniteGroup group_from_table(std::vector<int> table, std::vector<int> gens) {
  FiniteGroup g;
  size_t n2 = table.size();
  int order = (int)std::lround(std::sqrt((double)n2));
  while ((size_t)order * order < n2) ++order;
  if ((size_t)order * order != n2 || order == 0)
    throw std::invalid_argument("group_from_table: table is not square");
  if (order > kMaxTableOrder)
    throw std::invalid_argument("group_from_table: order exceeds the table cap");
  for (int v : table)
    if (v < 0 || v >= order)
      throw std::invalid_argument("group_from_table: entry out of range");
  g.order = order;
  g.table = std::move(table);

  // Latin square: every row and column is a permutation.
  for (int a = 0; a < order; ++a) {
    std::vector<char> row((size_t)order, 0), col((size_t)order, 0);
    for (int b = 0; b < order; ++b) {
      if (row[(size_t)g.mul(a, b)]++) throw std::invalid_argument("group_from_table: row not a permutation");
      if (col[(size_t)g.mul(b, a)]++) throw std::invalid_argument("group_from_table: column not a permutation");
    }
  }
  // Two-sided identity.
  g.identity = -1;
  for (int e = 0; e < order && g.identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < order && ok; ++x)
      if (g.mul(e, x) != x || g.mul(x, e) != x) ok = false;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw std::invalid_argument("group_from_table: no identity");
  // Inverses.
  g.inv_of.assign((size_t)order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) {
        g.inv_of[(size_t)a] = b;
        break;
      }
    if (g.inv_of[(size_t)a] < 0) throw std::invalid_argument("group_from_table: missing inverse");
  }
  // Generators: supplied or a deterministic greedy set.
  if (!gens.empty()) {
    for (int s : gens)
      if (s < 0 || s >= order) throw std::invalid_argument("group_from_table: generator out of range");
    g.gens = gens;
    if ((int)subgroup_closure(g, g.gens).size() != order)
      throw std::invalid_argument("group_from_table: generators do not generate");
  } else {
    std::vector<int> closure = subgroup_closure(g, {});
    for (int x = 0; x < order && (int)closure.size() < order; ++x) {
      if (std::binary_search(closure.begin(), closure.end(), x)) continue;
      g.gens.push_back(x);
      closure = subgroup_closure(g, g.gens);
    }
  }
  // Light's associativity test over the generating set.
  for (int s : g.gens)
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        if (g.mul(a, g.mul(s, b)) != g.mul(g.mul(a, s), b))
          throw std::invalid_argument("group_from_table: not associative");
  return g;
}

FiniteGroup group_cyclic(int m) {
  if (m < 1) throw std::invalid_argument("group_cyclic: order must be positive");
  std::vector<int> t((size_t)m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[(size_t)a * m + b] = (a + b) % m;
  return group_from_table(std::move(t), m > 1 ? std::vector<int>{1} : std::vector<int>{});
}

FiniteGroup group_product(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.order * b.order;
  if (n > kMaxTableOrder) throw std::invalid_argument("group_product: order exceeds the table cap");
  auto id = [&](int x, int y) { return x * b.order + y; };
  std::vector<int> t((size_t)n * n);
  for (int xa = 0; xa < a.order; ++xa)
    for (int ya = 0; ya < b.order; ++ya)
      for (int xb = 0; xb < a.order; ++xb)
        for (int yb = 0; yb < b.order; ++yb)
          t[(size_t)id(xa, ya) * n + id(xb, yb)] = id(a.mul(xa, xb), b.mul(ya, yb));
  std::vector<int> gens;
  for (int s : a.gens) gens.push_back(id(s, b.identity));
  for (int s : b.gens) gens.push_back(id(a.identity, s));
  return group_from_table(std::move(t), gens);
}

FiniteGroup group_dihedral(int m) {
  // Element j*m + i represents s^j r^i with s r s = r^{-1}.
  if (m < 1) throw std::invalid_argument("group_dihedral: order must be positive");
  int n = 2 * m;
  std::vector<int> t((size_t)n * n);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < 2; ++jj)
        for (int ii = 0; ii < m; ++ii) {
          int rj = (j + jj) % 2;
          int ri = (((jj ? -i : i) + ii) % m + m) % m;
          t[(size_t)(j * m + i) * n + (jj * m + ii)] = rj * m + ri;
        }
  return group_from_table(std::move(t), {1 % m == 0 ? m : 1, m});
}

FiniteGroup group_quaternion() {
  // Elements 2*axis + sign over axes {1, i, j, k}.
  auto amul = [](int a, int b, int& sign) {
    // Multiplication of the axes 0=1, 1=i, 2=j, 3=k; sign picks up -1 flips.
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    sign *= sg[a][b];
    return ax[a][b];
  };
  std::vector<int> t(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int sign = (a & 1 ? -1 : 1) * (b & 1 ? -1 : 1);
      int ax = amul(a >> 1, b >> 1, sign);
      t[(size_t)a * 8 + b] = 2 * ax + (sign < 0 ? 1 : 0);
    }
  return group_from_table(std::move(t), {2, 4});  // i and j
}

FiniteGroup group_from_uni(const UniContext& c, int min_gap) {
  i64 n = group_size(c, min_gap);
  if (n > kMaxTableOrder) throw std::invalid_argument("group_from_uni: order exceeds the table cap");
  std::vector<UniTri> elems;
  for (i64 i = 0; i < n; ++i) elems.push_back(decode(c, i, min_gap));
  std::vector<int> t((size_t)n * n);
  for (i64 a = 0; a < n; ++a)
    for (i64 b = 0; b < n; ++b)
      t[(size_t)a * n + b] = (int)encode(mul(elems[(size_t)a], elems[(size_t)b]), min_gap);
  return group_from_table(std::move(t));
}

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elems) {
  std::vector<char> in((size_t)g.order, 0);
  for (int x : elems) {
    if (x < 0 || x >= g.order) return false;
    in[(size_t)x] = 1;
  }
  if (!in[(size_t)g.identity]) return false;
  for (int a : elems)
    for (int b : elems)
      if (!in[(size_t)g.mul(a, b)]) return false;
  return true;
}

Subgroup subgroup_group(const FiniteGroup& g, const std::vector<int>& elems) {
  if (!is_subgroup(g, elems)) throw std::invalid_argument("subgroup_group: not a subgroup");
  Subgroup s;
  s.elems = elems;
  std::sort(s.elems.begin(), s.elems.end());
  std::map<int, int> idx;
  for (size_t i = 0; i < s.elems.size(); ++i) idx[s.elems[i]] = (int)i;
  int n = (int)s.elems.size();
  std::vector<int> t((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      t[(size_t)a * n + b] = idx[g.mul(s.elems[(size_t)a], s.elems[(size_t)b])];
  s.group = group_from_table(std::move(t));
  return s;
}

namespace {

std::vector<std::vector<int>> keep_maximal(std::set<std::vector<int>> sets) {
  std::vector<std::vector<int>> all(sets.begin(), sets.end());
  std::vector<std::vector<int>> out;
  for (auto& s : all) {
    bool maximal = true;
    for (auto& t : all)
      if (s != t && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> maximal_cyclic_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> sets;
  for (int x = 0; x < g.order; ++x) sets.insert(subgroup_closure(g, {x}));
  return keep_maximal(std::move(sets));
}

std::vector<std::vector<int>> maximal_bicyclic_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> sets;
  for (int a = 0; a < g.order; ++a)
    for (int b = a; b < g.order; ++b)
      if (g.mul(a, b) == g.mul(b, a)) sets.insert(subgroup_closure(g, {a, b}));
  return keep_maximal(std::move(sets));
}

std::vector<std::vector<int>> all_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> done;
  std::vector<std::vector<int>> queue = {subgroup_closure(g, {})};
  done.insert(queue[0]);
  for (size_t q = 0; q < queue.size(); ++q) {
    std::vector<int> s = queue[q];
    for (int x = 0; x < g.order; ++x) {
      if (std::binary_search(s.begin(), s.end(), x)) continue;
      auto gens = s;
      gens.push_back(x);
      auto t = subgroup_closure(g, gens);
      if (done.insert(t).second) queue.push_back(t);
    }
  }
  return {done.begin(), done.end()};
}

std::vector<std::vector<int>> element_words(const FiniteGroup& g) {
  std::vector<std::vector<int>> words((size_t)g.order);
  std::vector<char> seen((size_t)g.order, 0);
  std::vector<int> queue = {g.identity};
  seen[(size_t)g.identity] = 1;
  for (size_t q = 0; q < queue.size(); ++q) {
    int x = queue[q];
    for (size_t s = 0; s < g.gens.size(); ++s) {
      int y = g.mul(x, g.gens[s]);
      if (!seen[(size_t)y]) {
        seen[(size_t)y] = 1;
        words[(size_t)y] = words[(size_t)x];
        words[(size_t)y].push_back((int)s);
        queue.push_back(y);
      }
    }
  }
  return words;
}

std::vector<std::vector<i64>> homs_to_zm(const FiniteGroup& g, i64 m) {
  int ng = (int)g.gens.size();
  i64 total = 1;
  for (int i = 0; i < ng; ++i) {
    total *= m;
    if (total > 1'000'000) throw std::invalid_argument("homs_to_zm: candidate space too large");
  }
  auto words = element_words(g);
  std::set<std::vector<i64>> out;
  for (i64 code = 0; code < total; ++code) {
    std::vector<i64> val((size_t)ng);
    i64 rem = code;
    for (int i = 0; i < ng; ++i) {
      val[(size_t)i] = rem % m;
      rem /= m;
    }
    std::vector<i64> f((size_t)g.order, 0);
    for (int x = 0; x < g.order; ++x)
      for (int s : words[(size_t)x]) f[(size_t)x] = norm_mod(f[(size_t)x] + val[(size_t)s], m);
    bool ok = true;
    for (int a = 0; a < g.order && ok; ++a)
      for (int b = 0; b < g.order && ok; ++b)
        if (f[(size_t)g.mul(a, b)] != norm_mod(f[(size_t)a] + f[(size_t)b], m)) ok = false;
    if (ok) out.insert(std::move(f));
  }
  return {out.begin(), out.end()};
}

// ---- modules and cochains -------------------------------------------------

GModule trivial_module(const FiniteGroup& g, i64 m, int rank) {
  GModule mod;
  mod.m = m;
  mod.rank = rank;
  mod.act.assign((size_t)g.order, DenseMat::identity(rank, m));
  return mod;
}

bool validate_module(const FiniteGroup& g, const GModule& mod) {
  if ((int)mod.act.size() != g.order) return false;
  for (auto& a : mod.act) {
    if (a.rows != mod.rank || a.cols != mod.rank || a.mod != mod.m) return false;
    try {
      mat_inv(a);
    } catch (const std::exception&) {
      return false;
    }
  }
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (!(mat_mul(mod.act[(size_t)a], mod.act[(size_t)b]) == mod.act[(size_t)g.mul(a, b)]))
        return false;
  return true;
}

GModule restrict_module(const GModule& mod, const std::vector<int>& elems) {
  GModule out;
  out.m = mod.m;
  out.rank = mod.rank;
  auto sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  for (int x : sorted) out.act.push_back(mod.act[(size_t)x]);
  return out;
}

bool is_cocycle1(const FiniteGroup& g, const GModule& mod, const Cochain1& f) {
  if ((int)f.size() != g.order) return false;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      auto gb = mod.apply(a, f[(size_t)b]);
      for (int r = 0; r < mod.rank; ++r)
        if (f[(size_t)g.mul(a, b)][(size_t)r] !=
            norm_mod(f[(size_t)a][(size_t)r] + gb[(size_t)r], mod.m))
          return false;
    }
  return true;
}

Cochain2 d1(const FiniteGroup& g, const GModule& mod, const Cochain1& f) {
  Cochain2 c(g.order, mod.rank, mod.m);
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      auto gb = mod.apply(a, f[(size_t)b]);
      for (int r = 0; r < mod.rank; ++r)
        c.at(a, b, r) = norm_mod(gb[(size_t)r] - f[(size_t)g.mul(a, b)][(size_t)r] +
                                     f[(size_t)a][(size_t)r],
                                 mod.m);
    }
  return c;
}

bool is_cocycle2(const FiniteGroup& g, const GModule& mod, const Cochain2& c) {
  if (c.order != g.order || c.rank != mod.rank || c.m != mod.m) return false;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      for (int e = 0; e < g.order; ++e) {
        std::vector<i64> cb((size_t)mod.rank);
        for (int r = 0; r < mod.rank; ++r) cb[(size_t)r] = c.at(b, e, r);
        auto acb = mod.apply(a, cb);
        for (int r = 0; r < mod.rank; ++r) {
          i64 v = acb[(size_t)r] - c.at(g.mul(a, b), e, r) + c.at(a, g.mul(b, e), r) -
                  c.at(a, b, r);
          if (norm_mod(v, mod.m) != 0) return false;
        }
      }
  return true;
}

std::vector<i64> Pairing::apply(const std::vector<i64>& x, const std::vector<i64>& y) const {
  if ((int)x.size() != ra || (int)y.size() != rb)
    throw std::invalid_argument("Pairing: dimension mismatch");
  std::vector<i64> out((size_t)rc, 0);
  for (int c = 0; c < rc; ++c) {
    i64 s = 0;
    for (int i = 0; i < ra; ++i)
      for (int j = 0; j < rb; ++j) s += at(c, i, j) * x[(size_t)i] % m * y[(size_t)j];
    out[(size_t)c] = norm_mod(s, m);
  }
  return out;
}

Cochain2 cup11(const FiniteGroup& g, const GModule& mb, const Pairing& pair,
               const Cochain1& a, const Cochain1& b) {
  if (pair.m != mb.m) throw std::invalid_argument("cup11: modulus mismatch");
  Cochain2 c(g.order, pair.rc, pair.m);
  for (int s = 0; s < g.order; ++s)
    for (int t = 0; t < g.order; ++t) {
      auto v = pair.apply(a[(size_t)s], mb.apply(s, b[(size_t)t]));
      for (int r = 0; r < pair.rc; ++r) c.at(s, t, r) = v[(size_t)r];
    }
  return c;
}

// ---- H^1 ------------------------------------------------------------------

namespace {

void factor_pk(i64 m, i64& p, int& k) {
  if (m < 2) throw std::invalid_argument("modulus must be at least 2");
  p = 2;
  while (m % p != 0) ++p;
  k = 0;
  i64 r = m;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw std::invalid_argument("modulus must be a prime power");
}

// Rows of the cocycle constraint system on f in M^G: for every generator s
// and element h, f(sh) - f(s) - s.f(h) = 0, one row per output coordinate.
std::vector<SparseRow> cocycle1_rows(const FiniteGroup& g, const GModule& mod) {
  std::vector<SparseRow> rows;
  auto var = [&](int x, int j) { return x * mod.rank + j; };
  for (int r = 0; r < mod.rank; ++r) rows.push_back({{var(g.identity, r), 1}});
  for (int s : g.gens)
    for (int h = 0; h < g.order; ++h) {
      int sh = g.mul(s, h);
      const DenseMat& a = mod.act[(size_t)s];
      for (int r = 0; r < mod.rank; ++r) {
        SparseRow row;
        row.emplace_back(var(sh, r), 1);
        row.emplace_back(var(s, r), norm_mod(-1, mod.m));
        for (int j = 0; j < mod.rank; ++j)
          if (a.at(r, j) != 0) row.emplace_back(var(h, j), norm_mod(-a.at(r, j), mod.m));
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

std::vector<i64> coboundary_vec(const FiniteGroup& g, const GModule& mod, int j) {
  std::vector<i64> row((size_t)g.order * mod.rank, 0);
  for (int x = 0; x < g.order; ++x)
    for (int r = 0; r < mod.rank; ++r)
      row[(size_t)x * mod.rank + r] =
          norm_mod(mod.act[(size_t)x].at(r, j) - (r == j ? 1 : 0), mod.m);
  return row;
}

Cochain1 vec_to_cochain(const FiniteGroup& g, const GModule& mod, const std::vector<i64>& v) {
  Cochain1 f((size_t)g.order, std::vector<i64>((size_t)mod.rank));
  for (int x = 0; x < g.order; ++x)
    for (int r = 0; r < mod.rank; ++r) f[(size_t)x][(size_t)r] = v[(size_t)x * mod.rank + r];
  return f;
}

}  // namespace

H1Basis h1(const FiniteGroup& g, const GModule& mod) {
  i64 p;
  int k;
  factor_pk(mod.m, p, k);
  int ncols = g.order * mod.rank;
  auto rows = cocycle1_rows(g, mod);
  H1Basis out;
  out.field = (k == 1);

  if (out.field) {
    DenseMat a((int)rows.size(), ncols, p);
    for (size_t i = 0; i < rows.size(); ++i)
      for (auto& [c, v] : rows[i]) a.at((int)i, c) = norm_mod(a.at((int)i, c) + v, p);
    auto z = rref_fp(a).kernel;
    DenseMat b(mod.rank, ncols, p);
    for (int j = 0; j < mod.rank; ++j) {
      auto v = coboundary_vec(g, mod, j);
      for (int c = 0; c < ncols; ++c) b.at(j, c) = v[(size_t)c];
    }
    auto pivots = row_reduce_fp(b);
    out.b_basis = DenseMat((int)pivots.size(), ncols, p);
    for (size_t i = 0; i < pivots.size(); ++i)
      for (int c = 0; c < ncols; ++c) out.b_basis.at((int)i, c) = b.at((int)i, c);
    ZpkEchelon ech(ncols, p, 1);
    for (int i = 0; i < out.b_basis.rows; ++i) {
      std::vector<i64> row((size_t)ncols);
      for (int c = 0; c < ncols; ++c) row[(size_t)c] = out.b_basis.at(i, c);
      ech.add(row);
    }
    for (auto& zv : z)
      if (ech.add(zv)) out.reps.push_back(vec_to_cochain(g, mod, zv));
    out.dim = (int)out.reps.size();
  } else {
    KernelTracker64 tr(ncols, p, k);
    for (auto& r : rows) tr.add_constraint(r);
    ZpkEchelon zech(ncols, p, k), bech(ncols, p, k);
    for (auto& gv : tr.generators()) {
      zech.add(gv);
      out.reps.push_back(vec_to_cochain(g, mod, gv));
    }
    for (int j = 0; j < mod.rank; ++j) bech.add(coboundary_vec(g, mod, j));
    out.dim = (int)(zech.log_order() - bech.log_order());
  }
  return out;
}

std::optional<std::vector<i64>> h1_coords(const FiniteGroup& g, const GModule& mod,
                                          const H1Basis& basis, const Cochain1& z) {
  if (!basis.field) throw std::invalid_argument("h1_coords: prime modulus only");
  int ncols = g.order * mod.rank;
  int nb = basis.b_basis.rows, nr = (int)basis.reps.size();
  DenseMat at(ncols, nb + nr, mod.m);
  for (int i = 0; i < nb; ++i)
    for (int c = 0; c < ncols; ++c) at.at(c, i) = basis.b_basis.at(i, c);
  for (int i = 0; i < nr; ++i)
    for (int x = 0; x < g.order; ++x)
      for (int r = 0; r < mod.rank; ++r)
        at.at(x * mod.rank + r, nb + i) = basis.reps[(size_t)i][(size_t)x][(size_t)r];
  std::vector<i64> b((size_t)ncols);
  for (int x = 0; x < g.order; ++x)
    for (int r = 0; r < mod.rank; ++r)
      b[(size_t)(x * mod.rank + r)] = z[(size_t)x][(size_t)r];
  auto sol = solve_fp(at, b);
  if (!sol) return std::nullopt;
  return std::vector<i64>(sol->x.begin() + nb, sol->x.end());
}

DenseMat restrict_h1(const FiniteGroup& g, const GModule& mod,
                     const std::vector<int>& sub_elems, const H1Basis& bg,
                     const H1Basis& bh) {
  Subgroup sg = subgroup_group(g, sub_elems);
  GModule mh = restrict_module(mod, sg.elems);
  DenseMat m(bh.dim, bg.dim, mod.m);
  for (int j = 0; j < bg.dim; ++j) {
    Cochain1 f((size_t)sg.group.order);
    for (int i = 0; i < sg.group.order; ++i)
      f[(size_t)i] = bg.reps[(size_t)j][(size_t)sg.elems[(size_t)i]];
    auto coords = h1_coords(sg.group, mh, bh, f);
    if (!coords) throw std::logic_error("restrict_h1: restricted class outside the basis span");
    for (int i = 0; i < bh.dim; ++i) m.at(i, j) = (*coords)[(size_t)i];
  }
  return m;
}

std::vector<std::vector<i64>> sha1_cyc(const FiniteGroup& g, const GModule& mod,
                                       const H1Basis& bg) {
  if (bg.dim == 0) return {};
  auto cyc = maximal_cyclic_subgroups(g);
  std::vector<DenseMat> mats;
  int nrows = 0;
  for (auto& sub : cyc) {
    Subgroup sg = subgroup_group(g, sub);
    GModule mh = restrict_module(mod, sg.elems);
    auto bh = h1(sg.group, mh);
    mats.push_back(restrict_h1(g, mod, sub, bg, bh));
    nrows += bh.dim;
  }
  DenseMat stacked(std::max(nrows, 1), bg.dim, mod.m);
  int r = 0;
  for (auto& m : mats)
    for (int i = 0; i < m.rows; ++i, ++r)
      for (int j = 0; j < m.cols; ++j) stacked.at(r, j) = m.at(i, j);
  return rref_fp(stacked).kernel;
}

// ---- H^2 ------------------------------------------------------------------

std::optional<Cochain1> coboundary2_test(const FiniteGroup& g, const GModule& mod,
                                         const Cochain2& c) {
  if (!is_cocycle2(g, mod, c)) throw std::invalid_argument("coboundary2_test: not a 2-cocycle");
  i64 p;
  int k;
  factor_pk(mod.m, p, k);
  int ncols = g.order * mod.rank;
  auto var = [&](int x, int j) { return x * mod.rank + j; };
  std::vector<std::pair<SparseRow, i64>> rows;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      int ab = g.mul(a, b);
      const DenseMat& m = mod.act[(size_t)a];
      for (int r = 0; r < mod.rank; ++r) {
        SparseRow row;
        for (int j = 0; j < mod.rank; ++j)
          if (m.at(r, j) != 0) row.emplace_back(var(b, j), m.at(r, j));
        row.emplace_back(var(ab, r), norm_mod(-1, mod.m));
        row.emplace_back(var(a, r), 1);
        rows.emplace_back(std::move(row), c.at(a, b, r));
      }
    }
  auto x = solve_sparse_zpk(ncols, rows, p, k);
  if (!x) return std::nullopt;
  auto f = vec_to_cochain(g, mod, *x);
  if (!(d1(g, mod, f) == c)) throw std::logic_error("coboundary2_test: solver returned a bad cochain");
  return f;
}

namespace {

// Position-major kernel tracker over Z/p^k with byte entries; columns are
// generators of the tracked subgroup of (Z/p^k)^n, rows are coordinates.
struct ByteTracker {
  int n;
  int p, k, q;
  std::vector<uint8_t> m;  // m[pos * n + j]
  std::vector<int> vbuf;

  ByteTracker(int n, int p, int k) : n(n), p(p), k(k), q(1), vbuf((size_t)n) {
    for (int i = 0; i < k; ++i) q *= p;
    if (q > 255) throw std::invalid_argument("ByteTracker: modulus too large");
    m.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) m[(size_t)i * n + i] = 1;
  }

  void add_constraint(const std::vector<std::pair<int, int>>& entries) {
    std::fill(vbuf.begin(), vbuf.end(), 0);
    for (auto& [pos, cf] : entries) {
      const uint8_t* row = &m[(size_t)pos * n];
      for (int j = 0; j < n; ++j) vbuf[(size_t)j] += cf * row[j];
    }
    int jstar = -1, vstar = k;
    for (int j = 0; j < n; ++j) {
      int v = vbuf[(size_t)j] % q;
      if (v < 0) v += q;
      vbuf[(size_t)j] = v;
      if (v == 0) continue;
      int val = 0;
      while (v % p == 0) {
        v /= p;
        ++val;
      }
      if (val < vstar) {
        vstar = val;
        jstar = j;
      }
    }
    if (jstar < 0) return;
    int pv = 1;
    for (int i = 0; i < vstar; ++i) pv *= p;
    int iu = (int)inv_mod(vbuf[(size_t)jstar] / pv, q);
    std::vector<std::pair<int, int>> nz;
    for (int j = 0; j < n; ++j)
      if (j != jstar && vbuf[(size_t)j] != 0)
        nz.emplace_back(j, (int)((i64)(vbuf[(size_t)j] / pv) * iu % q));
    for (int pos = 0; pos < n; ++pos) {
      uint8_t* row = &m[(size_t)pos * n];
      int piv = row[jstar];
      if (!piv) continue;
      for (auto& [j, t] : nz) {
        int x = row[j] - t * piv % q;
        row[j] = (uint8_t)(x < 0 ? x + q : x);
      }
    }
    int scale = q / pv;  // p^(k - vstar), or 0 when vstar == 0 since q = 0 mod q
    scale = vstar == 0 ? 0 : scale % q;
    for (int pos = 0; pos < n; ++pos) {
      uint8_t* cell = &m[(size_t)pos * n + jstar];
      *cell = (uint8_t)(*cell * scale % q);
    }
  }

  std::vector<i64> column(int j) const {
    std::vector<i64> out((size_t)n);
    for (int pos = 0; pos < n; ++pos) out[(size_t)pos] = m[(size_t)pos * n + j];
    return out;
  }

  bool column_nonzero(int j) const {
    for (int pos = 0; pos < n; ++pos)
      if (m[(size_t)pos * n + j]) return true;
    return false;
  }
};

// Normalized pair index (g, h), both != identity.
struct PairIndex {
  int order, identity;
  int nid;  // order - 1

  PairIndex(const FiniteGroup& g) : order(g.order), identity(g.identity), nid(g.order - 1) {}
  int el(int x) const { return x < identity ? x : x - 1; }
  int pos(int g, int h) const { return el(g) * nid + el(h); }
  int dim() const { return nid * nid; }
};

// Rows (as normalized-pair sparse entries) of the coboundary of the unit
// 1-cochain supported at h, trivial coefficients.
std::vector<std::pair<int, int>> b2_gen_row(const FiniteGroup& g, const PairIndex& px, int h) {
  std::vector<std::pair<int, int>> row;
  for (int x = 0; x < g.order; ++x) {
    if (x == g.identity) continue;
    // d f(x, y) = f(y) - f(xy) + f(x) evaluated at f = delta_h.
    for (int y = 0; y < g.order; ++y) {
      if (y == g.identity) continue;
      int v = (y == h ? 1 : 0) + (x == h ? 1 : 0) - (g.mul(x, y) == h ? 1 : 0);
      if (v != 0) row.emplace_back(px.pos(x, y), v);
    }
  }
  return row;
}

// Bockstein of a homomorphism psi: G -> Z/m under Z/m -> Z/m^2 -> Z/m, as a
// normalized 2-cocycle vector: the carry of psi(g) + psi(h).
std::vector<i64> bockstein_vec(const FiniteGroup& g, const PairIndex& px,
                               const std::vector<i64>& psi, i64 m) {
  std::vector<i64> v((size_t)px.dim(), 0);
  for (int x = 0; x < g.order; ++x) {
    if (x == g.identity) continue;
    for (int y = 0; y < g.order; ++y) {
      if (y == g.identity) continue;
      v[(size_t)px.pos(x, y)] = psi[(size_t)x] + psi[(size_t)y] >= m ? 1 : 0;
    }
  }
  return v;
}

void add_cocycle2_constraints(const FiniteGroup& g, const PairIndex& px, ByteTracker& tr) {
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) continue;
    for (int b = 0; b < g.order; ++b) {
      if (b == g.identity) continue;
      int ab = g.mul(a, b);
      for (int e = 0; e < g.order; ++e) {
        if (e == g.identity) continue;
        int be = g.mul(b, e);
        std::vector<std::pair<int, int>> row;
        row.emplace_back(px.pos(b, e), 1);
        if (ab != g.identity) row.emplace_back(px.pos(ab, e), -1);
        if (be != g.identity) row.emplace_back(px.pos(a, be), 1);
        row.emplace_back(px.pos(a, b), -1);
        tr.add_constraint(row);
      }
    }
  }
}

// One primary part of bar H^2 with trivial coefficients Z/p^k; with
// qz_quotient, Bockstein images of Hom(G, Z/p^k) are added to the
// coboundary side, yielding the p-part of H^2(G, Q/Z).
H2Result h2_part(const FiniteGroup& g, i64 p, int k, bool qz_quotient) {
  H2Result out;
  out.p = p;
  out.k = k;
  i64 m = pow_i64(p, k);
  if (m > 255) throw std::invalid_argument("h2_bar: modulus too large for the byte engine");
  PairIndex px(g);
  int n = px.dim();
  if (n == 0) return out;
  ByteTracker tr(n, (int)p, k);
  add_cocycle2_constraints(g, px, tr);
  ZpkEchelon zech(n, p, k), bech(n, p, k);
  for (int j = 0; j < n; ++j)
    if (tr.column_nonzero(j)) zech.add(tr.column(j));
  for (int h = 0; h < g.order; ++h) {
    if (h == g.identity) continue;
    auto row = b2_gen_row(g, px, h);
    std::vector<i64> v((size_t)n, 0);
    for (auto& [pos, cf] : row) v[(size_t)pos] = norm_mod(v[(size_t)pos] + cf, m);
    bech.add(std::move(v));
  }
  if (qz_quotient)
    for (auto& psi : hom_generators_to_zm(g, m)) bech.add(bockstein_vec(g, px, psi, m));
  out.z_log = zech.log_order();
  out.b_log = bech.log_order();
  out.dim = out.z_log - out.b_log;
  return out;
}

}  // namespace

H2Result h2_bar(const FiniteGroup& g, i64 m, int max_order) {
  if (g.order > max_order) throw budget_error("h2_bar: group order exceeds the cap", g.order);
  i64 p;
  int k;
  factor_pk(m, p, k);
  return h2_part(g, p, k, false);
}

QzProxyResult h2_qz_proxy(const FiniteGroup& g, int max_order) {
  if (g.order > max_order) throw budget_error("h2_bar: group order exceeds the cap", g.order);
  QzProxyResult out;
  i64 rem = g.order;
  for (i64 p = 2; rem > 1; ++p) {
    if (rem % p != 0) continue;
    int k = 0;
    while (rem % p == 0) {
      rem /= p;
      ++k;
    }
    out.parts.push_back(h2_part(g, p, k, true));
  }
  return out;
}

BogomolovReport bogomolov(const FiniteGroup& g) {
  BogomolovReport rep;
  int k;
  factor_pk(g.order, rep.proxy_p, k);
  rep.proxy_k = k;
  if (g.order > 64) throw budget_error("bogomolov: group order exceeds the byte engine cap", g.order);
  i64 q = g.order;
  PairIndex px(g);
  int n = px.dim();
  if (n == 0) {
    rep.trivial = true;
    return rep;
  }
  ByteTracker tr(n, (int)rep.proxy_p, k);
  add_cocycle2_constraints(g, px, tr);

  // For each maximal bicyclic subgroup H, the condition "restriction to H is
  // a coboundary" is imposed through generators of the annihilator of B^2(H)
  // inside the normalized C^2(H); by finite duality the double annihilator
  // recovers B^2(H) exactly.
  auto bic = maximal_bicyclic_subgroups(g);
  rep.subgroups_used = (int)bic.size();
  for (auto& sub : bic) {
    Subgroup sg = subgroup_group(g, sub);
    PairIndex hx(sg.group);
    int hn = hx.dim();
    if (hn == 0) continue;
    auto hgens = hom_generators_to_zm(sg.group, q);
    DenseMat bgens(sg.group.order - 1 + (int)hgens.size(), hn, q);
    int r = 0;
    for (int h = 0; h < sg.group.order; ++h) {
      if (h == sg.group.identity) continue;
      for (auto& [pos, cf] : b2_gen_row(sg.group, hx, h))
        bgens.at(r, pos) = norm_mod(bgens.at(r, pos) + cf, q);
      ++r;
    }
    for (auto& psi : hgens) {
      auto v = bockstein_vec(sg.group, hx, psi, q);
      for (int c = 0; c < hn; ++c) bgens.at(r, c) = v[(size_t)c];
      ++r;
    }
    for (auto& phi : kernel_zpk(bgens, rep.proxy_p, k)) {
      std::vector<std::pair<int, int>> row;
      for (int x = 0; x < sg.group.order; ++x) {
        if (x == sg.group.identity) continue;
        for (int y = 0; y < sg.group.order; ++y) {
          if (y == sg.group.identity) continue;
          i64 cf = phi[(size_t)hx.pos(x, y)];
          if (cf != 0)
            row.emplace_back(px.pos(sg.elems[(size_t)x], sg.elems[(size_t)y]), (int)cf);
        }
      }
      if (!row.empty()) tr.add_constraint(row);
    }
  }

  ZpkEchelon bech(n, rep.proxy_p, k);
  for (int h = 0; h < g.order; ++h) {
    if (h == g.identity) continue;
    auto row = b2_gen_row(g, px, h);
    std::vector<i64> v((size_t)n, 0);
    for (auto& [pos, cf] : row) v[(size_t)pos] = norm_mod(v[(size_t)pos] + cf, q);
    bech.add(std::move(v));
  }
  for (auto& psi : hom_generators_to_zm(g, q)) bech.add(bockstein_vec(g, px, psi, q));
  std::vector<std::vector<i64>> failing;
  for (int j = 0; j < n; ++j) {
    if (!tr.column_nonzero(j)) continue;
    auto col = tr.column(j);
    if (!bech.contains(col)) failing.push_back(std::move(col));
  }
  if (failing.empty()) {
    rep.trivial = true;
    rep.dim = 0;
  } else {
    ZpkEchelon full = bech;
    for (auto& v : failing) full.add(v);
    rep.dim = full.log_order() - bech.log_order();
    rep.trivial = rep.dim == 0;
  }
  return rep;
}

// ---- lifting through an abelian kernel ------------------------------------

namespace {

// Basis of a finite abelian p-group given as a subset of a parent group:
// generators of orders p^{e_1} >= ... >= p^{e_r} whose cyclic factors are a
// direct product, plus coordinates for every element.
struct PBasis {
  i64 p = 2;
  std::vector<int> gens;
  std::vector<int> exps;                   // e_i
  std::map<int, std::vector<i64>> coords;  // element -> coefficients
};

PBasis pgroup_basis(const FiniteGroup& e, const std::vector<int>& elems, i64 p) {
  PBasis b;
  b.p = p;
  b.coords[e.identity] = {};
  auto span_rebuild = [&]() {
    b.coords.clear();
    std::vector<std::pair<int, std::vector<i64>>> span = {{e.identity, {}}};
    for (size_t i = 0; i < b.gens.size(); ++i) {
      i64 ord = pow_i64(p, b.exps[i]);
      std::vector<std::pair<int, std::vector<i64>>> next;
      for (auto& [x, cs] : span) {
        int cur = x;
        for (i64 c = 0; c < ord; ++c) {
          auto ncs = cs;
          ncs.push_back(c);
          next.emplace_back(cur, ncs);
          cur = e.mul(cur, b.gens[i]);
        }
      }
      span = std::move(next);
    }
    for (auto& [x, cs] : span) {
      std::vector<i64> full = cs;
      full.resize(b.gens.size(), 0);
      if (!b.coords.emplace(x, full).second)
        throw std::logic_error("pgroup_basis: cyclic factors are not independent");
    }
  };
  span_rebuild();
  while (b.coords.size() < elems.size()) {
    // Pick the element with the largest order modulo the current span.
    int best = -1, bestc = -1;
    for (int x : elems) {
      if (b.coords.count(x)) continue;
      int c = 1, y = e.pow(x, p);
      while (!b.coords.count(y)) {
        y = e.pow(y, p);
        ++c;
      }
      if (c > bestc || (c == bestc && x < best)) {
        bestc = c;
        best = x;
      }
    }
    i64 pc = pow_i64(p, bestc);
    std::vector<i64> m = b.coords.at(e.pow(best, pc));
    int adj = best;
    for (size_t i = 0; i < b.gens.size(); ++i) {
      if (m[i] % pc != 0)
        throw std::logic_error("pgroup_basis: maximal-order reduction failed");
      adj = e.mul(adj, e.pow(b.gens[i], -(m[i] / pc)));
    }
    if (e.pow(adj, pc) != e.identity)
      throw std::logic_error("pgroup_basis: adjusted generator has wrong order");
    b.gens.push_back(adj);
    b.exps.push_back(bestc);
    span_rebuild();
  }
  return b;
}

// Quotient by a normal subgroup; coset_of maps parent elements to quotient ids.
FiniteGroup quotient_group(const FiniteGroup& g, const std::vector<int>& nsub,
                           std::vector<int>& coset_of) {
  std::vector<int> canon((size_t)g.order);
  for (int x = 0; x < g.order; ++x) {
    int c = g.order;
    for (int d : nsub) c = std::min(c, g.mul(x, d));
    canon[(size_t)x] = c;
  }
  std::vector<int> reps;
  for (int x = 0; x < g.order; ++x)
    if (canon[(size_t)x] == x) reps.push_back(x);
  std::map<int, int> idx;
  for (size_t i = 0; i < reps.size(); ++i) idx[reps[i]] = (int)i;
  coset_of.assign((size_t)g.order, 0);
  for (int x = 0; x < g.order; ++x) coset_of[(size_t)x] = idx.at(canon[(size_t)x]);
  int n = (int)reps.size();
  std::vector<int> t((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      t[(size_t)a * n + b] = coset_of[(size_t)g.mul(reps[(size_t)a], reps[(size_t)b])];
  return group_from_table(std::move(t));
}

}  // namespace

std::vector<std::vector<i64>> hom_generators_to_zm(const FiniteGroup& g, i64 m) {
  std::vector<int> cgens;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      cgens.push_back(g.mul(g.mul(a, b), g.inv(g.mul(b, a))));
  std::sort(cgens.begin(), cgens.end());
  cgens.erase(std::unique(cgens.begin(), cgens.end()), cgens.end());
  auto der = subgroup_closure(g, cgens);
  std::vector<int> coset_of;
  FiniteGroup q = quotient_group(g, der, coset_of);

  std::vector<std::vector<i64>> out;
  i64 rem = q.order;
  for (i64 p = 2; rem > 1; ++p) {
    if (rem % p != 0) continue;
    int a = 0;
    while (rem % p == 0) {
      rem /= p;
      ++a;
    }
    if (m % p != 0) continue;
    i64 pa = pow_i64(p, a);
    std::vector<int> qp;
    for (int x = 0; x < q.order; ++x)
      if (q.pow(x, pa) == q.identity) qp.push_back(x);
    PBasis pb = pgroup_basis(q, qp, p);
    // Projection onto the p-primary part of the abelianization.
    i64 co = q.order / pa;
    i64 exp_proj = co * inv_mod(co % pa, pa);
    for (size_t i = 0; i < pb.gens.size(); ++i) {
      i64 pe = pow_i64(p, pb.exps[i]);
      if (m % pe != 0)
        throw std::invalid_argument("hom_generators_to_zm: modulus misses the exponent");
      std::vector<i64> psi((size_t)g.order);
      for (int x = 0; x < g.order; ++x) {
        int proj = q.pow(coset_of[(size_t)x], exp_proj);
        psi[(size_t)x] = mul_mod(m / pe, pb.coords.at(proj)[i], m);
      }
      for (int x = 0; x < g.order; ++x)
        for (int y = 0; y < g.order; ++y)
          if (psi[(size_t)g.mul(x, y)] != norm_mod(psi[(size_t)x] + psi[(size_t)y], m))
            throw std::logic_error("hom_generators_to_zm: candidate is not a homomorphism");
      out.push_back(std::move(psi));
    }
  }
  return out;
}

LiftResult lift_abelian_kernel(const FiniteGroup& gamma, const FiniteGroup& e,
                               const std::vector<int>& proj, const FiniteGroup& q,
                               const std::vector<int>& phi, bool want_all) {
  LiftResult res;
  if ((int)proj.size() != e.order || (int)phi.size() != gamma.order) {
    res.witness = "dimension mismatch";
    return res;
  }
  for (int a = 0; a < e.order; ++a)
    for (int b = 0; b < e.order; ++b)
      if (proj[(size_t)e.mul(a, b)] != q.mul(proj[(size_t)a], proj[(size_t)b])) {
        res.witness = "projection is not a homomorphism";
        return res;
      }
  std::vector<char> hit((size_t)q.order, 0);
  for (int x : proj) hit[(size_t)x] = 1;
  for (char c : hit)
    if (!c) {
      res.witness = "projection is not surjective";
      return res;
    }
  for (int a = 0; a < gamma.order; ++a)
    for (int b = 0; b < gamma.order; ++b)
      if (phi[(size_t)gamma.mul(a, b)] != q.mul(phi[(size_t)a], phi[(size_t)b])) {
        res.witness = "phi is not a homomorphism";
        return res;
      }

  std::vector<int> kernel;
  for (int x = 0; x < e.order; ++x)
    if (proj[(size_t)x] == q.identity) kernel.push_back(x);
  for (int a : kernel)
    for (int b : kernel)
      if (e.mul(a, b) != e.mul(b, a)) {
        res.witness = "kernel is not abelian";
        return res;
      }

  // Deterministic set-theoretic section of the projection.
  std::vector<int> sect((size_t)q.order, -1);
  sect[(size_t)q.identity] = e.identity;
  for (int x = 0; x < e.order; ++x)
    if (sect[(size_t)proj[(size_t)x]] < 0) sect[(size_t)proj[(size_t)x]] = x;
  std::vector<int> lft((size_t)gamma.order);
  for (int gm = 0; gm < gamma.order; ++gm) lft[(size_t)gm] = sect[(size_t)phi[(size_t)gm]];

  auto obstruction = [&](int gm, int dl) {
    return e.mul(e.mul(lft[(size_t)gm], lft[(size_t)dl]),
                 e.inv(lft[(size_t)gamma.mul(gm, dl)]));
  };
  for (int gm = 0; gm < gamma.order; ++gm)
    for (int dl = 0; dl < gamma.order; ++dl)
      res.obstruction_elems.push_back(obstruction(gm, dl));

  // Primary decomposition of the kernel; the correcting 1-cochain splits
  // across the primary parts.
  i64 kn = (i64)kernel.size();
  std::vector<int> correction((size_t)gamma.order, e.identity);
  res.obstructed = false;
  struct Primary {
    i64 p;
    int a;
    PBasis basis;
    std::vector<std::vector<i64>> z1_twists;  // per twist, coords per (gamma, gen)
  };
  std::vector<Primary> parts;
  for (i64 p = 2, rem = kn; rem > 1; ++p) {
    if (rem % p != 0) continue;
    int a = 0;
    while (rem % p == 0) {
      rem /= p;
      ++a;
    }
    Primary part;
    part.p = p;
    part.a = a;
    std::vector<int> kp;
    for (int x : kernel)
      if (e.pow(x, pow_i64(p, a)) == e.identity) kp.push_back(x);
    part.basis = pgroup_basis(e, kp, p);
    parts.push_back(std::move(part));
  }

  for (auto& part : parts) {
    const PBasis& pb = part.basis;
    int r = (int)pb.gens.size();
    if (r == 0) continue;
    int kp = *std::max_element(pb.exps.begin(), pb.exps.end());
    i64 pk = pow_i64(part.p, kp);
    auto scaled = [&](int elem, int j) {
      // Project onto the p-primary part (raise to the complementary order
      // times its inverse mod p^a), then read off the scaled coordinate.
      i64 co = 1;
      for (auto& other : parts)
        if (other.p != part.p) co *= pow_i64(other.p, other.a);
      i64 u = inv_mod(co % pow_i64(part.p, part.a), pow_i64(part.p, part.a));
      int proj_elem = e.pow(elem, co * u);
      const auto& cs = pb.coords.at(proj_elem);
      return mul_mod(pow_i64(part.p, kp - pb.exps[(size_t)j]), cs[(size_t)j], pk);
    };
    auto var = [&](int gm, int j) { return gm * r + j; };
    std::vector<std::pair<SparseRow, i64>> rows;
    for (int gm = 0; gm < gamma.order; ++gm) {
      // Action of gamma on the basis generators, via conjugation by the lift.
      std::vector<std::vector<i64>> actm((size_t)r);
      for (int i = 0; i < r; ++i) {
        int img = e.mul(e.mul(lft[(size_t)gm], pb.gens[(size_t)i]), e.inv(lft[(size_t)gm]));
        std::vector<i64> col((size_t)r);
        for (int j = 0; j < r; ++j) col[(size_t)j] = scaled(img, j);
        actm[(size_t)i] = std::move(col);
      }
      for (int dl = 0; dl < gamma.order; ++dl) {
        int gd = gamma.mul(gm, dl);
        int ob = obstruction(gm, dl);
        for (int j = 0; j < r; ++j) {
          SparseRow row;
          for (int i = 0; i < r; ++i)
            if (actm[(size_t)i][(size_t)j] != 0)
              row.emplace_back(var(dl, i), actm[(size_t)i][(size_t)j]);
          i64 sj = pow_i64(part.p, kp - pb.exps[(size_t)j]);
          row.emplace_back(var(gm, j), sj);
          row.emplace_back(var(gd, j), norm_mod(-sj, pk));
          rows.emplace_back(std::move(row), norm_mod(-scaled(ob, j), pk));
        }
      }
    }
    auto sol = solve_sparse_zpk(gamma.order * r, rows, part.p, kp);
    if (!sol) {
      res.obstructed = true;
      continue;
    }
    for (int gm = 0; gm < gamma.order; ++gm) {
      int kelem = e.identity;
      for (int i = 0; i < r; ++i)
        kelem = e.mul(kelem, e.pow(pb.gens[(size_t)i],
                                   norm_mod((*sol)[(size_t)var(gm, i)],
                                            pow_i64(part.p, pb.exps[(size_t)i]))));
      correction[(size_t)gm] = e.mul(correction[(size_t)gm], kelem);
    }
    if (want_all) {
      KernelTracker64 tr(gamma.order * r, part.p, kp);
      for (auto& [row, rhs] : rows) {
        (void)rhs;
        if (!row.empty()) tr.add_constraint(row);
      }
      part.z1_twists = tr.generators();
    }
  }
  if (res.obstructed) return res;

  res.hom.assign((size_t)gamma.order, e.identity);
  for (int gm = 0; gm < gamma.order; ++gm)
    res.hom[(size_t)gm] = e.mul(correction[(size_t)gm], lft[(size_t)gm]);
  for (int a = 0; a < gamma.order; ++a) {
    if (proj[(size_t)res.hom[(size_t)a]] != phi[(size_t)a])
      throw std::logic_error("lift_abelian_kernel: corrected map does not lift phi");
    for (int b = 0; b < gamma.order; ++b)
      if (res.hom[(size_t)gamma.mul(a, b)] !=
          e.mul(res.hom[(size_t)a], res.hom[(size_t)b]))
        throw std::logic_error("lift_abelian_kernel: corrected map is not a homomorphism");
  }
  res.lifted = true;

  if (want_all) {
    // Enumerate cocycle twists per primary part (as tuples of kernel
    // elements), reduce modulo coboundaries, and combine across primes.
    std::vector<std::vector<std::vector<int>>> per_prime;
    for (auto& part : parts) {
      const PBasis& pb = part.basis;
      int r = (int)pb.gens.size();
      auto tuple_of = [&](const std::vector<i64>& coords) {
        std::vector<int> t((size_t)gamma.order, e.identity);
        for (int gm = 0; gm < gamma.order; ++gm)
          for (int i = 0; i < r; ++i)
            t[(size_t)gm] =
                e.mul(t[(size_t)gm],
                      e.pow(pb.gens[(size_t)i],
                            norm_mod(coords[(size_t)(gm * r + i)],
                                     pow_i64(part.p, pb.exps[(size_t)i]))));
        return t;
      };
      auto add_tuples = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> t((size_t)gamma.order);
        for (int gm = 0; gm < gamma.order; ++gm)
          t[(size_t)gm] = e.mul(a[(size_t)gm], b[(size_t)gm]);
        return t;
      };
      auto span_tuples = [&](const std::vector<std::vector<int>>& gens) {
        std::set<std::vector<int>> span;
        std::vector<int> zero((size_t)gamma.order, e.identity);
        span.insert(zero);
        std::vector<std::vector<int>> queue = {zero};
        for (size_t qi = 0; qi < queue.size(); ++qi)
          for (auto& gv : gens) {
            auto t = add_tuples(queue[qi], gv);
            if (span.insert(t).second) {
              if (span.size() > 100000)
                throw budget_error("lift_abelian_kernel: twist space too large",
                                   (i64)span.size());
              queue.push_back(t);
            }
          }
        return span;
      };
      std::vector<std::vector<int>> zgens, bgens;
      for (auto& zc : part.z1_twists) zgens.push_back(tuple_of(zc));
      for (int i = 0; i < r; ++i) {
        std::vector<int> t((size_t)gamma.order);
        for (int gm = 0; gm < gamma.order; ++gm)
          t[(size_t)gm] = e.mul(e.mul(e.mul(lft[(size_t)gm], pb.gens[(size_t)i]),
                                      e.inv(lft[(size_t)gm])),
                                e.inv(pb.gens[(size_t)i]));
        bgens.push_back(std::move(t));
      }
      auto zspan = span_tuples(zgens);
      auto bspan = span_tuples(bgens);
      std::set<std::vector<int>> seen;
      std::vector<std::vector<int>> reps;
      for (auto& z : zspan) {
        std::vector<int> key = z;
        for (auto& b : bspan) key = std::min(key, add_tuples(z, b));
        if (seen.insert(key).second) reps.push_back(key);
      }
      per_prime.push_back(std::move(reps));
    }
    std::vector<std::vector<int>> combos = {std::vector<int>((size_t)gamma.order, e.identity)};
    for (auto& reps : per_prime) {
      std::vector<std::vector<int>> next;
      for (auto& c : combos)
        for (auto& t : reps) {
          std::vector<int> u((size_t)gamma.order);
          for (int gm = 0; gm < gamma.order; ++gm)
            u[(size_t)gm] = e.mul(c[(size_t)gm], t[(size_t)gm]);
          next.push_back(std::move(u));
        }
      combos = std::move(next);
    }
    for (auto& t : combos) {
      std::vector<int> h((size_t)gamma.order);
      bool ok = true;
      for (int gm = 0; gm < gamma.order; ++gm)
        h[(size_t)gm] = e.mul(t[(size_t)gm], res.hom[(size_t)gm]);
      for (int a = 0; a < gamma.order && ok; ++a)
        for (int b = 0; b < gamma.order && ok; ++b)
          if (h[(size_t)gamma.mul(a, b)] != e.mul(h[(size_t)a], h[(size_t)b])) ok = false;
      if (ok) res.all_lifts.push_back(std::move(h));
    }
    std::sort(res.all_lifts.begin(), res.all_lifts.end());
    res.all_lifts.erase(std::unique(res.all_lifts.begin(), res.all_lifts.end()),
                        res.all_lifts.end());
  }
  return res;
}

// ---- embedding problems ----------------------------------------------------

namespace {

KernelPattern pattern_and(const KernelPattern& a, const KernelPattern& b) {
  KernelPattern out;
  out.in_kernel.resize(a.in_kernel.size());
  for (size_t i = 0; i < a.in_kernel.size(); ++i)
    out.in_kernel[i] = a.in_kernel[i] && b.in_kernel[i];
  return out;
}

bool pattern_empty(const KernelPattern& k) {
  for (char c : k.in_kernel)
    if (c) return false;
  return true;
}

struct EmbedSearch {
  const FiniteGroup* gamma;
  const UniContext* c;
  i64 p;
  int k;
  std::vector<KernelPattern> masks;  // masks[t] = K intersect U^{t+1}; last empty
  std::vector<std::vector<i64>> twist_homs;
  i64 nodes = 0, max_nodes = 0;
  std::vector<UniTri> lift;

  // 0 found, 1 exhausted, 2 budget.
  int run(size_t stage, const std::vector<UniTri>& cur) {
    if (stage + 1 >= masks.size() && pattern_empty(masks[stage])) {
      lift = cur;
      return 0;
    }
    const KernelPattern& mt = masks[stage];
    const KernelPattern& mn = masks[stage + 1];
    std::vector<int> qpos;
    for (size_t i = 0; i < mt.in_kernel.size(); ++i)
      if (mt.in_kernel[i] && !mn.in_kernel[i]) qpos.push_back((int)i);
    if (qpos.empty()) return run(stage + 1, cur);
    if (++nodes > max_nodes) return 2;
    int qn = (int)qpos.size();
    int go = gamma->order;

    // Central elementary stage: solve k(a) + k(b) - k(ab) = -o(a, b).
    std::vector<std::pair<SparseRow, i64>> rows;
    auto var = [&](int gm, int j) { return gm * qn + j; };
    for (int a = 0; a < go; ++a)
      for (int b = 0; b < go; ++b) {
        UniTri o = mul_masked(mul_masked(cur[(size_t)a], cur[(size_t)b], mn),
                              inv_masked(cur[(size_t)gamma->mul(a, b)], mn), mn);
        if (!in_kernel(o, mt))
          throw std::logic_error("solve_embedding: obstruction escapes the stage kernel");
        for (int j = 0; j < qn; ++j) {
          SparseRow row = {{var(a, j), 1}, {var(b, j), 1}, {var(gamma->mul(a, b), j), norm_mod(-1, c->m)}};
          rows.emplace_back(std::move(row), norm_mod(-o.ent[(size_t)qpos[(size_t)j]], c->m));
        }
      }
    auto sol = solve_sparse_zpk(go * qn, rows, p, k);
    if (!sol) return 1;

    // All stage solutions: the particular one plus every homomorphism
    // Gamma -> (Z/m)^qn (the kernel is central, so coboundaries vanish and
    // no conjugacy reduction applies).
    size_t nh = twist_homs.size();
    std::vector<size_t> combo((size_t)qn, 0);
    while (true) {
      std::vector<UniTri> next = cur;
      for (int gm = 0; gm < go; ++gm)
        for (int j = 0; j < qn; ++j) {
          i64 v = (*sol)[(size_t)(gm * qn + j)] +
                  twist_homs[combo[(size_t)j]][(size_t)gm];
          next[(size_t)gm].ent[(size_t)qpos[(size_t)j]] = norm_mod(v, c->m);
        }
      int r = run(stage + 1, next);
      if (r != 1) return r;
      int carry = 0;
      while (carry < qn && ++combo[(size_t)carry] == nh) {
        combo[(size_t)carry] = 0;
        ++carry;
      }
      if (carry == qn) break;
    }
    return 1;
  }
};

}  // namespace

EmbeddingResult solve_embedding(const FiniteGroup& gamma, const UniContext& c,
                                const KernelPattern& kernel,
                                const std::vector<UniTri>& abar, i64 max_nodes) {
  if (!pattern_is_ideal(c, kernel))
    throw std::invalid_argument("solve_embedding: kernel is not an ideal pattern");
  for (size_t i = 0; i < c.pairs.size(); ++i)
    if (kernel.in_kernel[i] && c.pairs[i].second - c.pairs[i].first < 2)
      throw std::invalid_argument("solve_embedding: kernel not inside the commutator filtration");
  if ((int)abar.size() != gamma.order)
    throw std::invalid_argument("solve_embedding: map size mismatch");
  for (int a = 0; a < gamma.order; ++a) {
    if (!(mask_reduce(abar[(size_t)a], kernel) == abar[(size_t)a]))
      throw std::invalid_argument("solve_embedding: map not reduced modulo the kernel");
    for (int b = 0; b < gamma.order; ++b)
      if (!(mul_masked(abar[(size_t)a], abar[(size_t)b], kernel) ==
            abar[(size_t)gamma.mul(a, b)]))
        throw std::invalid_argument("solve_embedding: map is not a homomorphism");
  }

  EmbedSearch s;
  s.gamma = &gamma;
  s.c = &c;
  factor_pk(c.m, s.p, s.k);
  s.max_nodes = max_nodes;
  for (int t = 1; t <= c.n; ++t) {
    s.masks.push_back(pattern_and(kernel, kernel_lcs(c, t)));
    if (pattern_empty(s.masks.back())) break;
  }
  s.twist_homs = homs_to_zm(gamma, c.m);

  EmbeddingResult out;
  int r = s.run(0, abar);
  out.nodes = s.nodes;
  if (r == 0) {
    out.status = EmbeddingResult::solved;
    out.lift = s.lift;
    for (int a = 0; a < gamma.order; ++a) {
      if (!(mask_reduce(out.lift[(size_t)a], kernel) == abar[(size_t)a]))
        throw std::logic_error("solve_embedding: solution does not lift the input");
      for (int b = 0; b < gamma.order; ++b)
        if (!(mul(out.lift[(size_t)a], out.lift[(size_t)b]) ==
              out.lift[(size_t)gamma.mul(a, b)]))
          throw std::logic_error("solve_embedding: solution is not a homomorphism");
    }
  } else if (r == 1) {
    out.status = EmbeddingResult::unsolvable;
  } else {
    out.status = EmbeddingResult::budget_exceeded;
  }
  return out;
}

}  // namespace mv
