#include "mv/brauer.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace mv {
namespace {

i64 a_code_of(const AVec& a, i64 p) {
  i64 code = 0;
  for (size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

AVec a_vec_of(i64 code, int n, i64 p) {
  AVec a((size_t)n, 0);
  for (int i = 0; i < n; ++i) {
    a[(size_t)i] = code % p;
    code /= p;
  }
  return a;
}

// Ambient code of the pair (a, u) with u a unit of Z/e.
i64 pair_code(const AVec& a, i64 u, i64 p, i64 e) {
  return a_code_of(a, p) * (e - 1) + (u - 1);
}

// Matrix of the action of s on B (columns are the images of the basis).
DenseMat b_action_matrix(const UniContext& c, const AVec& s) {
  int rb = (int)b_pairs(c.n).size();
  DenseMat t(rb, rb, c.m);
  for (int j = 0; j < rb; ++j) {
    BVec basis((size_t)rb, 0);
    basis[(size_t)j] = 1;
    BVec img = a_act_on_B(c, s, basis);
    for (int i = 0; i < rb; ++i) t.at(i, j) = norm_mod(img[(size_t)i], c.m);
  }
  return t;
}

i64 dot_mod(const std::vector<i64>& x, const std::vector<i64>& y, i64 m) {
  i64 acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return norm_mod(acc, m);
}

// For each element sigma of G, the images in B of the representatives of the
// qualifying classes: sigma_A [u] = [u^chi(sigma)].
std::vector<std::vector<BVec>> qualifying_ubars(const BrauerProblem& pb,
                                                const ConjClasses& cc) {
  std::vector<std::vector<BVec>> out((size_t)pb.g.order);
  for (int s = 0; s < pb.g.order; ++s)
    for (int cid = 0; cid < cc.nclasses(); ++cid) {
      int lhs = act_on_class(cc, pb.sigma_a[(size_t)s], cid);
      UniTri u = cc.rep(cid);
      int rhs = cc.class_of_elem(power(u, pb.chi[(size_t)s]));
      if (lhs == rhs) out[(size_t)s].push_back(to_B(u));
    }
  return out;
}

std::vector<std::vector<i64>> kernel_of_rows(const std::set<std::vector<i64>>& rows,
                                             int dim, i64 p) {
  std::vector<std::vector<i64>> full;
  for (int r = 0; r < dim; ++r) {
    std::vector<i64> v((size_t)dim, 0);
    v[(size_t)r] = 1;
    full.push_back(std::move(v));
  }
  if (rows.empty() || dim == 0) return full;
  DenseMat a((int)rows.size(), dim, p);
  int r = 0;
  for (auto& row : rows) {
    for (int j = 0; j < dim; ++j) a.at(r, j) = row[(size_t)j];
    ++r;
  }
  auto sol = solve_fp(a, std::vector<i64>((size_t)rows.size(), 0));
  if (!sol) throw std::logic_error("homogeneous system must be solvable");
  return sol->kernel;
}

struct B0Data {
  std::vector<std::vector<i64>> kernel;  // coords in the dual_B h1 basis
  bool sha0_trivial = false;
};

B0Data b0_data(const BrauerProblem& pb, const H1Basis& bg) {
  GModule mod0 = dual_B0(pb);
  H1Basis b0h = h1(pb.g, mod0);
  B0Data out;
  out.sha0_trivial = sha1_cyc(pb.g, mod0, b0h).empty();

  auto pos = b0_positions(pb.n);
  int dim = bg.dim, dim0 = b0h.dim;
  if (dim == 0) return out;
  if (dim0 == 0) {
    for (int r = 0; r < dim; ++r) {
      std::vector<i64> v((size_t)dim, 0);
      v[(size_t)r] = 1;
      out.kernel.push_back(std::move(v));
    }
    return out;
  }
  DenseMat m(dim0, dim, pb.e);
  for (int r = 0; r < dim; ++r) {
    Cochain1 proj;
    for (int x = 0; x < pb.g.order; ++x) {
      std::vector<i64> v;
      for (int k : pos) v.push_back(bg.reps[(size_t)r][(size_t)x][(size_t)k]);
      proj.push_back(std::move(v));
    }
    auto coords = h1_coords(pb.g, mod0, b0h, proj);
    if (!coords) throw std::logic_error("restriction of a cocycle must be a cocycle");
    for (int i = 0; i < dim0; ++i) m.at(i, r) = (*coords)[(size_t)i];
  }
  auto sol = solve_fp(m, std::vector<i64>((size_t)dim0, 0));
  if (!sol) throw std::logic_error("homogeneous system must be solvable");
  out.kernel = sol->kernel;
  return out;
}

}  // namespace

BrauerProblem build_problem(const ConjClasses& cc,
                            const std::vector<std::pair<AVec, i64>>& gens) {
  const UniContext& c = *cc.ctx;
  BrauerProblem pb;
  pb.n = c.n;
  pb.p = c.m;
  if (pb.n < 3) throw std::invalid_argument("brauer: need n >= 3");
  if (!is_prime(pb.p)) throw std::invalid_argument("brauer: p must be prime");
  OuterExponentReport rep = outer_exponent(cc);
  pb.e = rep.outer_exponent;
  if (!is_prime(pb.e))
    throw std::invalid_argument("brauer: outer exponent " + std::to_string(pb.e) +
                                " is composite; formula path unsupported");

  std::vector<std::pair<AVec, i64>> norm;
  for (auto& [a, u] : gens) {
    if ((int)a.size() != pb.n) throw std::invalid_argument("brauer: generator A-part has wrong length");
    AVec av = a;
    for (auto& x : av) x = norm_mod(x, pb.p);
    i64 un = norm_mod(u, pb.e);
    if (un == 0) throw std::invalid_argument("brauer: generator character value is not a unit");
    norm.push_back({std::move(av), un});
  }

  // Closure inside A x (Z/e)^*.
  std::map<i64, std::pair<AVec, i64>> elems;
  AVec id((size_t)pb.n, 0);
  elems[pair_code(id, 1, pb.p, pb.e)] = {id, 1};
  bool grew = true;
  while (grew) {
    grew = false;
    auto snapshot = elems;
    for (auto& [code, el] : snapshot)
      for (auto& [ga, gu] : norm) {
        AVec na = el.first;
        for (int i = 0; i < pb.n; ++i) na[(size_t)i] = norm_mod(na[(size_t)i] + ga[(size_t)i], pb.p);
        i64 nu = mul_mod(el.second, gu, pb.e);
        i64 nc = pair_code(na, nu, pb.p, pb.e);
        if (!elems.count(nc)) {
          elems[nc] = {na, nu};
          grew = true;
        }
      }
  }

  std::vector<i64> codes;
  for (auto& [code, el] : elems) {
    codes.push_back(code);
    pb.sigma_a.push_back(el.first);
    pb.chi.push_back(el.second);
  }
  std::unordered_map<i64, int> idx;
  for (size_t i = 0; i < codes.size(); ++i) idx[codes[i]] = (int)i;
  int ord = (int)codes.size();
  std::vector<int> table((size_t)ord * ord);
  for (int x = 0; x < ord; ++x)
    for (int y = 0; y < ord; ++y) {
      AVec na((size_t)pb.n, 0);
      for (int i = 0; i < pb.n; ++i)
        na[(size_t)i] = norm_mod(pb.sigma_a[(size_t)x][(size_t)i] + pb.sigma_a[(size_t)y][(size_t)i], pb.p);
      i64 nu = mul_mod(pb.chi[(size_t)x], pb.chi[(size_t)y], pb.e);
      table[(size_t)x * ord + y] = idx.at(pair_code(na, nu, pb.p, pb.e));
    }
  std::vector<int> gen_idx;
  for (auto& [ga, gu] : norm) gen_idx.push_back(idx.at(pair_code(ga, gu, pb.p, pb.e)));
  std::sort(gen_idx.begin(), gen_idx.end());
  gen_idx.erase(std::unique(gen_idx.begin(), gen_idx.end()), gen_idx.end());
  pb.g = group_from_table(std::move(table), std::move(gen_idx));
  return pb;
}

std::vector<int> b0_positions(int n) {
  auto bp = b_pairs(n);
  std::set<int> pos;
  std::vector<std::pair<int, int>> want = {{0, 2}, {0, 3}, {n - 3, n}, {n - 2, n}};
  for (auto& w : want) {
    auto it = std::find(bp.begin(), bp.end(), w);
    if (it == bp.end()) throw std::logic_error("B_0 position missing from the B basis");
    pos.insert((int)(it - bp.begin()));
  }
  return {pos.begin(), pos.end()};
}

GModule dual_B(const BrauerProblem& pb) {
  UniContext c(pb.n, pb.p);
  int rb = (int)b_pairs(pb.n).size();
  GModule mod;
  mod.m = pb.e;
  mod.rank = rb;
  mod.act.resize((size_t)pb.g.order);
  for (int g = 0; g < pb.g.order; ++g) {
    DenseMat t = b_action_matrix(c, pb.sigma_a[(size_t)pb.g.inv(g)]);
    DenseMat a(rb, rb, pb.e);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < rb; ++j) a.at(i, j) = mul_mod(pb.chi[(size_t)g], t.at(j, i), pb.e);
    mod.act[(size_t)g] = std::move(a);
  }
  if (!validate_module(pb.g, mod)) throw std::logic_error("dual module action is not a homomorphism");
  // Pairing identity <sigma f, sigma b> = chi(sigma) <f, b> on basis vectors.
  for (int g = 0; g < pb.g.order; ++g) {
    DenseMat fwd = b_action_matrix(c, pb.sigma_a[(size_t)g]);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < rb; ++j) {
        i64 lhs = 0;
        for (int k = 0; k < rb; ++k) lhs += mod.act[(size_t)g].at(k, i) * fwd.at(k, j);
        i64 rhs = (i == j) ? pb.chi[(size_t)g] : 0;
        if (norm_mod(lhs, pb.e) != norm_mod(rhs, pb.e))
          throw std::logic_error("dual pairing identity failed");
      }
  }
  return mod;
}

GModule dual_B0(const BrauerProblem& pb) {
  UniContext c(pb.n, pb.p);
  auto pos = b0_positions(pb.n);
  int rb = (int)b_pairs(pb.n).size();
  int r0 = (int)pos.size();
  std::vector<char> in_pos((size_t)rb, 0);
  for (int k : pos) in_pos[(size_t)k] = 1;
  GModule mod;
  mod.m = pb.e;
  mod.rank = r0;
  mod.act.resize((size_t)pb.g.order);
  for (int g = 0; g < pb.g.order; ++g) {
    DenseMat t = b_action_matrix(c, pb.sigma_a[(size_t)pb.g.inv(g)]);
    // stability of B_0 under the action
    for (int j : pos)
      for (int i = 0; i < rb; ++i)
        if (!in_pos[(size_t)i] && t.at(i, j) != 0)
          throw std::logic_error("B_0 is not stable under the action");
    DenseMat a(r0, r0, pb.e);
    for (int i = 0; i < r0; ++i)
      for (int j = 0; j < r0; ++j)
        a.at(i, j) = mul_mod(pb.chi[(size_t)g], t.at(pos[(size_t)j], pos[(size_t)i]), pb.e);
    mod.act[(size_t)g] = std::move(a);
  }
  if (!validate_module(pb.g, mod)) throw std::logic_error("dual module action is not a homomorphism");
  return mod;
}

BrauerReport evaluate_formula(const BrauerProblem& pb, const ConjClasses& cc,
                              i64 budget) {
  if (cc.ctx->n != pb.n || cc.ctx->m != pb.p)
    throw std::invalid_argument("class data does not match the problem");
  i64 work = (i64)pb.g.order * cc.nclasses();
  if (work > budget) throw budget_error("brauer condition harvest", work);

  BrauerReport rep;
  rep.e = pb.e;
  GModule mod = dual_B(pb);
  H1Basis bg = h1(pb.g, mod);
  rep.h1_dim = bg.dim;
  rep.sha_basis = sha1_cyc(pb.g, mod, bg);
  rep.sha_dim = (int)rep.sha_basis.size();

  auto quals = qualifying_ubars(pb, cc);
  std::set<std::vector<i64>> rows;
  for (int s = 0; s < pb.g.order; ++s)
    for (auto& ub : quals[(size_t)s]) {
      std::vector<i64> row((size_t)bg.dim, 0);
      bool nz = false;
      for (int r = 0; r < bg.dim; ++r) {
        row[(size_t)r] = dot_mod(bg.reps[(size_t)r][(size_t)s], ub, pb.e);
        nz = nz || row[(size_t)r] != 0;
      }
      if (nz) rows.insert(std::move(row));
    }
  rep.conditions = (int)rows.size();
  rep.formula_basis = kernel_of_rows(rows, bg.dim, pb.e);
  rep.formula_dim = (int)rep.formula_basis.size();

  // Sandwich: every locally-trivial class satisfies all the conditions.
  rep.sandwich_ok = rep.sha_dim <= rep.formula_dim && rep.formula_dim <= rep.h1_dim;
  for (auto& v : rep.sha_basis)
    for (auto& row : rows)
      if (dot_mod(v, row, pb.e) != 0) rep.sandwich_ok = false;

  B0Data b0 = b0_data(pb, bg);
  rep.b0_kernel_basis = b0.kernel;
  rep.b0_kernel_dim = (int)b0.kernel.size();
  rep.sha_b0_trivial = b0.sha0_trivial;
  if (!rep.sha_b0_trivial) throw std::logic_error("Sha^1_cyc of the B_0 dual must vanish");
  rep.formula_in_b0_kernel = true;
  if (pb.n <= 6) {
    for (auto& v : rep.formula_basis)
      if (!in_span_zpk(rep.b0_kernel_basis, v, pb.e, 1)) rep.formula_in_b0_kernel = false;
    if (!rep.formula_in_b0_kernel)
      throw std::logic_error("formula subgroup escapes the B_0 kernel bound");
  }

  // For p odd with chi surjective onto the units, H^1 must vanish.
  if (pb.p > 2) {
    std::set<i64> image(pb.chi.begin(), pb.chi.end());
    if ((i64)image.size() == pb.e - 1 && rep.h1_dim != 0)
      throw std::logic_error("H^1 must vanish when chi is surjective for odd p");
  }

  rep.notes = "roots of unity realized as Z/e; power-derived conditions are "
              "subsumed by the stated ones (the norm map reduces them to the "
              "condition at sigma^t)";
  return rep;
}

std::vector<std::vector<i64>> b0_kernel(const BrauerProblem& pb) {
  GModule mod = dual_B(pb);
  H1Basis bg = h1(pb.g, mod);
  return b0_data(pb, bg).kernel;
}

bool coboundary_invariance(const BrauerProblem& pb, const ConjClasses& cc,
                           int trials, unsigned seed) {
  GModule mod = dual_B(pb);
  auto quals = qualifying_ubars(pb, cc);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<i64> dist(0, pb.e - 1);
  for (int t = 0; t < trials; ++t) {
    std::vector<i64> f((size_t)mod.rank);
    for (auto& x : f) x = dist(rng);
    for (int s = 0; s < pb.g.order; ++s) {
      std::vector<i64> df = mod.apply(s, f);
      for (size_t i = 0; i < df.size(); ++i) df[i] = norm_mod(df[i] - f[i], pb.e);
      for (auto& ub : quals[(size_t)s])
        if (dot_mod(df, ub, pb.e) != 0) return false;
    }
  }
  return true;
}

std::vector<ScanRow> sandwich_scan(int n, i64 p, bool exhaustive, i64 budget) {
  UniContext c(n, p);
  ConjClasses cc = conj_classes(c, budget);
  OuterExponentReport oer = outer_exponent(cc);
  i64 e = oer.outer_exponent;
  if (!is_prime(e))
    throw std::invalid_argument("sandwich_scan: composite outer exponent " + std::to_string(e));

  // Candidate generator sets, deduplicated by the resulting element set.
  std::vector<std::vector<std::pair<AVec, i64>>> cand;
  if (exhaustive) {
    i64 ambient = (e - 1);
    for (int i = 0; i < n; ++i) ambient *= p;
    if (ambient > 64)
      throw std::invalid_argument("sandwich_scan: ambient group too large for exhaustive policy");
    // Tabulate the ambient A x (Z/e)^* and walk all of its subgroups.
    int ord = (int)ambient;
    std::vector<int> table((size_t)ord * ord);
    auto decode_pair = [&](int code) {
      return std::pair<AVec, i64>{a_vec_of(code / (e - 1), n, p), code % (e - 1) + 1};
    };
    for (int x = 0; x < ord; ++x)
      for (int y = 0; y < ord; ++y) {
        auto [xa, xu] = decode_pair(x);
        auto [ya, yu] = decode_pair(y);
        AVec na((size_t)n, 0);
        for (int i = 0; i < n; ++i) na[(size_t)i] = norm_mod(xa[(size_t)i] + ya[(size_t)i], p);
        table[(size_t)x * ord + y] = (int)pair_code(na, mul_mod(xu, yu, e), p, e);
      }
    FiniteGroup amb = group_from_table(std::move(table));
    for (auto& elems : all_subgroups(amb)) {
      Subgroup sg = subgroup_group(amb, elems);
      std::vector<std::pair<AVec, i64>> gens;
      for (int gi : sg.group.gens) gens.push_back(decode_pair(sg.elems[(size_t)gi]));
      cand.push_back(std::move(gens));
    }
  } else {
    // Deterministic sample: cyclic subgroups from every single element with
    // trivial character, plus 2-generated subgroups from a small pool.
    i64 acount = 1;
    for (int i = 0; i < n; ++i) acount *= p;
    for (i64 code = 0; code < acount; ++code)
      cand.push_back({{a_vec_of(code, n, p), 1}});
    std::vector<AVec> pool;
    for (int i = 0; i < n; ++i) {
      AVec v((size_t)n, 0);
      v[(size_t)i] = 1;
      pool.push_back(std::move(v));
    }
    pool.push_back(AVec((size_t)n, 1));
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = i + 1; j < pool.size(); ++j)
        cand.push_back({{pool[i], 1}, {pool[j], 1}});
    if (e > 2)
      for (i64 u = 2; u < e; ++u) {
        cand.push_back({{AVec((size_t)n, 0), u}});
        cand.push_back({{AVec((size_t)n, 1), u}});
      }
  }

  std::vector<ScanRow> out;
  std::set<std::vector<i64>> seen;  // element sets as sorted pair codes
  for (auto& gens : cand) {
    BrauerProblem pb = build_problem(cc, gens);
    std::vector<i64> key;
    for (int x = 0; x < pb.g.order; ++x)
      key.push_back(pair_code(pb.sigma_a[(size_t)x], pb.chi[(size_t)x], p, e));
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) continue;
    ScanRow row;
    row.gens = gens;
    row.report = evaluate_formula(pb, cc, budget);
    row.sha_equals_formula = row.report.sha_dim == row.report.formula_dim;
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end(), [&](const ScanRow& a, const ScanRow& b) {
    std::vector<i64> ka, kb;
    for (auto& [av, u] : a.gens) ka.push_back(pair_code(av, u, p, e));
    for (auto& [av, u] : b.gens) kb.push_back(pair_code(av, u, p, e));
    return std::tuple(ka.size(), ka) < std::tuple(kb.size(), kb);
  });
  return out;
}

}  // namespace mv
