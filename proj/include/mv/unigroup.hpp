#pragma once

// The unitriangular group U of (n+1)x(n+1) matrices over Z/m together with
// its lower central series U^m, the quotients A = U/U^1 and B = U^1/U^3, the
// involution tau, the subgroups P^{r,s} with their retraction machinery, and
// the generalized triangular groups T(W) over Z/m with unit diagonals.
//
// Elements store only the strictly-upper entries, packed diagonal-major (all
// (i,i+1) first, then (i,i+2), ...). This makes dense integer indexing of a
// whole group or of U^1 a mixed-radix read-off.

#include "mv/modarith.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace mv {

/// Shared immutable description of one group configuration (n, m).
struct UniContext {
  int n = 0;
  i64 m = 1;
  int npairs = 0;                              // n(n+1)/2
  std::vector<std::pair<int, int>> pairs;      // diag-major order
  std::vector<int> index_of;                   // (n+1)^2 lookup, -1 off support

  UniContext(int n, i64 m);
  int idx(int i, int j) const;
  bool valid_pair(int i, int j) const {
    return 0 <= i && i < j && j <= n;
  }
};

/// A unitriangular matrix (implicit unit diagonal).
struct UniTri {
  const UniContext* ctx = nullptr;
  std::vector<i64> ent;

  UniTri() = default;
  explicit UniTri(const UniContext& c) : ctx(&c), ent((size_t)c.npairs, 0) {}

  i64 get(int i, int j) const { return ent[(size_t)ctx->idx(i, j)]; }
  void set(int i, int j, i64 v) { ent[(size_t)ctx->idx(i, j)] = norm_mod(v, ctx->m); }
  bool is_identity() const;

  bool operator==(const UniTri& o) const { return ent == o.ent; }
};

UniTri uni_identity(const UniContext& c);
UniTri elem_gen(const UniContext& c, int i, int j, i64 coeff);
UniTri mul(const UniTri& x, const UniTri& y);
UniTri inv(const UniTri& x);
UniTri conj(const UniTri& x, const UniTri& q);        // x q x^{-1}
UniTri commutator(const UniTri& x, const UniTri& y);  // x y x^{-1} y^{-1}
UniTri power(const UniTri& x, i64 e);                 // square-and-multiply; e may be < 0
i64 elem_order(const UniTri& x);

// Largest level l with x in U^l (first l non-principal diagonals vanish);
// identity maps to n.
int lcs_level(const UniTri& x);

// Dense mixed-radix index over the entries with j - i >= min_gap, diag-major.
// min_gap = 1 indexes all of U, min_gap = 2 indexes U^1.
i64 encode(const UniTri& x, int min_gap);
UniTri decode(const UniContext& c, i64 code, int min_gap);
i64 group_size(const UniContext& c, int min_gap);

// ---- A = U/U^1 and B = U^1/U^3 -------------------------------------------

using AVec = std::vector<i64>;  // n coefficients, the classes of e_{i,i+1}
using BVec = std::vector<i64>;  // coefficients over b_pairs(n)

// Index set of the B basis: pairs (i,j) with 2 <= j-i <= 3, diag-major.
std::vector<std::pair<int, int>> b_pairs(int n);

AVec to_A(const UniTri& x);
BVec to_B(const UniTri& x);  // requires lcs_level(x) >= 1

// The standard lift of sigma in A: superdiagonal matrix S with S_{i,i+1}=a_i.
UniTri lift_A(const UniContext& c, const AVec& s);
// The standard lift of b in B: entries on the 2nd and 3rd diagonals only.
UniTri lift_B(const UniContext& c, const BVec& b);

// ---- tau -----------------------------------------------------------------

UniTri tau(const UniTri& x);      // (P x^{-1} P^{-1})^t, P the index reversal
AVec tau_A(const UniContext& c, const AVec& s);
BVec tau_B(const UniContext& c, const BVec& b);

// ---- action of A on B ----------------------------------------------------

// Normative definition: conjugation by the standard lift, read off in B.
BVec a_act_on_B(const UniContext& c, const AVec& s, const BVec& b);
// Basis-wise linear action composed over generators in order of increasing i.
BVec a_act_on_B_compose(const UniContext& c, const AVec& s, const BVec& b);

// Closed-form matrix for the conjugated representative M = S Q S^{-1} given
// the class representative Q in U^1 and sigma = s. Exact, entry by entry.
UniTri aide_matrix(const UniContext& c, const AVec& s, const UniTri& q);

// ---- pattern kernels (normal subgroups that are I + ideal) ---------------

/// Support mask of a normal subgroup K = {I + E : supp(E) inside mask}; used
/// to compute in U/K by masking entries after every product.
struct KernelPattern {
  std::vector<char> in_kernel;  // per pair index
};

KernelPattern kernel_z(const UniContext& c);
KernelPattern kernel_lcs(const UniContext& c, int level);   // U^level
KernelPattern kernel_u1(const UniContext& c);
KernelPattern kernel_prs(const UniContext& c, int r, int s);
// Validates that the masked positions form a two-sided ideal of the
// strictly-upper-triangular algebra (so the masked product is well defined).
bool pattern_is_ideal(const UniContext& c, const KernelPattern& k);

UniTri mask_reduce(const UniTri& x, const KernelPattern& k);
UniTri mul_masked(const UniTri& x, const UniTri& y, const KernelPattern& k);
UniTri inv_masked(const UniTri& x, const KernelPattern& k);
bool in_kernel(const UniTri& x, const KernelPattern& k);

// ---- P^{r,s} -------------------------------------------------------------

std::vector<std::pair<int, int>> prs_positions(const UniContext& c, int r, int s);
bool prs_member(const UniContext& c, int r, int s, const UniTri& x);
// Closure of the generator set {e_{i,n}}_{i<=r}, {e_{0,j}}_{j>=n-s}.
std::vector<UniTri> prs_elements(const UniContext& c, int r, int s);

struct PrsReport {
  bool normal_in_u = false;
  bool contains_z = false;
  bool quotient_elem_abelian = false;  // P/Z elementary abelian of rank r+s
  bool abelian_claimed = false;        // r+s <= n-1
  bool abelian = false;
  bool z_splits = false;
  std::string witness;  // first failure found, empty on pass
  bool pass() const;
};

PrsReport prs_check(const UniContext& c, int r, int s);

// ---- retraction rho_{u,v} and the subgroup S -----------------------------

// u is a row vector, v a column vector, both of length n+1 over Z/m.
// rho_{u,v}(Q) = u (Q - I) v. Throws if q is not in P^{r,s}.
i64 rho_eval(const UniContext& c, int r, int s, const std::vector<i64>& u,
             const std::vector<i64>& v, const UniTri& q);

// Filtration membership test for S: u(M-I) has its first r+1 coordinates
// zero and (M-I)v has its last s+1 coordinates zero.
bool s_member(const UniContext& c, int r, int s, const std::vector<i64>& u,
              const std::vector<i64>& v, const UniTri& x);

struct SGroupReport {
  i64 s_size = 0;
  bool membership_agrees = false;  // filtration test vs defining property
  bool contains_prs = false;
  bool extension_is_hom = false;   // M -> u(M-I)v on S
  bool extends_rho = false;        // agrees with rho_{u,v} on P^{r,s}
  std::string witness;
  bool pass() const;
};

// Exhaustive check over all of U; requires r+s = n-1 and u_0 v_n = 1.
SGroupReport s_group_check(const UniContext& c, int r, int s,
                           const std::vector<i64>& u, const std::vector<i64>& v);

// ---- triangular groups with unit diagonal over Z/m -----------------------

/// An upper-triangular matrix over Z/m whose diagonal entries are units.
struct TriW {
  const UniContext* ctx = nullptr;
  std::vector<i64> diag;  // n+1 units
  std::vector<i64> ent;   // strictly-upper entries, same layout as UniTri

  TriW() = default;
  explicit TriW(const UniContext& c)
      : ctx(&c), diag((size_t)c.n + 1, 1), ent((size_t)c.npairs, 0) {}

  i64 get(int i, int j) const {
    return i == j ? diag[(size_t)i] : ent[(size_t)ctx->idx(i, j)];
  }
  void set(int i, int j, i64 v) {
    if (i == j)
      diag[(size_t)i] = norm_mod(v, ctx->m);
    else
      ent[(size_t)ctx->idx(i, j)] = norm_mod(v, ctx->m);
  }

  bool operator==(const TriW& o) const { return diag == o.diag && ent == o.ent; }
};

TriW tw_identity(const UniContext& c);
TriW tw_from_uni(const UniTri& x);
bool tw_is_unipotent(const TriW& x);
UniTri tw_to_uni(const TriW& x);  // requires unipotent
TriW tw_mul(const TriW& x, const TriW& y);
TriW tw_inv(const TriW& x);

struct AwSplitReport {
  // Structure of A(W) = T(W)/U^1(W): split exact sequence
  // 1 -> sum of superdiagonal homs -> A(W) -> product of unit groups -> 1.
  bool aw_sequence_exact = false;
  bool aw_section_splits = false;
  // (n, m) = (3, 8) diagram checks.
  bool p_abelian = false;
  bool p_contains_u1 = false;
  bool top_row_exact = false;      // U^1 -> P -> Z/8<e~_{1,2}>
  bool middle_row_exact = false;   // U^1 -> U -> Z/8^3
  bool middle_column_split = false;  // P -> U -> Z/8<e~_{0,1},e~_{2,3}>, section e_{0,1},e_{2,3}
  bool right_column_split = false;
  std::string witness;
  bool pass() const;
};

// Verifies the A(W) split sequence for the given (n, m) and, when
// (n, m) = (3, 8), the full diagram of subgroups of U over Z/8.
AwSplitReport aw_split_check(int n, i64 m);

}  // namespace mv
