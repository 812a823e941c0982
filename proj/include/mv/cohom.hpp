#pragma once

// Finite group cohomology in low degree: H^1 by cocycle linear algebra,
// restriction maps, the everywhere-locally-trivial subgroup of H^1, cup
// products of 1-cochains, H^2 by the (normalized) bar resolution, the
// Bogomolov multiplier, and the obstruction-theoretic lifting and embedding
// solvers.

#include "mv/conjact.hpp"
#include "mv/modarith.hpp"
#include "mv/unigroup.hpp"

#include <optional>
#include <string>

namespace mv {

// ---- finite groups by multiplication table --------------------------------

constexpr int kMaxTableOrder = 4096;

struct FiniteGroup {
  int order = 1;
  std::vector<int> table;  // row-major: table[a * order + b] = ab
  int identity = 0;
  std::vector<int> inv_of = {0};
  std::vector<int> gens;   // distinguished generating set

  int mul(int a, int b) const { return table[(size_t)a * order + b]; }
  int inv(int a) const { return inv_of[(size_t)a]; }
  int pow(int a, i64 e) const;
  i64 elem_order(int a) const;
};

// Validates the table as a group law and derives identity, inverses, and a
// deterministic minimal generating set if none is supplied.
FiniteGroup group_from_table(std::vector<int> table, std::vector<int> gens = {});
FiniteGroup group_cyclic(int m);
FiniteGroup group_product(const FiniteGroup& a, const FiniteGroup& b);
FiniteGroup group_dihedral(int m);  // order 2m
FiniteGroup group_quaternion();     // order 8
// Tabulated copy of U (min_gap = 1) or U^1 (min_gap = 2); element i is the
// dense code i.
FiniteGroup group_from_uni(const UniContext& c, int min_gap);

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> gens);
bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elems);

/// A subgroup repackaged as a group of its own; elems[i] is the parent id of
/// the subgroup's element i.
struct Subgroup {
  FiniteGroup group;
  std::vector<int> elems;
};
Subgroup subgroup_group(const FiniteGroup& g, const std::vector<int>& elems);

// Sorted element lists, deduplicated, maximal under inclusion.
std::vector<std::vector<int>> maximal_cyclic_subgroups(const FiniteGroup& g);
// Bicyclic = generated by two commuting elements (2-generated abelian).
std::vector<std::vector<int>> maximal_bicyclic_subgroups(const FiniteGroup& g);
std::vector<std::vector<int>> all_subgroups(const FiniteGroup& g);

// For every element, one expression as a product of g.gens (generator
// indices, left to right).
std::vector<std::vector<int>> element_words(const FiniteGroup& g);
// All homomorphisms G -> Z/m, as value tables.
std::vector<std::vector<i64>> homs_to_zm(const FiniteGroup& g, i64 m);

// ---- modules and cochains -------------------------------------------------

struct GModule {
  i64 m = 2;
  int rank = 1;
  std::vector<DenseMat> act;  // one invertible rank x rank matrix per element

  std::vector<i64> apply(int g, const std::vector<i64>& v) const {
    return mat_apply(act[(size_t)g], v);
  }
};

GModule trivial_module(const FiniteGroup& g, i64 m, int rank);
// Homomorphism property on generator pairs plus sampled products; invertibility.
bool validate_module(const FiniteGroup& g, const GModule& mod);
GModule restrict_module(const GModule& mod, const std::vector<int>& elems);

using Cochain1 = std::vector<std::vector<i64>>;  // value per group element

struct Cochain2 {
  int order = 1;
  int rank = 1;
  i64 m = 2;
  std::vector<i64> v;

  Cochain2() = default;
  Cochain2(int order, int rank, i64 m)
      : order(order), rank(rank), m(m), v((size_t)order * order * rank, 0) {}
  i64& at(int g, int h, int r) { return v[((size_t)g * order + h) * rank + r]; }
  i64 at(int g, int h, int r) const { return v[((size_t)g * order + h) * rank + r]; }
  bool operator==(const Cochain2& o) const { return v == o.v; }
};

bool is_cocycle1(const FiniteGroup& g, const GModule& mod, const Cochain1& f);
Cochain2 d1(const FiniteGroup& g, const GModule& mod, const Cochain1& f);
bool is_cocycle2(const FiniteGroup& g, const GModule& mod, const Cochain2& c);

/// Bilinear pairing M_a x M_b -> M_c over a shared modulus, stored as the
/// tensor t[c][i][j] = <e_i, e_j> coefficient on the c-th output coordinate.
struct Pairing {
  i64 m = 2;
  int ra = 1, rb = 1, rc = 1;
  std::vector<i64> t;

  Pairing() = default;
  Pairing(i64 m, int ra, int rb, int rc)
      : m(m), ra(ra), rb(rb), rc(rc), t((size_t)rc * ra * rb, 0) {}
  i64& at(int c, int i, int j) { return t[((size_t)c * ra + i) * rb + j]; }
  i64 at(int c, int i, int j) const { return t[((size_t)c * ra + i) * rb + j]; }
  std::vector<i64> apply(const std::vector<i64>& x, const std::vector<i64>& y) const;
};

// (a cup b)(s, t) = pair(a(s), s . b(t)); mb supplies the action on b's module.
Cochain2 cup11(const FiniteGroup& g, const GModule& mb, const Pairing& pair,
               const Cochain1& a, const Cochain1& b);

// ---- H^1 ------------------------------------------------------------------

struct H1Basis {
  int dim = 0;                  // log_p of |H^1|
  bool field = true;            // true when the modulus is prime
  std::vector<Cochain1> reps;   // independent classes (prime) / generators (p^k)
  DenseMat b_basis;             // rows: basis of the coboundary space (prime)
};

// Modulus must be a prime power; the prime case carries full basis data.
H1Basis h1(const FiniteGroup& g, const GModule& mod);
// Coordinates of the class of cocycle z in basis.reps (prime modulus).
std::optional<std::vector<i64>> h1_coords(const FiniteGroup& g, const GModule& mod,
                                          const H1Basis& basis, const Cochain1& z);
// Matrix of restriction H^1(G, M) -> H^1(H, M) in the given bases.
DenseMat restrict_h1(const FiniteGroup& g, const GModule& mod,
                     const std::vector<int>& sub_elems, const H1Basis& bg,
                     const H1Basis& bh);
// Basis (in bg coordinates) of the classes restricting to zero on every
// cyclic subgroup; maximal cyclic subgroups suffice.
std::vector<std::vector<i64>> sha1_cyc(const FiniteGroup& g, const GModule& mod,
                                       const H1Basis& bg);

// ---- H^2 ------------------------------------------------------------------

// If c is a coboundary, a 1-cochain f with d1(f) = c; otherwise nullopt.
// Throws if c is not a 2-cocycle. Prime-power modulus.
std::optional<Cochain1> coboundary2_test(const FiniteGroup& g, const GModule& mod,
                                         const Cochain2& c);

struct H2Result {
  i64 p = 2;
  int k = 1;
  i64 dim = 0;    // log_p of |H^2|
  i64 z_log = 0;  // log_p |Z^2| (normalized cochains)
  i64 b_log = 0;  // log_p |B^2|
};

// Trivial coefficients Z/p^k; |G| capped by max_order (normalized bar
// resolution, order-sensitive memory).
H2Result h2_bar(const FiniteGroup& g, i64 m, int max_order = 32);

// Generating set of Hom(G, Z/m) as value tables, via the abelianization
// (m must be divisible by the exponent of G made abelian).
std::vector<std::vector<i64>> hom_generators_to_zm(const FiniteGroup& g, i64 m);

/// H^2(G, Q/Z) with trivial action, one primary part per prime dividing |G|.
/// The p-part is computed as H^2(G, Z/p^k) modulo the Bockstein image of
/// Hom(G, Z/p^k) at p^k = the p-part of |G|: exactly the classes surviving
/// into the colimit Z/p^k -> Z/p^infinity.
struct QzProxyResult {
  std::vector<H2Result> parts;
  bool trivial() const {
    for (auto& h : parts)
      if (h.dim != 0) return false;
    return true;
  }
};
QzProxyResult h2_qz_proxy(const FiniteGroup& g, int max_order = 32);

struct BogomolovReport {
  i64 proxy_p = 2;
  int proxy_k = 1;           // coefficients Z/p^k, p^k = |G| (G a p-group)
  bool trivial = false;
  i64 dim = 0;               // log_p of the multiplier order
  int subgroups_used = 0;    // maximal bicyclic subgroups restricted to
};

// Kernel of H^2(G, Q/Z) -> prod H^2(H, Q/Z) over bicyclic subgroups H, with
// Q/Z handled by the Z/p^k proxy above. G must be a p-group of order <= 64.
BogomolovReport bogomolov(const FiniteGroup& g);

// ---- lifting through an abelian kernel ------------------------------------

struct LiftResult {
  bool lifted = false;
  std::vector<int> hom;                     // Gamma element -> E element
  bool obstructed = false;
  std::string witness;                      // non-empty on precondition issues
  std::vector<int> obstruction_elems;       // kernel-valued 2-cocycle, |Gamma|^2 flat
  std::vector<std::vector<int>> all_lifts;  // when requested: one per H^1 class
};

// proj maps E onto Q elementwise with abelian kernel; phi is a homomorphism
// Gamma -> Q. Picks a set-theoretic lift, forms the obstruction 2-cocycle
// with values in the kernel, and solves for a correcting 1-cochain.
LiftResult lift_abelian_kernel(const FiniteGroup& gamma, const FiniteGroup& e,
                               const std::vector<int>& proj, const FiniteGroup& q,
                               const std::vector<int>& phi, bool want_all = false);

// ---- embedding problems in U ----------------------------------------------

struct EmbeddingResult {
  enum Status { solved, unsolvable, budget_exceeded } status = unsolvable;
  std::vector<UniTri> lift;  // Gamma element -> U element (when solved)
  i64 nodes = 0;
};

constexpr i64 kDefaultNodeBudget = 1'000'000;

// abar[i] is the image of Gamma element i in U/K (entries zero on the kernel
// pattern). K must be an ideal pattern inside U^1. Refines K through the
// lower central series into central elementary stages, lifts stage by stage
// with backtracking over all cocycle twists, and certifies unsolvability by
// exhaustion of the tree.
EmbeddingResult solve_embedding(const FiniteGroup& gamma, const UniContext& c,
                                const KernelPattern& kernel,
                                const std::vector<UniTri>& abar,
                                i64 max_nodes = kDefaultNodeBudget);

}  // namespace mv
