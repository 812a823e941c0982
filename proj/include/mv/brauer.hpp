#pragma once

// Executable form of the unramified Brauer group formula for the Massey
// splitting situation: a finite abelian group G embedded in A x (Z/e)^*
// (e = the outer exponent, required prime), the dual modules of B = U^1/U^3
// and of its distinguished subgroup B_0, the per-(sigma, conjugacy class)
// linear conditions cutting the formula subgroup out of H^1(G, B-dual), and
// the sandwich Sha^1_cyc <= formula subgroup <= H^1 together with the
// B_0-kernel bound.

#include "mv/cohom.hpp"
#include "mv/conjact.hpp"

namespace mv {

struct BrauerProblem {
  int n = 3;
  i64 p = 2;
  i64 e = 2;                   // outer exponent, verified prime (= p)
  FiniteGroup g;               // closure of the generators in A x (Z/e)^*
  std::vector<AVec> sigma_a;   // element -> A component
  std::vector<i64> chi;        // element -> unit of Z/e (second projection)
};

// Closure of the generator pairs inside A x (Z/e)^*. cc supplies the ambient
// configuration (n, p) and the class data from which e is computed; throws
// invalid_argument when e is composite (value reported in the message), when
// a generator is malformed, or when a chi entry is not a unit.
BrauerProblem build_problem(const ConjClasses& cc,
                            const std::vector<std::pair<AVec, i64>>& gens);

// Indices into b_pairs(n) of the B_0 basis (gap-2/gap-3 corner positions);
// 4 entries, 3 when n = 3 where B_0 = B.
std::vector<int> b0_positions(int n);

// Dual module of B (rank = #b_pairs(n)) with (sigma f)(b) =
// chi(sigma) f(sigma_A^{-1} b); validated: invertible action matrices,
// homomorphism property, and the pairing identity
// <sigma f, sigma b> = chi(sigma) <f, b>.
GModule dual_B(const BrauerProblem& pb);
// Same for the submodule B_0 (its basis vectors are basis vectors of B).
GModule dual_B0(const BrauerProblem& pb);

struct BrauerReport {
  i64 e = 2;
  int h1_dim = 0;        // dim H^1(G, B-dual)
  int sha_dim = 0;       // dim Sha^1_cyc(G, B-dual)
  int formula_dim = 0;   // dim of the formula subgroup
  int b0_kernel_dim = 0; // dim ker(H^1(G, B-dual) -> H^1(G, B_0-dual))
  std::vector<std::vector<i64>> formula_basis;    // coords in the H^1 basis
  std::vector<std::vector<i64>> sha_basis;        // coords in the H^1 basis
  std::vector<std::vector<i64>> b0_kernel_basis;  // coords in the H^1 basis
  int conditions = 0;    // deduplicated (sigma, class) conditions imposed
  bool sandwich_ok = false;          // sha <= formula <= h1
  bool formula_in_b0_kernel = false; // checked for 3 <= n <= 6
  bool sha_b0_trivial = false;       // Sha^1_cyc(G, B_0-dual) = 0
  std::string notes;
};

// Harvests the condition b_sigma(u-bar) = 0 for every sigma in G and every
// conjugacy class [u] of U^1 with sigma_A [u] = [u^chi(sigma)], and returns
// the kernel inside H^1(G, B-dual) with the full sandwich report.
BrauerReport evaluate_formula(const BrauerProblem& pb, const ConjClasses& cc,
                              i64 budget = kDefaultElemBudget);

// Kernel of H^1(G, B-dual) -> H^1(G, B_0-dual), as coordinates in the h1
// basis of dual_B.
std::vector<std::vector<i64>> b0_kernel(const BrauerProblem& pb);

// The imposed values are class-level: replacing a cocycle by itself plus a
// coboundary never changes any condition value. Verified on `trials` random
// coboundaries (deterministic given seed).
bool coboundary_invariance(const BrauerProblem& pb, const ConjClasses& cc,
                           int trials, unsigned seed = 1);

struct ScanRow {
  std::vector<std::pair<AVec, i64>> gens;
  BrauerReport report;
  bool sha_equals_formula = false;
};

// One report per subgroup G: exhaustive over all subgroups of the ambient
// A x (Z/e)^* when requested (ambient order must stay tabulable), otherwise
// a deterministic sample of cyclic and 2-generated subgroups.
std::vector<ScanRow> sandwich_scan(int n, i64 p, bool exhaustive,
                                   i64 budget = kDefaultElemBudget);

}  // namespace mv
