#pragma once

// Massey products via the correspondence between defining systems and
// homomorphisms into the filtration-preserving triangular group modulo its
// distinguished corner subgroup: extraction of defining systems from
// homomorphisms, assembly in the other direction, Massey values as
// obstruction classes, and exhaustive Massey product sets.
//
// Coefficients are cyclic: N_i = Z/m with the Galois action of a character
// chi_i: Gamma -> (Z/m)^*, so M_{i,j} = Hom(N_j, N_i) = Z/m with action
// chi_i * chi_j^{-1} and multiplication M_{i,j} x M_{j,k} -> M_{i,k} given
// by multiplication in Z/m. The classical case is m = p with every chi_i
// trivial, where the ambient group degenerates to the unitriangular U and
// the corner subgroup to its center.

#include "mv/cohom.hpp"
#include "mv/unigroup.hpp"

namespace mv {

struct MasseyProblem {
  UniContext c;                         // (n, m)
  FiniteGroup gamma;
  std::vector<std::vector<i64>> chi;    // n+1 characters Gamma -> (Z/m)^*
  std::vector<std::vector<i64>> alpha;  // n twisted 1-cocycles, alpha[i][g]
  bool classical = true;                // all chi trivial

  MasseyProblem() : c(2, 2) {}
};

// Validated constructors; throw std::invalid_argument on bad characters or
// non-cocycle alpha entries.
MasseyProblem classical_problem(FiniteGroup gamma, int n, i64 p,
                                std::vector<std::vector<i64>> alpha);
MasseyProblem generalized_problem(FiniteGroup gamma, int n, i64 m,
                                  std::vector<std::vector<i64>> chi,
                                  std::vector<std::vector<i64>> alpha);

// The rank-1 coefficient module M_{i,j} as a Gamma-module.
GModule coefficient_module(const MasseyProblem& pb, int i, int j);

/// One 1-cochain Gamma -> M_{i,j} per index pair (diag-major layout shared
/// with UniContext); the (0, n) slot is unused.
struct DefiningSystem {
  std::vector<std::vector<i64>> a;  // a[c.idx(i,j)][gamma element]
};

/// First failure of the defining-system equation, or i == -1 if none.
struct DsFailure {
  int i = -1, j = -1, sigma = -1, tau = -1;
  bool ok() const { return i < 0; }
};

// Checks normalization a(1) = 0, superdiagonal agreement with alpha, and
// the equation d a_{i,j} = -sum_m a_{i,m} cup a_{m,j} on every stored pair.
DsFailure check_defining_system(const MasseyProblem& pb, const DefiningSystem& ds);

// Extraction a_{i,j}(s) = entry_{i,j}(s) * chi_j(s)^{-1} from a lift of the
// problem's diagonal and superdiagonal data; validates the input.
DefiningSystem hom_to_defining_system(const MasseyProblem& pb,
                                      const std::vector<TriW>& hom);

struct HomResult {
  std::optional<std::vector<TriW>> hom;  // corner entry zeroed
  DsFailure failure;                     // set when hom is empty
};

// Assembly entry_{i,j}(s) = a_{i,j}(s) * chi_j(s); reports the failing
// (i, j, sigma, tau) when the defining-system equation does not hold.
HomResult defining_system_to_hom(const MasseyProblem& pb, const DefiningSystem& ds);

struct MasseyValue {
  std::vector<i64> b;  // 2-cocycle Gamma^2 -> M_{0,n}, row-major
  bool trivial = false;
  std::optional<std::vector<i64>> trivializer;  // 1-cochain with d f = b
};

// Value b_{0,n} = -sum_m a_{0,m} cup a_{m,n}, cross-checked against the
// obstruction cocycle of the corner-free set-theoretic lift.
MasseyValue massey_value(const MasseyProblem& pb, const DefiningSystem& ds);

constexpr i64 kDefaultLiftBudget = 1 << 22;

// All homomorphisms Gamma -> T(W)/Z(W) lifting the problem data, in a
// deterministic order; budget_error when the candidate space exceeds the cap.
std::vector<std::vector<TriW>> enumerate_lifts(const MasseyProblem& pb,
                                               i64 max_candidates = kDefaultLiftBudget);

struct MasseySetReport {
  bool defined = false;      // at least one defining system exists
  i64 hom_count = 0;         // defining systems (= lifts)
  i64 bucket_count = 0;      // lifts up to conjugacy by the unipotent radical
  std::vector<std::vector<i64>> classes;  // one value 2-cocycle per class
  std::vector<char> class_trivial;
  std::vector<char> per_hom_trivial;      // per lift: does its value vanish
  bool contains_zero = false;
};

MasseySetReport massey_product_set(const MasseyProblem& pb,
                                   i64 max_candidates = kDefaultLiftBudget);

bool is_defined(const MasseyProblem& pb, i64 max_candidates = kDefaultLiftBudget);
bool vanishes(const MasseyProblem& pb, i64 max_candidates = kDefaultLiftBudget);

}  // namespace mv
