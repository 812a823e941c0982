#pragma once

// Conjugacy classes of U^1, the descended action of A on them, fixed-point
// analysis in B, and the outer exponent of U^1.

#include "mv/unigroup.hpp"

#include <cstdint>
#include <optional>

namespace mv {

/// Thrown when an enumeration would exceed the configured element budget;
/// carries the budget that would have been required.
struct budget_error : std::runtime_error {
  i64 required;
  budget_error(const std::string& msg, i64 req) : std::runtime_error(msg), required(req) {}
};

constexpr i64 kDefaultElemBudget = i64(1) << 25;

/// Partition of U^1 into conjugacy classes, indexed by the dense mixed-radix
/// element codes (encode with min_gap = 2). Class representatives are the
/// minimal codes and class ids are assigned in increasing representative
/// order, so everything downstream is deterministic.
struct ConjClasses {
  const UniContext* ctx = nullptr;
  std::vector<int32_t> class_of;  // element code -> class id
  std::vector<i64> reps;          // class id -> minimal element code

  int nclasses() const { return (int)reps.size(); }
  int class_of_elem(const UniTri& x) const {
    return class_of[(size_t)encode(x, 2)];
  }
  UniTri rep(int cid) const { return decode(*ctx, reps[(size_t)cid], 2); }
};

ConjClasses conj_classes(const UniContext& c, i64 budget = kDefaultElemBudget);

// Class of S rep(cid) S^{-1} for the standard lift S of s. The product is
// also recomputed through the entrywise closed form and the two matrices are
// required to agree exactly.
int act_on_class(const ConjClasses& cc, const AVec& s, int cid);
std::vector<int> fixed_classes(const ConjClasses& cc, const AVec& s);
int tau_class(const ConjClasses& cc, int cid);

// F_p span helpers (vectors over the B basis).
int span_rank_fp(const std::vector<BVec>& vecs, i64 p);
bool span_contains_fp(const std::vector<BVec>& vecs, const BVec& v, i64 p);
bool span_equal_fp(const std::vector<BVec>& a, const std::vector<BVec>& b, i64 p);

// Span of the images in B of the representatives of the s-fixed classes;
// verified to lie inside B^s.
std::vector<BVec> image_span_in_B(const ConjClasses& cc, const AVec& s);
// Basis of B^s = ker(action of s minus identity).
std::vector<BVec> b_sigma_space(const UniContext& c, const AVec& s);
// Basis of B_0 (span of e~_{0,2}, e~_{0,3}, e~_{n-3,n}, e~_{n-2,n}).
std::vector<BVec> b0_space(const UniContext& c);
// Basis of B_0 intersected with B^s.
std::vector<BVec> b0_cap_b_sigma(const UniContext& c, const AVec& s);

// For s-invariant b supported on the second diagonal, the invariant class of
// the matrix Q with Q_{i,i+2} = b_i. Throws if the support or invariance
// precondition fails; returns nullopt if the constructed class turns out not
// to be fixed (which the theory rules out).
std::optional<int> lemma_b2_witness(const ConjClasses& cc, const AVec& s, const BVec& b);

struct OuterExponentReport {
  i64 group_exponent = 0;         // d = exponent of U^1
  i64 outer_exponent = 0;         // smallest e | d through which powers act
  i64 class_count = 0;
  std::vector<i64> power_fixers;  // I = { i in (Z/d)* : [x^i] = [x] for all x }
};

OuterExponentReport outer_exponent(const ConjClasses& cc);

struct ThetaReport {
  bool well_defined = false;      // value independent of the chosen lift
  bool generator_values = false;  // the six stated images
  bool surjective = false;        // image generates U^3
  bool unique_class = false;      // all lifts of e~_{1,4}+b are conjugate
  bool pass() const {
    return well_defined && generator_values && surjective && unique_class;
  }
};

// n = 5 only. b is a B vector with e~_{1,4} coefficient 1, the remaining
// third-diagonal coefficients 0, and second-diagonal part satisfying
// b_0 b_1 != 0 or b_2 b_3 != 0 or b_0 b_3 != 0.
ThetaReport theta_surjectivity(const ConjClasses& cc, const BVec& b);

}  // namespace mv
