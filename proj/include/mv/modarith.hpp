#pragma once

// Exact arithmetic and linear algebra over Z/m and the prime fields F_p.
//
// Conventions used throughout:
//   * residues live in [0, m) and every operation reduces eagerly;
//   * elimination pivots are chosen deterministically (smallest row index,
//     then smallest column), so kernel bases are reproducible;
//   * over Z/p^k we only ever divide by units and pivot on entries of
//     minimal p-valuation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace mv {

using i64 = long long;

i64 norm_mod(i64 x, i64 m);
i64 mul_mod(i64 a, i64 b, i64 m);
// Inverse of a unit of Z/m; throws std::domain_error if gcd(a, m) != 1.
i64 inv_mod(i64 a, i64 m);
bool is_prime(i64 m);
// Largest v with p^v | x (x taken mod p^k); returns k for x == 0 mod p^k.
int val_p(i64 x, i64 p, int k);
i64 pow_i64(i64 b, int e);

/// A single residue with its modulus carried alongside.
struct Residue {
  i64 value = 0;
  i64 modulus = 1;

  Residue() = default;
  Residue(i64 v, i64 m) : value(norm_mod(v, m)), modulus(m) {}

  Residue operator+(const Residue& o) const;
  Residue operator-(const Residue& o) const;
  Residue operator*(const Residue& o) const;
  Residue inv() const;
  bool operator==(const Residue& o) const = default;
};

/// Dense row-major matrix over Z/m (all entries share one modulus).
struct DenseMat {
  int rows = 0, cols = 0;
  i64 mod = 1;
  std::vector<i64> a;

  DenseMat() = default;
  DenseMat(int r, int c, i64 m) : rows(r), cols(c), mod(m), a((size_t)r * c, 0) {}
  static DenseMat identity(int n, i64 m);

  i64& at(int r, int c) { return a[(size_t)r * cols + c]; }
  i64 at(int r, int c) const { return a[(size_t)r * cols + c]; }
  void set(int r, int c, i64 v) { at(r, c) = norm_mod(v, mod); }
  bool operator==(const DenseMat& o) const = default;
};

DenseMat mat_mul(const DenseMat& a, const DenseMat& b);
DenseMat mat_add(const DenseMat& a, const DenseMat& b);
std::vector<i64> mat_apply(const DenseMat& a, const std::vector<i64>& v);
// Inverse of an invertible matrix over Z/m (unit-pivot elimination).
DenseMat mat_inv(const DenseMat& a);

/// Coordinate-list sparse matrix; stored residues are nonzero, no duplicates.
struct SparseMat {
  int rows = 0, cols = 0;
  i64 mod = 1;
  std::vector<std::tuple<int, int, i64>> entries;

  SparseMat() = default;
  SparseMat(int r, int c, i64 m) : rows(r), cols(c), mod(m) {}
  void add(int r, int c, i64 v);
};

struct RrefResult {
  int rank = 0;
  std::vector<std::vector<i64>> kernel;  // reduced, deterministic order
  std::vector<int> pivots;               // pivot column per pivot row
};

// Reduced row echelon form over F_p (p prime; leftmost-first pivots).
RrefResult rref_fp(const DenseMat& a);
// Row-reduce in place; returns pivot columns. Helper shared by rref/solve.
std::vector<int> row_reduce_fp(DenseMat& m);

struct SolveResult {
  std::vector<i64> x;                          // one solution of a x = b
  std::vector<std::vector<i64>> kernel;        // basis of ker a
};

std::optional<SolveResult> solve_fp(const DenseMat& a, const std::vector<i64>& b);

struct SmithResult {
  std::vector<i64> divisors;  // nonzero invariant factors p^e (e < k), ascending
};

// Elementary divisors over the local ring Z/p^k (matrix modulus must be p^k).
SmithResult smith_pk(const DenseMat& a, i64 p, int k);

int sparse_rank_fp(const SparseMat& a, i64 p);

// Module of solutions of a homogeneous linear system over Z/p^k, built up
// one constraint at a time. Starts as all of (Z/p^k)^ncols (or a supplied
// generating set) and shrinks as constraints arrive.
template <typename T>
class KernelTracker {
 public:
  KernelTracker(int ncols, i64 p, int k);
  KernelTracker(std::vector<std::vector<T>> gens, i64 p, int k);

  // Impose sum_j coeff_j * x[idx_j] == 0.
  void add_constraint(const std::vector<std::pair<int, i64>>& row);
  const std::vector<std::vector<T>>& generators() const { return gens_; }
  int ncols() const { return ncols_; }

 private:
  int ncols_;
  i64 p_, pk_;
  int k_;
  std::vector<std::vector<T>> gens_;
};

using KernelTracker64 = KernelTracker<i64>;
using KernelTracker8 = KernelTracker<uint8_t>;

/// Incremental echelon form of a subgroup of (Z/p^k)^cols. Rows keep distinct
/// leading columns, lead entries are normalized to powers of p, and the row
/// set is closed under multiplication by p^(k - lead valuation); with that
/// closure, greedy leftmost reduction decides membership and the subgroup
/// order is the product of the lead-entry cyclic orders.
struct ZpkEchelon {
  int cols = 0;
  i64 p = 2, q = 2;
  int k = 1;
  std::vector<std::vector<i64>> rows;
  std::vector<int> lead_col, lead_val;
  std::vector<int> row_at_col;  // per column, row index or -1

  ZpkEchelon(int cols, i64 p, int k);
  bool add(std::vector<i64> v);  // true if the span grew
  bool contains(std::vector<i64> v) const;
  i64 log_order() const;         // log_p of the subgroup order
};

// One solution of a sparse linear system over Z/p^k; each row is a list of
// (column, coefficient) pairs together with its right-hand side.
using SparseRow = std::vector<std::pair<int, i64>>;
std::optional<std::vector<i64>> solve_sparse_zpk(
    int ncols, const std::vector<std::pair<SparseRow, i64>>& rows, i64 p, int k);

// Generators of { x : a x = 0 } over Z/p^k.
std::vector<std::vector<i64>> kernel_zpk(const DenseMat& a, i64 p, int k);
// One solution of a x = b over Z/p^k, or nullopt if inconsistent.
std::optional<std::vector<i64>> solve_zpk(const DenseMat& a, const std::vector<i64>& b,
                                          i64 p, int k);
// Membership of v in the column span of gens over Z/p^k.
bool in_span_zpk(const std::vector<std::vector<i64>>& gens, const std::vector<i64>& v,
                 i64 p, int k);

}  // namespace mv
