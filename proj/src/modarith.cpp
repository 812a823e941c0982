#include "mv/modarith.hpp"

#include <algorithm>
#include <numeric>

namespace mv {

i64 norm_mod(i64 x, i64 m) {
  x %= m;
  return x < 0 ? x + m : x;
}

i64 mul_mod(i64 a, i64 b, i64 m) { return norm_mod(a * b, m); }

i64 inv_mod(i64 a, i64 m) {
  a = norm_mod(a, m);
  i64 g = m, x = 0, x1 = 1, a1 = a;
  while (a1 != 0) {
    i64 q = g / a1;
    g -= q * a1;
    std::swap(g, a1);
    x -= q * x1;
    std::swap(x, x1);
  }
  if (g != 1) throw std::domain_error("inv_mod: not a unit");
  return norm_mod(x, m);
}

bool is_prime(i64 m) {
  if (m < 2) return false;
  for (i64 d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

int val_p(i64 x, i64 p, int k) {
  if (x == 0) return k;
  int v = 0;
  while (v < k && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

i64 pow_i64(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Residue Residue::operator+(const Residue& o) const {
  if (modulus != o.modulus) throw std::invalid_argument("Residue: modulus mismatch");
  return Residue(value + o.value, modulus);
}
Residue Residue::operator-(const Residue& o) const {
  if (modulus != o.modulus) throw std::invalid_argument("Residue: modulus mismatch");
  return Residue(value - o.value, modulus);
}
Residue Residue::operator*(const Residue& o) const {
  if (modulus != o.modulus) throw std::invalid_argument("Residue: modulus mismatch");
  return Residue(value * o.value, modulus);
}
Residue Residue::inv() const { return Residue(inv_mod(value, modulus), modulus); }

DenseMat DenseMat::identity(int n, i64 m) {
  DenseMat r(n, n, m);
  for (int i = 0; i < n; ++i) r.at(i, i) = norm_mod(1, m);
  return r;
}

DenseMat mat_mul(const DenseMat& a, const DenseMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
  if (a.mod != b.mod) throw std::invalid_argument("mat_mul: modulus mismatch");
  DenseMat c(a.rows, b.cols, a.mod);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      i64 v = a.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < b.cols; ++j)
        c.at(i, j) = norm_mod(c.at(i, j) + v * b.at(k, j), c.mod);
    }
  return c;
}

DenseMat mat_add(const DenseMat& a, const DenseMat& b) {
  if (a.rows != b.rows || a.cols != b.cols || a.mod != b.mod)
    throw std::invalid_argument("mat_add: shape/modulus mismatch");
  DenseMat c = a;
  for (size_t i = 0; i < c.a.size(); ++i) c.a[i] = norm_mod(c.a[i] + b.a[i], c.mod);
  return c;
}

std::vector<i64> mat_apply(const DenseMat& a, const std::vector<i64>& v) {
  if ((int)v.size() != a.cols) throw std::invalid_argument("mat_apply: dimension mismatch");
  std::vector<i64> r(a.rows, 0);
  for (int i = 0; i < a.rows; ++i) {
    i64 s = 0;
    for (int j = 0; j < a.cols; ++j) s += a.at(i, j) * v[j] % a.mod;
    r[i] = norm_mod(s, a.mod);
  }
  return r;
}

DenseMat mat_inv(const DenseMat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("mat_inv: not square");
  int n = a.rows;
  DenseMat m = a, inv = DenseMat::identity(n, a.mod);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      i64 g = std::gcd(norm_mod(m.at(r, col), m.mod), m.mod);
      if (g == 1) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw std::domain_error("mat_inv: not invertible");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m.a[(size_t)piv * n + j], m.a[(size_t)col * n + j]);
        std::swap(inv.a[(size_t)piv * n + j], inv.a[(size_t)col * n + j]);
      }
    }
    i64 iv = inv_mod(m.at(col, col), m.mod);
    for (int j = 0; j < n; ++j) {
      m.at(col, j) = mul_mod(m.at(col, j), iv, m.mod);
      inv.at(col, j) = mul_mod(inv.at(col, j), iv, m.mod);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      i64 f = m.at(r, col);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        m.at(r, j) = norm_mod(m.at(r, j) - f * m.at(col, j), m.mod);
        inv.at(r, j) = norm_mod(inv.at(r, j) - f * inv.at(col, j), m.mod);
      }
    }
  }
  return inv;
}

void SparseMat::add(int r, int c, i64 v) {
  v = norm_mod(v, mod);
  if (v != 0) entries.emplace_back(r, c, v);
}

std::vector<int> row_reduce_fp(DenseMat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    i64 iv = inv_mod(m.at(r, c), m.mod);
    for (int j = c; j < m.cols; ++j) m.at(r, j) = mul_mod(m.at(r, j), iv, m.mod);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      i64 f = m.at(i, c);
      if (f == 0) continue;
      for (int j = c; j < m.cols; ++j)
        m.at(i, j) = norm_mod(m.at(i, j) - f * m.at(r, j), m.mod);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

namespace {

// F_2 specialization: rows packed into 64-bit words.
std::vector<int> row_reduce_f2(std::vector<std::vector<uint64_t>>& rows, int cols) {
  std::vector<int> pivots;
  size_t r = 0;
  for (int c = 0; c < cols && r < rows.size(); ++c) {
    size_t w = c / 64;
    uint64_t bit = 1ull << (c % 64);
    size_t piv = SIZE_MAX;
    for (size_t i = r; i < rows.size(); ++i)
      if (rows[i][w] & bit) {
        piv = i;
        break;
      }
    if (piv == SIZE_MAX) continue;
    std::swap(rows[piv], rows[r]);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      if (rows[i][w] & bit)
        for (size_t ww = 0; ww < rows[i].size(); ++ww) rows[i][ww] ^= rows[r][ww];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RrefResult rref_fp(const DenseMat& a) {
  if (!is_prime(a.mod)) throw std::domain_error("rref_fp: composite modulus");
  RrefResult res;
  std::vector<char> is_pivot(a.cols, 0);
  DenseMat m;
  if (a.mod == 2) {
    int words = (a.cols + 63) / 64;
    std::vector<std::vector<uint64_t>> rows((size_t)a.rows,
                                            std::vector<uint64_t>(words, 0));
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j)
        if (a.at(i, j)) rows[i][j / 64] |= 1ull << (j % 64);
    res.pivots = row_reduce_f2(rows, a.cols);
    res.rank = (int)res.pivots.size();
    m = DenseMat(res.rank, a.cols, 2);
    for (int i = 0; i < res.rank; ++i)
      for (int j = 0; j < a.cols; ++j) m.at(i, j) = (rows[i][j / 64] >> (j % 64)) & 1;
  } else {
    m = a;
    res.pivots = row_reduce_fp(m);
    res.rank = (int)res.pivots.size();
  }
  for (int c : res.pivots) is_pivot[c] = 1;
  for (int c = 0; c < a.cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<i64> v(a.cols, 0);
    v[c] = 1;
    for (int i = 0; i < res.rank; ++i)
      v[res.pivots[i]] = norm_mod(-m.at(i, c), a.mod);
    res.kernel.push_back(std::move(v));
  }
  return res;
}

std::optional<SolveResult> solve_fp(const DenseMat& a, const std::vector<i64>& b) {
  if ((int)b.size() != a.rows) throw std::invalid_argument("solve_fp: dimension mismatch");
  if (!is_prime(a.mod)) throw std::domain_error("solve_fp: composite modulus");
  DenseMat aug(a.rows, a.cols + 1, a.mod);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols) = norm_mod(b[i], a.mod);
  }
  auto pivots = row_reduce_fp(aug);
  for (size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] == a.cols) return std::nullopt;  // inconsistent
  SolveResult res;
  res.x.assign(a.cols, 0);
  for (size_t i = 0; i < pivots.size(); ++i) res.x[pivots[i]] = aug.at((int)i, a.cols);
  res.kernel = rref_fp(a).kernel;
  return res;
}

SmithResult smith_pk(const DenseMat& a, i64 p, int k) {
  if (!is_prime(p) || k < 1) throw std::domain_error("smith_pk: modulus not a prime power");
  i64 pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  if (a.mod != pk) throw std::domain_error("smith_pk: matrix modulus != p^k");
  DenseMat m = a;
  std::vector<int> vals;
  int top = 0;
  int left = 0;
  while (top < m.rows && left < m.cols) {
    int br = -1, bc = -1, bv = k;
    for (int i = top; i < m.rows; ++i)
      for (int j = left; j < m.cols; ++j) {
        int v = val_p(m.at(i, j), p, k);
        if (v < bv) {
          bv = v;
          br = i;
          bc = j;
        }
      }
    if (br < 0) break;  // all zero
    if (br != top)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(br, j), m.at(top, j));
    if (bc != left)
      for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, bc), m.at(i, left));
    i64 piv = m.at(top, left);
    i64 unit = piv / pow_i64(p, bv);
    i64 iu = inv_mod(unit, pk);
    for (int j = left; j < m.cols; ++j) m.at(top, j) = mul_mod(m.at(top, j), iu, pk);
    for (int i = top + 1; i < m.rows; ++i) {
      i64 e = m.at(i, left);
      if (e == 0) continue;
      i64 f = e / pow_i64(p, bv);  // val(e) >= bv by minimality
      for (int j = left; j < m.cols; ++j)
        m.at(i, j) = norm_mod(m.at(i, j) - f * m.at(top, j), pk);
    }
    for (int j = left + 1; j < m.cols; ++j) {
      i64 e = m.at(top, j);
      if (e == 0) continue;
      i64 f = e / pow_i64(p, bv);
      for (int i = top; i < m.rows; ++i)
        m.at(i, j) = norm_mod(m.at(i, j) - f * m.at(i, left), pk);
    }
    vals.push_back(bv);
    ++top;
    ++left;
  }
  std::sort(vals.begin(), vals.end());
  SmithResult res;
  for (int v : vals) res.divisors.push_back(pow_i64(p, v));
  return res;
}

int sparse_rank_fp(const SparseMat& a, i64 p) {
  if (!is_prime(p)) throw std::domain_error("sparse_rank_fp: composite modulus");
  if (p == 2) {
    int words = (a.cols + 63) / 64;
    std::vector<std::vector<uint64_t>> rows((size_t)a.rows,
                                            std::vector<uint64_t>(words, 0));
    for (auto& [r, c, v] : a.entries)
      if (v % 2) rows[r][c / 64] ^= 1ull << (c % 64);
    // Incremental reduction: pivot word/bit per stored row.
    std::vector<std::pair<int, std::vector<uint64_t>>> basis;  // (pivot col, row)
    int rank = 0;
    for (auto& row : rows) {
      auto cur = row;
      for (auto& [pc, br] : basis) {
        if (cur[pc / 64] >> (pc % 64) & 1)
          for (int w = 0; w < words; ++w) cur[w] ^= br[w];
      }
      int pc = -1;
      for (int w = 0; w < words && pc < 0; ++w)
        if (cur[w]) pc = w * 64 + std::countr_zero(cur[w]);
      if (pc >= 0) {
        basis.emplace_back(pc, std::move(cur));
        ++rank;
      }
    }
    return rank;
  }
  // Generic: incremental dense row basis.
  std::vector<std::vector<i64>> byrow((size_t)a.rows);
  for (auto& [r, c, v] : a.entries) {
    if (byrow[r].empty()) byrow[r].assign(a.cols, 0);
    byrow[r][c] = norm_mod(byrow[r][c] + v, p);
  }
  std::vector<std::pair<int, std::vector<i64>>> basis;
  int rank = 0;
  for (auto& row : byrow) {
    if (row.empty()) continue;
    auto cur = row;
    for (auto& [pc, br] : basis) {
      i64 f = cur[pc];
      if (f)
        for (int j = 0; j < a.cols; ++j) cur[j] = norm_mod(cur[j] - f * br[j], p);
    }
    int pc = -1;
    for (int j = 0; j < a.cols; ++j)
      if (cur[j]) {
        pc = j;
        break;
      }
    if (pc >= 0) {
      i64 iv = inv_mod(cur[pc], p);
      for (int j = 0; j < a.cols; ++j) cur[j] = mul_mod(cur[j], iv, p);
      basis.emplace_back(pc, std::move(cur));
      ++rank;
    }
  }
  return rank;
}

template <typename T>
KernelTracker<T>::KernelTracker(int ncols, i64 p, int k)
    : ncols_(ncols), p_(p), k_(k) {
  pk_ = pow_i64(p, k);
  gens_.reserve(ncols);
  for (int i = 0; i < ncols; ++i) {
    std::vector<T> e(ncols, 0);
    e[i] = 1;
    gens_.push_back(std::move(e));
  }
}

template <typename T>
KernelTracker<T>::KernelTracker(std::vector<std::vector<T>> gens, i64 p, int k)
    : ncols_(gens.empty() ? 0 : (int)gens[0].size()), p_(p), k_(k), gens_(std::move(gens)) {
  pk_ = pow_i64(p, k);
}

template <typename T>
void KernelTracker<T>::add_constraint(const std::vector<std::pair<int, i64>>& row) {
  size_t ng = gens_.size();
  if (ng == 0) return;
  std::vector<i64> vals(ng, 0);
  bool any = false;
  for (size_t j = 0; j < ng; ++j) {
    i64 s = 0;
    for (auto& [idx, coeff] : row) s += coeff * (i64)gens_[j][idx];
    vals[j] = norm_mod(s, pk_);
    any = any || vals[j] != 0;
  }
  if (!any) return;
  // Pivot generator: minimal valuation, smallest index.
  size_t piv = 0;
  int bv = k_ + 1;
  for (size_t j = 0; j < ng; ++j) {
    int v = val_p(vals[j], p_, k_);
    if (v < bv) {
      bv = v;
      piv = j;
    }
  }
  i64 pv = pow_i64(p_, bv);
  i64 iu = inv_mod(vals[piv] / pv, pk_);
  auto& gp = gens_[piv];
  for (size_t j = 0; j < ng; ++j) {
    if (j == piv || vals[j] == 0) continue;
    i64 t = mul_mod(vals[j] / pv, iu, pk_);
    auto& g = gens_[j];
    for (int c = 0; c < ncols_; ++c)
      g[c] = (T)norm_mod((i64)g[c] - t * (i64)gp[c], pk_);
  }
  // Solutions along the pivot need coefficient divisible by p^(k - bv).
  i64 scale = pow_i64(p_, k_ - bv);
  bool zero = true;
  for (int c = 0; c < ncols_; ++c) {
    gp[c] = (T)norm_mod(scale * (i64)gp[c], pk_);
    zero = zero && gp[c] == 0;
  }
  if (zero) gens_.erase(gens_.begin() + (long)piv);
}

template class KernelTracker<i64>;
template class KernelTracker<uint8_t>;
template class KernelTracker<uint16_t>;

ZpkEchelon::ZpkEchelon(int cols, i64 p, int k)
    : cols(cols), p(p), q(pow_i64(p, k)), k(k), row_at_col((size_t)cols, -1) {}

bool ZpkEchelon::add(std::vector<i64> v) {
  if ((int)v.size() != cols) throw std::invalid_argument("ZpkEchelon: dimension mismatch");
  for (auto& x : v) x = norm_mod(x, q);
  bool grew = false;
  for (int c = 0; c < cols; ++c) {
    if (v[(size_t)c] == 0) continue;
    int va = val_p(v[(size_t)c], p, k);
    int r = row_at_col[(size_t)c];
    if (r < 0) {
      // New leading column: normalize the lead entry to p^va and keep the
      // row set closed under multiplication by p^(k - va).
      i64 iu = inv_mod(v[(size_t)c] / pow_i64(p, va), q);
      for (auto& x : v) x = mul_mod(x, iu, q);
      r = (int)rows.size();
      rows.push_back(v);
      lead_col.push_back(c);
      lead_val.push_back(va);
      row_at_col[(size_t)c] = r;
      if (va > 0) {
        std::vector<i64> w(rows[(size_t)r]);
        i64 s = pow_i64(p, k - va);
        for (auto& x : w) x = mul_mod(x, s, q);
        add(std::move(w));
      }
      return true;
    }
    if (lead_val[(size_t)r] <= va) {
      i64 t = v[(size_t)c] / pow_i64(p, lead_val[(size_t)r]);
      const auto& row = rows[(size_t)r];
      for (int j = c; j < cols; ++j)
        v[(size_t)j] = norm_mod(v[(size_t)j] - t * row[(size_t)j], q);
    } else {
      // The incoming row has a better lead valuation: swap it in, close
      // under the p-power multiple, and keep reducing the displaced row.
      i64 iu = inv_mod(v[(size_t)c] / pow_i64(p, va), q);
      for (auto& x : v) x = mul_mod(x, iu, q);
      std::swap(v, rows[(size_t)r]);
      lead_val[(size_t)r] = va;
      grew = true;
      if (va > 0) {
        std::vector<i64> w(rows[(size_t)r]);
        i64 s = pow_i64(p, k - va);
        for (auto& x : w) x = mul_mod(x, s, q);
        add(std::move(w));
      }
      --c;  // the displaced row still has a nonzero entry at column c
    }
  }
  return grew;
}

bool ZpkEchelon::contains(std::vector<i64> v) const {
  if ((int)v.size() != cols) throw std::invalid_argument("ZpkEchelon: dimension mismatch");
  for (auto& x : v) x = norm_mod(x, q);
  for (int c = 0; c < cols; ++c) {
    if (v[(size_t)c] == 0) continue;
    int r = row_at_col[(size_t)c];
    if (r < 0) return false;
    int va = val_p(v[(size_t)c], p, k);
    if (lead_val[(size_t)r] > va) return false;
    i64 t = v[(size_t)c] / pow_i64(p, lead_val[(size_t)r]);
    const auto& row = rows[(size_t)r];
    for (int j = c; j < cols; ++j)
      v[(size_t)j] = norm_mod(v[(size_t)j] - t * row[(size_t)j], q);
  }
  return true;
}

i64 ZpkEchelon::log_order() const {
  i64 s = 0;
  for (int v : lead_val) s += k - v;
  return s;
}

std::optional<std::vector<i64>> solve_sparse_zpk(
    int ncols, const std::vector<std::pair<SparseRow, i64>>& rows, i64 p, int k) {
  i64 pk = pow_i64(p, k);
  KernelTracker64 tr(ncols + 1, p, k);
  for (auto& [row, rhs] : rows) {
    SparseRow r = row;
    if (norm_mod(rhs, pk) != 0) r.emplace_back(ncols, norm_mod(-rhs, pk));
    if (!r.empty()) tr.add_constraint(r);
  }
  for (auto& g : tr.generators()) {
    if (g[(size_t)ncols] % p != 0) {
      i64 iu = inv_mod(g[(size_t)ncols], pk);
      std::vector<i64> x((size_t)ncols);
      for (int j = 0; j < ncols; ++j) x[(size_t)j] = mul_mod(g[(size_t)j], iu, pk);
      return x;
    }
  }
  return std::nullopt;
}

std::vector<std::vector<i64>> kernel_zpk(const DenseMat& a, i64 p, int k) {
  KernelTracker64 tr(a.cols, p, k);
  for (int i = 0; i < a.rows; ++i) {
    std::vector<std::pair<int, i64>> row;
    for (int j = 0; j < a.cols; ++j)
      if (a.at(i, j) != 0) row.emplace_back(j, a.at(i, j));
    if (!row.empty()) tr.add_constraint(row);
  }
  return tr.generators();
}

std::optional<std::vector<i64>> solve_zpk(const DenseMat& a, const std::vector<i64>& b,
                                          i64 p, int k) {
  if ((int)b.size() != a.rows) throw std::invalid_argument("solve_zpk: dimension mismatch");
  i64 pk = pow_i64(p, k);
  // Solve [a | -b] (x, t) = 0 and look for a generator combination with t a unit.
  DenseMat aug(a.rows, a.cols + 1, pk);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) aug.at(i, j) = norm_mod(a.at(i, j), pk);
    aug.at(i, a.cols) = norm_mod(-b[i], pk);
  }
  auto gens = kernel_zpk(aug, p, k);
  for (auto& g : gens) {
    if (g[a.cols] % p != 0) {
      i64 iu = inv_mod(g[a.cols], pk);
      std::vector<i64> x(a.cols);
      for (int j = 0; j < a.cols; ++j) x[j] = mul_mod(g[j], iu, pk);
      return x;
    }
  }
  return std::nullopt;
}

bool in_span_zpk(const std::vector<std::vector<i64>>& gens, const std::vector<i64>& v,
                 i64 p, int k) {
  if (gens.empty()) {
    for (i64 x : v)
      if (norm_mod(x, pow_i64(p, k)) != 0) return false;
    return true;
  }
  DenseMat m((int)v.size(), (int)gens.size(), pow_i64(p, k));
  for (size_t j = 0; j < gens.size(); ++j)
    for (size_t i = 0; i < v.size(); ++i) m.at((int)i, (int)j) = norm_mod(gens[j][i], m.mod);
  return solve_zpk(m, v, p, k).has_value();
}

}  // namespace mv
