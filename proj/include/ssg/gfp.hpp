#pragma once

// Arithmetic and linear algebra over the prime field GF(p).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ssg/error.hpp"

namespace ssg::gfp {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int reduce(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int inverse(int a, int p) {
  // p is prime, so a^(p-2) is the inverse
  long long result = 1, base = reduce(a, p);
  if (base == 0) throw PreconditionError("gfp::inverse: zero has no inverse");
  int e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<int>(result);
}

using Vector = std::vector<int>;
using Matrix = std::vector<Vector>;

// Row echelon basis kept in reduced form: each row has a pivot column with
// entry 1, and every other row is zero in that column.
class EchelonBasis {
 public:
  EchelonBasis(int prime, int dim) : p_(prime), dim_(dim) {}

  int prime() const { return p_; }
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const Matrix& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  // Reduce v against the basis; returns the residue.
  Vector residue(Vector v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int c = pivots_[r];
      int f = v[c];
      if (f == 0) continue;
      for (int k = 0; k < dim_; ++k)
        v[k] = reduce(v[k] - static_cast<long long>(f) * rows_[r][k], p_);
    }
    return v;
  }

  bool contains(const Vector& v) const {
    for (int x : residue(v))
      if (x != 0) return false;
    return true;
  }

  // Inserts v; returns true if the rank grew.
  bool insert(Vector v) {
    v = residue(std::move(v));
    int c = 0;
    while (c < dim_ && v[c] == 0) ++c;
    if (c == dim_) return false;
    int inv = inverse(v[c], p_);
    for (int& x : v) x = reduce(static_cast<long long>(x) * inv, p_);
    for (auto& row : rows_) {
      int f = row[c];
      if (f == 0) continue;
      for (int k = 0; k < dim_; ++k)
        row[k] = reduce(row[k] - static_cast<long long>(f) * v[k], p_);
    }
    // keep rows ordered by pivot column
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < c) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), c);
    return true;
  }

 private:
  int p_;
  int dim_;
  Matrix rows_;
  std::vector<int> pivots_;
};

inline int rank(int p, const Matrix& m, int dim) {
  EchelonBasis b(p, dim);
  for (const auto& row : m) b.insert(row);
  return b.rank();
}

// Inverse of a square invertible matrix; nullopt if singular.
inline std::optional<Matrix> invert(int p, Matrix a) {
  const int n = static_cast<int>(a.size());
  Matrix inv(n, Vector(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    int f = inverse(a[col][col], p);
    for (int k = 0; k < n; ++k) {
      a[col][k] = reduce(static_cast<long long>(a[col][k]) * f, p);
      inv[col][k] = reduce(static_cast<long long>(inv[col][k]) * f, p);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      int g = a[r][col];
      for (int k = 0; k < n; ++k) {
        a[r][k] = reduce(a[r][k] - static_cast<long long>(g) * a[col][k], p);
        inv[r][k] = reduce(inv[r][k] - static_cast<long long>(g) * inv[col][k], p);
      }
    }
  }
  return inv;
}

// row vector times matrix
inline Vector multiply(int p, const Vector& v, const Matrix& m) {
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  Vector out(cols, 0);
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (v[r] == 0) continue;
    for (std::size_t c = 0; c < cols; ++c)
      out[c] = reduce(out[c] + static_cast<long long>(v[r]) * m[r][c], p);
  }
  return out;
}

// Visits every subspace of GF(p)^dim of the given rank exactly once, as a
// reduced row echelon matrix. Subspaces are produced in a fixed order: pivot
// sets in lexicographic order, then free entries as base-p odometers.
inline void for_each_subspace(int p, int dim, int rank,
                              const std::function<void(const Matrix&)>& visit) {
  if (rank < 0 || rank > dim) return;
  std::vector<int> pivots(rank);
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == rank) {
      // free positions: for row r, columns > pivots[r] that are not pivots
      std::vector<std::pair<int, int>> free;
      std::vector<char> is_pivot(dim, 0);
      for (int c : pivots) is_pivot[c] = 1;
      for (int r = 0; r < rank; ++r)
        for (int c = pivots[r] + 1; c < dim; ++c)
          if (!is_pivot[c]) free.emplace_back(r, c);
      Matrix m(rank, Vector(dim, 0));
      for (int r = 0; r < rank; ++r) m[r][pivots[r]] = 1;
      std::vector<int> digits(free.size(), 0);
      while (true) {
        for (std::size_t f = 0; f < free.size(); ++f)
          m[free[f].first][free[f].second] = digits[f];
        visit(m);
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
        if (k == digits.size()) break;
      }
      return;
    }
    for (int c = start; c <= dim - (rank - idx); ++c) {
      pivots[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
}

}  // namespace ssg::gfp
