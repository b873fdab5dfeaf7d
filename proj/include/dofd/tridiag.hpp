#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dofd/error.hpp"

namespace dofd {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
template <class T>
struct SymTridiagonal {
  std::vector<T> diag;
  std::vector<T> off;

  std::size_t size() const { return diag.size(); }

  template <class U>
  void apply(std::span<const U> x, std::span<U> y) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      U acc = diag[i] * x[i];
      if (i > 0) acc += off[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off[i] * x[i + 1];
      y[i] = acc;
    }
  }
};

/// LU factors of a (complex-)symmetric tridiagonal matrix by the Thomas
/// algorithm, without pivoting. Workspace is owned by the object, so one
/// factorization is reused across many right-hand sides.
template <class T>
class TridiagonalLU {
 public:
  TridiagonalLU(std::span<const T> diag, std::span<const T> off)
      : off_(off.begin(), off.end()), inv_pivot_(diag.size()), lower_(diag.size()) {
    if (diag.empty() || off.size() + 1 != diag.size())
      throw MismatchError("tridiagonal factor: inconsistent band sizes");
    set_pivot(0, diag[0]);
    for (std::size_t i = 1; i < diag.size(); ++i) {
      lower_[i] = off_[i - 1] * inv_pivot_[i - 1];
      set_pivot(i, diag[i] - lower_[i] * off_[i - 1]);
    }
  }

  /// Factorization from the off-diagonal and the row sums (diag_i plus the
  /// off-diagonal entries of row i). The pivots are carried as their excess
  /// over the coupling to the next row, which keeps them accurate when the
  /// matrix is a near-singular M-matrix such as a fine-mesh Laplacian.
  static TridiagonalLU from_row_sums(std::span<const T> off, std::span<const T> row_sum) {
    if (row_sum.empty() || off.size() + 1 != row_sum.size())
      throw MismatchError("tridiagonal factor: inconsistent band sizes");
    return from_row_sums(
        row_sum.size(), [&](std::size_t i) { return off[i]; }, [&](std::size_t i) { return row_sum[i]; });
  }

  /// Same, reading the entries through off(i), i < n-1, and row_sum(i).
  template <class Off, class RowSum>
  static TridiagonalLU from_row_sums(std::size_t n, Off&& off, RowSum&& row_sum) {
    if (n == 0) throw MismatchError("tridiagonal factor: empty matrix");
    TridiagonalLU lu;
    lu.off_.resize(n - 1);
    lu.inv_pivot_.resize(n);
    lu.lower_.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) lu.off_[i] = off(i);
    auto coupling = [&](std::size_t i) { return i + 1 < n ? -lu.off_[i] : T(0); };
    T excess = row_sum(0);
    lu.set_pivot(0, excess + coupling(0));
    for (std::size_t i = 1; i < n; ++i) {
      // pivot_{i-1} = excess_{i-1} + c
      const T c = -lu.off_[i - 1];
      excess = row_sum(i) + c * excess * lu.inv_pivot_[i - 1];
      lu.lower_[i] = lu.off_[i - 1] * lu.inv_pivot_[i - 1];
      lu.set_pivot(i, excess + coupling(i));
    }
    return lu;
  }

  std::size_t size() const { return inv_pivot_.size(); }

  /// Overwrites b with the solution x of A x = b.
  void solve_in_place(std::span<T> b) const {
    const std::size_t n = inv_pivot_.size();
    for (std::size_t i = 1; i < n; ++i) b[i] -= lower_[i] * b[i - 1];
    b[n - 1] *= inv_pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - off_[i] * b[i + 1]) * inv_pivot_[i];
  }

 private:
  TridiagonalLU() = default;

  // Plain formulas instead of abs() and operator/ on complex values, which
  // go through hypot and the Annex G division for long double.
  void set_pivot(std::size_t i, T pivot) {
    if constexpr (is_complex<T>::value) {
      const auto re = pivot.real(), im = pivot.imag();
      if (!(std::abs(re) + std::abs(im) >= 1e-300))
        throw SingularMatrix("tridiagonal pivot " + std::to_string(i) + " vanished");
      const auto scale = std::max(std::abs(re), std::abs(im));
      const auto a = re / scale, b = im / scale;
      const auto d = scale * (a * a + b * b);
      inv_pivot_[i] = T(a / d, -b / d);
    } else {
      if (!(std::abs(pivot) >= 1e-300))
        throw SingularMatrix("tridiagonal pivot " + std::to_string(i) + " vanished");
      inv_pivot_[i] = T(1) / pivot;
    }
  }

  std::vector<T> off_;
  std::vector<T> inv_pivot_;
  std::vector<T> lower_;
};

template <class T>
T row_sum(const SymTridiagonal<T>& A, std::size_t i) {
  T r = A.diag[i];
  if (i > 0) r += A.off[i - 1];
  if (i + 1 < A.size()) r += A.off[i];
  return r;
}

/// Factors s A + B. Row sums of A and B are formed separately so that the
/// cancellation inside B (zero row sums of a Laplacian) stays exact.
template <class T, class R>
TridiagonalLU<T> factor_shifted(T s, const SymTridiagonal<R>& A, const SymTridiagonal<R>& B) {
  const std::size_t n = A.size();
  if (B.size() != n) throw MismatchError("tridiagonal factor: operands differ in size");
  return TridiagonalLU<T>::from_row_sums(
      n, [&](std::size_t i) { return s * T(A.off[i]) + T(B.off[i]); },
      [&](std::size_t i) { return s * T(row_sum(A, i)) + T(row_sum(B, i)); });
}

}  // namespace dofd
