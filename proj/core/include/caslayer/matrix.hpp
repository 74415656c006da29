#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>

#include "caslayer/errors.hpp"

namespace caslayer {

using cplx = std::complex<double>;

// Dense complex square matrix with small inline capacity (dimension 1..4) and
// value semantics. This is the workhorse for the 2x2 polarization blocks of
// the scattering recursion; all operations are pure and allocation-free.
//
// Invariant: every entry is finite. Constructors that accept user data
// validate this; arithmetic on finite operands of bounded magnitude cannot
// produce non-finite entries without an intermediate overflow, which the
// exponential-factor guard (diag_exp) rules out upstream.
class CMat {
 public:
  static constexpr std::size_t kMaxDim = 4;

  // Zero matrix of the given dimension (1..kMaxDim).
  explicit CMat(std::size_t dim);

  static CMat identity(std::size_t dim);

  // Diagonal matrix from the given values (size sets the dimension).
  static CMat diag(std::span<const cplx> values);
  static CMat diag2(cplx a, cplx b);  // common 2x2 case

  // Row-major construction; checks every entry for finiteness.
  static CMat from_rows(std::size_t dim, std::initializer_list<cplx> entries);

  std::size_t dim() const noexcept { return dim_; }

  cplx operator()(std::size_t r, std::size_t c) const {
    return e_[r * dim_ + c];
  }
  cplx& operator()(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }

  bool all_finite() const noexcept;

 private:
  std::size_t dim_;
  std::array<cplx, kMaxDim * kMaxDim> e_;
};

// Elementwise algebra. Dimensions must agree (DomainError otherwise).
CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator-(const CMat& a);
CMat operator*(const cplx& s, const CMat& a);
CMat operator*(const CMat& a, const cplx& s);

// Matrix product (DomainError on dimension mismatch).
CMat mat_mul(const CMat& a, const CMat& b);
inline CMat operator*(const CMat& a, const CMat& b) { return mat_mul(a, b); }

// Determinant: closed form for dim <= 3, partially pivoted elimination above.
cplx mat_det(const CMat& a);

cplx mat_trace(const CMat& a);

CMat mat_transpose(const CMat& a);

// Maximum row sum of absolute values (the induced infinity norm).
double norm_inf(const CMat& a);

// Largest absolute entry.
double max_abs(const CMat& a);

// Inverse. Preconditions: the condition estimate
// norm_inf(a) * norm_inf(inv(a)) must stay below kConditionBound, and the
// residual a * inv(a) - I must stay below kResidualTol * condition per entry
// (for a sane elimination the residual is ~1e-16 * condition, so the check
// only fires on genuine breakdown, never on healthy inputs). Violations throw
// SingularMatrixError carrying the condition estimate.
CMat mat_inv(const CMat& a);

inline constexpr double kConditionBound = 1e12;
inline constexpr double kResidualTol = 1e-12;

// Largest real part accepted by diag_exp; beyond this exp() would leave the
// comfortably-representable range of double.
inline constexpr double kExpCap = 700.0;

// Diagonal matrix of exponentials exp(v[i]). Throws OverflowError if any
// Re(v[i]) exceeds kExpCap; large *negative* real parts are welcome and
// underflow gracefully to zero, which is exactly the opaque-layer limit.
CMat diag_exp(std::span<const cplx> values);

}  // namespace caslayer
