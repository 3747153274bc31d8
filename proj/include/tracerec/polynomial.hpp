#pragma once
// Sparse and dense complex polynomials, and the normalized arc polynomials
// 1 - sigma z^d + tail obtained from difference substring polynomials.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tracerec/numeric.hpp"

namespace tracerec {

struct Term {
  std::uint64_t degree = 0;
  cplx coeff;
};

/// Terms sorted by degree with no zero coefficients and no repeated degrees.
class SparsePolynomial {
public:
  SparsePolynomial() = default;
  /// Sorts, merges equal degrees and drops zero coefficients.
  explicit SparsePolynomial(std::vector<Term> terms);

  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::uint64_t degree() const noexcept { return terms_.empty() ? 0 : terms_.back().degree; }
  [[nodiscard]] std::uint64_t low_degree() const noexcept { return terms_.empty() ? 0 : terms_.front().degree; }

  /// Value at an arbitrary point; powers via repeated squaring between terms.
  [[nodiscard]] cplx operator()(cplx z) const;
  /// Value at e^{i theta}.
  [[nodiscard]] cplx on_circle(double theta) const;
  /// Values at e^{i (theta0 + g step)} for g < out.size(), via the arc kernel.
  void on_arc(double theta0, double step, std::span<cplx> out) const;

  [[nodiscard]] double max_abs_coeff() const noexcept;

private:
  std::vector<Term> terms_;
};

/// Dense coefficients c_0..c_deg.
class DensePolynomial {
public:
  DensePolynomial() = default;
  explicit DensePolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

  [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  /// Horner evaluation.
  [[nodiscard]] cplx operator()(cplx z) const noexcept;

private:
  std::vector<cplx> coeffs_;
};

class ArcPolynomialError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// p(z) = 1 - sigma z^d + sum_j c_j z^j with 1 <= d < floor(n^(1/5)), tail
/// degrees in [floor(n^(1/5)), n] and |c_j| <= 1.
class ArcPolynomial {
public:
  ArcPolynomial(std::uint64_t n, std::uint64_t d, int sigma, std::vector<Term> tail);

  /// Shifts out the lowest power of z and fixes the sign so the constant
  /// term is 1, then validates the shape. Throws ArcPolynomialError when the
  /// normalized polynomial is not of the required form.
  static ArcPolynomial from_difference(const SparsePolynomial& diff, std::uint64_t n);

  [[nodiscard]] std::uint64_t n() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t d() const noexcept { return d_; }
  [[nodiscard]] int sigma() const noexcept { return sigma_; }
  [[nodiscard]] const std::vector<Term>& tail() const noexcept { return tail_; }
  /// Degree where the tail may start.
  [[nodiscard]] std::uint64_t tail_start() const noexcept;

  [[nodiscard]] SparsePolynomial to_sparse() const;

private:
  std::uint64_t n_;
  std::uint64_t d_;
  int sigma_;
  std::vector<Term> tail_;
};

}  // namespace tracerec
