#include "tracerec/polynomial.hpp"

#include <algorithm>
#include <string>

#include "tracerec/kernels.hpp"

namespace tracerec {

SparsePolynomial::SparsePolynomial(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.degree < b.degree; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().degree == t.degree) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coeff == cplx{0.0, 0.0}; });
}

cplx SparsePolynomial::operator()(cplx z) const {
  cplx sum{0.0, 0.0};
  cplx power{1.0, 0.0};
  std::uint64_t at = 0;
  for (const auto& t : terms_) {
    power *= ipow(z, t.degree - at);
    at = t.degree;
    sum += t.coeff * power;
  }
  return sum;
}

cplx SparsePolynomial::on_circle(double theta) const {
  cplx sum{0.0, 0.0};
  for (const auto& t : terms_) sum += t.coeff * kernels::detail::unit_phasor(t.degree, theta);
  return sum;
}

void SparsePolynomial::on_arc(double theta0, double step, std::span<cplx> out) const {
  std::vector<std::uint64_t> deg(terms_.size());
  std::vector<cplx> coef(terms_.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    deg[k] = terms_[k].degree;
    coef[k] = terms_[k].coeff;
  }
  kernels::sparse_arc_sums(deg, coef, theta0, step, out);
}

double SparsePolynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

cplx DensePolynomial::operator()(cplx z) const noexcept {
  cplx acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ArcPolynomial::ArcPolynomial(std::uint64_t n, std::uint64_t d, int sigma, std::vector<Term> tail)
    : n_(n), d_(d), sigma_(sigma), tail_(SparsePolynomial(std::move(tail)).terms()) {
  const std::uint64_t cut = tail_start();
  if (sigma_ != 0 && sigma_ != 1) throw ArcPolynomialError("sigma must be 0 or 1");
  if (sigma_ == 1 && (d_ < 1 || d_ >= cut)) {
    throw ArcPolynomialError("gap degree d = " + std::to_string(d_) + " must satisfy 1 <= d < " +
                             std::to_string(cut));
  }
  for (const auto& t : tail_) {
    if (t.degree < cut || t.degree > n_) {
      throw ArcPolynomialError("tail degree " + std::to_string(t.degree) + " outside [" + std::to_string(cut) +
                               ", " + std::to_string(n_) + "]");
    }
    if (std::abs(t.coeff) > 1.0 + 1e-12) throw ArcPolynomialError("tail coefficient exceeds 1 in modulus");
  }
}

std::uint64_t ArcPolynomial::tail_start() const noexcept { return std::max<std::uint64_t>(1, floor_root(n_, 5)); }

ArcPolynomial ArcPolynomial::from_difference(const SparsePolynomial& diff, std::uint64_t n) {
  if (diff.is_zero()) throw ArcPolynomialError("difference polynomial is identically zero");
  const auto& terms = diff.terms();
  const std::uint64_t shift = terms.front().degree;
  const cplx lead = terms.front().coeff;
  if (std::abs(std::abs(lead) - 1.0) > 1e-12 || std::abs(lead.imag()) > 1e-12) {
    throw ArcPolynomialError("lowest coefficient of a difference polynomial must be +-1");
  }
  const double sign = lead.real() > 0 ? 1.0 : -1.0;
  const std::uint64_t cut = std::max<std::uint64_t>(1, floor_root(n, 5));
  std::uint64_t d = 0;
  int sigma = 0;
  std::vector<Term> tail;
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const std::uint64_t deg = terms[k].degree - shift;
    const cplx c = sign * terms[k].coeff;
    if (deg < cut) {
      if (sigma == 1 || std::abs(c + 1.0) > 1e-12) {
        throw ArcPolynomialError("low-degree part of the normalized polynomial is not 1 - z^d");
      }
      sigma = 1;
      d = deg;
    } else {
      tail.push_back({deg, c});
    }
  }
  return {n, d, sigma, std::move(tail)};
}

SparsePolynomial ArcPolynomial::to_sparse() const {
  std::vector<Term> t;
  t.push_back({0, {1.0, 0.0}});
  if (sigma_ == 1) t.push_back({d_, {-1.0, 0.0}});
  t.insert(t.end(), tail_.begin(), tail_.end());
  return SparsePolynomial(std::move(t));
}

}  // namespace tracerec
