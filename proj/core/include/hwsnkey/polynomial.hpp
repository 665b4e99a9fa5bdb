#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hwsnkey/field.hpp"
#include "hwsnkey/rng.hpp"
#include "hwsnkey/types.hpp"

namespace hwsnkey {

// Symmetric bivariate polynomial f(x, y) = sum a_ij x^i y^j over GF(q),
// 0 <= i, j <= t, with a_ij = a_ji.
class BivariatePolynomial {
 public:
  // `coeffs` is the row-major (t+1)x(t+1) matrix a_ij. Throws ConfigError if
  // the matrix has the wrong size, is not symmetric, or holds unreduced values.
  BivariatePolynomial(FieldParams field, std::size_t degree,
                      std::vector<FieldElement> coeffs);

  static BivariatePolynomial zero(FieldParams field, std::size_t degree);

  std::size_t degree() const { return degree_; }
  const FieldParams& field() const { return field_; }
  FieldElement coeff(std::size_t i, std::size_t j) const {
    return coeffs_[i * (degree_ + 1) + j];
  }
  std::span<const FieldElement> coefficients() const { return coeffs_; }

  FieldElement eval(FieldElement x, FieldElement y) const;

  bool operator==(const BivariatePolynomial&) const = default;

 private:
  FieldParams field_;
  std::size_t degree_;
  std::vector<FieldElement> coeffs_;
};

// The univariate share f(owner, y), stored as its coefficients in y.
struct PolynomialShare {
  NodeId owner;
  FieldParams field;
  std::vector<FieldElement> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  // Horner evaluation.
  FieldElement eval(FieldElement y) const;
};

// Node ids map to field elements as id mod q; the image must be nonzero.
FieldElement node_to_field(const FieldParams& field, NodeId id);

// Draws the upper triangle uniformly from GF(q) in row-major order and
// mirrors it. Requires t >= 1.
BivariatePolynomial gen_symmetric_poly(const FieldParams& field, std::size_t t, Rng& rng);

PolynomialShare derive_share(const BivariatePolynomial& poly, NodeId owner);

// Pairwise key material f(owner, peer).
FieldElement eval_share(const PolynomialShare& share, NodeId peer);

// Recovers the degree-t symmetric polynomial behind a set of shares.
// Throws UnderdeterminedError with fewer than t+1 shares, ConfigError on
// duplicate owners or mismatched degree/field, and InconsistentSharesError
// when no symmetric degree-t polynomial explains every share.
BivariatePolynomial lagrange_reconstruct(std::span<const PolynomialShare> shares,
                                         std::size_t t);

}  // namespace hwsnkey
