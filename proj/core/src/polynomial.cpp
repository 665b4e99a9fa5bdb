#include "hwsnkey/polynomial.hpp"

#include <algorithm>
#include <string>

#include "hwsnkey/error.hpp"

namespace hwsnkey {

BivariatePolynomial::BivariatePolynomial(FieldParams field, std::size_t degree,
                                         std::vector<FieldElement> coeffs)
    : field_(field), degree_(degree), coeffs_(std::move(coeffs)) {
  const std::size_t n = degree_ + 1;
  if (coeffs_.size() != n * n) {
    throw ConfigError("bivariate polynomial of degree " + std::to_string(degree_) +
                      " needs " + std::to_string(n * n) + " coefficients");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (coeffs_[i * n + j].value >= field_.modulus()) {
        throw ConfigError("coefficient out of field range");
      }
      if (coeffs_[i * n + j] != coeffs_[j * n + i]) {
        throw ConfigError("coefficient matrix is not symmetric");
      }
    }
  }
}

BivariatePolynomial BivariatePolynomial::zero(FieldParams field, std::size_t degree) {
  return BivariatePolynomial(field, degree,
                             std::vector<FieldElement>((degree + 1) * (degree + 1)));
}

FieldElement BivariatePolynomial::eval(FieldElement x, FieldElement y) const {
  const std::size_t n = degree_ + 1;
  // Outer Horner in x over inner Horner rows in y.
  FieldElement acc = field_.zero();
  for (std::size_t i = n; i-- > 0;) {
    FieldElement row = field_.zero();
    for (std::size_t j = n; j-- > 0;) {
      row = field_.add(field_.mul(row, y), coeffs_[i * n + j]);
    }
    acc = field_.add(field_.mul(acc, x), row);
  }
  return acc;
}

FieldElement PolynomialShare::eval(FieldElement y) const {
  FieldElement acc = field.zero();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = field.add(field.mul(acc, y), *it);
  }
  return acc;
}

FieldElement node_to_field(const FieldParams& field, NodeId id) {
  const FieldElement e = field.element(id.value);
  if (e.value == 0) {
    throw ConfigError("node id " + std::to_string(id.value) + " maps to zero in GF(" +
                      std::to_string(field.modulus()) + ")");
  }
  return e;
}

BivariatePolynomial gen_symmetric_poly(const FieldParams& field, std::size_t t, Rng& rng) {
  if (t < 1) throw ConfigError("polynomial degree t must be >= 1");
  const std::size_t n = t + 1;
  std::vector<FieldElement> coeffs(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const FieldElement a{rng.uniform_below(field.modulus())};
      coeffs[i * n + j] = a;
      coeffs[j * n + i] = a;
    }
  }
  return BivariatePolynomial(field, t, std::move(coeffs));
}

PolynomialShare derive_share(const BivariatePolynomial& poly, NodeId owner) {
  const auto& field = poly.field();
  const FieldElement x = node_to_field(field, owner);
  const std::size_t n = poly.degree() + 1;

  // c_j = sum_i a_ij x^i
  std::vector<FieldElement> coeffs(n, field.zero());
  FieldElement xi = field.one();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      coeffs[j] = field.add(coeffs[j], field.mul(poly.coeff(i, j), xi));
    }
    xi = field.mul(xi, x);
  }
  return PolynomialShare{owner, field, std::move(coeffs)};
}

FieldElement eval_share(const PolynomialShare& share, NodeId peer) {
  return share.eval(share.field.element(peer.value));
}

BivariatePolynomial lagrange_reconstruct(std::span<const PolynomialShare> shares,
                                         std::size_t t) {
  const std::size_t n = t + 1;
  if (shares.empty()) throw UnderdeterminedError(0, n);
  const FieldParams field = shares.front().field;

  std::vector<FieldElement> xs;
  xs.reserve(shares.size());
  for (const auto& s : shares) {
    if (s.field != field) throw ConfigError("shares come from different fields");
    if (s.coeffs.size() != n) {
      throw ConfigError("share of owner " + std::to_string(s.owner.value) +
                        " has degree " + std::to_string(s.degree()) + ", expected " +
                        std::to_string(t));
    }
    xs.push_back(node_to_field(field, s.owner));
  }
  {
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("duplicate share owners");
    }
  }
  if (shares.size() < n) throw UnderdeterminedError(shares.size(), n);

  // master(x) = prod_k (x - x_k), coefficients low to high, degree n.
  std::vector<FieldElement> master(n + 1, field.zero());
  master[0] = field.one();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t d = k + 1; d > 0; --d) {
      master[d] = field.sub(master[d - 1], field.mul(master[d], xs[k]));
    }
    master[0] = field.neg(field.mul(master[0], xs[k]));
  }

  // basis[k] = master(x) / (x - x_k) scaled so that basis[k](x_k) = 1.
  std::vector<std::vector<FieldElement>> basis(n, std::vector<FieldElement>(n));
  for (std::size_t k = 0; k < n; ++k) {
    auto& b = basis[k];
    FieldElement carry = field.zero();
    for (std::size_t d = n; d-- > 0;) {
      carry = field.add(master[d + 1], field.mul(carry, xs[k]));
      b[d] = carry;
    }
    FieldElement at_xk = field.zero();
    for (std::size_t d = n; d-- > 0;) at_xk = field.add(field.mul(at_xk, xs[k]), b[d]);
    const FieldElement w = field.inv(at_xk);
    for (auto& c : b) c = field.mul(c, w);
  }

  // Column j of the coefficient matrix interpolates the j-th share coefficients.
  std::vector<FieldElement> coeffs(n * n, field.zero());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& cs = shares[k].coeffs;
    for (std::size_t i = 0; i < n; ++i) {
      const FieldElement bi = basis[k][i];
      if (bi.value == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        coeffs[i * n + j] = field.add(coeffs[i * n + j], field.mul(bi, cs[j]));
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coeffs[i * n + j] != coeffs[j * n + i]) {
        throw InconsistentSharesError("interpolated coefficients are not symmetric");
      }
    }
  }
  BivariatePolynomial poly(field, t, std::move(coeffs));
  for (std::size_t k = n; k < shares.size(); ++k) {
    if (derive_share(poly, shares[k].owner).coeffs != shares[k].coeffs) {
      throw InconsistentSharesError("share of owner " +
                                    std::to_string(shares[k].owner.value) +
                                    " disagrees with the interpolated polynomial");
    }
  }
  return poly;
}

}  // namespace hwsnkey
