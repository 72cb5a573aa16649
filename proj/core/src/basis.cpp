#include "regkit/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "regkit/errors.hpp"
#include "regkit/quadrature.hpp"

namespace regkit {

std::string to_string(BasisFamily f) { return f == BasisFamily::Cosine ? "cosine" : "legendre"; }

BasisFamily basis_family_from_string(const std::string& s) {
  if (s == "cosine") return BasisFamily::Cosine;
  if (s == "legendre" || s == "shifted-legendre") return BasisFamily::ShiftedLegendre;
  throw ConfigError("unknown basis family '" + s + "'");
}

Eigen::VectorXd basis_values(BasisFamily family, std::size_t size, double x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size));
  if (size == 0) return out;
  if (family == BasisFamily::Cosine) {
    out[0] = 1.0;
    for (std::size_t j = 1; j < size; ++j)
      out[static_cast<Eigen::Index>(j)] = std::numbers::sqrt2 * std::cos(static_cast<double>(j) * std::numbers::pi * x);
    return out;
  }
  const double t = 2.0 * x - 1.0;
  double p_prev = 1.0, p = t;
  out[0] = 1.0;
  if (size > 1) out[1] = std::sqrt(3.0) * t;
  for (std::size_t j = 2; j < size; ++j) {
    const double jd = static_cast<double>(j);
    const double p_next = ((2.0 * jd - 1.0) * t * p - (jd - 1.0) * p_prev) / jd;
    p_prev = p;
    p = p_next;
    out[static_cast<Eigen::Index>(j)] = std::sqrt(2.0 * jd + 1.0) * p;
  }
  return out;
}

SieveBasis SieveBasis::with_L(BasisFamily family, std::size_t L, std::size_t J) {
  SieveBasis b{family, J == 0 ? 2 * L : J, L};
  b.validate();
  return b;
}

void SieveBasis::validate() const {
  if (L < 1 || J < L) throw ConfigError("SieveBasis: need 1 <= L <= J");
}

Eigen::MatrixXd basis_gram(BasisFamily family, std::size_t size) {
  const auto s = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd g(s, s);
  for (Eigen::Index a = 0; a < s; ++a)
    for (Eigen::Index b = a; b < s; ++b) {
      g(a, b) = integrate([&](double x) {
        const auto v = basis_values(family, size, x);
        return v[a] * v[b];
      }, 0.0, 1.0);
      g(b, a) = g(a, b);
    }
  return g;
}

Eigen::VectorXd basis_projection(BasisFamily family, std::size_t size, const std::function<double(double)>& f) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size));
  for (std::size_t l = 0; l < size; ++l)
    out[static_cast<Eigen::Index>(l)] =
        integrate([&](double w) { return f(w) * basis_values(family, size, w)[static_cast<Eigen::Index>(l)]; }, 0.0, 1.0);
  return out;
}

}  // namespace regkit
