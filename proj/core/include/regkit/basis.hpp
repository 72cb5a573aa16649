#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace regkit {

enum class BasisFamily { Cosine, ShiftedLegendre };

std::string to_string(BasisFamily f);
BasisFamily basis_family_from_string(const std::string& s);

/// First `size` functions of an orthonormal basis of L²([0,1]).
/// Cosine: 1, √2 cos(πx), √2 cos(2πx), ...; Legendre: √(2j+1) P_j(2x-1).
Eigen::VectorXd basis_values(BasisFamily family, std::size_t size, double x);

/// Instrument basis u^J and endogenous basis v^L of one family, L ≤ J.
struct SieveBasis {
  BasisFamily family = BasisFamily::Cosine;
  std::size_t J = 2;
  std::size_t L = 1;

  /// J = 2L by default.
  static SieveBasis with_L(BasisFamily family, std::size_t L, std::size_t J = 0);

  Eigen::VectorXd u(double x) const { return basis_values(family, J, x); }
  Eigen::VectorXd v(double w) const { return basis_values(family, L, w); }
  void validate() const;
};

/// Lebesgue Gram matrix of the first `size` functions by quadrature.
Eigen::MatrixXd basis_gram(BasisFamily family, std::size_t size);

/// (∫π v_l)_{l ≤ L} by quadrature.
Eigen::VectorXd basis_projection(BasisFamily family, std::size_t size, const std::function<double(double)>& f);

}  // namespace regkit
