#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <vector>

#include "ncmart/error.hpp"

// Real d x d matrices with the normalized trace tr/d.

namespace ncmart {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Descending singular values; the step function t -> mu_t(a), constant s_j on [(j-1)/d, j/d).
struct SingularProfile {
  Vector values;
  int dim() const { return static_cast<int>(values.size()); }
};

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
struct Eigensystem {
  Vector values;
  Matrix vectors;
};

enum class SupportSide { left, right };

struct PsdComparison {
  bool holds;
  double margin;
};

double normalized_trace(const Matrix& a);
double op_norm(const Matrix& a);
bool is_self_adjoint(const Matrix& a, double tol = 1e-10);
Matrix identity(int d);

/// Throws NotSelfAdjoint or EigenFailure. The input is symmetrized before solving.
Eigensystem eigh(const Matrix& a);

/// chi_[lo,hi](a), endpoints included up to 1e-12*(1+|a|).
Matrix spectral_projection(const Matrix& a, double lo, double hi);

SingularProfile singular_values(const Matrix& a);
double distribution(const SingularProfile& s, double t);
double distribution(const Matrix& a, double t);
double lp_norm(const SingularProfile& s, double p);
double lp_norm(const Matrix& a, double p);
double weak_l1_norm(const SingularProfile& s);
double weak_l1_norm(const Matrix& a);

Matrix apply_function(const Matrix& a, const std::function<double(double)>& f);
/// |a| = (a* a)^{1/2}
Matrix abs(const Matrix& a);
/// Square root of a positive semidefinite matrix; tiny negative eigenvalues are clipped.
Matrix psd_sqrt(const Matrix& a);

Matrix meet(const Matrix& p, const Matrix& q);
Matrix meet(const std::vector<Matrix>& ps);
/// 1 - meet of the complements.
Matrix join(const std::vector<Matrix>& ps);

Matrix support(const Matrix& a, SupportSide side);

PsdComparison psd_leq(const Matrix& a, const Matrix& b);
double min_eigenvalue(const Matrix& a);

/// Orthonormal basis of the range of a projection (eigenvalues above 1/2).
Matrix range_basis(const Matrix& p);

}  // namespace ncmart
