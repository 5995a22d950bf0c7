#pragma once

#include <functional>
#include <string>

#include "ncmart/algebra.hpp"

namespace ncmart {

enum class OrliczKind { power, power_log, custom };

const char* orlicz_kind_name(OrliczKind kind);

/// Convex increasing Phi with Phi(0) = 0 and declared q-concavity index.
class OrliczFunction {
 public:
  double operator()(double t) const { return phi_(t); }
  /// Right derivative phi(t).
  double derivative(double t) const { return dphi_(t); }
  double q() const { return q_; }
  OrliczKind kind() const { return kind_; }
  /// Measured doubling constant sup Phi(2t)/Phi(t) on the validation grid.
  double delta2() const { return delta2_; }
  std::string label() const;

  friend OrliczFunction make_orlicz(OrliczKind, double);
  friend OrliczFunction make_custom_orlicz(std::function<double(double)>,
                                           std::function<double(double)>, double);

 private:
  std::function<double(double)> phi_, dphi_;
  double q_ = 1.0;
  OrliczKind kind_ = OrliczKind::power;
  double delta2_ = 0.0;
  void validate();
};

/// power: Phi(t) = t^q. power_log: Phi(t) = t^q / (1 + log(1 + t)).
/// Throws NotConvex / NotQConcave when the grid validation fails.
OrliczFunction make_orlicz(OrliczKind kind, double q);
OrliczFunction make_custom_orlicz(std::function<double(double)> phi,
                                  std::function<double(double)> dphi, double q);

/// tau(Phi(|a|)) = (1/d) sum_j Phi(s_j).
double phi_moment(const OrliczFunction& phi, const Matrix& a);
double phi_moment(const OrliczFunction& phi, const SingularProfile& s);

/// sup_{u >= 0} (u v - Phi(u)).
double orlicz_conjugate(const OrliczFunction& phi, double v);

/// Largest t in (0, 1] with Phi*(t u) <= Phi*(u) / (2q) on the grid; bisection.
double conjugate_shrink_factor(const OrliczFunction& phi);

}  // namespace ncmart
