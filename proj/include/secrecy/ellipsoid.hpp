#pragma once

#include "secrecy/hermitian.hpp"

namespace secrecy {

/// Localization set for the ellipsoid method. In one dimension the ellipsoid is
/// an interval and a cut halves it exactly.
class Ellipsoid {
 public:
  /// Axis-aligned ellipsoid enclosing the box center +/- half_widths.
  Ellipsoid(const RealVector& center, const RealVector& half_widths);

  const RealVector& center() const { return center_; }
  int dimension() const { return static_cast<int>(center_.size()); }

  /// sqrt(g^T P g): half-width of the ellipsoid along g.
  double width_along(const RealVector& g) const;

  /// Keeps {y : g.(y - center) + depth <= 0}, depth >= 0 (deep cut).
  /// Returns false when the remaining set is empty or degenerate.
  bool cut(const RealVector& g, double depth);

 private:
  RealVector center_;
  Eigen::MatrixXd shape_;  // P in {y : (y-c)^T P^{-1} (y-c) <= 1}
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace secrecy
