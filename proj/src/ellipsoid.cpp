#include "secrecy/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

namespace secrecy {

Ellipsoid::Ellipsoid(const RealVector& center, const RealVector& half_widths) : center_(center) {
  if (center.size() == 0 || center.size() != half_widths.size()) {
    throw std::invalid_argument("Ellipsoid: dimension mismatch");
  }
  const double n = static_cast<double>(center.size());
  if (center.size() == 1) {
    lo_ = center(0) - half_widths(0);
    hi_ = center(0) + half_widths(0);
  } else {
    // sqrt(n) * half-width per axis covers the corners of the box.
    shape_ = (n * half_widths.array().square()).matrix().asDiagonal();
  }
}

double Ellipsoid::width_along(const RealVector& g) const {
  if (center_.size() == 1) return std::abs(g(0)) * 0.5 * (hi_ - lo_);
  return std::sqrt(std::max(0.0, g.dot(shape_ * g)));
}

bool Ellipsoid::cut(const RealVector& g, double depth) {
  if (center_.size() == 1) {
    if (g(0) == 0.0) return depth <= 0.0;
    const double boundary = center_(0) - depth / g(0);
    if (g(0) > 0.0) {
      hi_ = std::min(hi_, boundary);
    } else {
      lo_ = std::max(lo_, boundary);
    }
    center_(0) = 0.5 * (lo_ + hi_);
    return hi_ > lo_;
  }

  const double n = static_cast<double>(center_.size());
  const RealVector pg = shape_ * g;
  const double gpg = g.dot(pg);
  if (!(gpg > 0.0) || !std::isfinite(gpg)) return false;
  const double root = std::sqrt(gpg);
  const double alpha = std::max(0.0, depth) / root;
  if (alpha >= 1.0) return false;
  const RealVector step = pg / root;
  center_ -= ((1.0 + n * alpha) / (n + 1.0)) * step;
  shape_ = (n * n * (1.0 - alpha * alpha) / (n * n - 1.0)) *
           (shape_ - (2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha))) * step * step.transpose());
  shape_ = 0.5 * (shape_ + shape_.transpose());
  return true;
}

}  // namespace secrecy
