#pragma once

#include "lsfem/common.hpp"

#include <cassert>
#include <vector>

namespace lsfem {

/// Dense bivariate polynomial, coefficients over monomials x^a y^b with
/// a + b <= degree. Term index: k(k+1)/2 + b where k = a + b.
class Poly2 {
 public:
  Poly2() : degree_(0), coeffs_(1, 0.0) {}
  explicit Poly2(int degree) : degree_(degree), coeffs_(dim(degree), 0.0) {}

  static int dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int degree() const { return degree_; }
  int terms() const { return static_cast<int>(coeffs_.size()); }

  double& at(int a, int b) {
    assert(a >= 0 && b >= 0 && a + b <= degree_);
    return coeffs_[static_cast<std::size_t>(index(a, b))];
  }
  double at(int a, int b) const {
    if (a < 0 || b < 0 || a + b > degree_) return 0.0;
    return coeffs_[static_cast<std::size_t>(index(a, b))];
  }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double eval(double x, double y) const {
    // powers up to degree_ are tiny (degree <= 4 in practice)
    double xp[16], yp[16];
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= degree_; ++i) {
      xp[i] = xp[i - 1] * x;
      yp[i] = yp[i - 1] * y;
    }
    double s = 0.0;
    int idx = 0;
    for (int k = 0; k <= degree_; ++k)
      for (int b = 0; b <= k; ++b, ++idx) s += coeffs_[static_cast<std::size_t>(idx)] * xp[k - b] * yp[b];
    return s;
  }
  double eval(const Vec2& p) const { return eval(p.x(), p.y()); }

  Poly2 dx() const {
    Poly2 d(degree_ > 0 ? degree_ - 1 : 0);
    for (int k = 1; k <= degree_; ++k)
      for (int b = 0; b <= k; ++b) {
        const int a = k - b;
        if (a >= 1) d.at(a - 1, b) += a * at(a, b);
      }
    return d;
  }
  Poly2 dy() const {
    Poly2 d(degree_ > 0 ? degree_ - 1 : 0);
    for (int k = 1; k <= degree_; ++k)
      for (int b = 0; b <= k; ++b) {
        const int a = k - b;
        if (b >= 1) d.at(a, b - 1) += b * at(a, b);
      }
    return d;
  }

  Poly2& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Poly2& operator+=(const Poly2& other) {
    assert(other.degree_ <= degree_);
    for (int k = 0; k <= other.degree_; ++k)
      for (int b = 0; b <= k; ++b) at(k - b, b) += other.at(k - b, b);
    return *this;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  static int index(int a, int b) {
    const int k = a + b;
    return k * (k + 1) / 2 + b;
  }

  int degree_;
  std::vector<double> coeffs_;
};

/// Local coordinate frame of an element: xi = (x - origin) / scale.
struct LocalFrame {
  Vec2 origin = Vec2::Zero();
  double scale = 1.0;

  Vec2 to_local(const Vec2& x) const { return (x - origin) / scale; }
};

/// Vector-valued polynomial (one Poly2 per component).
struct VectorPoly2 {
  Poly2 x, y;

  Vec2 eval(const Vec2& p) const { return {x.eval(p), y.eval(p)}; }
  Poly2 divergence() const {
    Poly2 d = x.dx();
    d += y.dy();
    return d;
  }
  Poly2 curl() const {
    Poly2 c = y.dx();
    Poly2 mx = x.dy();
    mx *= -1.0;
    c += mx;
    return c;
  }
};

}  // namespace lsfem
