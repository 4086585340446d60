#pragma once

#include "mbq/report.hpp"

namespace mbq {

/// Unital associative algebra given by structure constants.
struct FiniteDimAlgebra {
  size_t dim = 0;
  LinMap unit;  ///< dim x 1
  LinMap mult;  ///< dim x dim^2

  Vec one() const { return unit.column(0); }
};

inline void check_shape(const LinMap& f, size_t cod, size_t dom, const std::string& what) {
  if (f.cod() != cod || f.dom() != dom)
    throw DimensionMismatch(what + " has shape " + std::to_string(f.cod()) + "x" + std::to_string(f.dom()) +
                            ", expected " + std::to_string(cod) + "x" + std::to_string(dom));
}

inline Vec multiply(const FiniteDimAlgebra& a, const Vec& x, const Vec& y) {
  if (x.size() != a.dim || y.size() != a.dim) throw DimensionMismatch("multiply: vector length differs from dim");
  return a.mult.apply(kron_vec(x, y));
}

inline Report check_algebra(const FiniteDimAlgebra& a, const std::string& prefix = "") {
  const size_t n = a.dim;
  check_shape(a.unit, n, 1, "unit");
  check_shape(a.mult, n, n * n, "mult");
  Report r;
  const LinMap i = id(n);
  r.equal(prefix + "ASSOC", prefix + "ASSOC", a.mult * kron(a.mult, i), a.mult * kron(i, a.mult));
  r.equal(prefix + "UNIT_L", prefix + "UNIT_L", a.mult * kron(a.unit, i), i);
  r.equal(prefix + "UNIT_R", prefix + "UNIT_R", a.mult * kron(i, a.unit), i);
  return r;
}

}  // namespace mbq
