#pragma once

#include <random>

#include "mbq/calculus.hpp"
#include "mbq/fixtures.hpp"

namespace mbq::testing {

inline Scalar small_scalar(std::mt19937& rng, bool complex = false) {
  std::uniform_int_distribution<long> num(-3, 3), den(1, 3);
  return Scalar(mpq_class(num(rng), den(rng)), complex ? mpq_class(num(rng), den(rng)) : mpq_class(0));
}

/// Random invertible matrix with small rational entries.
inline LinMap random_invertible(std::mt19937& rng, size_t n, bool complex = false) {
  for (;;) {
    LinMap t(n, n);
    for (size_t j = 0; j < n; ++j) {
      Vec c(n);
      for (auto& x : c) x = small_scalar(rng, complex);
      t.set_column(j, c);
    }
    try {
      (void)invert(t);
      return t;
    } catch (const NotInvertible&) {
    }
  }
}

/// The same group written in the basis t(e_j).
inline GroupData transport_group(const GroupData& d, const LinMap& t) {
  const LinMap ti = invert(t);
  GroupData r = d;
  r.alg.unit = t * d.alg.unit;
  r.alg.mult = t * d.alg.mult * kron(ti, ti);
  r.phi = kron(t, t) * d.phi * ti;
  r.eps = d.eps * ti;
  r.kappa = t * d.kappa * ti;
  r.sigma = kron(t, t) * d.sigma * kron(ti, ti);
  if (d.star) r.star = AntilinMap(t * d.star->linear_part() * ti.conj());
  return r;
}

/// Calculus over the transported group, with Gamma rewritten in the basis u(e_j).
inline FirstOrderCalculus transport_calculus(const FirstOrderCalculus& c, const LinMap& t, const LinMap& u) {
  const LinMap ti = invert(t), ui = invert(u);
  FirstOrderCalculus r;
  r.gdim = c.gdim;
  r.mgl = u * c.mgl * kron(ti, ui);
  r.mgr = u * c.mgr * kron(ui, ti);
  r.d = u * c.d * ti;
  return r;
}

/// The witness input, pushed through lhs - rhs, gives the recorded residual and it is nonzero.
inline bool reproduces(const Witness& w, const LinMap& lhs, const LinMap& rhs) {
  const Vec got = (lhs - rhs).apply(w.input);
  return got == w.residual && !is_zero_vec(got);
}

}  // namespace mbq::testing
