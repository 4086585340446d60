#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "mbq/braided_group.hpp"

namespace mbq {

/// Bimodule Gamma over A with differential d.
struct FirstOrderCalculus {
  size_t gdim = 0;
  LinMap mgl;  ///< gdim x (n gdim)
  LinMap mgr;  ///< gdim x (gdim n)
  LinMap d;    ///< gdim x n

  void validate_shapes(size_t n) const {
    check_shape(mgl, gdim, n * gdim, "left multiplication");
    check_shape(mgr, gdim, gdim * n, "right multiplication");
    check_shape(d, gdim, n, "differential");
  }
};

/// The calculus with Gamma = 0.
inline FirstOrderCalculus zero_calculus(size_t n) {
  return FirstOrderCalculus{0, LinMap(0, 0), LinMap(0, 0), LinMap(0, n)};
}

/// iota_l = mgl (id (x) d): A (x) A -> Gamma, a (x) b -> a db.
inline LinMap iota_l(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  return c.mgl * kron(id(g.n()), c.d);
}

/// iota_r = mgr (d (x) id): A (x) A -> Gamma, a (x) b -> da b.
inline LinMap iota_r(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  return c.mgr * kron(c.d, id(g.n()));
}

/// Surjectivity entry: on failure the witness is a basis vector outside the image.
inline void report_surjective(Report& r, const std::string& id_, const std::string& family, const LinMap& f) {
  Subspace im = image(f);
  if (im.dim() == f.cod()) {
    r.truth(id_, family, true, f.cod() > 0);
    return;
  }
  for (size_t j = 0; j < f.cod(); ++j) {
    Vec e = basis_vector(f.cod(), j);
    if (!im.contains(e)) {
      r.fail(id_, family, Witness{e, im.residual(e)},
             "rank " + std::to_string(im.dim()) + " < " + std::to_string(f.cod()));
      return;
    }
  }
}

inline Report check_calculus(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  const size_t n = g.n();
  c.validate_shapes(n);
  const LinMap a = id(n), gi = id(c.gdim);
  Report r;
  r.equal("LEIBNIZ", "EQ_21", c.d * g.m(), iota_l(g, c) + iota_r(g, c));
  r.equal("D_UNIT", "D_UNIT", c.d * g.u(), LinMap::zero(c.gdim, 1));
  r.equal("BIMOD_LASSOC", "BIMODULE", c.mgl * kron(g.m(), gi), c.mgl * kron(a, c.mgl));
  r.equal("BIMOD_RASSOC", "BIMODULE", c.mgr * kron(gi, g.m()), c.mgr * kron(c.mgr, a));
  r.equal("BIMOD_COMMUTE", "BIMODULE", c.mgr * kron(c.mgl, a), c.mgl * kron(a, c.mgr));
  r.equal("BIMOD_LUNIT", "BIMODULE", c.mgl * kron(g.u(), gi), gi);
  r.equal("BIMOD_RUNIT", "BIMODULE", c.mgr * kron(gi, g.u()), gi);
  report_surjective(r, "IOTA_L_SURJ", "IOTA_SURJ", iota_l(g, c));
  report_surjective(r, "IOTA_R_SURJ", "IOTA_SURJ", iota_r(g, c));
  return r;
}

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

struct NotCovariant : WitnessedError {
  using WitnessedError::WitnessedError;
};
struct NotBijective : WitnessedError {
  using WitnessedError::WitnessedError;
};

/// Flip-over operator: left maps Gamma (x) A -> A (x) Gamma, right maps A (x) Gamma -> Gamma (x) A.
struct FlipOver {
  Side side = Side::Left;
  LinMap map;
  LinMap inverse;
};

/// Solves the defining equation of the left (resp. right) flip over `braid`.
inline FlipOver solve_flip(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const LinMap& braid, Side side) {
  const LinMap a = id(g.n());
  FlipOver f;
  f.side = side;
  try {
    if (side == Side::Left) {
      const LinMap il = iota_l(g, c);
      f.map = factor_through(kron(il, a), kron(a, il) * kron(braid, a) * kron(a, braid));
    } else {
      const LinMap ir = iota_r(g, c);
      f.map = factor_through(kron(a, ir), kron(ir, a) * kron(a, braid) * kron(braid, a));
    }
  } catch (const NoFactor& e) {
    throw NotCovariant(std::string(to_string(side)) + " flip-over operator does not exist", e.witness);
  }
  try {
    f.inverse = invert(f.map);
  } catch (const NotInvertible& e) {
    throw NotBijective(std::string(to_string(side)) + " flip-over operator is not bijective", e.witness);
  }
  return f;
}

/// Flip operators for sigma_n and sigma_n^-1 over a window of shifts.
struct FlipSet {
  int window = 0;
  std::map<int, FlipOver> left, right, left_inv, right_inv;
  /// Entries recording which flips were solved (or why not).
  Report solve_report;

  bool complete() const { return solve_report.ok(); }
  bool has_left(int k) const { return left.count(k) > 0; }
  bool has_right(int k) const { return right.count(k) > 0; }
};

inline FlipSet solve_flips(const MultiBraidedGroup& g, const FirstOrderCalculus& c, int range = 2) {
  FlipSet fs;
  fs.window = 2 * range;
  if (!g.has_sigma_n(fs.window) || !g.has_sigma_n(-fs.window))
    throw Error("flip window exceeds the tabulated sigma_n range");
  auto attempt = [&](std::map<int, FlipOver>& dst, const std::string& fam, int k, const LinMap& braid, Side side) {
    const std::string id_ = key(fam, 'n', k);
    try {
      dst.emplace(k, solve_flip(g, c, braid, side));
      fs.solve_report.truth(id_, fam, true, c.gdim > 0);
    } catch (const WitnessedError& e) {
      fs.solve_report.fail(id_, fam, e.witness, e.what());
    }
  };
  for (int k = -fs.window; k <= fs.window; ++k) {
    attempt(fs.left, "FLIP_L", k, g.sigma_n(k), Side::Left);
    attempt(fs.right, "FLIP_R", k, g.sigma_n(k), Side::Right);
  }
  for (int k = -range; k <= range; ++k) {
    attempt(fs.left_inv, "FLIP_L_INVBRAID", k, g.sigma_n_inv(k), Side::Left);
    attempt(fs.right_inv, "FLIP_R_INVBRAID", k, g.sigma_n_inv(k), Side::Right);
  }
  return fs;
}

namespace detail {

/// Checks that ker(flip) is a sub-bimodule of Gamma (x) A (resp. A (x) Gamma).
inline void report_kernel_bimodule(Report& r, const std::string& id_, const std::string& family,
                                   const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipOver& f) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  Subspace k = kernel(f.map);
  LinMap inc = k.inclusion();
  Subspace left_act, right_act;
  if (f.side == Side::Left) {
    left_act = image(kron(c.mgl, a) * kron(a, inc));
    right_act = image(kron(gi, g.m()) * kron(inc, a));
  } else {
    left_act = image(kron(g.m(), gi) * kron(a, inc));
    right_act = image(kron(a, c.mgr) * kron(inc, a));
  }
  r.subset(id_, family, left_act + right_act, k);
}

}  // namespace detail

/// Consequences of sigma-covariance for one flip; `k` labels the shift of `braid`.
inline Report check_flip_identities(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipOver& f,
                                    const LinMap& braid, int k) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  const LinMap& s = braid;
  const LinMap& x = f.map;
  const LinMap il = iota_l(g, c), ir = iota_r(g, c);
  Report r;
  auto K = [&](const char* fam) { return key(fam, 'n', k); };
  if (f.side == Side::Left) {
    r.equal(K("EQ_216"), "EQ_216", x * kron(il, a), kron(a, il) * kron(s, a) * kron(a, s));
    r.equal(K("EQ_216_IOTA_R"), "EQ_216", x * kron(ir, a), kron(a, ir) * kron(s, a) * kron(a, s),
            "equivalent characterization through iota_r");
    r.equal(K("EQ_218_UNIT"), "EQ_218", x * kron(gi, g.u()), kron(g.u(), gi));
    r.equal(K("EQ_218_D"), "EQ_218", x * kron(c.d, a), kron(a, c.d) * s);
    r.equal(K("EQ_220"), "EQ_220", kron(a, x) * kron(x, a) * kron(gi, s), kron(s, gi) * kron(a, x) * kron(x, a));
    r.equal(K("EQ_221"), "EQ_221", kron(a, c.mgl) * kron(s, gi) * kron(a, x), x * kron(c.mgl, a));
    r.equal(K("EQ_222"), "EQ_222", kron(a, c.mgr) * kron(x, a) * kron(gi, s), x * kron(c.mgr, a));
    r.equal(K("EQ_223"), "EQ_223", kron(g.m(), gi) * kron(a, x) * kron(x, a), x * kron(gi, g.m()));
    report_surjective(r, K("FLIP_L_SURJ"), "FLIP_SURJ", x);
    detail::report_kernel_bimodule(r, K("FLIP_L_KER_BIMOD"), "FLIP_KER_BIMOD", g, c, f);
  } else {
    r.equal(K("EQ_217"), "EQ_217", x * kron(a, ir), kron(ir, a) * kron(a, s) * kron(s, a));
    r.equal(K("EQ_217_IOTA_L"), "EQ_217", x * kron(a, il), kron(il, a) * kron(a, s) * kron(s, a),
            "equivalent characterization through iota_l");
    r.equal(K("EQ_226_UNIT"), "EQ_226", x * kron(g.u(), gi), kron(gi, g.u()));
    r.equal(K("EQ_226_D"), "EQ_226", x * kron(a, c.d), kron(c.d, a) * s);
    r.equal(K("EQ_227"), "EQ_227", kron(gi, s) * kron(x, a) * kron(a, x), kron(x, a) * kron(a, x) * kron(s, gi));
    r.equal(K("EQ_228"), "EQ_228", kron(gi, g.m()) * kron(x, a) * kron(a, x), x * kron(g.m(), gi));
    r.equal(K("EQ_229"), "EQ_229", kron(c.mgr, a) * kron(gi, s) * kron(x, a), x * kron(a, c.mgr));
    r.equal(K("EQ_230"), "EQ_230", kron(c.mgl, a) * kron(a, x) * kron(s, gi), x * kron(a, c.mgl));
    report_surjective(r, K("FLIP_R_SURJ"), "FLIP_SURJ", x);
    detail::report_kernel_bimodule(r, K("FLIP_R_KER_BIMOD"), "FLIP_KER_BIMOD", g, c, f);
  }
  return r;
}

/// Eq. 232 for a bi-covariant calculus and the inverse relations between left and right flips.
inline Report check_bi_flip_identities(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipSet& fs,
                                       int range = 2) {
  const LinMap a = id(g.n());
  Report r;
  for (int k = -range; k <= range; ++k) {
    if (fs.has_left(k) && fs.has_right(k)) {
      const LinMap &l = fs.left.at(k).map, &rr = fs.right.at(k).map;
      const LinMap& s = g.sigma_n(k);
      r.equal(key("EQ_232", 'n', k), "EQ_232", kron(a, rr) * kron(s, id(c.gdim)) * kron(a, l),
              kron(l, a) * kron(id(c.gdim), s) * kron(rr, a));
    }
    if (fs.has_left(k) && fs.right_inv.count(k))
      r.equal(key("FLIP_INV_L", 'n', k), "FLIP_INV", fs.left.at(k).inverse, fs.right_inv.at(k).map,
              "inverse of the left flip equals the right flip of the inverse braid");
    if (fs.has_right(k) && fs.left_inv.count(k))
      r.equal(key("FLIP_INV_R", 'n', k), "FLIP_INV", fs.right.at(k).inverse, fs.left_inv.at(k).map,
              "inverse of the right flip equals the left flip of the inverse braid");
  }
  return r;
}

/// Left tau-flip obtained from the left sigma-flip, with its inverse formula.
inline LinMap flip_tau_from_sigma(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipOver& fs) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  if (fs.side == Side::Left)
    return kron(a, gi, g.eps()) * kron(a, fs.inverse) * kron(g.phi(), gi) * fs.map;
  return kron(g.eps(), gi, a) * kron(fs.inverse, a) * kron(gi, g.phi()) * fs.map;
}

inline Report check_flip_tau(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipSet& fs) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  Report r;
  if (fs.has_left(1)) {
    const FlipOver& ls = fs.left.at(1);
    LinMap lt = flip_tau_from_sigma(g, c, ls);
    if (fs.has_left(0)) r.equal("EQ_239", "EQ_239", lt, fs.left.at(0).map, "compared with the solved tau-flip");
    r.equal("EQ_240", "EQ_240", kron(g.eps(), gi, a) * kron(ls.map, a) * kron(gi, g.phi()) * ls.inverse,
            [&] {
              try {
                return invert(lt);
              } catch (const NotInvertible&) {
                return LinMap(lt.dom(), lt.cod());
              }
            }());
    r.equal("EQ_241", "EQ_241", kron(g.eps(), gi) * lt, kron(gi, g.eps()));
  }
  if (fs.has_right(1)) {
    const FlipOver& rs = fs.right.at(1);
    LinMap rt = flip_tau_from_sigma(g, c, rs);
    if (fs.has_right(0)) r.equal("EQ_243", "EQ_243", rt, fs.right.at(0).map, "compared with the solved tau-flip");
    r.equal("EQ_244", "EQ_244", kron(a, gi, g.eps()) * kron(a, rs.map) * kron(g.phi(), gi) * rs.inverse,
            [&] {
              try {
                return invert(rt);
              } catch (const NotInvertible&) {
                return LinMap(rt.dom(), rt.cod());
              }
            }());
    r.equal("EQ_245", "EQ_245", kron(gi, g.eps()) * rt, kron(g.eps(), gi));
  }
  return r;
}

/// Ternary composition law, mixed braid relations with flips, coproduct and antipode twisting.
inline Report check_multi_covariance(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipSet& fs,
                                     int range = 2) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  Report r;
  const auto& L = fs.left;
  const auto& R = fs.right;
  // Kronecker factors shared across the triple loop, keyed by shift.
  std::map<int, LinMap> a_l, l_a, a_r, r_a, gi_s, s_gi;
  for (int k = -range; k <= range; ++k) {
    gi_s[k] = kron(gi, g.sigma_n(k));
    s_gi[k] = kron(g.sigma_n(k), gi);
    if (L.count(k)) {
      a_l[k] = kron(a, L.at(k).map);
      l_a[k] = kron(L.at(k).map, a);
    }
    if (R.count(k)) {
      a_r[k] = kron(a, R.at(k).map);
      r_a[k] = kron(R.at(k).map, a);
    }
  }
  // ll[{p, q}] = (id (x) l_p)(l_q (x) id), rr[{q, t}] = (r_q (x) id)(id (x) r_t).
  std::map<std::pair<int, int>, LinMap> ll, rr;
  for (const auto& [p, x] : a_l)
    for (const auto& [q, y] : l_a) ll[{p, q}] = x * y;
  for (const auto& [q, x] : r_a)
    for (const auto& [t, y] : a_r) rr[{q, t}] = x * y;
  for (int p = -range; p <= range; ++p)
    for (int q = -range; q <= range; ++q)
      for (int t = -range; t <= range; ++t) {
        const int s = p - q + t;
        if (L.count(p) && L.count(q) && L.count(t)) {
          if (L.count(s))
            r.equal(key("EQ_234", 'a', p, 'b', q, 'c', t), "EQ_234", L.at(s).map,
                    L.at(p).map * L.at(q).inverse * L.at(t).map);
          r.equal(key("EQ_235", 'a', p, 'b', q, 'c', t), "EQ_235", ll.at({p, q}) * gi_s.at(t),
                  s_gi.at(t) * ll.at({q, p}));
        }
        if (R.count(p) && R.count(q) && R.count(t)) {
          if (R.count(s))
            r.equal(key("EQ_236", 'a', p, 'b', q, 'c', t), "EQ_236", R.at(s).map,
                    R.at(p).map * R.at(q).inverse * R.at(t).map);
          r.equal(key("EQ_237", 'a', p, 'b', q, 'c', t), "EQ_237", gi_s.at(p) * rr.at({q, t}),
                  rr.at({t, q}) * s_gi.at(p));
        }
        if (R.count(p) && L.count(t))
          r.equal(key("EQ_238", 'a', p, 'b', q, 'c', t), "EQ_238", a_r.at(p) * s_gi.at(q) * a_l.at(t),
                  l_a.at(t) * gi_s.at(q) * r_a.at(p));
      }
  for (int p = -range; p <= range; ++p) {
    for (int q = -range; q <= range; ++q) {
      if (L.count(p) && L.count(q) && L.count(p + q))
        r.equal(key("EQ_242", 'n', p, 'm', q), "EQ_242", kron(a, L.at(p).map) * kron(L.at(q).map, a) * kron(gi, g.phi()),
                kron(g.phi(), gi) * L.at(q + p).map);
      if (R.count(p) && R.count(q) && R.count(p + q))
        r.equal(key("EQ_246", 'n', p, 'm', q), "EQ_246", kron(R.at(p).map, a) * kron(a, R.at(q).map) * kron(g.phi(), gi),
                kron(gi, g.phi()) * R.at(p + q).map);
    }
    if (L.count(p) && L.count(-p))
      r.equal(key("EQ_247", 'n', p), "EQ_247", L.at(p).map * kron(gi, g.kappa()), kron(g.kappa(), gi) * L.at(-p).map);
    if (R.count(p) && R.count(-p))
      r.equal(key("EQ_248", 'n', p), "EQ_248", R.at(p).map * kron(g.kappa(), gi), kron(gi, g.kappa()) * R.at(-p).map);
  }
  return r;
}

/// Full flip-level suite: solving, per-flip identities, bi-identities, tau-flips, multi-covariance.
inline Report check_braided_covariance(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const FlipSet& fs,
                                       int range = 2) {
  Report r = fs.solve_report;
  for (int k = -range; k <= range; ++k) {
    if (fs.has_left(k)) r.merge(check_flip_identities(g, c, fs.left.at(k), g.sigma_n(k), k));
    if (fs.has_right(k)) r.merge(check_flip_identities(g, c, fs.right.at(k), g.sigma_n(k), k));
  }
  r.merge(check_bi_flip_identities(g, c, fs, range));
  r.merge(check_flip_tau(g, c, fs));
  r.merge(check_multi_covariance(g, c, fs, range));
  return r;
}

}  // namespace mbq
