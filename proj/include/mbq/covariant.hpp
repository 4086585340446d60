#pragma once

#include <optional>
#include <string>
#include <utility>

#include "mbq/calculus.hpp"

namespace mbq {

struct NotLeftCovariant : WitnessedError {
  using WitnessedError::WitnessedError;
};
struct NotRightCovariant : WitnessedError {
  using WitnessedError::WitnessedError;
};
struct SigmaStarSingular : WitnessedError {
  using WitnessedError::WitnessedError;
};

/// Raised when a subspace cannot serve as the ideal of a covariant calculus.
/// `which` names the failed precondition.
struct IdealInvalid : WitnessedError {
  IdealInvalid(const std::string& which_, const std::string& what, Witness w)
      : WitnessedError(what, std::move(w)), which(which_) {}
  std::string which;
};

/// Left action and the invariant data derived from it.
struct LeftCovariantData {
  LinMap ell;  ///< Gamma -> A (x) Gamma
  LinMap P;    ///< projection onto Gamma_inv
  Subspace gamma_inv;
  LinMap B;         ///< inclusion of Gamma_inv (gdim x k)
  LinMap Bl;        ///< left inverse of B
  LinMap pi;        ///< A -> Gamma_inv in coordinates (k x n)
  LinMap pi_gamma;  ///< P d : A -> Gamma
  Subspace R;
  LinMap sigma_star;  ///< Gamma_inv (x) A -> A (x) Gamma_inv
  LinMap circ;        ///< Gamma_inv (x) A -> Gamma_inv
  Report report;

  size_t kdim() const { return B.dom(); }
};

/// Right action and the invariant data derived from it.
struct RightCovariantData {
  LinMap rho;  ///< Gamma -> Gamma (x) A
  LinMap Q;    ///< projection onto invGamma
  Subspace inv_gamma;
  LinMap B;
  LinMap Bl;
  LinMap varsigma;        ///< A -> invGamma in coordinates
  LinMap varsigma_gamma;  ///< Q d : A -> Gamma
  Subspace K;
  LinMap star_sigma;  ///< A (x) invGamma -> invGamma (x) A
  LinMap bullet;      ///< A (x) invGamma -> invGamma
  Report report;

  size_t kdim() const { return B.dom(); }
};

namespace detail {

inline LinMap invert_or_zero(const LinMap& f) {
  try {
    return invert(f);
  } catch (const NotInvertible&) {
    return LinMap(f.dom(), f.cod());
  }
}

/// x with x (pi (x) id) = rhs, recording a failure instead of throwing.
inline LinMap factor_or_report(Report& r, const std::string& id_, const LinMap& f, const LinMap& g) {
  try {
    return factor_through(f, g);
  } catch (const NoFactor& e) {
    r.fail(id_, id_, e.witness, e.what());
    return LinMap(g.cod(), f.cod());
  }
}

inline LinMap quotient_pi(const MultiBraidedGroup& g, const Subspace& ideal) {
  const size_t n = g.n();
  Subspace ke = kernel(g.eps());
  LinMap kl = left_inverse(ke.inclusion());
  Quotient q = quotient(ke.dim(), image(kl, ideal));
  return q.proj * kl * (id(n) - g.unit_eps());
}

}  // namespace detail

/// The ideal conditions on the left: R in ker eps, m0(R (x) A) in R, tau(R (x) A) = A (x) R.
inline Report check_left_ideal(const MultiBraidedGroup& g, const Subspace& r) {
  const Subspace all = Subspace::full(g.n());
  Report rep;
  rep.subset("R_IN_KER_EPS", "R_IDEAL", r, kernel(g.eps()));
  rep.subset("R_IDEAL_A0", "R_IDEAL", image(g.m0(), tensor(r, all)), r);
  rep.same_space("EQ_320", "EQ_320", image(g.tau(), tensor(r, all)), tensor(all, r));
  return rep;
}

/// Mirror conditions: K in ker eps, m0(A (x) K) in K, tau(A (x) K) = K (x) A.
inline Report check_right_ideal(const MultiBraidedGroup& g, const Subspace& k) {
  const Subspace all = Subspace::full(g.n());
  Report rep;
  rep.subset("K_IN_KER_EPS", "K_IDEAL", k, kernel(g.eps()));
  rep.subset("K_IDEAL_A0", "K_IDEAL", image(g.m0(), tensor(all, k)), k);
  rep.same_space("EQ_A25", "EQ_A25", image(g.tau(), tensor(all, k)), tensor(k, all));
  return rep;
}

inline void throw_if_invalid(const Report& rep) {
  for (const auto& e : rep.entries())
    if (e.status == Status::Fail)
      throw IdealInvalid(e.id, "ideal precondition " + e.id + " fails", e.witness.value_or(Witness{}));
}

/// Smallest subspace containing the generators and closed under m0-multiplication on the given side.
inline Subspace close_ideal(const MultiBraidedGroup& g, const std::vector<Vec>& generators, Side side) {
  const Subspace all = Subspace::full(g.n());
  Subspace s = Subspace::span(g.n(), generators);
  while (true) {
    Subspace grown = s + image(g.m0(), side == Side::Left ? tensor(s, all) : tensor(all, s));
    if (grown.dim() == s.dim()) return s;
    s = grown;
  }
}

/// Solves the left action and derives P, Gamma_inv, pi, R, sigma_*, circ.
/// When `fs` is given, sigma_* is compared with the restrictions of every solved left flip.
inline LeftCovariantData solve_left_action(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                           const FlipSet* fs = nullptr) {
  const size_t n = g.n();
  const LinMap a = id(n), gi = id(c.gdim);
  const LinMap il = iota_l(g, c), ir = iota_r(g, c);
  const LinMap& m = g.m();
  const LinMap& phi = g.phi();
  const LinMap mix = kron(a, g.sigma(), a) * kron(phi, phi);
  LeftCovariantData L;
  Report& r = L.report;
  const LinMap target = kron(m, il) * mix;
  try {
    L.ell = factor_through(il, target);
  } catch (const NoFactor& e) {
    throw NotLeftCovariant("no left action satisfies the defining equation", e.witness);
  }
  const LinMap& ell = L.ell;
  r.equal("EQ_32", ell * il, target);
  r.equal("EQ_35", ell * ir, kron(m, ir) * mix);
  r.equal("EQ_33", ell * c.d, kron(a, c.d) * phi);
  r.equal("EQ_34", ell * c.mgl, kron(m, c.mgl) * kron(a, g.sigma(), gi) * kron(phi, ell));
  r.equal("EQ_36", kron(g.eps(), gi) * ell, gi);
  r.equal("EQ_37", kron(phi, gi) * ell, kron(a, ell) * ell);

  L.P = c.mgl * kron(g.kappa(), gi) * ell;
  const LinMap& P = L.P;
  L.gamma_inv = kernel(ell - kron(g.u(), gi));
  r.equal("P_IDEMPOTENT", "EQ_313", P * P, P);
  r.same_space("EQ_312", "EQ_312", image(P), L.gamma_inv, "image of P is the invariant subspace");
  L.B = L.gamma_inv.inclusion();
  L.Bl = left_inverse(L.B);
  L.pi_gamma = P * c.d;
  L.pi = L.Bl * L.pi_gamma;
  const size_t k = L.kdim();
  const LinMap ki = id(k);
  report_surjective(r, "PI_SURJ", "PI_SURJ", L.pi);
  r.equal("EQ_314", P * il, kron(g.eps(), L.pi_gamma) * g.sigma_inv() * g.tau());

  const LinMap m0 = g.m0();
  const LinMap& pg = L.pi_gamma;
  r.equal("EQ_319", P * c.mgr * kron(pg, a), pg * m0 - kron(g.eps(), pg));
  Subspace ke = kernel(g.eps());
  L.R = intersect(kernel(L.pi), ke);
  r.merge(check_left_ideal(g, L.R));
  r.truth("DIM_LAW", "DIM_LAW", k + L.R.dim() == ke.dim(), k > 0,
          "dim Gamma_inv = " + std::to_string(k) + ", dim ker eps = " + std::to_string(ke.dim()) +
              ", dim R = " + std::to_string(L.R.dim()));

  L.circ = L.Bl * P * c.mgr * kron(L.B, a);
  const LinMap kinc_a = kron(ke.inclusion(), a);
  r.equal("EQ_321_P", "EQ_321", L.B * L.circ * kron(L.pi, a) * kinc_a, P * c.mgr * kron(pg, a) * kinc_a);
  r.equal("EQ_321_M0", "EQ_321", L.circ * kron(L.pi, a) * kinc_a, L.pi * m0 * kinc_a);
  r.equal("CIRC_A0_MODULE", "EQ_321", L.circ * kron(L.circ, a), L.circ * kron(ki, m0));

  L.sigma_star = detail::factor_or_report(r, "EQ_315_DEF", kron(L.pi, a), kron(a, L.pi) * g.tau());
  const LinMap& ss = L.sigma_star;
  r.equal("EQ_315_DEF", "EQ_315", ss * kron(L.pi, a), kron(a, L.pi) * g.tau());
  if (fs) {
    for (const auto& [s, f] : fs->left) {
      r.equal(key("EQ_315", 'n', s), "EQ_315", f.map * kron(pg, a), kron(a, pg) * g.tau());
      const LinMap restricted = f.map * kron(L.B, a);
      r.equal(key("FLIP_L_INV_STABLE", 'n', s), "SIGMA_STAR", kron(a, L.B * L.Bl) * restricted, restricted,
              "left flip maps Gamma_inv (x) A into A (x) Gamma_inv");
      r.equal(key("SIGMA_STAR_RESTRICT", 'n', s), "SIGMA_STAR", kron(a, L.Bl) * restricted, ss);
    }
  }
  r.equal("EQ_332", ss * kron(L.circ, a), kron(a, L.circ) * kron(ss, a) * kron(ki, g.tau()));
  r.equal("EQ_333", kron(m, ki) * kron(a, ss) * kron(ss, a), ss * kron(ki, m));
  r.equal("EQ_334", L.pi * m,
          (kron(g.eps(), L.pi) + L.circ * kron(L.pi, a)) * g.sigma_inv() * g.tau());
  return L;
}

/// Returns R after checking the ideal conditions.
inline Subspace extract_ideal(const MultiBraidedGroup& g, const LeftCovariantData& L, Report* rep = nullptr) {
  if (rep) rep->merge(check_left_ideal(g, L.R));
  return L.R;
}

/// The left sigma-flip built from the left action, with the right multiplicativity
/// law and the twisting of the left action by the sigma_n family.
inline Report flip_from_actions(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const LeftCovariantData& L,
                                const FlipSet& fs, int range = 2, LinMap* out = nullptr) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  const LinMap& ell = L.ell;
  Report r;
  const LinMap xi =
      kron(g.m(), c.mgr) * kron(g.kappa(), ell * c.mgr, g.kappa()) * kron(ell, g.phi());
  if (out) *out = xi;
  if (fs.has_left(1)) {
    r.equal("EQ_38", xi, fs.left.at(1).map, "compared with the solved sigma-flip");
    r.equal("EQ_39", ell * c.mgr, kron(g.m(), c.mgr) * kron(a, fs.left.at(1).map, a) * kron(ell, g.phi()));
  }
  for (int p = -range; p <= range; ++p)
    for (int q = -range; q <= range; ++q)
      if (fs.has_left(q) && fs.has_left(p + q))
        r.equal(key("EQ_310", 'n', p, 'm', q), "EQ_310",
                kron(g.sigma_n(p), gi) * kron(a, fs.left.at(q).map) * kron(ell, a),
                kron(a, ell) * fs.left.at(p + q).map);
  if (fs.has_left(0) && fs.has_left(1))
    r.equal("EQ_311", fs.left.at(0).map,
            kron(g.eps(), a, gi) * kron(g.sigma_inv(), gi) * kron(a, ell) * fs.left.at(1).map);
  return r;
}

/// Pair of mutually inverse maps between Gamma and a tensor model of it.
struct Trivialization {
  LinMap fwd;
  LinMap bwd;
  Report report;
};

/// Gamma <-> A (x) Gamma_inv.
inline Trivialization left_trivialization(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                          const LeftCovariantData& L) {
  const size_t n = g.n();
  const LinMap a = id(n), ki = id(L.kdim());
  Trivialization t;
  t.fwd = kron(a, L.Bl * L.P) * L.ell;
  t.bwd = c.mgl * kron(a, L.B);
  Report& r = t.report;
  r.equal("TRIV_L_FWD_BWD", "PROP_38", t.fwd * t.bwd, id(n * L.kdim()));
  r.equal("TRIV_L_BWD_FWD", "PROP_38", t.bwd * t.fwd, id(c.gdim));
  r.equal("P_A_THETA", "PROP_38", L.P * c.mgl * kron(a, L.B), kron(g.eps(), L.B));
  r.equal("EQ_316", kron(a, t.fwd) * L.ell * t.bwd, kron(g.phi(), ki));
  r.equal("EQ_317", t.fwd * c.d, kron(a, L.pi) * g.phi());
  r.equal("EQ_318", t.fwd * c.mgl * kron(a, t.bwd), kron(g.m(), ki));
  r.equal("EQ_322", t.fwd * c.mgr * kron(t.bwd, a),
          kron(g.m(), L.circ) * kron(a, L.sigma_star, a) * kron(a, ki, g.phi()));
  return t;
}

/// Gamma <-> Gamma_inv (x) A; throws SigmaStarSingular when sigma_* has no inverse.
inline Trivialization right_trivialization(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                           const LeftCovariantData& L) {
  const size_t n = g.n();
  const LinMap a = id(n), ki = id(L.kdim());
  LinMap ss_inv;
  try {
    ss_inv = invert(L.sigma_star);
  } catch (const NotInvertible& e) {
    throw SigmaStarSingular("sigma_* is not invertible", e.witness);
  }
  Trivialization t;
  Report& r = t.report;
  const LinMap lfwd = kron(a, L.Bl * L.P) * L.ell;
  const LinMap T = lfwd * c.mgr * kron(L.B, a);
  const LinMap T_inv = detail::invert_or_zero(T);
  r.truth("EQ_323", "EQ_323", T * T_inv == id(T.cod()) && T_inv * T == id(T.dom()), T.dom() > 0,
          "restricted right multiplication is bijective");
  r.equal("EQ_324", T_inv, kron(L.circ, g.kappa()) * kron(ki, g.phi() * g.kappa_inv()) * ss_inv);
  t.bwd = c.mgr * kron(L.B, a);
  t.fwd = detail::invert_or_zero(t.bwd);
  r.equal("TRIV_R_FWD_BWD", "PROP_310", t.fwd * t.bwd, id(L.kdim() * n));
  r.equal("TRIV_R_BWD_FWD", "PROP_310", t.bwd * t.fwd, id(c.gdim));
  r.equal("EQ_325", t.fwd * c.mgr * kron(t.bwd, a), kron(ki, g.m()));
  r.equal("EQ_326", kron(a, t.fwd) * L.ell * t.bwd, kron(L.sigma_star, a) * kron(ki, g.phi()));
  r.equal("EQ_327", t.fwd * c.mgl * kron(a, t.bwd),
          kron(L.circ * kron(ki, g.kappa_inv()), g.m()) * kron(ki, g.sigma_inv() * g.phi(), a) * kron(ss_inv, a));
  const LinMap minus_d = -(t.fwd * c.d);
  r.equal("EQ_328_A", "EQ_328", minus_d, kron(L.pi * g.kappa_inv(), a) * g.sigma_inv() * g.phi());
  r.equal("EQ_328_B", "EQ_328", minus_d, kron(L.pi, g.kappa()) * g.phi() * g.kappa_inv());
  return t;
}

/// Calculus reconstructed from an ideal, together with the structure maps used.
struct Reconstruction {
  FirstOrderCalculus calc;
  Subspace ideal;
  size_t kdim = 0;
  LinMap pi;          ///< A -> invariant part, coordinates
  LinMap product;     ///< circ (left) or bullet (right)
  LinMap braid_part;  ///< sigma_* (left) or _*sigma (right)
  LinMap action;      ///< ell (left) or rho (right)
  Report report;
};

/// Left-covariant calculus Gamma = A (x) (ker eps / R).
inline Reconstruction reconstruct_from_ideal(const MultiBraidedGroup& g, const Subspace& ideal) {
  const size_t n = g.n();
  const LinMap a = id(n);
  Reconstruction out;
  out.ideal = ideal;
  out.report = check_left_ideal(g, ideal);
  throw_if_invalid(out.report);
  Report& r = out.report;
  out.pi = detail::quotient_pi(g, ideal);
  const size_t k = out.kdim = out.pi.cod();
  const LinMap ki = id(k);
  const LinMap pa = kron(out.pi, a);
  out.product = detail::factor_or_report(r, "CIRC_DEFINED", pa, out.pi * (g.m0() - kron(g.eps(), a)));
  out.braid_part = detail::factor_or_report(r, "SIGMA_STAR_DEFINED", pa, kron(a, out.pi) * g.tau());
  const LinMap &circ = out.product, &ss = out.braid_part;
  r.truth("SIGMA_STAR_BIJECTIVE", "SIGMA_STAR", rank(ss) == ss.cod() && ss.cod() == ss.dom(), k > 0);
  r.equal("EQ_332", ss * kron(circ, a), kron(a, circ) * kron(ss, a) * kron(ki, g.tau()));
  r.equal("EQ_333", kron(g.m(), ki) * kron(a, ss) * kron(ss, a), ss * kron(ki, g.m()));
  r.equal("EQ_334", out.pi * g.m(), (kron(g.eps(), out.pi) + circ * kron(out.pi, a)) * g.sigma_inv() * g.tau());
  FirstOrderCalculus& c = out.calc;
  c.gdim = n * k;
  c.d = kron(a, out.pi) * g.phi();
  c.mgl = kron(g.m(), ki);
  c.mgr = kron(g.m(), circ) * kron(a, ss, a) * kron(a, ki, g.phi());
  out.action = kron(g.phi(), ki);
  return out;
}

/// Right-covariant calculus Gamma = (ker eps / K) (x) A.
inline Reconstruction reconstruct_right_from_ideal(const MultiBraidedGroup& g, const Subspace& ideal) {
  const size_t n = g.n();
  const LinMap a = id(n);
  Reconstruction out;
  out.ideal = ideal;
  out.report = check_right_ideal(g, ideal);
  throw_if_invalid(out.report);
  Report& r = out.report;
  out.pi = detail::quotient_pi(g, ideal);
  const size_t k = out.kdim = out.pi.cod();
  const LinMap ki = id(k);
  const LinMap ap = kron(a, out.pi);
  out.product = detail::factor_or_report(r, "BULLET_DEFINED", ap, out.pi * g.m0() - kron(out.pi, g.eps()));
  out.braid_part = detail::factor_or_report(r, "STAR_SIGMA_DEFINED", ap, kron(out.pi, a) * g.tau());
  const LinMap &bullet = out.product, &ss = out.braid_part;
  r.truth("STAR_SIGMA_BIJECTIVE", "STAR_SIGMA", rank(ss) == ss.cod() && ss.cod() == ss.dom(), k > 0);
  r.equal("BULLET_A0_MODULE", "EQ_A19", bullet * kron(g.m0(), ki), bullet * kron(a, bullet));
  FirstOrderCalculus& c = out.calc;
  c.gdim = k * n;
  c.d = kron(out.pi, a) * g.phi();
  c.mgr = kron(ki, g.m());
  c.mgl = kron(bullet, g.m()) * kron(a, ss, a) * kron(g.phi(), ki, a);
  out.action = kron(ki, g.phi());
  return out;
}

/// Solves the right action and derives Q, invGamma, varsigma, K, _*sigma, bullet.
inline RightCovariantData solve_right_action(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                             const FlipSet* fs = nullptr) {
  const size_t n = g.n();
  const LinMap a = id(n), gi = id(c.gdim);
  const LinMap il = iota_l(g, c), ir = iota_r(g, c);
  const LinMap& m = g.m();
  const LinMap& phi = g.phi();
  const LinMap mix = kron(a, g.sigma(), a) * kron(phi, phi);
  RightCovariantData Rd;
  Report& r = Rd.report;
  const LinMap target = kron(ir, m) * mix;
  try {
    Rd.rho = factor_through(ir, target);
  } catch (const NoFactor& e) {
    throw NotRightCovariant("no right action satisfies the defining equation", e.witness);
  }
  const LinMap& rho = Rd.rho;
  r.equal("EQ_31", rho * ir, target);
  r.equal("EQ_A1", rho * il, kron(il, m) * mix);
  r.equal("EQ_A2", rho * c.mgr, kron(c.mgr, m) * kron(gi, g.sigma(), a) * kron(rho, phi));
  r.equal("EQ_A3", rho * c.d, kron(c.d, a) * phi);
  r.equal("EQ_A4", kron(gi, g.eps()) * rho, gi);
  r.equal("EQ_A5", kron(rho, a) * rho, kron(gi, phi) * rho);

  Rd.Q = c.mgr * kron(gi, g.kappa()) * rho;
  const LinMap& Q = Rd.Q;
  Rd.inv_gamma = kernel(rho - kron(gi, g.u()));
  r.equal("Q_IDEMPOTENT", "EQ_A9", Q * Q, Q);
  r.same_space("EQ_A9", "EQ_A9", image(Q), Rd.inv_gamma, "image of Q is the right-invariant subspace");
  Rd.B = Rd.inv_gamma.inclusion();
  Rd.Bl = left_inverse(Rd.B);
  Rd.varsigma_gamma = Q * c.d;
  Rd.varsigma = Rd.Bl * Rd.varsigma_gamma;
  const LinMap& vg = Rd.varsigma_gamma;
  const size_t k = Rd.kdim();
  const LinMap ki = id(k);
  r.equal("EQ_A10", Q * ir, kron(vg, g.eps()) * g.sigma_inv() * g.tau());
  r.equal("EQ_A11", vg, c.mgr * kron(c.d, g.kappa()) * phi);
  report_surjective(r, "EQ_A11_SURJ", "EQ_A11", Rd.varsigma);

  Subspace ke = kernel(g.eps());
  Rd.K = intersect(kernel(Rd.varsigma), ke);
  r.merge(check_right_ideal(g, Rd.K));
  r.truth("DIM_LAW_R", "DIM_LAW", k + Rd.K.dim() == ke.dim(), k > 0,
          "dim invGamma = " + std::to_string(k) + ", dim ker eps = " + std::to_string(ke.dim()) +
              ", dim K = " + std::to_string(Rd.K.dim()));

  Rd.star_sigma = detail::factor_or_report(r, "EQ_A12_DEF", kron(a, Rd.varsigma), kron(Rd.varsigma, a) * g.tau());
  const LinMap& ss = Rd.star_sigma;
  r.equal("EQ_A12_DEF", "EQ_A12", ss * kron(a, Rd.varsigma), kron(Rd.varsigma, a) * g.tau());
  if (fs) {
    for (const auto& [s, f] : fs->right) {
      r.equal(key("EQ_A12", 'n', s), "EQ_A12", f.map * kron(a, vg), kron(vg, a) * g.tau());
      const LinMap restricted = f.map * kron(a, Rd.B);
      r.equal(key("FLIP_R_INV_STABLE", 'n', s), "STAR_SIGMA", kron(Rd.B * Rd.Bl, a) * restricted, restricted,
              "right flip maps A (x) invGamma into invGamma (x) A");
      r.equal(key("STAR_SIGMA_RESTRICT", 'n', s), "STAR_SIGMA", kron(Rd.Bl, a) * restricted, ss);
    }
  }

  // invGamma (x) A picture.
  const LinMap rbwd = c.mgr * kron(Rd.B, a);
  const LinMap rfwd = kron(Rd.Bl * Q, a) * rho;
  r.equal("EQ_A14_L", "EQ_A14", rfwd * rbwd, id(k * n));
  r.equal("EQ_A14_R", "EQ_A14", rbwd * rfwd, gi);
  Rd.bullet = Rd.Bl * Q * c.mgl * kron(a, Rd.B);
  const LinMap& bullet = Rd.bullet;
  r.equal("EQ_A19", Rd.B * bullet, Q * c.mgl * kron(a, Rd.B), "Q(a theta) stays right-invariant");
  r.equal("BULLET_A0_MODULE", "EQ_A19", bullet * kron(g.m0(), ki), bullet * kron(a, bullet));
  r.equal("EQ_A20", bullet * kron(a, Rd.varsigma), Rd.varsigma * g.m0() - kron(Rd.varsigma, g.eps()));
  r.equal("EQ_A16_MGR", "EQ_A16", rfwd * c.mgr * kron(rbwd, a), kron(ki, m));
  r.equal("EQ_A16_RHO", "EQ_A16", kron(rfwd, a) * rho * rbwd, kron(ki, phi));
  r.equal("EQ_A17", rfwd * c.d, kron(Rd.varsigma, a) * phi);
  r.equal("EQ_A18", rfwd * c.mgl * kron(a, rbwd), kron(bullet, m) * kron(a, ss, a) * kron(phi, ki, a));

  const LinMap Tr = rfwd * c.mgl * kron(a, Rd.B);
  r.equal("A_MGL_RESTRICT", "A_MGL_RESTRICT", Tr, kron(bullet, a) * kron(a, ss) * kron(phi, ki));
  const LinMap ss_inv = detail::invert_or_zero(ss);
  r.equal("A_MGL_RESTRICT_INV", "A_MGL_RESTRICT", detail::invert_or_zero(Tr),
          kron(g.kappa(), bullet) * kron(phi * g.kappa_inv(), ki) * ss_inv);

  // A (x) invGamma picture.
  const LinMap lbwd = c.mgl * kron(a, Rd.B);
  const LinMap lfwd = detail::invert_or_zero(lbwd);
  r.equal("EQ_A21", lfwd * c.mgr * kron(lbwd, a),
          kron(m, bullet * kron(g.kappa_inv(), ki)) * kron(a, g.sigma_inv() * phi, ki) * kron(a, ss_inv));
  r.equal("EQ_A22", lfwd * c.mgl * kron(a, lbwd), kron(m, ki));
  r.equal("EQ_A23", kron(lfwd, a) * rho * lbwd, kron(a, ss) * kron(phi, ki));
  const LinMap minus_d = -(lfwd * c.d);
  r.equal("EQ_A24_A", "EQ_A24", minus_d, kron(g.kappa(), Rd.varsigma) * phi * g.kappa_inv());
  r.equal("EQ_A24_B", "EQ_A24", minus_d, kron(a, Rd.varsigma * g.kappa_inv()) * g.sigma_inv() * phi);
  return Rd;
}

/// Right-flip relations built from the right action (mirror of flip_from_actions).
inline Report right_flip_from_actions(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                      const RightCovariantData& Rd, const FlipSet& fs, int range = 2) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  const LinMap& rho = Rd.rho;
  Report r;
  if (fs.has_right(1)) {
    const LinMap xi = kron(c.mgl, g.m()) * kron(g.kappa(), rho * c.mgl, g.kappa()) * kron(g.phi(), rho);
    r.equal("EQ_A6", xi, fs.right.at(1).map, "compared with the solved right sigma-flip");
    r.equal("EQ_A7", rho * c.mgl, kron(c.mgl, g.m()) * kron(a, fs.right.at(1).map, a) * kron(g.phi(), rho));
  }
  for (int p = -range; p <= range; ++p)
    for (int q = -range; q <= range; ++q)
      if (fs.has_right(q) && fs.has_right(p + q))
        r.equal(key("EQ_A8", 'n', p, 'm', q), "EQ_A8", kron(rho, a) * fs.right.at(p + q).map,
                kron(gi, g.sigma_n(p)) * kron(fs.right.at(q).map, a) * kron(a, rho));
  return r;
}

/// Linear bijection J : Gamma_1 -> Gamma_2 intertwining both products and the differentials.
struct Isomorphism {
  std::optional<LinMap> map;
  Report report;
};

/// J is forced by J(a db) = a db, so it is solved by factoring iota_l of the target through iota_l of the source.
inline Isomorphism find_isomorphism(const MultiBraidedGroup& g, const FirstOrderCalculus& c1,
                                    const FirstOrderCalculus& c2) {
  const LinMap a = id(g.n());
  Isomorphism iso;
  Report& r = iso.report;
  LinMap J;
  try {
    J = factor_through(iota_l(g, c1), iota_l(g, c2));
  } catch (const NoFactor& e) {
    r.fail("ISO_EXISTS", "ISO", e.witness, "kernel of iota_l differs");
    return iso;
  }
  r.truth("ISO_EXISTS", "ISO", true, c1.gdim > 0);
  const bool bij = J.cod() == J.dom() && rank(J) == J.dom();
  r.truth("ISO_BIJECTIVE", "ISO", bij, c1.gdim > 0,
          "dims " + std::to_string(c1.gdim) + " and " + std::to_string(c2.gdim));
  r.equal("ISO_D", "ISO", J * c1.d, c2.d);
  r.equal("ISO_MGL", "ISO", J * c1.mgl, c2.mgl * kron(a, J));
  r.equal("ISO_MGR", "ISO", J * c1.mgr, c2.mgr * kron(J, a));
  if (r.ok()) iso.map = J;
  return iso;
}

}  // namespace mbq
