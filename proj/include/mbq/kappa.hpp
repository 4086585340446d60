#pragma once

#include <optional>
#include <string>

#include "mbq/bicovariant.hpp"

namespace mbq {

struct NotKappaCovariant : WitnessedError {
  using WitnessedError::WitnessedError;
};

struct KappaData {
  LinMap varkappa;  ///< Gamma -> Gamma
  Report report;
};

/// iota_r (kappa (x) kappa) sigma_{-2}, the right-hand side of Eq. 51.
inline LinMap kappa_rhs(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  return iota_r(g, c) * kron(g.kappa(), g.kappa()) * g.sigma_n(-2);
}

/// Def 5.1 as a bare decision: equality of the two kernels.
inline bool is_kappa_covariant(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  return kernel(iota_l(g, c)) == kernel(kappa_rhs(g, c));
}

/// Builds varkappa and checks Eqs. 51-53; with flips, Eqs. 55-58; with both actions, Eqs. 59-516b.
inline KappaData check_kappa_covariance(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                        const FlipSet* fs = nullptr, const LeftCovariantData* L = nullptr,
                                        const RightCovariantData* Rd = nullptr) {
  const size_t n = g.n();
  const LinMap a = id(n), gi = id(c.gdim);
  const LinMap& k = g.kappa();
  const LinMap il = iota_l(g, c), ir = iota_r(g, c);
  const LinMap s_m2 = g.tau() * g.sigma_inv() * g.tau() * g.sigma_inv() * g.tau();
  KappaData kd;
  Report& r = kd.report;
  r.equal("SIGMA_M2_FORM", "SIGMA_N_TABLE", s_m2, g.sigma_n(-2), "tau sigma^-1 tau sigma^-1 tau against the table");
  const LinMap rhs = ir * kron(k, k) * s_m2;
  const Subspace k1 = kernel(il), k2 = kernel(rhs);
  if (!r.same_space("KAPPA_KERNELS", "DEF_51", k1, k2)) {
    const Entry& e = r.entries().back();
    throw NotKappaCovariant("kernels of iota_l and of the twisted iota_r differ", *e.witness);
  }
  kd.varkappa = factor_through(il, rhs);
  const LinMap& vk = kd.varkappa;
  r.equal("EQ_51", vk * il, rhs);
  const LinMap vk_inv = detail::invert_or_zero(vk);
  r.truth("KAPPA_BIJECTIVE", "EQ_51", c.gdim == 0 || vk * vk_inv == gi, c.gdim > 0);
  r.equal("EQ_52", c.d * k, vk * c.d);
  r.equal("EQ_53", vk * ir, il * kron(k, k) * s_m2);
  if (fs) {
    for (int p = -2; p <= 2; ++p) {
      if (fs->has_left(p) && fs->has_left(-p))
        r.equal(key("EQ_55", 'n', p), "EQ_55", fs->left.at(p).map * kron(vk, a), kron(a, vk) * fs->left.at(-p).map);
      if (fs->has_right(p) && fs->has_right(-p))
        r.equal(key("EQ_57", 'n', p), "EQ_57", fs->right.at(p).map * kron(a, vk),
                kron(vk, a) * fs->right.at(-p).map);
    }
    if (fs->has_left(-2)) r.equal("EQ_56", vk * c.mgr, c.mgl * kron(k, vk) * fs->left.at(-2).map);
    if (fs->has_right(-2)) r.equal("EQ_58", vk * c.mgl, c.mgr * kron(vk, k) * fs->right.at(-2).map);
  }
  if (L && Rd) {
    const LinMap &ell = L->ell, &rho = Rd->rho;
    const LinMap& k0 = g.kappa0();
    if (fs && fs->has_left(1) && fs->has_right(1)) {
      r.equal("EQ_59", ell * vk, kron(k, vk) * fs->left.at(1).map * rho);
      r.equal("EQ_510", rho * vk, kron(vk, k) * fs->right.at(1).map * ell);
    }
    r.equal("EQ_511", -vk, c.mgl * kron(a, c.mgr) * kron(k, gi, k) * kron(a, rho) * ell,
            "sign included: the diagram commutes with -varkappa");
    r.same_space("EQ_512_L", "EQ_512", image(vk, L->gamma_inv), Rd->inv_gamma);
    r.same_space("EQ_512_R", "EQ_512", image(vk, Rd->inv_gamma), L->gamma_inv);
    r.equal("EQ_513_PI", "EQ_513", vk * L->pi_gamma, Rd->varsigma_gamma * k0);
    r.equal("EQ_513_VARSIGMA", "EQ_513", vk * Rd->varsigma_gamma, L->pi_gamma * k0);
    const LinMap ke = kernel(g.eps()).inclusion();
    r.equal("EQ_514A", vk * L->B * L->circ * kron(L->pi, a) * kron(ke, a),
            Rd->B * Rd->bullet * kron(k0, Rd->varsigma * k0) * g.tau() * kron(ke, a));
    r.equal("EQ_514B", vk * Rd->B * Rd->bullet * kron(a, Rd->varsigma) * kron(a, ke),
            L->B * L->circ * kron(L->pi * k0, k0) * g.tau() * kron(a, ke));
    r.same_space("EQ_515_R", "EQ_515", image(k0, L->R), Rd->K);
    r.same_space("EQ_515_K", "EQ_515", image(k0, Rd->K), L->R);
    r.equal("EQ_516A", vk * c.mgl * kron(a, L->pi_gamma), c.mgr * kron(Rd->varsigma_gamma * k0, k) * g.tau());
    r.equal("EQ_516B", vk * c.mgr * kron(Rd->varsigma_gamma, a), c.mgl * kron(k, L->pi_gamma * k0) * g.tau());
  }
  return kd;
}

/// Independent decisions of kappa-covariance and bicovariance for a one-sided covariant calculus, compared.
inline Report kappa_iff_bicovariant(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  auto solvable = [&](auto&& solve) {
    try {
      solve(g, c, nullptr);
      return true;
    } catch (const NotLeftCovariant&) {
      return false;
    } catch (const NotRightCovariant&) {
      return false;
    }
  };
  const bool left = solvable(solve_left_action), right = solvable(solve_right_action);
  Report r;
  if (!left && !right) {
    r.skip("KAPPA_IFF_BI", "PROP_52", "neither left nor right covariant");
    return r;
  }
  const bool kappa = is_kappa_covariant(g, c), bi = left && right;
  r.truth("KAPPA_IFF_BI", "PROP_52", kappa == bi, c.gdim > 0,
          std::string("kappa-covariant: ") + (kappa ? "yes" : "no") + ", bicovariant: " + (bi ? "yes" : "no"));
  return r;
}

}  // namespace mbq
