#pragma once

#include <string>

#include "mbq/covariant.hpp"

namespace mbq {

struct AdNotDescending : WitnessedError {
  using WitnessedError::WitnessedError;
};

/// Eqs. 47-48 for a candidate ideal, after its left-ideal preconditions.
inline Report ideal_bicovariance_test(const MultiBraidedGroup& g, const Subspace& r) {
  const Subspace all = Subspace::full(g.n());
  Report rep = check_left_ideal(g, r);
  rep.subset("EQ_47", "EQ_47", image(g.ad(), r), tensor(r, all));
  rep.same_space("EQ_48", "EQ_48", image(g.tau(), tensor(all, r)), tensor(r, all));
  return rep;
}

/// Compatibility of both actions and their restrictions to the invariant subspaces.
inline Report check_bicovariance(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const LeftCovariantData& L,
                                 const RightCovariantData& Rd, const FlipSet* fs = nullptr, int range = 2) {
  const LinMap a = id(g.n()), gi = id(c.gdim);
  const Subspace all = Subspace::full(g.n());
  const LinMap &ell = L.ell, &rho = Rd.rho;
  const LinMap &pg = L.pi_gamma, &vg = Rd.varsigma_gamma;
  Report r;
  r.equal("EQ_41", kron(ell, a) * rho, kron(a, rho) * ell);
  r.equal("EQ_43A", rho * pg, kron(pg, a) * g.ad());
  r.equal("EQ_43B", ell * vg, kron(a, vg) * g.tau() * kron(g.kappa(), g.kappa()) * g.ad() * g.kappa_inv());
  if (fs) {
    const auto &LF = fs->left, &RF = fs->right;
    for (int p = -range; p <= range; ++p)
      for (int q = -range; q <= range; ++q) {
        const LinMap& sp = g.sigma_n(p);
        if (RF.count(q) && RF.count(p + q))
          r.equal(key("EQ_44A", 'n', p, 'm', q), "EQ_44A", kron(ell, a) * RF.at(p + q).map,
                  kron(a, RF.at(q).map) * kron(sp, gi) * kron(a, ell));
        if (LF.count(q) && LF.count(p + q))
          r.equal(key("EQ_44B", 'n', p, 'm', q), "EQ_44B", kron(a, rho) * LF.at(p + q).map,
                  kron(LF.at(q).map, a) * kron(gi, sp) * kron(rho, a));
      }
    for (int p = -range; p <= range; ++p) {
      if (RF.count(p)) {
        const LinMap& f = RF.at(p).map;
        r.same_space(key("EQ_45A", 'n', p), "EQ_45A", image(f * kron(a, L.B)), tensor(L.gamma_inv, all));
        r.equal(key("EQ_46A", 'n', p), "EQ_46A", f * kron(a, pg), kron(pg, a) * g.tau());
      }
      if (LF.count(p)) {
        const LinMap& f = LF.at(p).map;
        r.same_space(key("EQ_45B", 'n', p), "EQ_45B", image(f * kron(Rd.B, a)), tensor(all, Rd.inv_gamma));
        r.equal(key("EQ_46B", 'n', p), "EQ_46B", f * kron(vg, a), kron(a, vg) * g.tau());
      }
    }
  }
  r.subset("EQ_47", "EQ_47", image(g.ad(), L.R), tensor(L.R, all));
  r.same_space("EQ_48", "EQ_48", image(g.tau(), tensor(all, L.R)), tensor(L.R, all));
  return r;
}

/// Right action of a left-covariant calculus built from the adjoint action on Gamma_inv.
/// Throws AdNotDescending when ad does not pass to the quotient defining Gamma_inv.
inline LinMap right_action_from_ad(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const LeftCovariantData& L,
                                   Report& r, const RightCovariantData* solved = nullptr) {
  const size_t n = g.n();
  const LinMap a = id(n), ki = id(L.kdim()), gi = id(c.gdim);
  LinMap varpi;
  try {
    varpi = factor_through(L.pi, kron(L.pi, a) * g.ad());
  } catch (const NoFactor& e) {
    throw AdNotDescending("ad does not descend to Gamma_inv", e.witness);
  }
  r.equal("EQ_410", varpi * L.pi, kron(L.pi, a) * g.ad());
  Trivialization rt = right_trivialization(g, c, L);
  const LinMap xi = kron(ki, a, g.m()) * kron(ki, g.sigma(), a) * kron(varpi, g.phi());
  const LinMap rho = kron(rt.bwd, a) * xi * rt.fwd;
  r.equal("EQ_49_A2", "EQ_49", rho * c.mgr, kron(c.mgr, g.m()) * kron(gi, g.sigma(), a) * kron(rho, g.phi()));
  r.equal("EQ_49_A3", "EQ_49", rho * c.d, kron(c.d, a) * g.phi());
  if (solved) r.equal("EQ_49", "EQ_49", rho, solved->rho, "compared with the solved right action");
  return rho;
}

}  // namespace mbq
