#pragma once

#include <optional>
#include <string>

#include "mbq/kappa.hpp"

namespace mbq {

struct NotStarCovariant : WitnessedError {
  using WitnessedError::WitnessedError;
};

struct NoStar : Error {
  using Error::Error;
};

namespace detail {

inline const AntilinMap& star_of(const MultiBraidedGroup& g) {
  if (!g.star()) throw NoStar("the group carries no star structure");
  return *g.star();
}

}  // namespace detail

/// Star axioms of a multi-braided *-group.
inline Report check_star_group(const MultiBraidedGroup& g, int range = 2) {
  const AntilinMap& s = detail::star_of(g);
  const size_t n = g.n();
  const LinMap a = id(n);
  const LinMap& psi = g.psi();
  const AntilinMap ss = kron(s, s);
  const AntilinMap sk = s * g.kappa();
  Report r;
  r.equal("INVOLUTION", "STAR_AXIOMS", s * s, a);
  r.equal("ANTIMULT", "STAR_AXIOMS", s * g.m(), g.m() * (ss * psi));
  r.equal("STAR_UNIT", "STAR_AXIOMS", s * g.u(), AntilinMap(g.u()));
  r.equal("EQ_B32", "EQ_B32", g.phi() * s, ss * (psi * g.sigma_inv() * g.phi()));
  r.equal("EQ_B33", "EQ_B33", g.phi() * sk, kron(sk, sk) * (psi * g.phi()));
  r.equal("EQ_B34", "EQ_B34", AntilinMap(g.eps().conj()), g.eps() * sk);
  r.equal("EQ_B35", "EQ_B35", g.kappa_inv(), s * g.kappa() * s);
  r.equal("EQ_B36", "EQ_B36", g.sigma() * ss, ss * (psi * g.sigma_inv() * psi));
  r.equal("EQ_B37", "EQ_B37", g.tau() * ss, ss * (psi * g.tau_inv() * psi));
  for (int k = -range; k <= range; ++k) {
    if (!g.has_sigma_n(k)) continue;
    r.equal(key("EQ_62", 'n', k), "EQ_62", ss * g.sigma_n(k), (psi * g.sigma_n_inv(k) * psi) * ss);
  }
  return r;
}

/// First vector of the ideal whose image under star kappa leaves the ideal, if any.
inline std::optional<Witness> star_kappa_escape(const MultiBraidedGroup& g, const Subspace& ideal) {
  const AntilinMap sk = detail::star_of(g) * g.kappa();
  const LinMap b = ideal.inclusion();
  for (size_t j = 0; j < b.dom(); ++j) {
    Vec v = sk.apply(b.column(j));
    if (!ideal.contains(v)) return Witness{b.column(j), ideal.residual(v)};
  }
  return std::nullopt;
}

/// True when kappa(R)^* is contained in R.
inline bool is_star_kappa_stable(const MultiBraidedGroup& g, const Subspace& ideal) {
  return !star_kappa_escape(g, ideal);
}

struct StarCalculus {
  AntilinMap star_gamma;  ///< Gamma -> Gamma
  AntilinMap star_inv;    ///< Gamma_inv picture: k -> k
  Report report;
};

/// Star on Gamma from the invariant quotient; throws NotStarCovariant unless kappa(R)^* is in R.
inline StarCalculus star_covariance(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                    const LeftCovariantData& L, const RightCovariantData* Rd = nullptr,
                                    const KappaData* kd = nullptr, const FlipSet* fs = nullptr) {
  const AntilinMap& s = detail::star_of(g);
  const size_t n = g.n(), kdim = L.kdim();
  const LinMap a = id(n), gi = id(c.gdim);
  const LinMap& k = g.kappa();
  const AntilinMap sk = s * k;
  StarCalculus sc;
  Report& r = sc.report;
  if (auto w = star_kappa_escape(g, L.R)) {
    r.fail("STAR_KAPPA_R", "THM_61", *w, "star kappa moves R");
    throw NotStarCovariant("kappa(R)^* is not contained in R", *w);
  }
  r.truth("STAR_KAPPA_R", "THM_61", true, L.R.dim() > 0);
  const LinMap pc = L.pi;
  sc.star_inv = AntilinMap(factor_through(pc.conj(), -(pc * sk).linear_part()));
  r.equal("STAR_INV_DEF", "EQ_614", sc.star_inv * pc, -(pc * sk));
  const LinMap fwd = kron(a, L.Bl * L.P) * L.ell;
  sc.star_gamma = (c.mgr * kron(L.B, a)) * (kron(sc.star_inv, s) * (flip(n, kdim) * fwd));
  const AntilinMap& sg = sc.star_gamma;
  const AntilinMap ss = kron(s, s);
  r.equal("EQ_614", "EQ_614", sg * L.pi_gamma, -(L.pi_gamma * sk));
  r.equal("STAR_GAMMA_INVOLUTION", "THM_61", sg * sg, gi);
  r.equal("STAR_GAMMA_D", "THM_61", sg * c.d, c.d * s);
  r.equal("STAR_GAMMA_LEFT", "THM_61", sg * c.mgl, c.mgr * (kron(sg, s) * flip(n, c.gdim)));
  r.equal("STAR_GAMMA_RIGHT", "THM_61", sg * c.mgr, c.mgl * (kron(s, sg) * flip(c.gdim, n)));
  const LinMap& psi = g.psi();
  auto try_flip = [&](Side side) -> std::optional<FlipOver> {
    try {
      return solve_flip(g, c, psi, side);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const std::optional<FlipOver> rpsi = try_flip(Side::Right), lpsi = try_flip(Side::Left);
  std::optional<FlipOver> ls, rs;
  if (fs && fs->has_left(1)) ls = fs->left.at(1);
  if (fs && fs->has_right(1)) rs = fs->right.at(1);
  if (!ls) ls = [&]() -> std::optional<FlipOver> {
      try {
        return solve_flip(g, c, g.sigma(), Side::Left);
      } catch (const Error&) {
        return std::nullopt;
      }
    }();
  if (!rs) rs = [&]() -> std::optional<FlipOver> {
      try {
        return solve_flip(g, c, g.sigma(), Side::Right);
      } catch (const Error&) {
        return std::nullopt;
      }
    }();
  if (rpsi && ls)
    r.equal("EQ_613", "EQ_613", L.ell * sg, (ls->map * rpsi->map) * (kron(s, sg) * L.ell));
  else
    r.skip("EQ_613", "EQ_613", "right flip over psi or left flip over sigma not solvable");
  if (Rd) {
    if (lpsi && rs)
      r.equal("EQ_615", "EQ_615", Rd->rho * sg, (rs->map * lpsi->map) * (kron(sg, s) * Rd->rho));
    else
      r.skip("EQ_615", "EQ_615", "left flip over psi or right flip over sigma not solvable");
    r.equal("EQ_616", "EQ_616", sg * Rd->varsigma_gamma, -(Rd->varsigma_gamma * sk));
  }
  if (kd) {
    try {
      const LinMap vk_inv = invert(kd->varkappa);
      r.equal("EQ_617", "EQ_617", kd->varkappa * sg, sg * vk_inv);
    } catch (const NotInvertible& e) {
      r.fail("EQ_617", "EQ_617", e.witness, "varkappa not invertible");
    }
  }
  return sc;
}

/// Flip-over operators intertwine the stars: Eqs. 69-610 for sigma_n, n in the window.
inline Report check_star_flip_compat(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const AntilinMap& sg,
                                     int range = 2) {
  const AntilinMap& s = detail::star_of(g);
  const LinMap& psi = g.psi();
  Report r;
  for (int k = -range; k <= range; ++k) {
    if (!g.has_sigma_n(k)) continue;
    const LinMap beta = psi * g.sigma_n_inv(k) * psi;
    for (Side side : {Side::Left, Side::Right}) {
      const std::string fam = side == Side::Left ? "EQ_69" : "EQ_610";
      try {
        const FlipOver fa = solve_flip(g, c, g.sigma_n(k), side);
        const FlipOver fb = solve_flip(g, c, beta, side);
        if (side == Side::Left)
          r.equal(key(fam, 'n', k), fam, fa.map * kron(sg, s), kron(s, sg) * fb.map);
        else
          r.equal(key(fam, 'n', k), fam, fa.map * kron(s, sg), kron(sg, s) * fb.map);
      } catch (const Error& e) {
        r.skip(key(fam, 'n', k), fam, e.what());
      }
    }
  }
  return r;
}

/// Star on Gamma decided directly from a db -> d(b^*) a^*, without the invariant quotient.
struct DirectStar {
  std::optional<AntilinMap> star;
  Report report;
  bool exists() const { return star.has_value() && report.ok(); }
};

inline DirectStar decide_star_directly(const MultiBraidedGroup& g, const FirstOrderCalculus& c) {
  const AntilinMap& s = detail::star_of(g);
  const size_t n = g.n();
  const LinMap il = iota_l(g, c), ir = iota_r(g, c);
  const AntilinMap target = ir * (kron(s, s) * g.psi());
  DirectStar ds;
  Report& r = ds.report;
  try {
    ds.star = AntilinMap(factor_through(il.conj(), target.linear_part()));
  } catch (const NoFactor& e) {
    r.fail("DIRECT_STAR_DEFINED", "THM_61", e.witness, "a db -> d(b^*) a^* is not well defined");
    return ds;
  }
  const AntilinMap& st = *ds.star;
  r.truth("DIRECT_STAR_DEFINED", "THM_61", true, c.gdim > 0);
  r.equal("DIRECT_STAR_INVOLUTION", "THM_61", st * st, id(c.gdim));
  r.equal("DIRECT_STAR_LEFT", "THM_61", st * c.mgl, c.mgr * (kron(st, s) * flip(n, c.gdim)));
  r.equal("DIRECT_STAR_RIGHT", "THM_61", st * c.mgr, c.mgl * (kron(s, st) * flip(c.gdim, n)));
  return ds;
}

}  // namespace mbq
