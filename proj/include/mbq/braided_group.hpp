#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbq/algebra.hpp"

namespace mbq {

struct TauMismatch : WitnessedError {
  using WitnessedError::WitnessedError;
};
struct TauSingular : WitnessedError {
  using WitnessedError::WitnessedError;
};
struct Kappa0Mismatch : WitnessedError {
  using WitnessedError::WitnessedError;
};
/// A cached value disagrees with its recomputation; indicates a bug, not bad input.
struct InternalInconsistency : Error {
  using Error::Error;
};

/// Raw structure constants of a multi-braided quantum group.
struct GroupData {
  FiniteDimAlgebra alg;
  LinMap phi;    ///< n^2 x n
  LinMap eps;    ///< 1 x n
  LinMap kappa;  ///< n x n
  LinMap sigma;  ///< n^2 x n^2
  std::vector<std::string> labels;
  std::optional<AntilinMap> star;

  size_t n() const { return alg.dim; }

  void validate_shapes() const {
    const size_t n = alg.dim;
    if (n == 0) throw DimensionMismatch("algebra dimension must be positive");
    check_shape(alg.unit, n, 1, "unit");
    check_shape(alg.mult, n, n * n, "mult");
    check_shape(phi, n * n, n, "coproduct");
    check_shape(eps, 1, n, "counit");
    check_shape(kappa, n, n, "antipode");
    check_shape(sigma, n * n, n * n, "sigma");
    if (star) check_shape(star->linear_part(), n, n, "star");
    if (!labels.empty() && labels.size() != n) throw DimensionMismatch("basis_labels length differs from dim");
  }
};

struct GroupOptions {
  /// sigma_n is tabulated for |n| <= sigma_range.
  int sigma_range = 16;
  /// Recompute derived maps on every access and compare with the cache.
  bool paranoid = false;
};

namespace detail {

inline LinMap tau_left_expr(const GroupData& d, const LinMap& sigma_inv) {
  const size_t n = d.n();
  return kron(d.eps, id(n), id(n)) * kron(sigma_inv, id(n)) * kron(id(n), d.phi) * d.sigma;
}

inline LinMap tau_right_expr(const GroupData& d, const LinMap& sigma_inv) {
  const size_t n = d.n();
  return kron(id(n), id(n), d.eps) * kron(id(n), sigma_inv) * kron(d.phi, id(n)) * d.sigma;
}

inline LinMap power(const LinMap& x, int k) {
  LinMap r = id(x.dom());
  for (int i = 0; i < k; ++i) r = x * r;
  return r;
}

}  // namespace detail

/// tau = (eps (x) id^2)(sigma^-1 (x) id)(id (x) phi) sigma, cross-checked against the mirrored expression.
inline LinMap derive_tau(const GroupData& d) {
  LinMap si = invert(d.sigma);
  LinMap a = detail::tau_left_expr(d, si);
  LinMap b = detail::tau_right_expr(d, si);
  LinMap diff = a - b;
  for (size_t j = 0; j < diff.dom(); ++j)
    if (!diff.col(j).empty())
      throw TauMismatch("the two expressions for tau differ", Witness{basis_vector(diff.dom(), j), diff.column(j)});
  try {
    (void)invert(a);
  } catch (const NotInvertible& e) {
    throw TauSingular("tau is not invertible", e.witness);
  }
  return a;
}

/// sigma_k = (sigma tau^-1)^(k-1) sigma computed directly by repeated products.
inline LinMap sigma_n_direct(const LinMap& sigma, const LinMap& tau, int k) {
  LinMap x = k - 1 >= 0 ? sigma * invert(tau) : tau * invert(sigma);
  return detail::power(x, k - 1 >= 0 ? k - 1 : 1 - k) * sigma;
}

/// sigma_k = sigma (tau^-1 sigma)^(k-1).
inline LinMap sigma_n_direct_right(const LinMap& sigma, const LinMap& tau, int k) {
  LinMap y = k - 1 >= 0 ? invert(tau) * sigma : invert(sigma) * tau;
  return sigma * detail::power(y, k - 1 >= 0 ? k - 1 : 1 - k);
}

class MultiBraidedGroup {
 public:
  explicit MultiBraidedGroup(GroupData d, GroupOptions opt = {}) : d_(std::move(d)), opt_(opt) {
    d_.validate_shapes();
    if (opt_.sigma_range < 2) throw Error("sigma_range must be at least 2");
    const size_t n = d_.n();
    kappa_inv_ = invert(d_.kappa);
    sigma_inv_ = invert(d_.sigma);
    tau_ = derive_tau(d_);
    tau_inv_ = invert(tau_);
    psi_ = flip(n, n);
    build_sigma_table();
    kappa0_l_ = kron(d_.eps, d_.kappa) * d_.sigma * d_.phi;
    kappa0_r_ = kron(d_.kappa, d_.eps) * d_.sigma * d_.phi;
    ad_ = kron(id(n), d_.alg.mult) * kron(id(n), d_.kappa, id(n)) * kron(tau_, id(n)) * kron(id(n), d_.phi) *
          d_.phi;
  }

  const GroupData& data() const { return d_; }
  const GroupOptions& options() const { return opt_; }
  size_t n() const { return d_.n(); }

  const LinMap& m() const { return d_.alg.mult; }
  const LinMap& u() const { return d_.alg.unit; }
  const LinMap& phi() const { return d_.phi; }
  const LinMap& eps() const { return d_.eps; }
  const LinMap& kappa() const { return d_.kappa; }
  const LinMap& kappa_inv() const { return kappa_inv_; }
  const LinMap& sigma() const { return d_.sigma; }
  const LinMap& sigma_inv() const { return sigma_inv_; }
  const LinMap& psi() const { return psi_; }
  const std::optional<AntilinMap>& star() const { return d_.star; }

  const LinMap& tau() const {
    if (opt_.paranoid && derive_tau(d_) != tau_) throw InternalInconsistency("cached tau differs from recomputation");
    return tau_;
  }
  const LinMap& tau_inv() const { return tau_inv_; }

  int sigma_range() const { return opt_.sigma_range; }
  bool has_sigma_n(int k) const { return k >= -opt_.sigma_range && k <= opt_.sigma_range; }

  const LinMap& sigma_n(int k) const {
    if (!has_sigma_n(k)) throw Error("sigma_" + std::to_string(k) + " outside the tabulated range");
    const LinMap& s = table_[static_cast<size_t>(k + opt_.sigma_range)];
    if (opt_.paranoid && sigma_n_direct(d_.sigma, tau_, k) != s)
      throw InternalInconsistency("cached sigma_" + std::to_string(k) + " differs from recomputation");
    return s;
  }
  const LinMap& sigma_n_inv(int k) const {
    (void)sigma_n(k);
    return table_inv_[static_cast<size_t>(k + opt_.sigma_range)];
  }

  /// m0 = m tau^-1 sigma.
  LinMap m0() const { return d_.alg.mult * tau_inv_ * d_.sigma; }

  FiniteDimAlgebra simplified_algebra() const { return FiniteDimAlgebra{n(), d_.alg.unit, m0()}; }

  bool kappa0_consistent() const { return kappa0_l_ == kappa0_r_; }
  const LinMap& kappa0_left_expr() const { return kappa0_l_; }
  const LinMap& kappa0_right_expr() const { return kappa0_r_; }

  /// kappa0 = (eps (x) kappa) sigma phi = (kappa (x) eps) sigma phi.
  const LinMap& kappa0() const {
    if (!kappa0_consistent()) {
      LinMap diff = kappa0_l_ - kappa0_r_;
      size_t j = 0;
      while (diff.col(j).empty()) ++j;
      throw Kappa0Mismatch("the two expressions for kappa0 differ", Witness{basis_vector(n(), j), diff.column(j)});
    }
    return kappa0_l_;
  }

  /// ad = (id (x) m)(id (x) kappa (x) id)(tau (x) id)(id (x) phi) phi.
  const LinMap& ad() const { return ad_; }

  /// Unit as map C -> A and counit composed: 1 eps.
  LinMap unit_eps() const { return d_.alg.unit * d_.eps; }

 private:
  void build_sigma_table() {
    const int r = opt_.sigma_range;
    const size_t size = static_cast<size_t>(2 * r + 1);
    table_.assign(size, LinMap());
    table_inv_.assign(size, LinMap());
    const LinMap x = d_.sigma * tau_inv_;      // sigma tau^-1
    const LinMap xi = tau_ * sigma_inv_;       // its inverse
    const LinMap y = tau_inv_ * d_.sigma;      // tau^-1 sigma
    const LinMap yi = sigma_inv_ * tau_;       // its inverse
    auto at = [&](int k) -> LinMap& { return table_[static_cast<size_t>(k + r)]; };
    at(1) = d_.sigma;
    LinMap right = d_.sigma;
    for (int k = 2; k <= r; ++k) {
      at(k) = x * at(k - 1);
      right = right * y;
      if (right != at(k)) throw InternalInconsistency("sigma_n expressions differ at n=" + std::to_string(k));
    }
    right = d_.sigma;
    for (int k = 0; k >= -r; --k) {
      at(k) = xi * at(k + 1);
      right = right * yi;
      if (right != at(k)) throw InternalInconsistency("sigma_n expressions differ at n=" + std::to_string(k));
    }
    for (int k = -r; k <= r; ++k) table_inv_[static_cast<size_t>(k + r)] = invert(at(k));
  }

  GroupData d_;
  GroupOptions opt_;
  LinMap kappa_inv_, sigma_inv_, tau_, tau_inv_, psi_;
  std::vector<LinMap> table_, table_inv_;
  LinMap kappa0_l_, kappa0_r_, ad_;
};

/// Set of braid operators on A (x) A.
struct BraidSystem {
  size_t n = 0;
  std::vector<LinMap> elements;
};

/// Invertibility and both hexagons for each element; the mixed braid relation
/// (id (x) a)(b (x) id)(id (x) c) = (c (x) id)(id (x) b)(a (x) id) for every ordered triple.
inline Report check_braid_system(const BraidSystem& t, const FiniteDimAlgebra& alg, const std::string& prefix = "") {
  Report r;
  const size_t n = t.n;
  const LinMap i = id(n);
  const LinMap& m = alg.mult;
  for (size_t a = 0; a < t.elements.size(); ++a) {
    const LinMap& s = t.elements[a];
    const int ia = static_cast<int>(a);
    try {
      (void)invert(s);
      r.truth(key(prefix + "BRAID_INV", 'a', ia), "BRAID_INV", true, true);
    } catch (const NotInvertible& e) {
      r.fail(key(prefix + "BRAID_INV", 'a', ia), "BRAID_INV", e.witness, "braid operator is singular");
    }
    r.equal(key(prefix + "EQ_29", 'a', ia), "EQ_29", kron(i, m) * kron(s, i) * kron(i, s), s * kron(m, i));
    r.equal(key(prefix + "EQ_210", 'a', ia), "EQ_210", kron(m, i) * kron(i, s) * kron(s, i), s * kron(i, m));
  }
  for (size_t a = 0; a < t.elements.size(); ++a)
    for (size_t b = 0; b < t.elements.size(); ++b)
      for (size_t c = 0; c < t.elements.size(); ++c) {
        const LinMap &x = t.elements[a], &y = t.elements[b], &z = t.elements[c];
        r.equal(key(prefix + "BRAID_MIXED", 'a', int(a), 'b', int(b), 'c', int(c)), "BRAID_MIXED",
                kron(i, x) * kron(y, i) * kron(i, z), kron(z, i) * kron(i, y) * kron(x, i));
      }
  return r;
}

struct Completion {
  BraidSystem system;
  bool truncated = false;
};

/// Closure under (a, b, c) -> a b^-1 c, deduplicated by exact equality.
inline Completion complete_braid_system(const BraidSystem& t, size_t max_elems) {
  Completion out;
  out.system.n = t.n;
  std::vector<LinMap>& els = out.system.elements;
  std::vector<LinMap> inv;
  auto add = [&](const LinMap& x) {
    for (const auto& e : els)
      if (e == x) return false;
    if (els.size() >= max_elems) {
      out.truncated = true;
      return false;
    }
    els.push_back(x);
    inv.push_back(invert(x));
    return true;
  };
  for (const auto& e : t.elements) add(e);
  bool grew = true;
  while (grew && !out.truncated) {
    grew = false;
    const size_t k = els.size();
    for (size_t a = 0; a < k && !out.truncated; ++a)
      for (size_t b = 0; b < k && !out.truncated; ++b)
        for (size_t c = 0; c < k && !out.truncated; ++c)
          if (add(els[a] * inv[b] * els[c])) grew = true;
  }
  return out;
}

/// Full identity suite of the group.
inline Report check_group(const GroupData& d, const GroupOptions& opt = {}) {
  d.validate_shapes();
  Report r;
  const size_t n = d.n();
  const LinMap i = id(n);
  const LinMap& m = d.alg.mult;
  const LinMap& u = d.alg.unit;
  const LinMap ue = u * d.eps;

  Report alg = check_algebra(d.alg, "ALG_");
  for (auto e : alg.entries()) {
    e.family = "ALG";
    r.add(std::move(e));
  }
  r.equal("COASSOC", kron(d.phi, i) * d.phi, kron(i, d.phi) * d.phi);
  r.equal("COUNIT_L", "COUNIT", kron(d.eps, i) * d.phi, i);
  r.equal("COUNIT_R", "COUNIT", kron(i, d.eps) * d.phi, i);
  r.equal("PHI_UNIT", d.phi * u, kron(u, u));
  r.equal("EPS_UNIT", d.eps * u, id(1));
  r.equal("ANTIPODE_L", "ANTIPODE", m * kron(d.kappa, i) * d.phi, ue);
  r.equal("ANTIPODE_R", "ANTIPODE", m * kron(i, d.kappa) * d.phi, ue);
  std::optional<LinMap> sigma_inv;
  try {
    (void)invert(d.kappa);
    r.truth("KAPPA_INV", "KAPPA_INV", true, true);
  } catch (const NotInvertible& e) {
    r.fail("KAPPA_INV", "KAPPA_INV", e.witness, "antipode is singular");
  }
  try {
    sigma_inv = invert(d.sigma);
    r.truth("SIGMA_INV", "SIGMA_INV", true, true);
  } catch (const NotInvertible& e) {
    r.fail("SIGMA_INV", "SIGMA_INV", e.witness, "braiding is singular");
  }
  const LinMap& s = d.sigma;
  r.equal("SIGMA_YB", kron(i, s) * kron(s, i) * kron(i, s), kron(s, i) * kron(i, s) * kron(s, i));
  r.equal("HEX_L", "EQ_29", kron(i, m) * kron(s, i) * kron(i, s), s * kron(m, i));
  r.equal("HEX_R", "EQ_210", kron(m, i) * kron(i, s) * kron(s, i), s * kron(i, m));
  r.equal("PHI_MULT", d.phi * m, kron(m, m) * kron(i, s, i) * kron(d.phi, d.phi));
  r.equal("SIGMA_UNIT_L", "SIGMA_UNIT", s * kron(u, i), kron(i, u));
  r.equal("SIGMA_UNIT_R", "SIGMA_UNIT", s * kron(i, u), kron(u, i));

  if (!sigma_inv) {
    for (const char* k : {"TAU_OK", "SYS_OK", "EPS_SIGMA", "EPS_TAU_L", "EPS_TAU_R"})
      r.skip(k, k, "braiding is singular");
    return r;
  }
  std::optional<LinMap> tau;
  try {
    tau = derive_tau(d);
    r.truth("TAU_OK", "TAU_OK", true, true);
  } catch (const WitnessedError& e) {
    r.fail("TAU_OK", "TAU_OK", e.witness, e.what());
  }
  if (!tau) {
    for (const char* k : {"SYS_OK", "EPS_SIGMA", "EPS_TAU_L", "EPS_TAU_R"}) r.skip(k, k, "tau unavailable");
    return r;
  }
  const LinMap& t = *tau;
  r.equal("TAU_UNIT_L", "TAU_UNIT", t * kron(u, i), kron(i, u));
  r.equal("TAU_UNIT_R", "TAU_UNIT", t * kron(i, u), kron(u, i));
  r.equal("EPS_SIGMA", d.eps * m, kron(d.eps, d.eps) * *sigma_inv * t);
  r.equal("EPS_TAU_L", "EPS_TAU", kron(d.eps, i) * t, kron(i, d.eps));
  r.equal("EPS_TAU_R", "EPS_TAU", kron(i, d.eps) * t, kron(d.eps, i));

  Report sys = check_braid_system(BraidSystem{n, {s, t}}, d.alg, "SYS_");
  for (const auto& e : sys.entries()) r.add(e);
  std::optional<Witness> sys_w;
  for (const auto& e : sys.entries())
    if (e.status == Status::Fail && !sys_w) sys_w = e.witness;
  r.truth("SYS_OK", "SYS_OK", sys.ok(), true, "{sigma, tau} braid system", sys_w);

  std::optional<MultiBraidedGroup> g;
  try {
    g.emplace(d, opt);
  } catch (const Error& e) {
    r.fail("GROUP_DERIVED", "GROUP_DERIVED", Witness{}, e.what());
    return r;
  }
  r.equal("SIGMA_0_TAU", "SIGMA_N_TABLE", g->sigma_n(0), t);
  r.equal("SIGMA_1", "SIGMA_N_TABLE", g->sigma_n(1), s);
  if (g->has_sigma_n(-2))
    r.equal("SIGMA_M2", "SIGMA_N_TABLE", g->sigma_n(-2), t * *sigma_inv * t * *sigma_inv * t);
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) {
        int k = a - b + c;
        if (!g->has_sigma_n(k)) continue;
        r.equal(key("SIGMA_N_TERNARY", 'a', a, 'b', b, 'c', c), "SIGMA_N_TERNARY",
                g->sigma_n(a) * g->sigma_n_inv(b) * g->sigma_n(c), g->sigma_n(k));
      }

  // A0 and its antipode.
  Report a0 = check_algebra(g->simplified_algebra(), "A0_");
  for (auto e : a0.entries()) {
    e.family = "A0";
    r.add(std::move(e));
  }
  r.equal("KAPPA0_TWO_FORMS", "KAPPA0", g->kappa0_left_expr(), g->kappa0_right_expr());
  const LinMap& k0 = g->kappa0_left_expr();
  const LinMap m0 = g->m0();
  r.equal("KAPPA0_EPS", "KAPPA0", d.eps * k0, d.eps);
  r.equal("KAPPA0_ANTIPODE_L", "KAPPA0", m0 * kron(k0, i) * d.phi, ue);
  r.equal("KAPPA0_ANTIPODE_R", "KAPPA0", m0 * kron(i, k0) * d.phi, ue);

  // Adjoint action.
  const LinMap& ad = g->ad();
  r.equal("EQ_B3", kron(i, d.eps) * ad, i);
  r.equal("EQ_B4", kron(i, d.phi) * ad, kron(ad, i) * ad);
  r.equal("EQ_B1", kron(i, m) * kron(i, d.kappa, i) * kron(t, i) * kron(d.phi, i) * d.phi, ad,
          "definition with the other bracketing of the double coproduct");
  r.equal("LEMMA_B2_EPS", "LEMMA_B2", kron(d.eps, i) * ad, ue);
  r.equal("LEMMA_B2_MIX", "LEMMA_B2", kron(i, m * kron(i, d.kappa), i) * kron(ad, d.phi) * d.phi,
          kron(i, d.kappa, i) * kron(t, i) * kron(i, d.phi) * d.phi);
  const int w = std::min(2, opt.sigma_range);
  for (int p = -w; p <= w; ++p)
    for (int q = -w; q <= w; ++q) {
      const LinMap& sm = g->sigma_n(p);
      const LinMap& sn = g->sigma_n(q);
      r.equal(key("EQ_B7", 'm', p, 'n', q), "EQ_B7", kron(i, ad) * sm, kron(sm, i) * kron(i, sn) * kron(ad, i));
      r.equal(key("EQ_B8", 'n', q, 'm', p), "EQ_B8", kron(ad, i) * sn, kron(i, sm) * kron(sn, i) * kron(i, ad));
    }
  return r;
}

/// Facts that hold exactly when sigma = tau: constant sigma_n, A0 = A, multiplicative counit.
inline Report classical_limit(const MultiBraidedGroup& g, int window = 4) {
  Report r;
  const size_t n = g.n();
  r.equal("CLASSICAL_SIGMA_EQ_TAU", "CLASSICAL", g.sigma(), g.tau());
  for (int k = -window; k <= window; ++k)
    if (g.has_sigma_n(k)) r.equal(key("CLASSICAL_SIGMA_N", 'n', k), "CLASSICAL", g.sigma_n(k), g.sigma());
  r.equal("CLASSICAL_M0_EQ_M", "CLASSICAL", g.m0(), g.m());
  r.equal("CLASSICAL_EPS_MULT", "CLASSICAL", g.eps() * g.m(), kron(g.eps(), g.eps()));
  (void)n;
  return r;
}

/// Outcome of the exploratory antipode/braiding shift scan.
struct ShiftFinding {
  std::string pattern;  ///< "kk": s_n(k(x)k)=(k(x)k)s_j; "ik": s_n(id(x)k)=(k(x)id)s_j; "ki": s_n(k(x)id)=(id(x)k)s_j
  int n = 0;
  int j = 0;
  bool holds = false;
};

/// Reports which shifts hold; nothing is asserted.
inline std::vector<ShiftFinding> explore_kappa_shifts(const MultiBraidedGroup& g, int window = 2) {
  std::vector<ShiftFinding> out;
  const LinMap i = id(g.n());
  const LinMap& k = g.kappa();
  for (int n = -window; n <= window; ++n)
    for (int j = -window; j <= window; ++j) {
      const LinMap& sn = g.sigma_n(n);
      const LinMap& sj = g.sigma_n(j);
      out.push_back({"kk", n, j, sn * kron(k, k) == kron(k, k) * sj});
      out.push_back({"ik", n, j, sn * kron(i, k) == kron(k, i) * sj});
      out.push_back({"ki", n, j, sn * kron(k, i) == kron(i, k) * sj});
    }
  return out;
}

}  // namespace mbq
