#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbq/io.hpp"
#include "mbq/star.hpp"

namespace mbq::engine {

using io::Bundle;
using io::json;

/// Bad input rather than a failed verification.
struct InputError : Error {
  using Error::Error;
};

struct Options {
  int range = 2;
  bool paranoid = false;
  unsigned jobs = 1;
};

inline GroupOptions group_options(const Options& o) {
  GroupOptions g;
  g.sigma_range = std::max(16, 2 * o.range + 4);
  g.paranoid = o.paranoid;
  return g;
}

inline json options_json(const Options& o) { return json{{"range", o.range}, {"paranoid", o.paranoid}}; }

struct Result {
  Report report;
  json outcome = json::object();
};

/// A structure that does not exist: a failure when it was asked for, a skip otherwise.
inline void record_absent(Report& r, bool demanded, const std::string& id, const std::string& family,
                          const WitnessedError& e) {
  if (demanded)
    r.fail(id, family, e.witness, e.what());
  else
    r.skip(id, family, e.what());
}

inline const FirstOrderCalculus& need_calculus(const Bundle& b) {
  if (!b.calculus) throw InputError("bundle has no calculus section");
  return *b.calculus;
}

inline MultiBraidedGroup make_group(const Bundle& b, const Options& o) {
  try {
    return MultiBraidedGroup(b.group, group_options(o));
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const Error& e) {
    throw InputError(std::string("group structure is not usable: ") + e.what());
  }
}

/// Everything solvable for one calculus, recorded into a single report.
struct Structures {
  FlipSet flips;
  std::optional<LeftCovariantData> left;
  std::optional<RightCovariantData> right;
  std::optional<KappaData> kappa;
  std::optional<StarCalculus> star;
};

inline std::optional<LeftCovariantData> try_left(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                                 const FlipSet* fs, Report& r, bool demanded) {
  try {
    LeftCovariantData L = solve_left_action(g, c, fs);
    r.merge(L.report);
    return L;
  } catch (const NotLeftCovariant& e) {
    record_absent(r, demanded, "NotLeftCovariant", "EQ_32", e);
  } catch (const IdealInvalid& e) {
    record_absent(r, demanded, "IdealInvalid_" + e.which, "EQ_320", e);
  }
  return std::nullopt;
}

inline std::optional<RightCovariantData> try_right(const MultiBraidedGroup& g, const FirstOrderCalculus& c,
                                                   const FlipSet* fs, Report& r, bool demanded) {
  try {
    RightCovariantData R = solve_right_action(g, c, fs);
    r.merge(R.report);
    return R;
  } catch (const NotRightCovariant& e) {
    record_absent(r, demanded, "NotRightCovariant", "EQ_31", e);
  } catch (const IdealInvalid& e) {
    record_absent(r, demanded, "IdealInvalid_" + e.which, "EQ_A25", e);
  }
  return std::nullopt;
}

inline Report left_extras(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const LeftCovariantData& L,
                          const FlipSet& fs, int range) {
  Report r = flip_from_actions(g, c, L, fs, range);
  r.merge(left_trivialization(g, c, L).report);
  try {
    r.merge(right_trivialization(g, c, L).report);
  } catch (const SigmaStarSingular& e) {
    r.skip("EQ_323", "EQ_323", e.what());
  }
  return r;
}

/// Bicovariance block: Eqs. 41-410 and the ad-criterion agreement.
inline Report bi_block(const MultiBraidedGroup& g, const FirstOrderCalculus& c, const Structures& s, int range,
                       bool demanded) {
  Report r;
  if (!s.left) {
    r.skip("AD_IFF_RIGHT", "PROP_46", "calculus is not left covariant");
    return r;
  }
  const LeftCovariantData& L = *s.left;
  const bool ideal_ok = ideal_bicovariance_test(g, L.R).ok();
  bool ad_ok = false;
  Report ad;
  try {
    right_action_from_ad(g, c, L, ad, s.right ? &*s.right : nullptr);
    ad_ok = true;
  } catch (const AdNotDescending& e) {
    record_absent(ad, demanded, "AdNotDescending", "EQ_410", e);
  } catch (const SigmaStarSingular& e) {
    ad.skip("EQ_49", "EQ_49", e.what());
  }
  r.merge(ad);
  if (s.right) {
    r.merge(check_bicovariance(g, c, L, *s.right, &s.flips, range));
    r.merge(ideal_bicovariance_test(g, L.R));
  }
  const bool right_ok = s.right.has_value();
  r.truth("AD_IFF_RIGHT", "PROP_46", ideal_ok == right_ok && ad_ok == right_ok, c.gdim > 0,
          std::string("ad-criterion: ") + (ideal_ok ? "yes" : "no") + ", right action: " + (right_ok ? "yes" : "no"));
  return r;
}

inline Report kappa_block(const MultiBraidedGroup& g, const FirstOrderCalculus& c, Structures& s, bool demanded) {
  Report r = kappa_iff_bicovariant(g, c);
  try {
    s.kappa = check_kappa_covariance(g, c, &s.flips, s.left ? &*s.left : nullptr, s.right ? &*s.right : nullptr);
    r.merge(s.kappa->report);
  } catch (const NotKappaCovariant& e) {
    record_absent(r, demanded, "NotKappaCovariant", "DEF_51", e);
  }
  return r;
}

inline Report star_block(const MultiBraidedGroup& g, const FirstOrderCalculus& c, Structures& s, int range,
                         bool demanded) {
  Report r;
  if (!g.star()) {
    r.skip("STAR_IFF_STABLE", "THM_61", "group carries no star");
    return r;
  }
  const DirectStar direct = decide_star_directly(g, c);
  if (direct.exists()) {
    r.merge(direct.report);
  } else {
    for (const auto& e : direct.report.entries())
      if (e.status == Status::Fail) {
        record_absent(r, demanded, e.id, e.family, WitnessedError(e.note, e.witness.value_or(Witness{})));
        break;
      }
  }
  if (!s.left) {
    r.skip("STAR_IFF_STABLE", "THM_61", "calculus is not left covariant");
    return r;
  }
  const bool stable = is_star_kappa_stable(g, s.left->R);
  try {
    s.star = star_covariance(g, c, *s.left, s.right ? &*s.right : nullptr, s.kappa ? &*s.kappa : nullptr, &s.flips);
    r.merge(s.star->report);
    r.merge(check_star_flip_compat(g, c, s.star->star_gamma, range));
  } catch (const NotStarCovariant& e) {
    record_absent(r, demanded, "NotStarCovariant", "THM_61", e);
  }
  r.truth("STAR_IFF_STABLE", "THM_61", direct.exists() == stable && s.star.has_value() == stable, c.gdim > 0,
          std::string("star on Gamma: ") + (direct.exists() ? "yes" : "no") +
              ", kappa(R)^* in R: " + (stable ? "yes" : "no"));
  return r;
}

inline json structure_outcome(const Structures& s) {
  return json{{"left_covariant", s.left.has_value()},
              {"right_covariant", s.right.has_value()},
              {"kappa_covariant", s.kappa.has_value()},
              {"star_covariant", s.star.has_value()},
              {"braided_covariant", s.flips.complete()}};
}

inline bool is_calculus(const MultiBraidedGroup& g, const FirstOrderCalculus& c) { return check_calculus(g, c).ok(); }

/// Full verification of the group and, when present, the calculus.
inline Result check(const Bundle& b, const Options& o) {
  const GroupOptions gopt = group_options(o);
  Result res;
  Report group_rep = check_group(b.group, gopt);
  std::optional<MultiBraidedGroup> g;
  try {
    g.emplace(b.group, gopt);
  } catch (const Error&) {
  }
  std::vector<std::function<Report()>> jobs;
  if (g) {
    jobs.push_back([&] {
      if (g->sigma() != g->tau()) {
        Report r;
        r.skip("CLASSICAL", "CLASSICAL", "sigma differs from tau");
        return r;
      }
      return classical_limit(*g, 4);
    });
    if (g->star()) jobs.push_back([&] { return check_star_group(*g, o.range); });
  }
  Structures s;
  const bool with_calc = g && b.calculus;
  if (with_calc) {
    const FirstOrderCalculus& c = *b.calculus;
    jobs.push_back([&] { return check_calculus(*g, c); });
    jobs.push_back([&] {
      Report r;
      s.flips = solve_flips(*g, c, o.range);
      r.merge(check_braided_covariance(*g, c, s.flips, o.range));
      Report rest;
      if (!is_calculus(*g, c)) {
        r.skip("DECISIONS", "CALCULUS", "covariance decisions need a valid first-order calculus");
        return r;
      }
      s.left = try_left(*g, c, &s.flips, rest, false);
      s.right = try_right(*g, c, &s.flips, rest, false);
      if (s.left) rest.merge(left_extras(*g, c, *s.left, s.flips, o.range));
      if (s.right) rest.merge(right_flip_from_actions(*g, c, *s.right, s.flips, o.range));
      rest.merge(bi_block(*g, c, s, o.range, false));
      rest.merge(kappa_block(*g, c, s, false));
      rest.merge(star_block(*g, c, s, o.range, false));
      r.merge(rest);
      return r;
    });
  }
  res.report = std::move(group_rep);
  for (const Report& r : io::run_jobs(jobs, o.jobs)) res.report.merge(r);
  res.outcome["ok"] = res.report.ok();
  if (with_calc) {
    res.outcome["gdim"] = b.calculus->gdim;
    res.outcome["structures"] = structure_outcome(s);
  }
  return res;
}

/// One targeted decision: left, right, bi, kappa, star or braided.
inline Result covariance(const Bundle& b, const std::string& mode, const Options& o) {
  const FirstOrderCalculus& c = need_calculus(b);
  const MultiBraidedGroup g = make_group(b, o);
  Result res;
  Report& r = res.report;
  Structures s;
  const Report cal = check_calculus(g, c);
  if (!cal.ok()) {
    for (const auto& e : cal.entries())
      if (e.status == Status::Fail) {
        r.fail("NotCalculus", e.family, e.witness.value_or(Witness{}), "violates " + e.id);
        break;
      }
    res.outcome["calculus"] = false;
    return res;
  }
  s.flips = solve_flips(g, c, o.range);
  if (mode == "braided") {
    r.merge(check_braided_covariance(g, c, s.flips, o.range));
    res.outcome["braided_covariant"] = s.flips.complete();
    return res;
  }
  if (mode == "left") {
    s.left = try_left(g, c, &s.flips, r, true);
    if (s.left) r.merge(left_extras(g, c, *s.left, s.flips, o.range));
    res.outcome["left_covariant"] = s.left.has_value();
  } else if (mode == "right") {
    s.right = try_right(g, c, &s.flips, r, true);
    if (s.right) r.merge(right_flip_from_actions(g, c, *s.right, s.flips, o.range));
    res.outcome["right_covariant"] = s.right.has_value();
  } else if (mode == "bi") {
    s.left = try_left(g, c, &s.flips, r, true);
    s.right = try_right(g, c, &s.flips, r, true);
    r.merge(bi_block(g, c, s, o.range, true));
    res.outcome["bicovariant"] = s.left && s.right;
  } else if (mode == "kappa") {
    s.left = try_left(g, c, &s.flips, r, false);
    s.right = try_right(g, c, &s.flips, r, false);
    r.merge(kappa_block(g, c, s, true));
    res.outcome["kappa_covariant"] = s.kappa.has_value();
  } else if (mode == "star") {
    if (!g.star()) throw InputError("bundle group has no star section");
    s.left = try_left(g, c, &s.flips, r, true);
    s.right = try_right(g, c, &s.flips, r, false);
    if (s.left && s.right) {
      try {
        s.kappa = check_kappa_covariance(g, c, &s.flips, &*s.left, &*s.right);
      } catch (const NotKappaCovariant&) {
      }
    }
    r.merge(star_block(g, c, s, o.range, true));
    res.outcome["star_covariant"] = s.left ? json(s.star.has_value()) : json(nullptr);
  } else {
    throw InputError("unknown covariance mode: " + mode);
  }
  return res;
}

inline const fixtures::IdealSpec& find_ideal(const Bundle& b, const std::string& name) {
  for (const auto& i : b.ideals)
    if (i.name == name) return i;
  throw InputError("bundle has no ideal named " + name);
}

struct Built {
  Result result;
  std::optional<Bundle> bundle;
};

/// Reconstruction of the calculus of a named ideal.
inline Built build_calculus(const Bundle& b, const std::string& ideal, Side side, const Options& o) {
  const MultiBraidedGroup g = make_group(b, o);
  const fixtures::IdealSpec& spec = find_ideal(b, ideal);
  Built out;
  Report& r = out.result.report;
  const Subspace R = close_ideal(g, spec.generators, side);
  try {
    Reconstruction rec = side == Side::Left ? reconstruct_from_ideal(g, R) : reconstruct_right_from_ideal(g, R);
    r.merge(rec.report);
    r.merge(check_calculus(g, rec.calc));
    Bundle nb = b;
    nb.name = b.name + "/" + ideal + "/" + to_string(side);
    nb.calculus = rec.calc;
    out.bundle = std::move(nb);
    out.result.outcome = json{{"gdim", rec.calc.gdim}, {"ideal_dim", R.dim()}, {"kdim", rec.kdim}};
  } catch (const IdealInvalid& e) {
    r.fail("IdealInvalid_" + e.which, side == Side::Left ? "EQ_320" : "EQ_A25", e.witness, e.what());
  } catch (const WitnessedError& e) {
    r.fail("RECONSTRUCTION", "PROP_311", e.witness, e.what());
  }
  return out;
}

/// Derived maps: tau, sigma-n, a0 (the multiplication m0), kappa0, ad.
inline LinMap derive(const Bundle& b, const std::string& what, int n, const Options& o) {
  Options wide = o;
  wide.range = std::max(o.range, std::abs(n));
  const MultiBraidedGroup g = make_group(b, wide);
  if (what == "tau") return g.tau();
  if (what == "sigma-n") {
    if (!g.has_sigma_n(n)) throw InputError("sigma_n outside the tabulated window");
    return g.sigma_n(n);
  }
  if (what == "a0") return g.m0();
  if (what == "kappa0") return g.kappa0();
  if (what == "ad") return g.ad();
  throw InputError("unknown derived map: " + what);
}

/// Closure of {sigma, tau} under (a, b, c) -> a b^-1 c, then the braid-system checks.
inline Result complete_system(const Bundle& b, size_t max_elems, const Options& o) {
  const MultiBraidedGroup g = make_group(b, o);
  const Completion comp = complete_braid_system(BraidSystem{g.n(), {g.sigma(), g.tau()}}, max_elems);
  Result res;
  res.report = check_braid_system(comp.system, b.group.alg, "COMPLETE_");
  if (comp.truncated)
    res.report.skip("COMPLETION_CLOSED", "COMPLETION", "stopped at " + std::to_string(max_elems) + " elements");
  else
    res.report.truth("COMPLETION_CLOSED", "COMPLETION", true, true);
  res.outcome = json{{"size", comp.system.elements.size()}, {"truncated", comp.truncated}};
  return res;
}

/// Fixture bundles shipped with the repository, including the engineered negative cases.
inline std::vector<std::string> fixture_names() {
  return {"fix_1", "fix_k2", "fix_gr", "fix_k3", "fix_h4", "broken", "corrupt_mgl", "corrupt_sigma"};
}

inline Bundle named_bundle(const std::string& name) {
  if (name == "fix_1") return io::bundle_from_fixture(fixtures::fix_1());
  if (name == "fix_k2") return io::bundle_from_fixture(fixtures::fix_k2());
  if (name == "fix_gr") return io::bundle_from_fixture(fixtures::fix_gr());
  if (name == "fix_k3") return io::bundle_from_fixture(fixtures::fix_k3());
  if (name == "fix_h4") return io::bundle_from_fixture(fixtures::fix_h4());
  if (name == "broken") {
    // Right-covariant calculus of Sweedler's algebra whose kernel blocks any left action.
    Bundle b = io::bundle_from_fixture(fixtures::fix_h4());
    Built built = build_calculus(b, "x_plus_gx", Side::Right, Options{});
    built.bundle->name = "broken";
    return *built.bundle;
  }
  if (name == "corrupt_mgl") {
    Bundle b = io::bundle_from_fixture(fixtures::fix_k2());
    Built built = build_calculus(b, "zero", Side::Left, Options{});
    Bundle out = *built.bundle;
    out.name = "corrupt_mgl";
    LinMap& mgl = out.calculus->mgl;
    Vec col = mgl.column(0);
    col[0] += Scalar(1);
    mgl.set_column(0, col);
    return out;
  }
  if (name == "corrupt_sigma") {
    Bundle b = io::bundle_from_fixture(fixtures::fix_k2());
    b.name = "corrupt_sigma";
    Vec col = b.group.sigma.column(0);
    col[0] = Scalar(2);
    b.group.sigma.set_column(0, col);
    return b;
  }
  throw InputError("unknown fixture: " + name);
}

}  // namespace mbq::engine
