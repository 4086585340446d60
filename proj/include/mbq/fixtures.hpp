#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mbq/braided_group.hpp"

namespace mbq::fixtures {

/// Named right ideal given by generators inside ker(eps).
struct IdealSpec {
  std::string name;
  std::vector<Vec> generators;
};

struct Fixture {
  std::string name;
  GroupData group;
  std::vector<IdealSpec> ideals;
};

/// Map whose j-th column is rule(j).
inline LinMap by_columns(size_t cod, size_t dom, const std::function<Vec(size_t)>& rule) {
  LinMap r(cod, dom);
  for (size_t j = 0; j < dom; ++j) r.set_column(j, rule(j));
  return r;
}

inline Vec vec(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

/// Graded flip u (x) v -> (-1)^{|u||v|} v (x) u for a basis with given parities.
inline LinMap graded_flip(const std::vector<int>& parity) {
  const size_t n = parity.size();
  return by_columns(n * n, n * n, [&](size_t j) {
    size_t a = j / n, b = j % n;
    Vec v(n * n);
    v[b * n + a] = Scalar(parity[a] * parity[b] % 2 ? -1 : 1);
    return v;
  });
}

/// One-dimensional algebra C.
inline Fixture fix_1() {
  Fixture f;
  f.name = "FIX-1";
  const LinMap one = id(1);
  f.group = GroupData{FiniteDimAlgebra{1, one, one}, one, one, one, one, {"1"}, AntilinMap(one)};
  f.ideals = {{"zero", {}}, {"kereps", {}}};
  return f;
}

/// Functions on Z/k with the plain flip; basis delta_0..delta_{k-1}.
inline Fixture fix_zk(size_t k) {
  Fixture f;
  f.name = "FIX-K" + std::to_string(k);
  const size_t n = k;
  LinMap mult = by_columns(n, n * n, [&](size_t j) {
    Vec v(n);
    if (j / n == j % n) v[j / n] = Scalar(1);
    return v;
  });
  LinMap unit = LinMap::column_map(Vec(n, Scalar(1)));
  LinMap phi = by_columns(n * n, n, [&](size_t x) {
    Vec v(n * n);
    for (size_t y = 0; y < n; ++y) v[y * n + (x + n - y) % n] = Scalar(1);
    return v;
  });
  LinMap eps = LinMap::row(basis_vector(n, 0));
  LinMap kappa = by_columns(n, n, [&](size_t x) { return basis_vector(n, (n - x) % n); });
  std::vector<std::string> labels;
  for (size_t x = 0; x < n; ++x) labels.push_back(x == 0 ? "d_e" : (k == 2 ? "d_g" : "d_g" + std::to_string(x)));
  f.group = GroupData{FiniteDimAlgebra{n, unit, mult}, phi, eps, kappa, flip(n, n), labels, AntilinMap(id(n))};
  std::vector<Vec> kereps;
  for (size_t x = 1; x < n; ++x) kereps.push_back(basis_vector(n, x));
  f.ideals = {{"zero", {}}, {"kereps", kereps}};
  if (k == 3) {
    // Functions vanishing on {0, 1}; not stable under the antipode.
    f.ideals.push_back({"vanish_01", {basis_vector(n, 2)}});
    f.ideals.push_back({"vanish_02", {basis_vector(n, 1)}});
  }
  return f;
}

inline Fixture fix_k2() { return fix_zk(2); }
inline Fixture fix_k3() { return fix_zk(3); }

/// Grassmann line: basis {1, theta}, theta^2 = 0, graded flip braiding.
inline Fixture fix_gr(long theta_star = 1) {
  Fixture f;
  f.name = "FIX-GR";
  const size_t n = 2;
  LinMap mult = by_columns(n, n * n, [&](size_t j) {
    size_t a = j / n, b = j % n;
    Vec v(n);
    if (a + b < 2) v[a + b] = Scalar(1);
    return v;
  });
  LinMap unit = LinMap::column_map(vec({1, 0}));
  LinMap phi = LinMap::from_columns(4, {vec({1, 0, 0, 0}), vec({0, 1, 1, 0})});
  LinMap eps = LinMap::row(vec({1, 0}));
  LinMap kappa = LinMap::from_columns(2, {vec({1, 0}), vec({0, -1})});
  LinMap star = LinMap::from_columns(2, {vec({1, 0}), vec({0, theta_star})});
  f.group = GroupData{FiniteDimAlgebra{n, unit, mult}, phi, eps, kappa, graded_flip({0, 1}), {"1", "theta"},
                      AntilinMap(star)};
  f.ideals = {{"zero", {}}, {"kereps", {vec({0, 1})}}};
  return f;
}

/// Sweedler's four-dimensional Hopf algebra: g^2 = 1, x^2 = 0, xg = -gx,
/// phi(g) = g (x) g, phi(x) = x (x) 1 + g (x) x. Basis g^a x^b at index a + 2b.
inline Fixture fix_h4() {
  Fixture f;
  f.name = "FIX-H4";
  const size_t n = 4;
  auto prod = [](size_t p, size_t q) -> std::pair<long, size_t> {
    size_t a = p % 2, b = p / 2, c = q % 2, d = q / 2;
    if (b + d >= 2) return {0, 0};
    long sign = (b * c) % 2 ? -1 : 1;
    return {sign, (a + c) % 2 + 2 * (b + d)};
  };
  LinMap mult = by_columns(n, n * n, [&](size_t j) {
    auto [s, k] = prod(j / n, j % n);
    Vec v(n);
    if (s != 0) v[k] = Scalar(s);
    return v;
  });
  LinMap unit = LinMap::column_map(basis_vector(n, 0));
  // Coproducts of generators, extended multiplicatively with the plain flip.
  Vec phi_g(n * n), phi_x(n * n), phi_1(n * n);
  phi_1[0] = Scalar(1);
  phi_g[1 * n + 1] = Scalar(1);
  phi_x[2 * n + 0] = Scalar(1);
  phi_x[1 * n + 2] = Scalar(1);
  LinMap mm = kron(mult, mult) * kron(id(n), flip(n, n), id(n));
  Vec phi_gx = mm.apply(kron_vec(phi_g, phi_x));
  LinMap phi = LinMap::from_columns(n * n, {phi_1, phi_g, phi_x, phi_gx});
  LinMap eps = LinMap::row(vec({1, 1, 0, 0}));
  LinMap kappa = LinMap::from_columns(n, {vec({1, 0, 0, 0}), vec({0, 1, 0, 0}), vec({0, 0, 0, -1}), vec({0, 0, 1, 0})});
  LinMap star = LinMap::from_columns(n, {vec({1, 0, 0, 0}), vec({0, 1, 0, 0}), vec({0, 0, 1, 0}), vec({0, 0, 0, -1})});
  f.group = GroupData{FiniteDimAlgebra{n, unit, mult}, phi, eps, kappa, flip(n, n), {"1", "g", "x", "gx"},
                      AntilinMap(star)};
  f.ideals = {{"zero", {}},
              {"kereps", {vec({1, -1, 0, 0}), vec({0, 0, 1, 0}), vec({0, 0, 0, 1})}},
              {"x", {vec({0, 0, 1, 0})}},
              {"one_minus_g", {vec({1, -1, 0, 0})}},
              {"x_plus_gx", {vec({0, 0, 1, 1})}},
              {"x_minus_gx", {vec({0, 0, 1, -1})}}};
  return f;
}

inline std::vector<Fixture> all() { return {fix_1(), fix_k2(), fix_gr(), fix_k3(), fix_h4()}; }

}  // namespace mbq::fixtures
