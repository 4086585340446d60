#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbq/linmap.hpp"

namespace mbq {

/// A concrete input vector together with the nonzero residual it produces.
struct Witness {
  Vec input;
  Vec residual;
};

/// Error that carries a witness vector.
struct WitnessedError : Error {
  WitnessedError(const std::string& what, Witness w) : Error(what), witness(std::move(w)) {}
  Witness witness;
};

struct NoFactor : WitnessedError {
  using WitnessedError::WitnessedError;
};

struct NotInvertible : WitnessedError {
  using WitnessedError::WitnessedError;
};

/// Reduced row echelon form: nonzero rows only, pivots[k] is the pivot column of rows[k].
struct Echelon {
  std::vector<Vec> rows;
  std::vector<size_t> pivots;
};

inline Echelon rref(std::vector<Vec> m, size_t ncols) {
  Echelon e;
  size_t next = 0;
  for (size_t c = 0; c < ncols && next < m.size(); ++c) {
    size_t p = next;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[next]);
    Vec& piv = m[next];
    if (!piv[c].is_one()) {
      Scalar inv = Scalar(1) / piv[c];
      for (size_t k = c; k < ncols; ++k)
        if (!piv[k].is_zero()) piv[k] *= inv;
    }
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == next || m[r][c].is_zero()) continue;
      Scalar f = m[r][c];
      for (size_t k = c; k < ncols; ++k)
        if (!piv[k].is_zero()) m[r][k] -= f * piv[k];
    }
    e.pivots.push_back(c);
    ++next;
  }
  m.resize(next);
  e.rows = std::move(m);
  return e;
}

inline Echelon rref(const LinMap& f) { return rref(f.dense_rows(), f.dom()); }

inline size_t rank(const LinMap& f) {
  if (f.cod() == 0 || f.dom() == 0) return 0;
  // Row-reduce whichever orientation is smaller.
  if (f.cod() <= f.dom()) return rref(f).pivots.size();
  return rref(f.transpose()).pivots.size();
}

/// Linear subspace of an ambient coordinate space, kept in canonical echelon form.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(size_t ambient) : ambient_(ambient) {}

  static Subspace zero(size_t ambient) { return Subspace(ambient); }
  static Subspace full(size_t ambient) {
    std::vector<Vec> b;
    for (size_t j = 0; j < ambient; ++j) b.push_back(basis_vector(ambient, j));
    return span(ambient, b);
  }

  static Subspace span(size_t ambient, const std::vector<Vec>& vecs) {
    for (const auto& v : vecs)
      if (v.size() != ambient) throw DimensionMismatch("spanning vector has wrong length");
    Subspace s(ambient);
    s.canon_ = rref(vecs, ambient);
    return s;
  }

  size_t ambient() const { return ambient_; }
  size_t dim() const { return canon_.rows.size(); }
  const std::vector<Vec>& basis() const { return canon_.rows; }
  const std::vector<size_t>& pivots() const { return canon_.pivots; }

  /// Remainder of v after reduction against the canonical basis; zero iff v lies in the space.
  Vec residual(Vec v) const {
    for (size_t k = 0; k < canon_.rows.size(); ++k) {
      const Scalar f = v[canon_.pivots[k]];
      if (f.is_zero()) continue;
      const Vec& r = canon_.rows[k];
      for (size_t j = 0; j < ambient_; ++j)
        if (!r[j].is_zero()) v[j] -= f * r[j];
    }
    return v;
  }

  bool contains(const Vec& v) const { return is_zero_vec(residual(v)); }

  /// First basis vector of this space outside `other`, if any.
  std::optional<Vec> first_outside(const Subspace& other) const {
    for (const auto& b : basis())
      if (!other.contains(b)) return b;
    return std::nullopt;
  }

  bool subset_of(const Subspace& other) const { return ambient_ == other.ambient_ && !first_outside(other); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.canon_.rows == b.canon_.rows;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  /// Inclusion map (ambient x dim) whose columns are the canonical basis.
  LinMap inclusion() const { return LinMap::from_columns(ambient_, canon_.rows); }

  Subspace operator+(const Subspace& o) const {
    std::vector<Vec> all = basis();
    all.insert(all.end(), o.basis().begin(), o.basis().end());
    return span(ambient_, all);
  }

 private:
  size_t ambient_ = 0;
  Echelon canon_;
};

inline Subspace kernel(const LinMap& f) {
  Echelon e = rref(f);
  std::vector<char> is_pivot(f.dom(), 0);
  for (size_t p : e.pivots) is_pivot[p] = 1;
  std::vector<Vec> vecs;
  for (size_t c = 0; c < f.dom(); ++c) {
    if (is_pivot[c]) continue;
    Vec v(f.dom());
    v[c] = Scalar(1);
    for (size_t k = 0; k < e.rows.size(); ++k) v[e.pivots[k]] = -e.rows[k][c];
    vecs.push_back(std::move(v));
  }
  return Subspace::span(f.dom(), vecs);
}

inline Subspace image(const LinMap& f) {
  std::vector<Vec> cols;
  for (size_t j = 0; j < f.dom(); ++j)
    if (!f.col(j).empty()) cols.push_back(f.column(j));
  return Subspace::span(f.cod(), cols);
}

/// Image of a subspace under a map.
inline Subspace image(const LinMap& f, const Subspace& s) {
  if (s.ambient() != f.dom()) throw DimensionMismatch("subspace not in the domain of the map");
  return image(f * s.inclusion());
}

/// The subspace a (x) b of the tensor product of the ambient spaces.
inline Subspace tensor(const Subspace& a, const Subspace& b) {
  return image(kron(a.inclusion(), b.inclusion()));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("intersection of subspaces of different spaces");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient());
  // Solve x_a A = x_b B; the intersection is spanned by A x_a.
  LinMap ia = a.inclusion();
  LinMap ib = b.inclusion();
  std::vector<Vec> cols;
  for (size_t j = 0; j < ia.dom(); ++j) cols.push_back(ia.column(j));
  for (size_t j = 0; j < ib.dom(); ++j) {
    Vec c = ib.column(j);
    for (auto& x : c) x = -x;
    cols.push_back(std::move(c));
  }
  LinMap stacked = LinMap::from_columns(a.ambient(), cols);
  Subspace k = kernel(stacked);
  std::vector<Vec> out;
  for (const auto& v : k.basis()) {
    Vec xa(v.begin(), v.begin() + static_cast<long>(a.dim()));
    out.push_back(ia.apply(xa));
  }
  return Subspace::span(a.ambient(), out);
}

inline LinMap invert(const LinMap& f) {
  if (f.cod() != f.dom()) throw DimensionMismatch("invert: map is not square");
  const size_t n = f.dom();
  std::vector<Vec> rows = f.dense_rows();
  for (size_t i = 0; i < n; ++i) {
    rows[i].resize(2 * n);
    rows[i][n + i] = Scalar(1);
  }
  Echelon e = rref(std::move(rows), 2 * n);
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) {
    Subspace k = kernel(f);
    Vec w = k.basis().front();
    throw NotInvertible("map is not invertible", Witness{w, f.apply(w)});
  }
  std::vector<Vec> inv(n);
  for (size_t i = 0; i < n; ++i) inv[i] = Vec(e.rows[i].begin() + static_cast<long>(n), e.rows[i].end());
  return LinMap::from_rows(n, n, inv);
}

/// Solves x * f = g. Succeeds iff ker f is contained in ker g; x is fixed on im f
/// and vanishes on a complement spanned by standard basis vectors.
inline LinMap factor_through(const LinMap& f, const LinMap& g) {
  if (f.dom() != g.dom()) throw DimensionMismatch("factor_through: domains differ");
  Echelon e = rref(f);
  const size_t r = e.pivots.size();
  LinMap t = LinMap::from_rows(r, f.dom(), e.rows);
  LinMap gj = g.select_columns(e.pivots);
  LinMap diff = g - gj * t;
  for (size_t j = 0; j < f.dom(); ++j) {
    if (diff.col(j).empty()) continue;
    Vec v(f.dom());
    v[j] = Scalar(1);
    for (size_t k = 0; k < r; ++k) v[e.pivots[k]] -= e.rows[k][j];
    throw NoFactor("kernel of the source map is not contained in the kernel of the target", Witness{v, g.apply(v)});
  }
  if (r == 0) return LinMap::zero(g.cod(), f.cod());
  LinMap fj = f.select_columns(e.pivots);
  Echelon rows_e = rref(fj.transpose());
  const std::vector<size_t>& p = rows_e.pivots;
  std::vector<Vec> fp(r, Vec(r));
  for (size_t a = 0; a < r; ++a)
    for (size_t b = 0; b < r; ++b) fp[a][b] = fj.at(p[a], b);
  LinMap fp_inv = invert(LinMap::from_rows(r, r, fp));
  LinMap left(r, f.cod());
  for (size_t k = 0; k < r; ++k) left.set_column(p[k], fp_inv.column(k));
  return gj * left;
}

/// Left inverse of an injective map.
inline LinMap left_inverse(const LinMap& b) { return factor_through(b, id(b.dom())); }

struct Quotient {
  LinMap proj;
  size_t qdim = 0;
  /// Ambient indices whose classes form the quotient basis.
  std::vector<size_t> representatives;
};

/// Projection onto ambient / s with kernel exactly s; the quotient basis is the
/// classes of the non-pivot standard vectors of s's echelon form.
inline Quotient quotient(size_t ambient, const Subspace& s) {
  if (s.ambient() != ambient) throw DimensionMismatch("quotient: subspace of a different space");
  std::vector<long> idx(ambient, -1);
  std::vector<char> is_pivot(ambient, 0);
  for (size_t p : s.pivots()) is_pivot[p] = 1;
  Quotient q;
  for (size_t j = 0; j < ambient; ++j)
    if (!is_pivot[j]) {
      idx[j] = static_cast<long>(q.representatives.size());
      q.representatives.push_back(j);
    }
  q.qdim = q.representatives.size();
  q.proj = LinMap(q.qdim, ambient);
  for (size_t j = 0; j < ambient; ++j)
    if (!is_pivot[j]) q.proj.set_column(j, basis_vector(q.qdim, static_cast<size_t>(idx[j])));
  for (size_t k = 0; k < s.dim(); ++k) {
    const Vec& row = s.basis()[k];
    Vec c(q.qdim);
    for (size_t j = 0; j < ambient; ++j)
      if (!is_pivot[j] && !row[j].is_zero()) c[static_cast<size_t>(idx[j])] = -row[j];
    q.proj.set_column(s.pivots()[k], c);
  }
  return q;
}

}  // namespace mbq
