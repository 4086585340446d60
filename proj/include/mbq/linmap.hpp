#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mbq/scalar.hpp"

namespace mbq {

using Vec = std::vector<Scalar>;

/// Linear map between coordinate spaces, stored column by column.
/// Column j holds the image of the j-th domain basis vector as a sorted
/// list of nonzero (row, value) pairs.
class LinMap {
 public:
  using Entry = std::pair<uint32_t, Scalar>;
  using Column = std::vector<Entry>;

  LinMap() = default;
  LinMap(size_t cod, size_t dom) : cod_(cod), dom_(dom), cols_(dom) {}

  static LinMap zero(size_t cod, size_t dom) { return LinMap(cod, dom); }

  static LinMap identity(size_t n) {
    LinMap r(n, n);
    for (size_t j = 0; j < n; ++j) r.cols_[j].emplace_back(static_cast<uint32_t>(j), Scalar(1));
    return r;
  }

  /// Builds a map from a row-major table of size cod x dom.
  static LinMap from_rows(size_t cod, size_t dom, const std::vector<Vec>& rows) {
    if (rows.size() != cod) throw DimensionMismatch("row count differs from codomain");
    LinMap r(cod, dom);
    for (size_t i = 0; i < cod; ++i) {
      if (rows[i].size() != dom) throw DimensionMismatch("row length differs from domain");
      for (size_t j = 0; j < dom; ++j)
        if (!rows[i][j].is_zero()) r.cols_[j].emplace_back(static_cast<uint32_t>(i), rows[i][j]);
    }
    return r;
  }

  static LinMap from_columns(size_t cod, const std::vector<Vec>& cols) {
    LinMap r(cod, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) r.set_column(j, cols[j]);
    return r;
  }

  /// Row vector (1 x n) map.
  static LinMap row(const Vec& v) { return from_rows(1, v.size(), {v}); }
  /// Column vector (n x 1) map.
  static LinMap column_map(const Vec& v) { return from_columns(v.size(), {v}); }

  size_t cod() const { return cod_; }
  size_t dom() const { return dom_; }

  const Column& col(size_t j) const { return cols_[j]; }

  void set_column(size_t j, const Vec& v) {
    if (v.size() != cod_) throw DimensionMismatch("column length differs from codomain");
    Column c;
    for (size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) c.emplace_back(static_cast<uint32_t>(i), v[i]);
    cols_[j] = std::move(c);
  }

  Scalar at(size_t i, size_t j) const {
    const Column& c = cols_[j];
    auto it = std::lower_bound(c.begin(), c.end(), i, [](const Entry& e, size_t r) { return e.first < r; });
    if (it != c.end() && it->first == i) return it->second;
    return Scalar();
  }

  Vec column(size_t j) const {
    Vec v(cod_);
    for (const auto& [i, x] : cols_[j]) v[i] = x;
    return v;
  }

  std::vector<Vec> dense_rows() const {
    std::vector<Vec> rows(cod_, Vec(dom_));
    for (size_t j = 0; j < dom_; ++j)
      for (const auto& [i, x] : cols_[j]) rows[i][j] = x;
    return rows;
  }

  size_t nonzeros() const {
    size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
  }

  bool is_zero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const Column& c) { return c.empty(); });
  }

  Vec apply(const Vec& v) const {
    if (v.size() != dom_) throw DimensionMismatch("vector length differs from domain");
    Vec out(cod_);
    for (size_t j = 0; j < dom_; ++j) {
      if (v[j].is_zero()) continue;
      for (const auto& [i, x] : cols_[j]) out[i].add_product(x, v[j]);
    }
    return out;
  }

  /// Entrywise complex conjugate of the matrix.
  LinMap conj() const {
    LinMap r = *this;
    for (auto& c : r.cols_)
      for (auto& e : c) e.second = e.second.conj();
    return r;
  }

  LinMap transpose() const {
    LinMap r(dom_, cod_);
    for (size_t j = 0; j < dom_; ++j)
      for (const auto& [i, x] : cols_[j]) r.cols_[i].emplace_back(static_cast<uint32_t>(j), x);
    return r;
  }

  /// Restriction to a subset of domain basis vectors, in the given order.
  LinMap select_columns(const std::vector<size_t>& js) const {
    LinMap r(cod_, js.size());
    for (size_t k = 0; k < js.size(); ++k) r.cols_[k] = cols_[js[k]];
    return r;
  }

  /// Composition: (*this)(g(v)).
  LinMap operator*(const LinMap& g) const {
    if (g.cod_ != dom_)
      throw DimensionMismatch("compose: inner dimensions " + std::to_string(dom_) + " and " + std::to_string(g.cod_));
    LinMap r(cod_, g.dom_);
    Vec acc(cod_);
    std::vector<char> mark(cod_, 0);
    std::vector<uint32_t> touched;
    for (size_t j = 0; j < g.dom_; ++j) {
      touched.clear();
      for (const auto& [k, gk] : g.cols_[j]) {
        for (const auto& [i, fik] : cols_[k]) {
          if (!mark[i]) {
            mark[i] = 1;
            touched.push_back(i);
          }
          acc[i].add_product(fik, gk);
        }
      }
      std::sort(touched.begin(), touched.end());
      Column& out = r.cols_[j];
      for (uint32_t i : touched) {
        if (!acc[i].is_zero()) out.emplace_back(i, std::move(acc[i]));
        acc[i] = Scalar();
        mark[i] = 0;
      }
    }
    return r;
  }

  LinMap& operator+=(const LinMap& o) { return *this = combine(*this, o, 1); }
  LinMap& operator-=(const LinMap& o) { return *this = combine(*this, o, -1); }
  friend LinMap operator+(const LinMap& a, const LinMap& b) { return combine(a, b, 1); }
  friend LinMap operator-(const LinMap& a, const LinMap& b) { return combine(a, b, -1); }
  friend LinMap operator*(const Scalar& s, const LinMap& a) {
    LinMap r(a.cod_, a.dom_);
    if (s.is_zero()) return r;
    for (size_t j = 0; j < a.dom_; ++j) {
      r.cols_[j].reserve(a.cols_[j].size());
      for (const auto& [i, x] : a.cols_[j]) r.cols_[j].emplace_back(i, s * x);
    }
    return r;
  }
  LinMap operator-() const { return Scalar(-1) * *this; }

  friend bool operator==(const LinMap& a, const LinMap& b) {
    return a.cod_ == b.cod_ && a.dom_ == b.dom_ && a.cols_ == b.cols_;
  }
  friend bool operator!=(const LinMap& a, const LinMap& b) { return !(a == b); }

  /// Kronecker product; basis (i (x) j) is index i * dim(b) + j.
  friend LinMap kron(const LinMap& a, const LinMap& b) {
    LinMap r(a.cod_ * b.cod_, a.dom_ * b.dom_);
    for (size_t ja = 0; ja < a.dom_; ++ja) {
      for (size_t jb = 0; jb < b.dom_; ++jb) {
        Column& out = r.cols_[ja * b.dom_ + jb];
        out.reserve(a.cols_[ja].size() * b.cols_[jb].size());
        for (const auto& [ia, xa] : a.cols_[ja])
          for (const auto& [ib, xb] : b.cols_[jb])
            out.emplace_back(static_cast<uint32_t>(ia * b.cod_ + ib), xa * xb);
      }
    }
    return r;
  }

 private:
  static LinMap combine(const LinMap& a, const LinMap& b, int sign) {
    if (a.cod_ != b.cod_ || a.dom_ != b.dom_) throw DimensionMismatch("sum of maps with different shapes");
    LinMap r(a.cod_, a.dom_);
    for (size_t j = 0; j < a.dom_; ++j) {
      const Column& x = a.cols_[j];
      const Column& y = b.cols_[j];
      Column& out = r.cols_[j];
      size_t p = 0, q = 0;
      while (p < x.size() || q < y.size()) {
        if (q == y.size() || (p < x.size() && x[p].first < y[q].first)) {
          out.push_back(x[p++]);
        } else if (p == x.size() || y[q].first < x[p].first) {
          out.emplace_back(y[q].first, sign > 0 ? y[q].second : -y[q].second);
          ++q;
        } else {
          Scalar s = sign > 0 ? x[p].second + y[q].second : x[p].second - y[q].second;
          if (!s.is_zero()) out.emplace_back(x[p].first, std::move(s));
          ++p;
          ++q;
        }
      }
    }
    return r;
  }

  size_t cod_ = 0;
  size_t dom_ = 0;
  std::vector<Column> cols_;
};

/// Kronecker product of several factors, left to right.
template <class... Rest>
LinMap kron(const LinMap& a, const LinMap& b, const LinMap& c, const Rest&... rest) {
  return kron(kron(a, b), c, rest...);
}

inline LinMap id(size_t n) { return LinMap::identity(n); }

/// Map permuting k tensor factors: input factor k lands in output slot perm[k].
inline LinMap permutation_map(const std::vector<size_t>& perm, const std::vector<size_t>& dims) {
  const size_t k = perm.size();
  if (k != dims.size()) throw Error("permutation and dimension list differ in length");
  std::vector<char> seen(k, 0);
  for (size_t p : perm) {
    if (p >= k || seen[p]) throw Error("malformed permutation");
    seen[p] = 1;
  }
  std::vector<size_t> out_dims(k);
  for (size_t s = 0; s < k; ++s) out_dims[perm[s]] = dims[s];
  size_t total = 1;
  for (size_t d : dims) total *= d;
  LinMap r(total, total);
  std::vector<size_t> digits(k, 0);
  for (size_t j = 0; j < total; ++j) {
    size_t rest = j;
    for (size_t s = k; s-- > 0;) {
      digits[s] = rest % dims[s];
      rest /= dims[s];
    }
    size_t row = 0;
    for (size_t t = 0; t < k; ++t) {
      size_t src = 0;
      while (perm[src] != t) ++src;
      row = row * out_dims[t] + digits[src];
    }
    r.set_column(j, [&] {
      Vec v(total);
      v[row] = Scalar(1);
      return v;
    }());
  }
  return r;
}

/// The flip a (x) b -> b (x) a on an n_a (x) n_b space.
inline LinMap flip(size_t na, size_t nb) { return permutation_map({1, 0}, {na, nb}); }

/// Basis vector e_j of length n.
inline Vec basis_vector(size_t n, size_t j) {
  Vec v(n);
  v[j] = Scalar(1);
  return v;
}

inline Vec kron_vec(const Vec& a, const Vec& b) {
  Vec r(a.size() * b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r[i * b.size() + j] = a[i] * b[j];
  }
  return r;
}

inline bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

/// Antilinear map F(v) = M conj(v); the conjugation travels with the type.
class AntilinMap {
 public:
  AntilinMap() = default;
  explicit AntilinMap(LinMap linear_part) : m_(std::move(linear_part)) {}

  const LinMap& linear_part() const { return m_; }
  size_t cod() const { return m_.cod(); }
  size_t dom() const { return m_.dom(); }

  Vec apply(const Vec& v) const {
    Vec c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = v[i].conj();
    return m_.apply(c);
  }

  friend LinMap operator*(const AntilinMap& f, const AntilinMap& g) { return f.m_ * g.m_.conj(); }
  friend AntilinMap operator*(const AntilinMap& f, const LinMap& g) { return AntilinMap(f.m_ * g.conj()); }
  friend AntilinMap operator*(const LinMap& f, const AntilinMap& g) { return AntilinMap(f * g.m_); }
  friend AntilinMap operator+(const AntilinMap& f, const AntilinMap& g) { return AntilinMap(f.m_ + g.m_); }
  friend AntilinMap operator-(const AntilinMap& f, const AntilinMap& g) { return AntilinMap(f.m_ - g.m_); }
  friend AntilinMap operator-(const AntilinMap& f) { return AntilinMap(-f.m_); }
  friend bool operator==(const AntilinMap& f, const AntilinMap& g) { return f.m_ == g.m_; }
  friend bool operator!=(const AntilinMap& f, const AntilinMap& g) { return !(f == g); }

  friend AntilinMap kron(const AntilinMap& f, const AntilinMap& g) { return AntilinMap(kron(f.m_, g.m_)); }

 private:
  LinMap m_;
};

}  // namespace mbq
