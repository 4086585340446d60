#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mbq {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

namespace detail {

/// Exact rational held in machine words while it fits, promoted to mpq_class otherwise.
/// The representation is canonical: small whenever the reduced value fits, so equality is structural.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : n_(v) {  // NOLINT(google-explicit-constructor)
    if (v == INT64_MIN) set_big(mpq_class(v));
  }
  explicit Rat(const mpq_class& q) { set_big(q); }
  Rat(const Rat& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Rat(Rat&&) noexcept = default;
  Rat& operator=(const Rat& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rat& operator=(Rat&&) noexcept = default;

  int sign() const { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), n_);
    mpz_set_si(q.get_den_mpz_t(), d_);
    return q;
  }

  Rat operator-() const {
    if (big_) return Rat(mpq_class(-*big_));
    Rat r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return Rat(mpq_class(a.to_mpq() + b.to_mpq()));
    if (b.n_ == 0) return a;
    if (a.n_ == 0) return b;
    const int64_t g = std::gcd(a.d_, b.d_);
    const i128 num = i128(a.n_) * (b.d_ / g) + i128(b.n_) * (a.d_ / g);
    const i128 den = i128(a.d_) * (b.d_ / g);
    return reduce(num, den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return Rat(mpq_class(a.to_mpq() * b.to_mpq()));
    if (a.n_ == 0 || b.n_ == 0) return Rat();
    const int64_t g1 = std::gcd(a.n_, b.d_), g2 = std::gcd(b.n_, a.d_);
    return reduce(i128(a.n_ / g1) * (b.n_ / g2), i128(a.d_ / g2) * (b.d_ / g1));
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.sign() == 0) throw Error("division by zero");
    if (a.big_ || b.big_) return Rat(mpq_class(a.to_mpq() / b.to_mpq()));
    Rat inv;
    inv.n_ = b.n_ < 0 ? -b.d_ : b.d_;
    inv.d_ = b.n_ < 0 ? -b.n_ : b.n_;
    return a * inv;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return a.big_ && b.big_ && *a.big_ == *b.big_;
    return a.n_ == b.n_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

 private:
  using i128 = __int128;

  static bool fits(i128 v) { return v >= -i128(INT64_MAX) && v <= i128(INT64_MAX); }

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static mpz_class to_mpz(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    const uint64_t limbs[2] = {static_cast<uint64_t>(u), static_cast<uint64_t>(u >> 64)};
    mpz_class z;
    mpz_import(z.get_mpz_t(), 2, -1, sizeof(uint64_t), 0, 0, limbs);
    if (neg) z = -z;
    return z;
  }

  /// num / den with den > 0, reduced and stored in the smallest form.
  static Rat reduce(i128 num, i128 den) {
    if (num == 0) return Rat();
    const i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (fits(num) && fits(den)) {
      Rat r;
      r.n_ = static_cast<int64_t>(num);
      r.d_ = static_cast<int64_t>(den);
      return r;
    }
    Rat r;
    r.big_ = std::make_unique<mpq_class>(to_mpz(num), to_mpz(den));
    return r;
  }

  void set_big(mpq_class q) {
    q.canonicalize();
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() && q.get_num() != INT64_MIN &&
        q.get_den() != INT64_MIN) {
      n_ = q.get_num().get_si();
      d_ = q.get_den().get_si();
      big_.reset();
    } else {
      n_ = 0;
      d_ = 1;
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  int64_t n_ = 0;
  int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace detail

/// Element re + im*i of the Gaussian rationals.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& re, const mpq_class& im = 0) : re_(re), im_(im) {}

  static Scalar rational(long num, long den) { return Scalar(mpq_class(num, den)); }
  static Scalar i() { return Scalar(0, 1); }

  mpq_class re() const { return re_.to_mpq(); }
  mpq_class im() const { return im_.to_mpq(); }
  bool is_zero() const { return re_.sign() == 0 && im_.sign() == 0; }
  bool is_real() const { return im_.sign() == 0; }
  bool is_one() const { return im_.sign() == 0 && re_.is_one(); }
  Scalar conj() const { return Scalar(Parts{}, re_, -im_); }
  Scalar operator-() const { return Scalar(Parts{}, -re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    if (o.re_.sign() != 0) re_ += o.re_;
    if (o.im_.sign() != 0) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    if (o.re_.sign() != 0) re_ -= o.re_;
    if (o.im_.sign() != 0) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  /// Accumulates a*b into this.
  void add_product(const Scalar& a, const Scalar& b) { *this += a * b; }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.im_.sign() == 0 && b.im_.sign() == 0) return Scalar(Parts{}, a.re_ * b.re_, detail::Rat());
    return Scalar(Parts{}, a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw Error("division by zero");
    if (b.im_.sign() == 0) return Scalar(Parts{}, a.re_ / b.re_, a.im_.sign() == 0 ? detail::Rat() : a.im_ / b.re_);
    const detail::Rat n2 = b.re_ * b.re_ + b.im_ * b.im_;
    return Scalar(Parts{}, (a.re_ * b.re_ + a.im_ * b.im_) / n2, (a.im_ * b.re_ - a.re_ * b.im_) / n2);
  }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Canonical text: "a", "a/b", or "<re>+<im> i" / "<re>-<|im|> i".
  std::string str() const {
    if (im_.sign() == 0) return re_.to_mpq().get_str();
    std::string s = re_.to_mpq().get_str();
    s += im_.sign() < 0 ? "-" : "+";
    s += mpq_class(abs(im_.to_mpq())).get_str();
    s += " i";
    return s;
  }

  static Scalar parse(std::string_view text) {
    std::string t(text);
    if (t.empty()) throw ParseError("empty scalar");
    if (t.back() != 'i') return Scalar(parse_rational(t, text));
    // Imaginary part present: "<q> i", "<q>i", "<q>+<q> i", "<q>-<q> i".
    std::string body = t.substr(0, t.size() - 1);
    while (!body.empty() && body.back() == ' ') body.pop_back();
    if (body.empty()) return Scalar(0, 1);
    size_t split = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) return Scalar(0, parse_imag(body, text));
    mpq_class re = parse_rational(body.substr(0, split), text);
    mpq_class im = parse_imag(body.substr(split), text);
    return Scalar(re, im);
  }

 private:
  static mpq_class parse_imag(const std::string& s, std::string_view whole) {
    if (s == "+" || s.empty()) return 1;
    if (s == "-") return -1;
    return parse_rational(s, whole);
  }

  static mpq_class parse_rational(const std::string& s, std::string_view whole) {
    size_t k = 0;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
    size_t digits = 0, slash = std::string::npos;
    for (size_t j = k; j < s.size(); ++j) {
      char c = s[j];
      if (c >= '0' && c <= '9') {
        ++digits;
      } else if (c == '/' && slash == std::string::npos && digits > 0) {
        slash = j;
        digits = 0;
      } else {
        throw ParseError("not an exact scalar: \"" + std::string(whole) + "\"");
      }
    }
    if (digits == 0) throw ParseError("not an exact scalar: \"" + std::string(whole) + "\"");
    std::string clean = s[0] == '+' ? s.substr(1) : s;
    mpq_class q;
    if (q.set_str(clean, 10) != 0) throw ParseError("not an exact scalar: \"" + std::string(whole) + "\"");
    if (slash != std::string::npos && sgn(q.get_den()) == 0) throw ParseError("zero denominator in \"" + std::string(whole) + "\"");
    q.canonicalize();
    return q;
  }

  struct Parts {};
  Scalar(Parts, detail::Rat re, detail::Rat im) : re_(std::move(re)), im_(std::move(im)) {}

  detail::Rat re_;
  detail::Rat im_;
};

}  // namespace mbq
