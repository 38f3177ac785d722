#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace valdisc {

/// Exact rational number, always in lowest terms with positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(long n, long d);
  explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "a", "-a", "a/b". Throws InvalidInput on malformed text or b = 0.
  static Rat parse(std::string_view text);

  std::string str() const;
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  /// Numerator as a machine integer; throws if it does not fit or the value is not integral.
  long to_long() const;

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }
Rat floor(const Rat& a);
Rat pow(const Rat& base, long exponent);
/// Generator of the subgroup a·Z + b·Z of Q (nonnegative).
Rat rat_gcd(const Rat& a, const Rat& b);

std::ostream& operator<<(std::ostream& os, const Rat& r);

/// Rat extended by +infinity. Used for normalized distances of elements that
/// already lie in the target field.
class ExtRat {
 public:
  ExtRat() = default;
  ExtRat(Rat v) : finite_(true), v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static ExtRat infinity() {
    ExtRat r;
    r.finite_ = false;
    return r;
  }

  bool is_finite() const { return finite_; }
  bool is_infinite() const { return !finite_; }
  /// Throws std::logic_error for the infinite marker.
  const Rat& value() const;
  std::string str() const { return finite_ ? v_.str() : "inf"; }
  static ExtRat parse(std::string_view text);

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_ || !b.finite_) {
      if (a.finite_ == b.finite_) return std::strong_ordering::equal;
      return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.v_ <=> b.v_;
  }
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return ExtRat(a.v_ + b.v_);
  }
  friend ExtRat operator*(const Rat& k, const ExtRat& a);

 private:
  bool finite_ = true;
  Rat v_;
};

std::ostream& operator<<(std::ostream& os, const ExtRat& r);

}  // namespace valdisc
