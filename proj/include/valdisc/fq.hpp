#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace valdisc {

/// Finite field F_q = F_p[w]/(m(w)) with table-driven arithmetic.
///
/// Descriptors are interned: FqField::get returns the same pointer for the same
/// (p, modulus), so element compatibility is a pointer comparison. Descriptors
/// live for the whole process. q is limited to 2^16.
class FqField {
 public:
  /// `modulus` is monic, low-to-high, over F_p, irreducible. Degree-1 moduli
  /// give the prime field; the canonical one is {0, 1}.
  static const FqField* get(int p, const std::vector<int>& modulus);
  static const FqField* prime(int p) { return get(p, {0, 1}); }

  int p() const { return p_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  std::uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// Inverse Frobenius: the unique r with r^p = a.
  std::uint32_t pth_root(std::uint32_t a) const;

  std::vector<int> digits(std::uint32_t a) const;
  std::uint32_t from_digits(const std::vector<int>& d) const;
  /// Image of an integer under Z -> F_p -> F_q.
  std::uint32_t from_int(long n) const;

  std::string describe() const;

 private:
  FqField(int p, std::vector<int> modulus);

  int p_;
  std::vector<int> modulus_;
  std::uint32_t q_;
  std::vector<std::uint32_t> log_, exp_;
  std::vector<std::uint32_t> pow_p_;  // p^i for digit packing
};

/// Element of an FqField.
class FqElem {
 public:
  FqElem() = default;
  FqElem(const FqField* f, std::uint32_t v) : f_(f), v_(v) {}
  static FqElem zero(const FqField* f) { return {f, 0}; }
  static FqElem one(const FqField* f) { return {f, 1}; }
  static FqElem from_int(const FqField* f, long n) { return {f, f->from_int(n)}; }

  const FqField* field() const { return f_; }
  std::uint32_t raw() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  FqElem inverse() const;
  FqElem pow(std::uint64_t e) const { return {f_, f_->pow(v_, e)}; }
  FqElem frobenius() const { return pow(static_cast<std::uint64_t>(f_->p())); }
  FqElem pth_root() const { return {f_, f_->pth_root(v_)}; }
  std::vector<int> coefficients() const { return f_->digits(v_); }
  std::string str() const;

  friend FqElem operator+(const FqElem& a, const FqElem& b);
  friend FqElem operator-(const FqElem& a, const FqElem& b);
  friend FqElem operator*(const FqElem& a, const FqElem& b);
  friend FqElem operator/(const FqElem& a, const FqElem& b) { return a * b.inverse(); }
  friend FqElem operator-(const FqElem& a) { return {a.f_, a.f_->neg(a.v_)}; }
  FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
  FqElem& operator-=(const FqElem& o) { return *this = *this - o; }
  FqElem& operator*=(const FqElem& o) { return *this = *this * o; }
  friend bool operator==(const FqElem& a, const FqElem& b) { return a.f_ == b.f_ && a.v_ == b.v_; }

 private:
  const FqField* f_ = nullptr;
  std::uint32_t v_ = 0;
};

std::ostream& operator<<(std::ostream& os, const FqElem& a);

// Ring-traits hooks used by the generic Poly and Matrix templates.
enum class ZeroState { Zero, NonZero, Unknown };
inline FqElem zero_like(const FqElem& a) { return FqElem::zero(a.field()); }
inline FqElem one_like(const FqElem& a) { return FqElem::one(a.field()); }
inline ZeroState zero_state(const FqElem& a) { return a.is_zero() ? ZeroState::Zero : ZeroState::NonZero; }
inline FqElem inverse(const FqElem& a) { return a.inverse(); }

}  // namespace valdisc
