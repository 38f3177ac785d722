#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "valdisc/rat.hpp"

namespace valdisc {

/// Result of a valuation: an exact rational, a certified "at least q" when
/// truncation hides the leading term, or +infinity for a literal zero.
class Val {
 public:
  enum class Kind { Exact, AtLeast, Infinity };

  static Val exact(Rat q) { return Val(Kind::Exact, std::move(q)); }
  static Val at_least(Rat q) { return Val(Kind::AtLeast, std::move(q)); }
  static Val infinity() { return Val(Kind::Infinity, Rat(0)); }

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_infinite() const { return kind_ == Kind::Infinity; }
  bool is_at_least() const { return kind_ == Kind::AtLeast; }
  /// The exact value; throws PrecisionExhausted otherwise.
  const Rat& value() const;
  /// The certified lower bound (exact value or AtLeast bound); throws for Infinity.
  const Rat& bound() const;

  /// "3/8", "AtLeast(-1/256)" or "inf".
  std::string str() const;
  static Val parse(std::string_view text);

  friend bool operator==(const Val& a, const Val& b) {
    return a.kind_ == b.kind_ && (a.kind_ == Kind::Infinity || a.q_ == b.q_);
  }

 private:
  Val(Kind k, Rat q) : kind_(k), q_(std::move(q)) {}
  Kind kind_;
  Rat q_;
};

/// Valuation of a product: v(a) + v(b).
Val operator+(const Val& a, const Val& b);
Val operator+(const Val& a, const Rat& shift);
Val operator-(const Val& a, const Rat& shift);
/// Sound minimum: Exact whenever an exact value is at or below every other bound.
Val vmin(const Val& a, const Val& b);

std::ostream& operator<<(std::ostream& os, const Val& v);

}  // namespace valdisc
