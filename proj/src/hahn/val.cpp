#include "valdisc/val.hpp"

#include "valdisc/errors.hpp"

namespace valdisc {

const Rat& Val::value() const {
  if (kind_ != Kind::Exact) throw PrecisionExhausted("valuation is " + str() + ", not exact");
  return q_;
}

const Rat& Val::bound() const {
  if (kind_ == Kind::Infinity) throw std::logic_error("Val::bound() of infinity");
  return q_;
}

std::string Val::str() const {
  switch (kind_) {
    case Kind::Exact:
      return q_.str();
    case Kind::AtLeast:
      return "AtLeast(" + q_.str() + ")";
    case Kind::Infinity:
      break;
  }
  return "inf";
}

Val Val::parse(std::string_view text) {
  if (text == "inf") return infinity();
  constexpr std::string_view prefix = "AtLeast(";
  if (text.substr(0, prefix.size()) == prefix && !text.empty() && text.back() == ')')
    return at_least(Rat::parse(text.substr(prefix.size(), text.size() - prefix.size() - 1)));
  return exact(Rat::parse(text));
}

Val operator+(const Val& a, const Val& b) {
  if (a.is_infinite() || b.is_infinite()) return Val::infinity();
  Rat s = a.bound() + b.bound();
  if (a.is_exact() && b.is_exact()) return Val::exact(s);
  return Val::at_least(s);
}

Val operator+(const Val& a, const Rat& shift) {
  if (a.is_infinite()) return a;
  return a.is_exact() ? Val::exact(a.bound() + shift) : Val::at_least(a.bound() + shift);
}

Val operator-(const Val& a, const Rat& shift) { return a + (-shift); }

Val vmin(const Val& a, const Val& b) {
  if (a.is_infinite()) return b;
  if (b.is_infinite()) return a;
  if (a.is_exact() && b.is_exact()) return Val::exact(min(a.bound(), b.bound()));
  if (a.is_exact() && a.bound() <= b.bound()) return a;
  if (b.is_exact() && b.bound() <= a.bound()) return b;
  return Val::at_least(min(a.bound(), b.bound()));
}

std::ostream& operator<<(std::ostream& os, const Val& v) { return os << v.str(); }

}  // namespace valdisc
