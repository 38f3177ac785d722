#include "valdisc/rat.hpp"

#include <cctype>
#include <limits>

#include "valdisc/errors.hpp"

namespace valdisc {

namespace {

bool parse_integer(std::string_view s, mpz_class& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rat::Rat(long n, long d) {
  if (d == 0) throw std::domain_error("Rat: zero denominator");
  q_ = mpq_class(n, 1) / mpq_class(d, 1);
  q_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  mpz_class n, d(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, n)) throw InvalidInput("malformed rational '" + std::string(text) + "'");
  } else {
    if (!parse_integer(text.substr(0, slash), n) || !parse_integer(text.substr(slash + 1), d))
      throw InvalidInput("malformed rational '" + std::string(text) + "'");
    if (d == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  }
  mpq_class q(n, d);
  q.canonicalize();
  return Rat(q);
}

std::string Rat::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

long Rat::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p())
    throw std::range_error("Rat " + str() + " is not a machine integer");
  return q_.get_num().get_si();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  q_ /= o.q_;
  return *this;
}

Rat floor(const Rat& a) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), a.raw().get_num_mpz_t(), a.raw().get_den_mpz_t());
  return Rat(mpq_class(f));
}

Rat pow(const Rat& base, long exponent) {
  if (exponent < 0) return pow(Rat(1) / base, -exponent);
  Rat result(1), b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

Rat rat_gcd(const Rat& a, const Rat& b) {
  // gcd(n1/d1, n2/d2) = gcd(n1 d2, n2 d1) / (d1 d2)
  mpz_class x = a.num() * b.den(), y = b.num() * a.den(), g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return Rat(mpq_class(g, a.den() * b.den()));
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

const Rat& ExtRat::value() const {
  if (!finite_) throw std::logic_error("ExtRat: value() of infinite marker");
  return v_;
}

ExtRat ExtRat::parse(std::string_view text) {
  if (text == "inf") return infinity();
  return ExtRat(Rat::parse(text));
}

ExtRat operator*(const Rat& k, const ExtRat& a) {
  if (a.is_infinite()) {
    if (k.sign() <= 0) throw std::domain_error("ExtRat: nonpositive multiple of infinity");
    return ExtRat::infinity();
  }
  return ExtRat(k * a.value());
}

std::ostream& operator<<(std::ostream& os, const ExtRat& r) { return os << r.str(); }

}  // namespace valdisc
