#include "valdisc/poly.hpp"

namespace valdisc {

int min_irreducible_factor_degree(const Poly<FqElem>& f) {
  if (f.degree() < 1) throw InvalidInput("min_irreducible_factor_degree: constant polynomial");
  const FqElem zero = f.zero();
  const FqElem one = one_like(zero);
  const Poly<FqElem> X(zero, {zero, one});
  const unsigned long long q = zero.field()->q();
  Poly<FqElem> h = X;
  for (int d = 1; d <= f.degree(); ++d) {
    h = powmod(h, q, f);
    auto g = gcd(f, h - X);
    if (g.degree() >= 1) return d;
  }
  return f.degree();
}

}  // namespace valdisc
