#include "valdisc/fq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "valdisc/errors.hpp"

namespace valdisc {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Product of two residues (digit vectors of length k) modulo the monic modulus.
std::vector<int> mulmod(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& m, int p) {
  const std::size_t k = m.size() - 1;
  std::vector<long> prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) prod[i + j] += static_cast<long>(a[i]) * b[j];
  }
  for (std::size_t d = 2 * k; d-- > k;) {
    long c = prod[d] % p;
    if (c == 0) continue;
    // w^d = -sum_{i<k} m_i w^{d-k+i}
    for (std::size_t i = 0; i < k; ++i) prod[d - k + i] -= c * m[i];
    prod[d] = 0;
  }
  std::vector<int> r(k);
  for (std::size_t i = 0; i < k; ++i) r[i] = static_cast<int>(((prod[i] % p) + p) % p);
  return r;
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<int, std::vector<int>>, std::unique_ptr<FqField>> fields;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

const FqField* FqField::get(int p, const std::vector<int>& modulus) {
  Registry& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto key = std::make_pair(p, modulus);
  auto it = reg.fields.find(key);
  if (it != reg.fields.end()) return it->second.get();
  auto* f = new FqField(p, modulus);
  reg.fields.emplace(key, std::unique_ptr<FqField>(f));
  return f;
}

FqField::FqField(int p, std::vector<int> modulus) : p_(p), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) throw InvalidInput("F_q characteristic " + std::to_string(p_) + " is not prime");
  if (modulus_.size() < 2 || modulus_.back() != 1) throw InvalidInput("F_q modulus must be monic of degree >= 1");
  for (int& c : modulus_) {
    if (c < 0 || c >= p_) throw InvalidInput("F_q modulus coefficients must lie in [0, p)");
  }
  const int k = degree();
  std::uint64_t q = 1;
  pow_p_.assign(k + 1, 1);
  for (int i = 0; i < k; ++i) {
    q *= static_cast<std::uint64_t>(p_);
    if (q > (1u << 16)) throw InvalidInput("F_q too large (q > 65536)");
    pow_p_[i + 1] = static_cast<std::uint32_t>(q);
  }
  q_ = static_cast<std::uint32_t>(q);

  log_.assign(q_, 0);
  exp_.assign(q_, 0);
  if (q_ == 2) {
    exp_[0] = 1;
    return;
  }
  // Search for a primitive element; reducible moduli have no element of order q-1.
  for (std::uint32_t cand = 2; cand < q_; ++cand) {
    std::vector<int> g = digits(cand), cur = digits(1);
    std::vector<bool> seen(q_, false);
    std::uint32_t order = 0;
    bool ok = true;
    for (std::uint32_t e = 0; e < q_ - 1; ++e) {
      std::uint32_t v = from_digits(cur);
      if (v == 0 || seen[v]) {
        ok = false;
        break;
      }
      seen[v] = true;
      exp_[e] = v;
      cur = mulmod(cur, g, modulus_, p_);
      ++order;
    }
    if (ok && from_digits(cur) == 1 && order == q_ - 1) {
      for (std::uint32_t e = 0; e < q_ - 1; ++e) log_[exp_[e]] = e;
      return;
    }
  }
  throw InvalidInput("F_q modulus is not irreducible over F_" + std::to_string(p_));
}

std::vector<int> FqField::digits(std::uint32_t a) const {
  std::vector<int> d(degree());
  for (int i = 0; i < degree(); ++i) {
    d[i] = static_cast<int>(a % static_cast<std::uint32_t>(p_));
    a /= static_cast<std::uint32_t>(p_);
  }
  return d;
}

std::uint32_t FqField::from_digits(const std::vector<int>& d) const {
  std::uint32_t v = 0;
  for (int i = degree() - 1; i >= 0; --i) {
    int c = i < static_cast<int>(d.size()) ? ((d[i] % p_) + p_) % p_ : 0;
    v = v * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(c);
  }
  return v;
}

std::uint32_t FqField::from_int(long n) const {
  long r = ((n % p_) + p_) % p_;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t FqField::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (degree() == 1) return (a + b) % q_;
  std::uint32_t r = 0;
  const auto P = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < degree(); ++i) {
    std::uint32_t s = (a % P + b % P) % P;
    r += s * pow_p_[i];
    a /= P;
    b /= P;
  }
  return r;
}

std::uint32_t FqField::neg(std::uint32_t a) const {
  if (p_ == 2) return a;
  if (degree() == 1) return a == 0 ? 0 : q_ - a;
  std::uint32_t r = 0;
  const auto P = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < degree(); ++i) {
    std::uint32_t d = a % P;
    r += ((P - d) % P) * pow_p_[i];
    a /= P;
  }
  return r;
}

std::uint32_t FqField::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

std::uint32_t FqField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("F_q: inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t FqField::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  // Repeated squaring on discrete logs.
  std::uint64_t order = q_ - 1, l = log_[a], acc = 0;
  std::uint64_t base = l % order;
  while (e > 0) {
    if (e & 1) acc = (acc + base) % order;
    base = (base * 2) % order;
    e >>= 1;
  }
  return exp_[acc];
}

std::uint32_t FqField::pth_root(std::uint32_t a) const { return pow(a, q_ / static_cast<std::uint32_t>(p_)); }

std::string FqField::describe() const {
  std::ostringstream os;
  os << "F_" << q_;
  if (degree() > 1) {
    os << "[w]/(";
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      if (modulus_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0 || modulus_[i] != 1) os << modulus_[i];
      if (i > 0) os << (i > 1 ? "w^" + std::to_string(i) : "w");
    }
    os << ")";
  }
  return os.str();
}

FqElem FqElem::inverse() const { return {f_, f_->inv(v_)}; }

std::string FqElem::str() const {
  if (f_->degree() == 1) return std::to_string(v_);
  std::vector<int> d = coefficients();
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
    if (d[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || d[i] != 1) os << d[i];
    if (i > 0) os << (i > 1 ? "w^" + std::to_string(i) : "w");
  }
  if (first) os << "0";
  return os.str();
}

static void check_same(const FqElem& a, const FqElem& b) {
  if (a.field() != b.field()) throw InvalidInput("F_q: mismatched field descriptors");
}

FqElem operator+(const FqElem& a, const FqElem& b) {
  check_same(a, b);
  return {a.f_, a.f_->add(a.v_, b.v_)};
}
FqElem operator-(const FqElem& a, const FqElem& b) {
  check_same(a, b);
  return {a.f_, a.f_->sub(a.v_, b.v_)};
}
FqElem operator*(const FqElem& a, const FqElem& b) {
  check_same(a, b);
  return {a.f_, a.f_->mul(a.v_, b.v_)};
}

std::ostream& operator<<(std::ostream& os, const FqElem& a) { return os << a.str(); }

}  // namespace valdisc
