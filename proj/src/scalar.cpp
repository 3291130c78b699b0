#include "ainf/scalar.hpp"

#include <cctype>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace ainf {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (p > (1u << 31)) throw std::invalid_argument("prime too large for residue arithmetic");
  return Field(p);
}

Field Field::parse(std::string_view text) {
  if (text == "Q") return rationals();
  std::string_view digits;
  if (text.starts_with("Fp:")) {
    digits = text.substr(3);
  } else if (text.starts_with("F") && text.size() > 1) {
    digits = text.substr(1);
  } else {
    throw std::invalid_argument("unknown field descriptor '" + std::string(text) + "'");
  }
  std::uint32_t p = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw std::invalid_argument("bad prime in field descriptor '" + std::string(text) + "'");
  return prime(p);
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

namespace {

std::int64_t mod(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return r < 0 ? r + p : r;
}

std::int64_t mod_mpz(const mpz_class& v, std::uint32_t p) {
  mpz_class r = v % p;
  if (r < 0) r += p;
  return r.get_si();
}

std::int64_t mod_inverse(std::int64_t a, std::uint32_t p) {
  // Fermat; p fits in 31 bits so products fit in int64.
  std::int64_t result = 1, base = a, e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

}  // namespace

Scalar Scalar::rational(const mpq_class& q) {
  Scalar s;
  s.q_ = q;
  s.q_.canonicalize();
  return s;
}

Scalar Scalar::residue(std::int64_t v, std::uint32_t p) {
  Scalar s;
  s.p_ = p;
  s.r_ = mod(v, p);
  return s;
}

Scalar Scalar::zero(const Field& f) { return f.is_rational() ? Scalar() : residue(0, f.characteristic()); }
Scalar Scalar::one(const Field& f) { return f.is_rational() ? Scalar(1) : residue(1, f.characteristic()); }

Scalar Scalar::parse(std::string_view text, const Field& f) {
  if (text.empty()) throw std::invalid_argument("empty scalar");
  std::string s(text);
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw std::invalid_argument("malformed scalar '" + s + "'");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed scalar '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in scalar '" + s + "'");
  q.canonicalize();
  return rational(q).in(f);
}

Scalar Scalar::in(const Field& f) const {
  if (f.is_rational()) {
    if (p_ != 0) throw std::invalid_argument("cannot lift a residue to the rationals");
    return *this;
  }
  if (p_ != 0) {
    if (p_ != f.characteristic()) throw std::invalid_argument("residues of different characteristic");
    return *this;
  }
  return to_residue(f.characteristic());
}

Scalar Scalar::to_residue(std::uint32_t p) const {
  if (p_ != 0) return *this;
  std::int64_t den = mod_mpz(q_.get_den(), p);
  if (den == 0)
    throw std::invalid_argument("denominator of " + q_.get_str() + " is not invertible mod " + std::to_string(p));
  return residue(mod_mpz(q_.get_num(), p) * mod_inverse(den, p) % p, p);
}

void Scalar::unify_with(const Scalar& o) {
  if (p_ == o.p_) return;
  if (p_ == 0) {
    *this = to_residue(o.p_);
    return;
  }
  if (o.p_ != 0) throw std::invalid_argument("mixing residues of different characteristic");
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (p_ != 0) return residue(mod_inverse(r_, p_), p_);
  Scalar s;
  s.q_ = 1 / q_;
  s.q_.canonicalize();
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (p_ != 0)
    s.r_ = r_ == 0 ? 0 : p_ - r_;
  else
    s.q_ = -q_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  unify_with(o);
  if (p_ != 0) {
    std::int64_t other = o.p_ == p_ ? o.r_ : o.to_residue(p_).r_;
    r_ = (r_ + other) % p_;
  } else {
    q_ += o.q_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  unify_with(o);
  if (p_ != 0) {
    std::int64_t other = o.p_ == p_ ? o.r_ : o.to_residue(p_).r_;
    r_ = r_ * other % p_;
  } else {
    q_ *= o.q_;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  unify_with(o);
  Scalar other = p_ != 0 ? o.to_residue(p_) : o;
  return *this *= other.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ == b.p_) return a.p_ != 0 ? a.r_ == b.r_ : a.q_ == b.q_;
  if (a.p_ == 0) return a.to_residue(b.p_).r_ == b.r_;
  return b.to_residue(a.p_).r_ == a.r_;
}

std::string Scalar::str() const { return p_ != 0 ? std::to_string(r_) : q_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace ainf
