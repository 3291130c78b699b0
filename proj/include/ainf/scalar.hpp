#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ainf {

/// An exact coefficient field: the rationals or a prime field F_p.
class Field {
 public:
  Field() = default;

  static Field rationals() { return Field(); }
  /// Throws std::invalid_argument unless p is prime (trial division).
  static Field prime(std::uint32_t p);
  /// Accepts "Q", "F5", "Fp:5" style descriptors.
  static Field parse(std::string_view text);

  bool is_rational() const { return p_ == 0; }
  std::uint32_t characteristic() const { return p_; }
  std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  explicit Field(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// Exact field element. Rationals are held in lowest terms by GMP; residues
/// mod p are held in [0, p). A rational with invertible denominator combines
/// with a residue by reduction, so integer literals work in either field.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)

  static Scalar rational(const mpq_class& q);
  static Scalar residue(std::int64_t v, std::uint32_t p);
  static Scalar zero(const Field& f);
  static Scalar one(const Field& f);
  /// "p/q", "n" or a decimal residue; throws std::invalid_argument on
  /// malformed text or a zero denominator.
  static Scalar parse(std::string_view text, const Field& f);

  /// Reinterprets this value in `f`; throws if a denominator is not invertible.
  Scalar in(const Field& f) const;

  bool is_zero() const { return p_ != 0 ? r_ == 0 : sgn(q_) == 0; }
  bool is_one() const { return p_ != 0 ? r_ == 1 : q_ == 1; }
  std::uint32_t characteristic() const { return p_; }
  /// Residue in [0, p); only meaningful for prime-field values.
  std::int64_t residue_value() const { return r_; }
  const mpq_class& rational_value() const { return q_; }

  Scalar inverse() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  std::string str() const;

 private:
  void unify_with(const Scalar& o);
  Scalar to_residue(std::uint32_t p) const;

  mpq_class q_;
  std::int64_t r_ = 0;
  std::uint32_t p_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

inline Scalar sign_power(long exponent) { return (exponent % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace ainf
