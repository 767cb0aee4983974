#pragma once

// Exact Euclidean domains used as coefficient rings.
//
// Every ring is a small value type exposing the same interface:
//   value_type, zero(), one(), from_int(), add/sub/mul/neg, is_zero, equal,
//   is_unit, unit_inverse, divmod, divide_exact, norm_less, canonical_unit,
//   is_field, name(), format().
// Rings compare equal when they describe the same mathematical ring; binary
// operations on matrices check this.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kbin {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class E>
struct DivMod {
  E quotient;
  E remainder;
};

/// The integers, arbitrary precision.
struct Integers {
  using value_type = mpz_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
  value_type unit_inverse(const value_type& a) const {
    if (!is_unit(a)) throw error("unit_inverse: " + a.get_str() + " is not a unit");
    return a;
  }

  // Symmetric remainder: |r| <= |b|/2 keeps Smith reductions short.
  DivMod<value_type> divmod(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0) throw error("division by zero");
    value_type q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    // floor division leaves r with the sign of b
    value_type twice = 2 * abs(r);
    if (twice > abs(b)) {
      r -= b;
      q += 1;
    }
    return {q, r};
  }

  std::optional<value_type> divide_exact(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0) {
      if (sgn(a) == 0) return value_type(0);
      return std::nullopt;
    }
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return std::nullopt;
    value_type q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }

  bool norm_less(const value_type& a, const value_type& b) const {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0;
  }

  /// Unit u with u*a the canonical associate (non-negative).
  value_type canonical_unit(const value_type& a) const { return sgn(a) < 0 ? -1 : 1; }

  bool is_field() const { return false; }
  std::string name() const { return "integers"; }
  std::string format(const value_type& a) const { return a.get_str(); }
  value_type parse(const std::string& text) const {
    value_type v;
    if (text.empty() || v.set_str(text, 10) != 0) throw error("not an integer: '" + text + "'");
    return v;
  }

  bool operator==(const Integers&) const { return true; }
};

/// The rationals. Every nonzero element is a unit, so Smith forms are rank forms.
struct Rationals {
  using value_type = mpq_class;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_unit(const value_type& a) const { return sgn(a) != 0; }
  value_type unit_inverse(const value_type& a) const {
    if (sgn(a) == 0) throw error("unit_inverse: zero is not a unit");
    return value_type(1) / a;
  }

  DivMod<value_type> divmod(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0) throw error("division by zero");
    return {a / b, 0};
  }
  std::optional<value_type> divide_exact(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0) {
      if (sgn(a) == 0) return value_type(0);
      return std::nullopt;
    }
    return value_type(a / b);
  }

  bool norm_less(const value_type&, const value_type&) const { return false; }
  value_type canonical_unit(const value_type& a) const {
    return sgn(a) == 0 ? value_type(1) : value_type(1 / a);
  }

  bool is_field() const { return true; }
  std::string name() const { return "rationals"; }
  std::string format(const value_type& a) const { return a.get_str(); }
  value_type parse(const std::string& text) const {
    value_type v;
    if (text.empty() || v.set_str(text, 10) != 0) throw error("not a rational: '" + text + "'");
    if (v.get_den() == 0) throw error("zero denominator: '" + text + "'");
    v.canonicalize();
    return v;
  }

  bool operator==(const Rationals&) const { return true; }
};

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// GF(p) for a prime p < 2^31. Elements are residues in [0, p).
class PrimeField {
 public:
  using value_type = std::int64_t;

  explicit PrimeField(std::int64_t p = 2) : p_(p) {
    if (p >= (std::int64_t{1} << 31) || !is_prime(p))
      throw error("prime-field: " + std::to_string(p) + " is not a prime below 2^31");
  }

  std::int64_t characteristic() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const {
    std::int64_t r = v % p_;
    return r < 0 ? r + p_ : r;
  }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const {
    value_type s = a - b;
    return s < 0 ? s + p_ : s;
  }
  value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }

  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }
  bool is_unit(value_type a) const { return a != 0; }
  value_type unit_inverse(value_type a) const {
    if (a == 0) throw error("unit_inverse: zero is not a unit");
    // Fermat: a^(p-2)
    value_type result = 1, base = a;
    std::int64_t e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  DivMod<value_type> divmod(value_type a, value_type b) const {
    return {mul(a, unit_inverse(b)), 0};
  }
  std::optional<value_type> divide_exact(value_type a, value_type b) const {
    if (b == 0) {
      if (a == 0) return value_type(0);
      return std::nullopt;
    }
    return mul(a, unit_inverse(b));
  }

  bool norm_less(value_type, value_type) const { return false; }
  value_type canonical_unit(value_type a) const { return a == 0 ? 1 : unit_inverse(a); }

  bool is_field() const { return true; }
  std::string name() const { return "prime-field(" + std::to_string(p_) + ")"; }
  std::string format(value_type a) const { return std::to_string(a); }
  value_type parse(const std::string& text) const {
    mpz_class v;
    if (text.empty() || v.set_str(text, 10) != 0) throw error("not an integer: '" + text + "'");
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
    return r.get_si();
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::int64_t p_;
};

/// Polynomial with coefficients in ascending degree; no trailing zeros.
template <class E>
struct Poly {
  std::vector<E> coeffs;
  bool operator==(const Poly&) const = default;
};

/// Univariate polynomials over a field F; Euclidean by degree.
template <class F>
class Polynomials {
 public:
  using coefficient_type = typename F::value_type;
  using value_type = Poly<coefficient_type>;

  explicit Polynomials(F field = F{}) : field_(std::move(field)) {
    if (!field_.is_field()) throw error("polynomials: coefficient ring must be a field");
  }

  const F& field() const { return field_; }

  value_type zero() const { return {}; }
  value_type one() const { return constant(field_.one()); }
  value_type from_int(long v) const { return constant(field_.from_int(v)); }
  value_type constant(const coefficient_type& c) const {
    value_type p;
    if (!field_.is_zero(c)) p.coeffs.push_back(c);
    return p;
  }
  value_type monomial(const coefficient_type& c, std::size_t degree) const {
    value_type p;
    if (field_.is_zero(c)) return p;
    p.coeffs.assign(degree + 1, field_.zero());
    p.coeffs[degree] = c;
    return p;
  }
  value_type from_coefficients(std::vector<coefficient_type> c) const {
    value_type p{std::move(c)};
    trim(p);
    return p;
  }

  value_type add(const value_type& a, const value_type& b) const {
    value_type r;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), field_.zero());
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] = a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] = field_.add(r.coeffs[i], b.coeffs[i]);
    trim(r);
    return r;
  }
  value_type neg(const value_type& a) const {
    value_type r = a;
    for (auto& c : r.coeffs) c = field_.neg(c);
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const { return add(a, neg(b)); }
  value_type mul(const value_type& a, const value_type& b) const {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    value_type r;
    r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, field_.zero());
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs.size(); ++j)
        r.coeffs[i + j] = field_.add(r.coeffs[i + j], field_.mul(a.coeffs[i], b.coeffs[j]));
    trim(r);
    return r;
  }

  bool is_zero(const value_type& a) const { return a.coeffs.empty(); }
  bool equal(const value_type& a, const value_type& b) const {
    if (a.coeffs.size() != b.coeffs.size()) return false;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      if (!field_.equal(a.coeffs[i], b.coeffs[i])) return false;
    return true;
  }
  bool is_unit(const value_type& a) const { return a.coeffs.size() == 1; }
  value_type unit_inverse(const value_type& a) const {
    if (!is_unit(a)) throw error("unit_inverse: " + format(a) + " is not a unit");
    return constant(field_.unit_inverse(a.coeffs[0]));
  }

  DivMod<value_type> divmod(const value_type& a, const value_type& b) const {
    if (b.coeffs.empty()) throw error("division by zero");
    value_type q, r = a;
    const coefficient_type lead_inv = field_.unit_inverse(b.coeffs.back());
    const std::size_t db = b.coeffs.size() - 1;
    if (r.coeffs.size() > db) q.coeffs.assign(r.coeffs.size() - db, field_.zero());
    while (!r.coeffs.empty() && r.coeffs.size() - 1 >= db) {
      const std::size_t shift = r.coeffs.size() - 1 - db;
      const coefficient_type c = field_.mul(r.coeffs.back(), lead_inv);
      q.coeffs[shift] = c;
      for (std::size_t i = 0; i <= db; ++i)
        r.coeffs[i + shift] = field_.sub(r.coeffs[i + shift], field_.mul(c, b.coeffs[i]));
      trim(r);
    }
    trim(q);
    return {q, r};
  }
  std::optional<value_type> divide_exact(const value_type& a, const value_type& b) const {
    if (b.coeffs.empty()) {
      if (a.coeffs.empty()) return value_type{};
      return std::nullopt;
    }
    auto [q, r] = divmod(a, b);
    if (!r.coeffs.empty()) return std::nullopt;
    return q;
  }

  bool norm_less(const value_type& a, const value_type& b) const {
    return a.coeffs.size() < b.coeffs.size();
  }
  value_type canonical_unit(const value_type& a) const {
    if (a.coeffs.empty()) return one();
    return constant(field_.unit_inverse(a.coeffs.back()));
  }

  bool is_field() const { return false; }
  std::string name() const { return "polynomials-over(" + field_.name() + ")"; }
  std::string format(const value_type& a) const {
    if (a.coeffs.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = a.coeffs.size(); i-- > 0;) {
      if (field_.is_zero(a.coeffs[i])) continue;
      if (!first) out << " + ";
      first = false;
      out << field_.format(a.coeffs[i]);
      if (i >= 1) out << "*x";
      if (i >= 2) out << "^" << i;
    }
    return out.str();
  }

  bool operator==(const Polynomials& o) const { return field_ == o.field_; }

 private:
  void trim(value_type& p) const {
    while (!p.coeffs.empty() && field_.is_zero(p.coeffs.back())) p.coeffs.pop_back();
  }

  F field_;
};

}  // namespace kbin
