// Copyright 2026 The center_scope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact arithmetic in the cyclotomic field Q(zeta_n).
//
// Elements are stored on the power basis 1, zeta, ..., zeta^(phi(n)-1),
// reduced modulo the n-th cyclotomic polynomial, so equality of field
// elements is equality of coefficient vectors. The Galois group is
// (Z/n)^x acting by zeta -> zeta^k, which gives minimal polynomials as
// orbit products without any factorization.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "center_scope/errors.hpp"
#include "center_scope/rational.hpp"

namespace center_scope {

inline std::size_t euler_phi(std::size_t n) {
  std::size_t result = n;
  std::size_t m = n;
  for (std::size_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

// Integer coefficients (ascending) of the n-th cyclotomic polynomial.
inline std::vector<BigInt> cyclotomic_polynomial(std::size_t n) {
  if (n == 0) throw InvalidArgument("cyclotomic polynomial of order 0");
  // x^n - 1 divided by Phi_d for each proper divisor d of n.
  std::vector<BigInt> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto divisor = cyclotomic_polynomial(d);
    const std::size_t dd = divisor.size() - 1;
    std::vector<BigInt> quotient(poly.size() - dd, 0);
    for (std::size_t k = poly.size(); k-- > dd;) {
      BigInt c = poly[k];  // divisor is monic
      quotient[k - dd] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) poly[k - dd + j] -= c * divisor[j];
    }
    poly = std::move(quotient);
  }
  return poly;
}

namespace detail {

struct CycloContext {
  std::size_t conductor;
  std::size_t degree;
  std::vector<BigInt> phi;  // monic, length degree + 1
  std::vector<std::size_t> units;  // k in [1, n) coprime to n (k = 1 first)
  std::vector<std::complex<double>> powers;  // exp(2 pi i j / n)
};

inline std::shared_ptr<const CycloContext> context_for(std::size_t n) {
  thread_local std::shared_ptr<const CycloContext> last;
  if (last && last->conductor == n) return last;
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const CycloContext>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return last = it->second;
  auto ctx = std::make_shared<CycloContext>();
  ctx->conductor = n;
  ctx->phi = cyclotomic_polynomial(n);
  ctx->degree = ctx->phi.size() - 1;
  for (std::size_t k = 1; k <= std::max<std::size_t>(n, 1); ++k) {
    if (std::gcd(k, n) == 1 && (k < n || n == 1)) ctx->units.push_back(k);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    ctx->powers.emplace_back(std::cos(angle), std::sin(angle));
  }
  cache.emplace(n, ctx);
  return last = ctx;
}

}  // namespace detail

class CycloNumber {
 public:
  // Zero of Q (conductor 1).
  CycloNumber() : CycloNumber(1) {}

  explicit CycloNumber(std::size_t conductor) {
    if (conductor == 0) throw InvalidArgument("conductor must be positive");
    ctx_ = detail::context_for(conductor);
    coeffs_.assign(ctx_->degree, BigRational(0));
  }

  // A rational number in Q(zeta_n).
  CycloNumber(std::size_t conductor, const BigRational& value) : CycloNumber(conductor) {
    coeffs_[0] = value;
  }

  // Canonical reduction of sum_k raw[k] zeta^k. raw may have any length;
  // powers are first folded modulo n.
  static CycloNumber make(std::size_t conductor, std::span<const BigRational> raw) {
    CycloNumber x(conductor);
    const std::size_t n = conductor;
    std::vector<BigRational> folded(n, BigRational(0));
    for (std::size_t k = 0; k < raw.size(); ++k) folded[k % n] += raw[k];
    x.reduce_from(std::move(folded));
    return x;
  }

  // Takes coefficients already on the reduced basis (length phi(n)).
  static CycloNumber from_coeffs(std::size_t conductor, std::vector<BigRational> coeffs) {
    CycloNumber x(conductor);
    if (coeffs.size() != x.ctx_->degree) {
      throw InvalidArgument("expected " + std::to_string(x.ctx_->degree) +
                            " coefficients for conductor " + std::to_string(conductor) + ", got " +
                            std::to_string(coeffs.size()));
    }
    for (auto& c : coeffs) c.canonicalize();
    x.coeffs_ = std::move(coeffs);
    return x;
  }

  // zeta_n^k.
  static CycloNumber root_of_unity(std::size_t conductor, std::size_t k) {
    std::vector<BigRational> raw(k % conductor + 1, BigRational(0));
    raw.back() = 1;
    return make(conductor, raw);
  }

  std::size_t conductor() const { return ctx_->conductor; }
  std::size_t degree() const { return ctx_->degree; }
  const std::vector<BigRational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }
  // Valid only when is_rational().
  const BigRational& rational_part() const { return coeffs_[0]; }

  CycloNumber& operator+=(const CycloNumber& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CycloNumber& operator-=(const CycloNumber& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  CycloNumber& operator*=(const BigRational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  CycloNumber& operator*=(const CycloNumber& o) {
    check_same_field(o);
    const std::size_t d = coeffs_.size();
    std::vector<BigRational> prod(2 * d - 1, BigRational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (o.coeffs_[j] == 0) continue;
        prod[i + j] += coeffs_[i] * o.coeffs_[j];
      }
    }
    reduce_from(std::move(prod));
    return *this;
  }

  friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
  friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
  friend CycloNumber operator*(CycloNumber a, const CycloNumber& b) { return a *= b; }
  friend CycloNumber operator*(CycloNumber a, const BigRational& s) { return a *= s; }
  friend CycloNumber operator*(const BigRational& s, CycloNumber a) { return a *= s; }
  CycloNumber operator-() const {
    CycloNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend bool operator==(const CycloNumber& a, const CycloNumber& b) {
    return a.conductor() == b.conductor() && a.coeffs_ == b.coeffs_;
  }

  // sigma_k : zeta -> zeta^k. k must be coprime to the conductor.
  CycloNumber galois(std::size_t k) const {
    const std::size_t n = conductor();
    if (std::gcd(k, n) != 1) throw InvalidArgument("Galois exponent not coprime to conductor");
    std::vector<BigRational> raw(n, BigRational(0));
    for (std::size_t j = 0; j < coeffs_.size(); ++j) raw[(j * k) % n] += coeffs_[j];
    CycloNumber r(n);
    r.reduce_from(std::move(raw));
    return r;
  }

  // Units of Z/n in increasing order, k = 1 first.
  const std::vector<std::size_t>& galois_exponents() const { return ctx_->units; }

  std::complex<double> to_complex() const {
    std::complex<double> sum = 0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j] != 0) sum += coeffs_[j].get_d() * ctx_->powers[j];
    }
    return sum;
  }

  // Canonical text "c0 + c1*z^1 + ..." used for hashing and diagnostics.
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j] == 0) continue;
      if (!out.empty()) out += " + ";
      out += coeffs_[j].get_str();
      if (j > 0) out += "*z^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
  }

 private:
  void check_same_field(const CycloNumber& o) const {
    if (ctx_->conductor != o.ctx_->conductor) {
      throw InvalidArgument("conductor mismatch: " + std::to_string(ctx_->conductor) + " vs " +
                            std::to_string(o.ctx_->conductor));
    }
  }

  // raw holds coefficients of powers 0..raw.size()-1 with raw.size() <= 2n.
  void reduce_from(std::vector<BigRational> raw) {
    const std::size_t n = ctx_->conductor;
    const std::size_t d = ctx_->degree;
    if (raw.size() > n) {
      for (std::size_t k = n; k < raw.size(); ++k) raw[k % n] += raw[k];
      raw.resize(n);
    }
    for (std::size_t k = raw.size(); k-- > d;) {
      if (raw[k] == 0) continue;
      const BigRational c = raw[k];
      for (std::size_t j = 0; j <= d; ++j) {
        if (ctx_->phi[j] != 0) raw[k - d + j] -= c * ctx_->phi[j];
      }
    }
    raw.resize(d, BigRational(0));
    coeffs_ = std::move(raw);
  }

  std::shared_ptr<const detail::CycloContext> ctx_;
  std::vector<BigRational> coeffs_;
};

inline CycloNumber make(std::size_t conductor, std::span<const BigRational> raw) {
  return CycloNumber::make(conductor, raw);
}

// Polynomial with rational coefficients in ascending degree.
struct RationalPolynomial {
  std::vector<BigRational> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  const BigRational& leading() const { return coeffs.back(); }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
  bool has_integer_coeffs() const {
    for (const auto& c : coeffs)
      if (!is_integer(c)) return false;
    return true;
  }

  CycloNumber evaluate(const CycloNumber& x) const {
    CycloNumber acc(x.conductor());
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      acc *= x;
      acc += CycloNumber(x.conductor(), coeffs[i]);
    }
    return acc;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += coeffs[i].get_str();
      if (i > 0) out += "*T^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;
};

inline CycloNumber add(const CycloNumber& x, const CycloNumber& y) { return x + y; }
inline CycloNumber mul(const CycloNumber& x, const CycloNumber& y) { return x * y; }
inline CycloNumber neg(const CycloNumber& x) { return -x; }

// All sigma_k(x) for k coprime to n, in increasing k; length phi(n).
inline std::vector<CycloNumber> galois_conjugates(const CycloNumber& x) {
  std::vector<CycloNumber> out;
  for (auto k : x.galois_exponents()) out.push_back(x.galois(k));
  return out;
}

inline CycloNumber inv(const CycloNumber& x) {
  if (x.is_zero()) throw DivisionByZero("inverse of zero in Q(zeta_" + std::to_string(x.conductor()) + ")");
  if (x.is_rational()) return CycloNumber(x.conductor(), 1 / x.rational_part());
  // x * prod_{k != 1} sigma_k(x) is the (rational) norm.
  CycloNumber cofactor(x.conductor(), BigRational(1));
  const auto& units = x.galois_exponents();
  for (std::size_t i = 1; i < units.size(); ++i) cofactor *= x.galois(units[i]);
  const CycloNumber norm = x * cofactor;
  if (!norm.is_rational() || norm.rational_part() == 0) {
    throw InvariantViolation("field norm is not a nonzero rational");
  }
  return cofactor * (1 / norm.rational_part());
}

// Product of (T - c) over the distinct Galois conjugates c of x.
inline RationalPolynomial minimal_polynomial(const CycloNumber& x) {
  const std::size_t n = x.conductor();
  std::vector<CycloNumber> orbit;
  for (auto& c : galois_conjugates(x)) {
    bool seen = false;
    for (const auto& o : orbit) {
      if (o == c) {
        seen = true;
        break;
      }
    }
    if (!seen) orbit.push_back(std::move(c));
  }
  std::vector<CycloNumber> poly{CycloNumber(n, BigRational(1))};
  for (const auto& c : orbit) {
    std::vector<CycloNumber> next(poly.size() + 1, CycloNumber(n));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * c;
    }
    poly = std::move(next);
  }
  RationalPolynomial out;
  for (const auto& c : poly) {
    if (!c.is_rational()) {
      throw InvariantViolation("orbit product has a non-rational coefficient: " + c.to_string());
    }
    out.coeffs.push_back(c.rational_part());
  }
  return out;
}

inline bool is_algebraic_integer(const RationalPolynomial& p) {
  return p.is_monic() && p.has_integer_coeffs();
}

inline bool is_algebraic_integer(const CycloNumber& x) {
  if (x.is_rational()) return is_integer(x.rational_part());
  return is_algebraic_integer(minimal_polynomial(x));
}

// a_0^i | a_{m-i}^m for every i, where sum a_i T^i is the monic integer
// minimal polynomial. 0 counts as a d-number (min poly T).
inline bool is_d_number(const CycloNumber& x) {
  if (x.is_rational()) return is_integer(x.rational_part());
  const auto p = minimal_polynomial(x);
  if (!is_algebraic_integer(p)) return false;
  const std::size_t m = p.degree();
  const BigInt a0 = p.coeffs[0].get_num();
  for (std::size_t i = 0; i <= m; ++i) {
    BigInt lhs;
    mpz_pow_ui(lhs.get_mpz_t(), a0.get_mpz_t(), i);
    BigInt rhs;
    const BigInt a = p.coeffs[m - i].get_num();
    mpz_pow_ui(rhs.get_mpz_t(), a.get_mpz_t(), m);
    if (lhs == 0) {
      if (rhs != 0) return false;
      continue;
    }
    if (!mpz_divisible_p(rhs.get_mpz_t(), lhs.get_mpz_t())) return false;
  }
  return true;
}

// D / x is an algebraic integer. x = 0 passes by convention.
inline bool divides_as_algebraic_integer(const CycloNumber& x, const CycloNumber& D) {
  if (x.conductor() != D.conductor()) throw InvalidArgument("conductor mismatch in divisibility test");
  if (x.is_zero()) return true;
  return is_algebraic_integer(D * inv(x));
}

inline std::complex<double> to_complex_approx(const CycloNumber& x) { return x.to_complex(); }

}  // namespace center_scope
