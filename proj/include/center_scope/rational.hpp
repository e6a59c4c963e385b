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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "center_scope/errors.hpp"

namespace center_scope {

using BigInt = mpz_class;
// mpq_class keeps gcd(num, den) = 1 and den > 0 once canonicalized.
using BigRational = mpq_class;

inline BigRational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  BigRational q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw DivisionByZero("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const BigRational& q) { return q.get_str(10); }
inline std::string to_string(const BigInt& z) { return z.get_str(10); }

inline bool is_integer(const BigRational& q) { return q.get_den() == 1; }

static_assert(sizeof(long) == sizeof(std::int64_t), "64-bit long required");

inline bool fits_int64(const BigInt& z) { return z.fits_slong_p(); }

inline std::int64_t to_int64(const BigInt& z) {
  if (!fits_int64(z)) throw InvalidArgument("integer out of 64-bit range: " + to_string(z));
  return z.get_si();
}

inline BigInt to_bigint(std::int64_t v) { return BigInt(static_cast<long>(v)); }

}  // namespace center_scope
