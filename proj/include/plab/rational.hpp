// Copyright 2026 The plab Authors.
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

#ifndef PLAB_RATIONAL_HPP
#define PLAB_RATIONAL_HPP

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace plab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

namespace detail {

inline BigInt parse_digits(std::string_view digits) {
  BigInt v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad digit in number");
    v = v * 10 + (c - '0');
  }
  return v;
}

inline BigInt pow10(unsigned n) {
  BigInt v = 1;
  for (unsigned i = 0; i < n; ++i) v *= 10;
  return v;
}

}  // namespace detail

/// Parses "p/q", "-p/q", an integer, or a decimal such as "0.125" or "2.5e-3"
/// into an exact rational. Decimal strings are exact: "0.1" is 1/10.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) throw std::invalid_argument("bad rational literal: " + s);

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (num.empty() || den.empty())
      throw std::invalid_argument("bad rational literal: " + s);
    BigInt d = detail::parse_digits(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + s);
    value = Rational(detail::parse_digits(num), d);
  } else {
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      try {
        exponent = std::stol(std::string(body.substr(e + 1)));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent: " + s);
      }
      body = body.substr(0, e);
    }
    auto dot = body.find('.');
    std::string digits(body.substr(0, dot));
    if (dot != std::string_view::npos) {
      auto frac = body.substr(dot + 1);
      digits += frac;
      exponent -= static_cast<long>(frac.size());
    }
    if (digits.empty()) throw std::invalid_argument("bad rational literal: " + s);
    BigInt mant = detail::parse_digits(digits);
    if (exponent >= 0)
      value = Rational(mant * detail::pow10(static_cast<unsigned>(exponent)));
    else
      value = Rational(mant, detail::pow10(static_cast<unsigned>(-exponent)));
  }
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Binomial coefficient in arbitrary precision.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace plab

#endif  // PLAB_RATIONAL_HPP
