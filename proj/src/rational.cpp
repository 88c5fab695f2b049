// Copyright 2026 The mhbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mhbounds/rational.hpp"

#include <cctype>
#include <sstream>

namespace mhb {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ConfigError("empty rational literal");

  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) {
      throw ConfigError("bad rational literal: " + text);
    }
    const BigInt num_q(num);
    const BigInt den_q(den);
    if (den_q == 0) throw ConfigError("zero denominator: " + text);
    return Rational(num_q, den_q);
  }

  const std::size_t dot = s.find('.');
  if (dot == std::string::npos) {
    if (!is_integer_token(s)) throw ConfigError("bad rational literal: " + text);
    return Rational(BigInt(s));
  }

  std::string head = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  bool negative = false;
  if (!head.empty() && (head[0] == '+' || head[0] == '-')) {
    negative = head[0] == '-';
    head = head.substr(1);
  }
  if (head.empty()) head = "0";
  if (frac.empty()) frac = "0";
  if (!is_integer_token(head) || !is_integer_token(frac)) {
    throw ConfigError("bad rational literal: " + text);
  }
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const BigInt value = BigInt(head) * scale + BigInt(frac);
  Rational q(value, scale);
  return negative ? Rational(-q) : q;
}

Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  unsigned e = exponent;
  while (e > 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

std::string rational_to_string(const Rational& q) {
  std::ostringstream os;
  if (denominator(q) == 1) {
    os << numerator(q);
  } else {
    os << numerator(q) << "/" << denominator(q);
  }
  return os.str();
}

}  // namespace mhb
