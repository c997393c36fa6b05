// Copyright 2026 The soficlab Authors
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

#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "soficlab/errors.hpp"

namespace soficlab {

// Nonnegative exact fraction used for thresholds that must be compared
// against integer ratios without rounding.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d <= 0 || n < 0) throw invalid_input("rational must be n/d with n >= 0, d > 0");
    const auto g = std::gcd(n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
  }

  // Accepts "3", "0.125", "1/8".
  static Rational parse(std::string_view text) {
    auto bad = [&] { return invalid_input("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      const Rational n = parse(text.substr(0, slash));
      const Rational d = parse(text.substr(slash + 1));
      if (n.den != 1 || d.den != 1 || d.num == 0) throw bad();
      return make(n.num, d.num);
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
      if (c == '.' && !seen_point) {
        seen_point = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
      if (num > (INT64_MAX - 9) / 10 || (seen_point && den > INT64_MAX / 10)) throw bad();
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
      seen_digit = true;
    }
    if (!seen_digit) throw bad();
    return make(num, den);
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool positive() const { return num > 0; }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  // a/b < this, exactly.
  bool exceeds_ratio(std::int64_t a, std::int64_t b) const {
    return static_cast<__int128>(a) * den < static_cast<__int128>(num) * b;
  }
};

}  // namespace soficlab
