//
// Copyright (c) 2026 The credal-plp authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS
// IN THE SOFTWARE.
//

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace plp {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer pow10(unsigned k) {
    Integer p = 1;
    for (unsigned i = 0; i < k; ++i) { p *= 10; }
    return p;
}

/// Parses an unsigned decimal literal ("0.255", "1", ".5" is rejected) into an exact rational.
inline std::optional<Rational> parse_decimal(std::string_view text) {
    if (text.empty()) { return std::nullopt; }
    Integer digits = 0;
    unsigned frac = 0;
    bool seen_dot = false, seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot || !seen_digit) { return std::nullopt; }
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            seen_digit = true;
            if (seen_dot) { ++frac; }
        } else {
            return std::nullopt;
        }
    }
    if (seen_dot && frac == 0) { return std::nullopt; }
    return Rational(digits, pow10(frac));
}

/// "num/den" in lowest terms; integers keep the "/1".
inline std::string to_fraction(const Rational& r) {
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Exact decimal expansion when the reduced denominator is 2^a*5^b, nullopt otherwise.
inline std::optional<std::string> to_exact_decimal(const Rational& r) {
    Integer den = denominator_of(r);
    unsigned twos = 0, fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    if (den != 1) { return std::nullopt; }
    const unsigned k = std::max(twos, fives);
    Integer num = numerator_of(r);
    const bool neg = num < 0;
    if (neg) { num = -num; }
    Integer scaled = num * pow10(k) / denominator_of(r);
    std::string digits = scaled.str();
    if (k > 0) {
        if (digits.size() <= k) { digits.insert(0, k + 1 - digits.size(), '0'); }
        digits.insert(digits.size() - k, ".");
    }
    return neg ? "-" + digits : digits;
}

/// Rendering used in program text: exact decimal when possible, else num/den.
inline std::string to_literal(const Rational& r) {
    if (auto d = to_exact_decimal(r)) { return *d; }
    return to_fraction(r);
}

/// Six significant digits; presentation only.
inline std::string to_display(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", r.convert_to<double>());
    return buf;
}

/// Accepts a decimal literal or num/den.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_decimal(text.substr(0, slash));
        auto den = parse_decimal(text.substr(slash + 1));
        if (!num || !den || denominator_of(*num) != 1 || denominator_of(*den) != 1 || *den == 0) {
            return std::nullopt;
        }
        return *num / *den;
    }
    return parse_decimal(text);
}

} // namespace plp
