#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qosheft {

/// One abstract time unit. All schedule arithmetic is on integer ticks.
using Tick = std::int64_t;

// Exact arithmetic; expression templates off so values behave like plain types.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Accepts "7", "-3", "3/2", "1.25", "2.5e-3".
Rational parse_rational(std::string_view text);

/// "3" for integers, "p/q" otherwise. Inverse of parse_rational.
std::string to_string(Rational const & value);

/// Smallest tick count >= value.
Tick ceil_ticks(Rational const & value);

double to_double(Rational const & value);

/// Decimal rendering rounded half away from zero, e.g. format_fixed(1/3, 2) == "0.33".
std::string format_fixed(Rational const & value, int digits);

} // namespace qosheft
