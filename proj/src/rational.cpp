#include "qosheft/rational.hpp"

#include <cctype>
#include <string>

#include "qosheft/errors.hpp"

namespace qosheft {

namespace {

using boost::multiprecision::cpp_int;

// cpp_int reads a leading 0 as an octal prefix; decimal input must not have one.
cpp_int decimal_int(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return cpp_int(std::string(digits));
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

cpp_int pow10(long exponent) {
    cpp_int result = 1;
    for (long i = 0; i < exponent; ++i) result *= 10;
    return result;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw ParseError("not a number: '" + std::string(text) + "'");
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_number(text);
        cpp_int d = decimal_int(den);
        if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        value = Rational(decimal_int(num), d);
    } else {
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_text = s.substr(e + 1);
            bool exp_negative = false;
            if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
                exp_negative = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            if (!all_digits(exp_text) || exp_text.size() > 4) bad_number(text);
            exponent = std::stol(std::string{exp_text});
            if (exp_negative) exponent = -exponent;
            s = s.substr(0, e);
        }
        std::string_view int_part = s;
        std::string_view frac_part;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            int_part = s.substr(0, dot);
            frac_part = s.substr(dot + 1);
        }
        if (int_part.empty() && frac_part.empty()) bad_number(text);
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))) {
            bad_number(text);
        }
        cpp_int const digits = decimal_int(std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part));
        exponent -= static_cast<long>(frac_part.size());
        if (exponent >= 0) {
            value = Rational(digits * pow10(exponent));
        } else {
            value = Rational(digits, pow10(-exponent));
        }
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(Rational const & value) {
    auto num = boost::multiprecision::numerator(value);
    auto den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Tick ceil_ticks(Rational const & value) {
    cpp_int num = boost::multiprecision::numerator(value);
    cpp_int den = boost::multiprecision::denominator(value);
    cpp_int q = num / den;  // truncates toward zero
    if (num > 0 && q * den != num) q += 1;
    if (q > cpp_int(std::numeric_limits<Tick>::max()) || q < cpp_int(std::numeric_limits<Tick>::min())) {
        throw DomainError("tick value out of range: " + to_string(value));
    }
    return q.convert_to<Tick>();
}

double to_double(Rational const & value) {
    return value.convert_to<double>();
}

std::string format_fixed(Rational const & value, int digits) {
    Rational scaled = value * Rational(pow10(digits));
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    cpp_int num = boost::multiprecision::numerator(scaled);
    cpp_int den = boost::multiprecision::denominator(scaled);
    cpp_int rounded = (2 * num + den) / (2 * den);

    std::string text = rounded.str();
    if (digits > 0) {
        if (text.size() <= static_cast<std::size_t>(digits)) {
            text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
        }
        text.insert(text.size() - static_cast<std::size_t>(digits), ".");
    }
    if (negative && rounded != 0) text.insert(0, "-");
    return text;
}

} // namespace qosheft
