#include "pcell/padic.hpp"

#include <cctype>
#include <limits>
#include <sstream>

namespace pcell {

std::string to_string(const PAdic& x) {
    if (x.is_zero()) return "0";
    if (x.exponent() == 0) return x.mantissa().str();
    std::ostringstream os;
    os << x.mantissa().str() << "*p^" << x.exponent();
    return os.str();
}

namespace {

bool parse_int(const std::string& s, size_t& pos, BigInt& out) {
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) {
        pos = start;
        return false;
    }
    out = BigInt(s.substr(start, pos - start));
    return true;
}

}  // namespace

std::optional<PAdic> parse_padic(const PrimeConfig& cfg, const std::string& text) {
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    BigInt mant;
    if (!parse_int(text, pos, mant)) return std::nullopt;
    skip_ws();
    long expo = 0;
    if (pos < text.size()) {
        if (text[pos] != '*') return std::nullopt;
        ++pos;
        skip_ws();
        if (pos >= text.size() || text[pos] != 'p') return std::nullopt;
        ++pos;
        skip_ws();
        if (pos >= text.size() || text[pos] != '^') return std::nullopt;
        ++pos;
        skip_ws();
        BigInt e;
        if (!parse_int(text, pos, e)) return std::nullopt;
        if (e > std::numeric_limits<long>::max() / 2 || e < std::numeric_limits<long>::min() / 2)
            return std::nullopt;
        expo = static_cast<long>(e);
        skip_ws();
    }
    if (pos != text.size()) return std::nullopt;
    return PAdic(cfg, mant, expo);
}

}  // namespace pcell
