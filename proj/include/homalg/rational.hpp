#ifndef HOMALG_RATIONAL_HPP
#define HOMALG_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace homalg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "p", "-p/q" etc. Rejects zero denominators and garbage.
inline Rat parse_rational(const std::string& s) {
    auto bad = [&]() -> ConfigError {
        return ConfigError("bad rational literal: \"" + s + "\"");
    };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw bad();
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

inline std::string rational_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace homalg

#endif
