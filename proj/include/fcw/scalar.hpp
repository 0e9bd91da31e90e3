#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "fcw/error.hpp"

namespace fcw {

/// Exact rational scalar. Always kept canonical (lowest terms, positive
/// denominator); gmpxx canonicalizes after every arithmetic operation.
using Scalar = mpq_class;

inline Scalar parse_scalar(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw InputError("empty scalar string");
    if (s.front() == '+') s.erase(0, 1);
    std::size_t slash = s.find('/');
    auto digits_ok = [](std::string_view d, bool allow_sign) {
        if (allow_sign && !d.empty() && d.front() == '-') d.remove_prefix(1);
        if (d.empty()) return false;
        for (char ch : d)
            if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        return true;
    };
    std::string_view num = std::string_view(s).substr(0, slash);
    std::string_view den = slash == std::string::npos ? std::string_view{}
                                                      : std::string_view(s).substr(slash + 1);
    if (!digits_ok(num, true) || (slash != std::string::npos && !digits_ok(den, false)))
        throw InputError("malformed scalar '" + std::string(text) + "'");
    Scalar q;
    q.get_num() = mpz_class(std::string(num));
    q.get_den() = slash == std::string::npos ? mpz_class(1) : mpz_class(std::string(den));
    if (q.get_den() == 0) throw DomainError("zero denominator in scalar '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Scalar& q) { return q.get_str(); }

inline bool is_zero(const Scalar& q) { return sgn(q) == 0; }

inline Scalar binomial(long n, long k) {
    // generalized binomial coefficient n(n-1)...(n-k+1)/k!, valid for negative n
    if (k < 0) return Scalar(0);
    Scalar r(1);
    for (long i = 0; i < k; ++i) {
        r *= Scalar(n - i);
        r /= Scalar(i + 1);
    }
    return r;
}

inline Scalar scalar_pow(const Scalar& b, long e) {
    Scalar r(1);
    for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= b;
    if (e < 0) {
        if (sgn(b) == 0) throw DomainError("negative power of zero");
        r = 1 / r;
    }
    return r;
}

inline Scalar factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(r);
}

} // namespace fcw
