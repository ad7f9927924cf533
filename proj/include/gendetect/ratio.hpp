#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace gendetect {

// Reduced exact rational, denominator always positive. Class weights and
// per-matrix metric scores are held in this form so their contracts can be
// checked without floating-point noise.
struct Ratio {
    long long num = 0;
    long long den = 1;

    static Ratio of(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Ratio: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        return Ratio{n, d};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Ratio operator+(const Ratio& o) const {
        return from128(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                       static_cast<__int128>(den) * o.den);
    }

    Ratio operator*(const Ratio& o) const {
        return from128(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
    }

    Ratio divided_by(long long k) const {
        if (k == 0) throw std::invalid_argument("Ratio: division by zero");
        return from128(static_cast<__int128>(num), static_cast<__int128>(den) * k);
    }

    bool operator==(const Ratio&) const = default;

  private:
    static Ratio from128(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Ratio: value out of 64-bit range");
        return Ratio{static_cast<long long>(n), static_cast<long long>(d)};
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
};

}  // namespace gendetect
