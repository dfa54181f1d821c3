#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace squarepack {

// Exact value a + b*sqrt(2) with rational a and b.
class Scalar {
public:
    Scalar() = default;
    Scalar(int v) : a_(v) {}
    Scalar(long v) : a_(v) {}
    explicit Scalar(mpq_class a, mpq_class b = 0);

    static Scalar frac(long p, long q);
    static Scalar sqrt2();
    // 2^(e/2): a power of sqrt(2).
    static Scalar sqrt2_pow(int e);
    // 2^e for integer e (may be negative).
    static Scalar pow2(int e);

    const mpq_class& rational_part() const { return a_; }
    const mpq_class& sqrt2_part() const { return b_; }
    bool is_rational() const { return sgn(b_) == 0; }

    int sign() const;
    Scalar abs() const { return sign() < 0 ? -*this : *this; }
    double to_double() const;

    std::string to_string() const;
    // Accepts "p", "p/q", decimals such as "0.51", "sqrt2", "r/s*sqrt2",
    // "p/q+r/s*sqrt2" and "p/q-r/s*sqrt2". Throws std::invalid_argument.
    static Scalar parse(std::string_view text);

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar l, const Scalar& r) { return l += r; }
    friend Scalar operator-(Scalar l, const Scalar& r) { return l -= r; }
    friend Scalar operator*(Scalar l, const Scalar& r) { return l *= r; }
    friend Scalar operator/(Scalar l, const Scalar& r) { return l /= r; }

    friend bool operator==(const Scalar& l, const Scalar& r) { return l.a_ == r.a_ && l.b_ == r.b_; }
    friend std::strong_ordering operator<=>(const Scalar& l, const Scalar& r);

private:
    mpq_class a_{0};
    mpq_class b_{0};
};

std::strong_ordering scalar_cmp(const Scalar& u, const Scalar& v);

Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

// Largest rational p/2^bits with (p/2^bits)^2 <= v for rational v >= 0.
mpq_class rational_sqrt_floor(const mpq_class& v, unsigned bits);

} // namespace squarepack
