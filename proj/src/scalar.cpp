#include "squarepack/scalar.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace squarepack {

Scalar::Scalar(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b))
{
    a_.canonicalize();
    b_.canonicalize();
}

Scalar Scalar::frac(long p, long q)
{
    if (q == 0)
        throw std::invalid_argument("zero denominator");
    mpq_class r(p, q);
    r.canonicalize();
    return Scalar(r);
}

Scalar Scalar::sqrt2()
{
    return Scalar(mpq_class(0), mpq_class(1));
}

Scalar Scalar::pow2(int e)
{
    mpz_class one = 1;
    mpq_class r;
    if (e >= 0) {
        r = mpq_class(mpz_class(one << e));
    } else {
        r = mpq_class(mpz_class(1), mpz_class(one << -e));
    }
    return Scalar(r);
}

Scalar Scalar::sqrt2_pow(int e)
{
    // e = 2m + r with r in {0, 1}.
    int r = ((e % 2) + 2) % 2;
    int m = (e - r) / 2;
    Scalar base = pow2(m);
    if (r == 1)
        return Scalar(mpq_class(0), base.a_);
    return base;
}

int Scalar::sign() const
{
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0)
        return sa;
    if (sa == 0 || sa == sb)
        return sb;
    // Opposite signs: compare a^2 with 2 b^2.
    mpq_class a2 = a_ * a_;
    mpq_class b2 = 2 * b_ * b_;
    return cmp(a2, b2) > 0 ? sa : sb;
}

double Scalar::to_double() const
{
    return a_.get_d() + b_.get_d() * std::sqrt(2.0);
}

std::string Scalar::to_string() const
{
    if (sgn(b_) == 0)
        return a_.get_str();
    mpq_class mag = ::abs(b_);
    std::string irr = (cmp(mag, 1) == 0 ? std::string("sqrt2") : mag.get_str() + "*sqrt2");
    if (sgn(a_) == 0)
        return (sgn(b_) < 0 ? "-" : "") + irr;
    return a_.get_str() + (sgn(b_) < 0 ? "-" : "+") + irr;
}

namespace {

mpq_class parse_rational(std::string_view t)
{
    if (t.empty())
        throw std::invalid_argument("empty number");
    std::string s(t);
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    std::string body = s.substr(i);
    if (body.empty())
        throw std::invalid_argument("malformed number: " + s);
    mpq_class r;
    auto dot = body.find('.');
    auto slash = body.find('/');
    auto digits_only = [](const std::string& d) {
        if (d.empty())
            return false;
        for (char c : d)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return false;
        return true;
    };
    if (dot != std::string::npos) {
        if (slash != std::string::npos)
            throw std::invalid_argument("malformed number: " + s);
        std::string ip = body.substr(0, dot);
        std::string fp = body.substr(dot + 1);
        if (ip.empty())
            ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp)))
            throw std::invalid_argument("malformed number: " + s);
        mpz_class num(ip + fp, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        r = mpq_class(num, den);
    } else if (slash != std::string::npos) {
        std::string n = body.substr(0, slash);
        std::string d = body.substr(slash + 1);
        if (!digits_only(n) || !digits_only(d))
            throw std::invalid_argument("malformed number: " + s);
        mpz_class dz(d, 10);
        if (dz == 0)
            throw std::invalid_argument("zero denominator: " + s);
        r = mpq_class(mpz_class(n, 10), dz);
    } else {
        if (!digits_only(body))
            throw std::invalid_argument("malformed number: " + s);
        r = mpq_class(mpz_class(body, 10));
    }
    r.canonicalize();
    return neg ? mpq_class(-r) : r;
}

// Parses a signed term that is either rational or a multiple of sqrt2.
void parse_term(std::string_view t, mpq_class& a, mpq_class& b)
{
    constexpr std::string_view tag = "sqrt2";
    if (t.size() >= tag.size() && t.substr(t.size() - tag.size()) == tag) {
        std::string_view coef = t.substr(0, t.size() - tag.size());
        mpq_class c;
        if (coef.empty() || coef == "+")
            c = 1;
        else if (coef == "-")
            c = -1;
        else {
            if (coef.back() != '*')
                throw std::invalid_argument("malformed sqrt2 term: " + std::string(t));
            c = parse_rational(coef.substr(0, coef.size() - 1));
        }
        b += c;
    } else {
        a += parse_rational(t);
    }
}

} // namespace

Scalar Scalar::parse(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw std::invalid_argument("empty scalar");
    // Split at a '+' or '-' that is not the leading sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '*') {
            split = i;
            break;
        }
    }
    mpq_class a = 0, b = 0;
    if (split == std::string::npos) {
        parse_term(s, a, b);
    } else {
        parse_term(std::string_view(s).substr(0, split), a, b);
        parse_term(std::string_view(s).substr(split), a, b);
    }
    return Scalar(a, b);
}

Scalar Scalar::operator-() const
{
    Scalar r;
    r.a_ = -a_;
    r.b_ = -b_;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    a_ += o.a_;
    if (sgn(o.b_) != 0)
        b_ += o.b_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    a_ -= o.a_;
    if (sgn(o.b_) != 0)
        b_ -= o.b_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
        a_ *= o.a_;
        return *this;
    }
    mpq_class na = a_ * o.a_ + 2 * b_ * o.b_;
    mpq_class nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    if (o.sign() == 0)
        throw std::domain_error("division by zero");
    if (sgn(o.b_) == 0) {
        a_ /= o.a_;
        b_ /= o.a_;
        return *this;
    }
    // (a + b r)/(c + d r) = (a + b r)(c - d r)/(c^2 - 2 d^2)
    mpq_class n = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    Scalar conj(o.a_, -o.b_);
    *this *= conj;
    a_ /= n;
    b_ /= n;
    return *this;
}

std::strong_ordering operator<=>(const Scalar& l, const Scalar& r)
{
    int s;
    if (sgn(l.b_) == 0 && sgn(r.b_) == 0) {
        s = cmp(l.a_, r.a_);
    } else {
        s = (l - r).sign();
    }
    if (s < 0)
        return std::strong_ordering::less;
    if (s > 0)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::strong_ordering scalar_cmp(const Scalar& u, const Scalar& v)
{
    return u <=> v;
}

Scalar min(const Scalar& a, const Scalar& b)
{
    return b < a ? b : a;
}

Scalar max(const Scalar& a, const Scalar& b)
{
    return a < b ? b : a;
}

mpq_class rational_sqrt_floor(const mpq_class& v, unsigned bits)
{
    if (sgn(v) <= 0)
        return 0;
    // floor(sqrt(v) * 2^bits) = floor(sqrt(num * 4^bits / den))
    mpz_class scaled = v.get_num() << (2 * bits);
    mpz_class q = scaled / v.get_den();
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), q.get_mpz_t());
    mpq_class r(root, mpz_class(1) << bits);
    r.canonicalize();
    while (r * r > v)
        r -= mpq_class(1, mpz_class(1) << bits);
    return r;
}

} // namespace squarepack
