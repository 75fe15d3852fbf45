#include "embedlab/rational.hpp"

#include "embedlab/error.hpp"

#include <cmath>

namespace embedlab {

namespace {

unsigned bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
}

}  // namespace

BigInt pow2(unsigned e) {
    BigInt one = 1;
    return one << e;
}

double ratio_to_double(const BigInt& num, const BigInt& den) {
    if (num == 0) return 0.0;
    const bool neg = num < 0;
    const BigInt a = neg ? BigInt(-num) : num;
    // Scale so the integer quotient carries 64 significant bits.
    const long shift = 64L - (static_cast<long>(bit_length(a)) - static_cast<long>(bit_length(den)));
    BigInt q;
    if (shift >= 0)
        q = (a << static_cast<unsigned>(shift)) / den;
    else
        q = a / (den << static_cast<unsigned>(-shift));
    // q has 64 or 65 bits; truncating to 64 keeps the result within one ulp.
    const unsigned qbits = bit_length(q);
    const unsigned excess = qbits > 64 ? qbits - 64 : 0;
    BigInt top = q >> excess;
    auto mant = static_cast<unsigned long long>(top);
    const double m = static_cast<double>(mant);
    return (neg ? -1.0 : 1.0) * std::ldexp(m, static_cast<int>(excess) - static_cast<int>(shift));
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw InputError("rational: zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::parse(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return {BigInt(text), BigInt(1)};
        return {BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1))};
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("rational: cannot parse '" + text + "'");
    }
}

std::string Rational::str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

double Rational::to_double() const { return ratio_to_double(num_, den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator-(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator*(const Rational& a, const Rational& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InputError("rational: division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt l = a.num_ * b.den_;
    const BigInt r = b.num_ * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::mod(const BigInt& modulus) const {
    if (modulus <= 0) throw InputError("rational: modulus must be positive");
    const BigInt big = modulus * den_;
    BigInt r = num_ % big;
    if (r < 0) r += big;
    return {r, den_};
}

}  // namespace embedlab
