#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>

namespace embedlab {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational in lowest terms with a positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt num, BigInt den = 1);  // NOLINT(google-explicit-constructor)
    Rational(long long v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)

    // Accepts "p", "p/q" and "-p/q".
    static Rational parse(const std::string& text);

    [[nodiscard]] const BigInt& num() const { return num_; }
    [[nodiscard]] const BigInt& den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] int sign() const { return num_.sign(); }
    [[nodiscard]] std::string str() const;
    // Correctly scaled conversion; results below the double range become 0 or subnormal.
    [[nodiscard]] double to_double() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    // a mod m for a positive integer modulus, result in [0, m).
    [[nodiscard]] Rational mod(const BigInt& modulus) const;

private:
    BigInt num_;
    BigInt den_;
};

// 2^e as a big integer.
[[nodiscard]] BigInt pow2(unsigned e);

// Nearest double to num/den for arbitrary big integers (den > 0).
[[nodiscard]] double ratio_to_double(const BigInt& num, const BigInt& den);

}  // namespace embedlab
