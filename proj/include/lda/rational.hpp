#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lda {

// Exact rational number with a 64-bit reduced numerator/denominator.
// Intermediate products run through 128-bit integers; any result whose
// reduced form overflows int64 throws std::overflow_error.  The type is
// deliberately small: value shares and utility scores in this code base
// stay well inside int64 after reduction.
class Rat {
  public:
    Rat() : num_(0), den_(1) {}
    Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d);

    // Accepts "3", "-0.125", "2/15", "-7/3".  Throws std::invalid_argument
    // on anything else.
    static Rat parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    Rat operator-() const;
    Rat abs() const;

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator*(const Rat& a, const Rat& b);
    friend Rat operator/(const Rat& a, const Rat& b);

    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b);
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    double to_double() const;

    // True when the denominator is of the form 2^a * 5^b, i.e. the value
    // has a finite decimal expansion.
    bool terminating_decimal() const;

    // Number of digits after the decimal point in the exact expansion,
    // max(a, b) for den = 2^a * 5^b.  Throws std::domain_error when the
    // expansion does not terminate.
    int decimal_digits() const;

    // Exact decimal string when the expansion terminates ("0.135"),
    // otherwise the fraction form ("2/15").
    std::string to_string() const;

  private:
    std::int64_t num_;
    std::int64_t den_; // always > 0, gcd(|num_|, den_) == 1
};

} // namespace lda
