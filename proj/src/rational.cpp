#include "lda/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace lda {

namespace {

using i128 = __int128;

std::int64_t to_i64(i128 v, const char* what) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) {
        throw std::overflow_error(std::string("rational overflow in ") + what);
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t parse_int(std::string_view s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string("rational: empty ") + what);
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument(std::string("rational: bad ") + what);
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw std::invalid_argument(std::string("rational: bad ") + what);
        }
        v = v * 10 + (s[i] - '0');
        if (v > i128(INT64_MAX) + 1) throw std::overflow_error("rational: literal too large");
    }
    if (neg) v = -v;
    return to_i64(v, "parse");
}

} // namespace

Rat::Rat(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) {
        nn = -nn;
        dd = -dd;
    }
    i128 g = gcd128(nn, dd);
    if (g > 1) {
        nn /= g;
        dd /= g;
    }
    num_ = to_i64(nn, "construction");
    den_ = to_i64(dd, "construction");
}

Rat Rat::parse(std::string_view text) {
    // Strip surrounding space.
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    text = text.substr(b, e - b);
    if (text.empty()) throw std::invalid_argument("rational: empty string");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t n = parse_int(text.substr(0, slash), "numerator");
        std::int64_t d = parse_int(text.substr(slash + 1), "denominator");
        return Rat(n, d);
    }

    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return Rat(parse_int(text, "integer"));
    }

    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '+' || whole[0] == '-')) whole = whole.substr(1);
    if (whole.empty() && frac.empty()) throw std::invalid_argument("rational: bad decimal");

    i128 n = 0;
    for (char c : whole) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("rational: bad decimal");
        }
        n = n * 10 + (c - '0');
        if (n > i128(INT64_MAX)) throw std::overflow_error("rational: literal too large");
    }
    i128 d = 1;
    for (char c : frac) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("rational: bad decimal");
        }
        n = n * 10 + (c - '0');
        d *= 10;
        if (n > i128(INT64_MAX) || d > i128(INT64_MAX)) {
            throw std::overflow_error("rational: literal too large");
        }
    }
    if (neg) n = -n;
    return Rat(to_i64(n, "parse"), to_i64(d, "parse"));
}

Rat Rat::operator-() const {
    Rat r;
    r.num_ = to_i64(-i128(num_), "negation");
    r.den_ = den_;
    return r;
}

Rat Rat::abs() const { return num_ < 0 ? -*this : *this; }

Rat operator+(const Rat& a, const Rat& b) {
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rat r;
    r.num_ = to_i64(n, "addition");
    r.den_ = to_i64(d, "addition");
    return r;
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
    i128 n = i128(a.num_) * b.num_;
    i128 d = i128(a.den_) * b.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rat r;
    r.num_ = to_i64(n, "multiplication");
    r.den_ = to_i64(d, "multiplication");
    return r;
}

Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::invalid_argument("rational: division by zero");
    i128 n = i128(a.num_) * b.den_;
    i128 d = i128(a.den_) * b.num_;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rat r;
    r.num_ = to_i64(n, "division");
    r.den_ = to_i64(d, "division");
    return r;
}

bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

double Rat::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

bool Rat::terminating_decimal() const {
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

int Rat::decimal_digits() const {
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) throw std::domain_error("rational: non-terminating decimal expansion");
    return twos > fives ? twos : fives;
}

std::string Rat::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    if (!terminating_decimal()) {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    int digits = decimal_digits();
    i128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    i128 scaled = i128(num_) * scale / den_; // exact: den_ divides scale
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string frac;
    for (int i = 0; i < digits; ++i) {
        frac.push_back(static_cast<char>('0' + int(scaled % 10)));
        scaled /= 10;
    }
    std::string whole;
    if (scaled == 0) {
        whole = "0";
    } else {
        while (scaled > 0) {
            whole.push_back(static_cast<char>('0' + int(scaled % 10)));
            scaled /= 10;
        }
    }
    std::string out;
    if (neg) out.push_back('-');
    for (auto it = whole.rbegin(); it != whole.rend(); ++it) out.push_back(*it);
    out.push_back('.');
    for (auto it = frac.rbegin(); it != frac.rend(); ++it) out.push_back(*it);
    return out;
}

} // namespace lda
