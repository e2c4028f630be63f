#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

using mpfr = boost::multiprecision::mpfr_float;

// Working precision (guard bits) for all guarded-real arithmetic.
// 256 bits by default, overridable from the CLI before any computation.
inline unsigned& working_bits_ref() {
    static unsigned bits = 256;
    return bits;
}

// Must be called in every thread that performs guarded arithmetic; the
// underlying default precision is thread-local.
inline void apply_thread_precision() {
    unsigned bits = working_bits_ref();
    unsigned digits10 = static_cast<unsigned>(bits * 0.30103) + 1;
    mpfr::default_precision(std::max(digits10, 20u));
}

inline void set_working_bits(unsigned bits) {
    if (bits < 64) throw input_error("precision must be at least 64 bits");
    working_bits_ref() = bits;
    apply_thread_precision();
}

namespace detail {

inline double abs_bound(const mpfr& x) {
    // Conservative double upper bound on |x|.
    double d = std::fabs(x.convert_to<double>());
    return d * (1.0 + 4e-16) + 1e-300;
}

inline double round_eps(const mpfr& x) {
    // Upper bound on the rounding error of the last operation that
    // produced x at its storage precision.
    if (x.is_zero()) return 0.0;
    long e = mpfr_get_exp(x.backend().data());
    long p = static_cast<long>(mpfr_get_prec(x.backend().data()));
    double eps = std::ldexp(1.0, static_cast<int>(std::max(
        std::min(e - p + 2, 1000L), -1060L)));
    return eps;
}

} // namespace detail

// Exact rational or guarded high-precision real with an error radius.
// Rational values stay exact through +,-,*,/; any contact with a guarded
// value promotes the result to guarded. Guarded radii are conservative
// upper bounds on the representation error.
class Scalar {
public:
    enum class Kind { Rational, Guarded };

    Scalar() : kind_(Kind::Rational), rat_(0) {}
    Scalar(long v) : kind_(Kind::Rational), rat_(static_cast<long>(v)) {}
    Scalar(int v) : Scalar(static_cast<long>(v)) {}

    static Scalar rational(mpq_class q) {
        if (q.get_den() == 0) throw input_error("zero denominator");
        q.canonicalize();
        Scalar s;
        s.kind_ = Kind::Rational;
        s.rat_ = std::move(q);
        return s;
    }
    static Scalar rational(long num, long den) {
        if (den == 0) throw input_error("zero denominator");
        return rational(mpq_class(num, den));
    }
    static Scalar integer(const mpz_class& z) { return rational(mpq_class(z)); }

    // Exact dyadic rational from a double (doubles are dyadic, no rounding).
    static Scalar from_double_exact(double d) {
        if (!std::isfinite(d)) throw input_error("non-finite double");
        mpq_class q(d);
        return rational(std::move(q));
    }

    static Scalar guarded(mpfr center, double radius, std::string tag = {}) {
        Scalar s;
        s.kind_ = Kind::Guarded;
        s.c_ = std::move(center);
        s.rad_ = radius;
        s.tag_ = std::move(tag);
        return s;
    }

    // --- named constants ------------------------------------------------
    static Scalar sqrt_of(unsigned long k) {
        mpfr v = sqrt(mpfr(k));
        return guarded(v, detail::round_eps(v), "sqrt(" + std::to_string(k) + ")");
    }
    // (sqrt(5)-1)/2 = 0.61803...
    static Scalar golden() {
        mpfr v = (sqrt(mpfr(5)) - 1) / 2;
        return guarded(v, 3 * detail::round_eps(v), "golden");
    }
    static Scalar euler_e() {
        mpfr v = exp(mpfr(1));
        return guarded(v, 2 * detail::round_eps(v), "e");
    }
    static Scalar pi() {
        mpfr v = 4 * atan(mpfr(1));
        return guarded(v, 8 * detail::round_eps(v), "pi");
    }

    bool is_rational() const { return kind_ == Kind::Rational; }
    const mpq_class& rat() const { return rat_; }
    const std::string& tag() const { return tag_; }
    double radius() const { return is_rational() ? 0.0 : rad_; }

    // Exact zero test (never guesses: a guarded value is zero only when its
    // radius is zero).
    bool is_exact_zero() const {
        if (is_rational()) return rat_ == 0;
        return rad_ == 0.0 && c_.is_zero();
    }

    mpfr center() const {
        if (is_rational()) return to_mpfr(rat_);
        return c_;
    }

    double to_double() const {
        if (is_rational()) return rat_.get_d();
        return c_.convert_to<double>();
    }

    // Interval endpoints as conservative doubles (diagnostics only).
    double lo_double() const { return to_double() - radius() - 4e-16 * std::fabs(to_double()); }
    double hi_double() const { return to_double() + radius() + 4e-16 * std::fabs(to_double()); }

    // --- arithmetic -----------------------------------------------------
    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational())
            return rational(mpq_class(a.rat_ + b.rat_));
        mpfr c = a.center() + b.center();
        return guarded(c, a.conv_rad() + b.conv_rad() + detail::round_eps(c));
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational())
            return rational(mpq_class(a.rat_ - b.rat_));
        mpfr c = a.center() - b.center();
        return guarded(c, a.conv_rad() + b.conv_rad() + detail::round_eps(c));
    }
    friend Scalar operator-(const Scalar& a) {
        if (a.is_rational()) return rational(mpq_class(-a.rat_));
        return guarded(-a.c_, a.rad_);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational())
            return rational(mpq_class(a.rat_ * b.rat_));
        mpfr c = a.center() * b.center();
        double ra = a.conv_rad(), rb = b.conv_rad();
        double rad = detail::abs_bound(a.center()) * rb +
                     detail::abs_bound(b.center()) * ra + ra * rb +
                     detail::round_eps(c);
        return guarded(c, rad);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_exact_zero()) throw input_error("division by zero");
        if (a.is_rational() && b.is_rational())
            return rational(mpq_class(a.rat_ / b.rat_));
        double bb = detail::abs_bound(b.center());
        double rb = b.conv_rad();
        if (bb <= rb)
            throw precision_error("division by an interval containing zero");
        mpfr c = a.center() / b.center();
        double ra = a.conv_rad();
        double rad = (detail::abs_bound(a.center()) * rb + bb * ra) /
                         (bb * (bb - rb)) +
                     detail::round_eps(c);
        return guarded(c, rad);
    }

    Scalar abs() const {
        if (is_rational()) return rational(mpq_class(::abs(rat_)));
        if (c_.sign() >= 0) return *this;
        return guarded(-c_, rad_);
    }

    // Distance to the nearest integer, always in [0, 1/2]. Well defined at
    // half-integer ties; only the identity of the nearest integer is
    // ambiguous there and nothing depends on it.
    Scalar dist_to_int() const {
        if (is_rational()) {
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), rat_.get_num().get_mpz_t(),
                       rat_.get_den().get_mpz_t());
            mpq_class frac = rat_ - fl;          // in [0,1)
            mpq_class other = 1 - frac;
            return rational(frac <= other ? frac : other);
        }
        mpfr k = boost::multiprecision::round(c_);
        mpfr d = boost::multiprecision::abs(c_ - k);
        double rad = rad_ + detail::round_eps(d);
        // True distance never exceeds 1/2; tighten the interval accordingly.
        double dc = d.convert_to<double>();
        if (dc + rad > 0.5) {
            double lo = std::max(0.0, dc - rad);
            mpfr nc = (mpfr(lo) + mpfr(0.5)) / 2;
            return guarded(nc, (0.5 - lo) / 2 + detail::round_eps(nc));
        }
        return guarded(d, rad);
    }

    // Nearest integer to the center (used to record the integer part a_nu;
    // exact for rationals away from half-integer ties).
    mpz_class nearest_int() const {
        if (is_rational()) {
            mpq_class shifted = rat_ + mpq_class(1, 2);
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num().get_mpz_t(),
                       shifted.get_den().get_mpz_t());
            return fl;
        }
        mpfr k = boost::multiprecision::round(c_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), k.backend().data(), MPFR_RNDN);
        return z;
    }

    // --- comparisons ----------------------------------------------------
    // Three-way comparison that refuses to guess: overlapping guarded
    // intervals (other than exact coincidence of exact values) raise
    // precision_error.
    friend int cmp(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational())
            return ::cmp(a.rat_, b.rat_);
        Scalar d = b - a;
        double dc = d.c_.convert_to<double>();
        double r = d.rad_;
        if (d.c_.is_zero() && r == 0.0) return 0;
        // Compare against radius using the mpfr center, not its double
        // rounding, to stay conservative.
        if (d.c_ > mpfr(r)) return -1;
        if (d.c_ < -mpfr(r)) return 1;
        std::ostringstream os;
        os << "cannot certify comparison: |delta center| = " << std::fabs(dc)
           << " <= radius " << r;
        throw precision_error(os.str());
    }
    friend bool operator<(const Scalar& a, const Scalar& b) { return cmp(a, b) < 0; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return cmp(a, b) >= 0; }

    // Certified (non-throwing) order checks: true only when provable.
    friend bool certainly_less(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return a.rat_ < b.rat_;
        Scalar d = b - a;
        return d.c_ > mpfr(d.rad_);
    }
    // a <= b holds for every representative of both intervals.
    friend bool certified_le(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return a.rat_ <= b.rat_;
        Scalar d = b - a;
        return d.c_ >= mpfr(d.rad_);
    }
    // a <= b cannot be ruled out (the intervals allow it).
    friend bool possibly_le(const Scalar& a, const Scalar& b) {
        if (a.is_rational() && b.is_rational()) return a.rat_ <= b.rat_;
        Scalar d = b - a;
        return d.c_ >= -mpfr(d.rad_);
    }

    std::string str() const {
        if (is_rational()) return rat_.get_str();
        std::ostringstream os;
        os.precision(30);
        os << c_;
        return os.str();
    }

    static mpfr to_mpfr(const mpq_class& q) {
        mpfr r;
        mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
        return r;
    }

private:
    double conv_rad() const {
        if (is_rational()) {
            // Promotion of a rational to mpfr rounds once.
            return detail::round_eps(to_mpfr(rat_));
        }
        return rad_;
    }

    Kind kind_;
    mpq_class rat_;
    mpfr c_;
    double rad_ = 0.0;
    std::string tag_;
};

// --- monotone guarded functions (endpoint evaluation) -------------------

namespace detail {

template <class F>
Scalar monotone_apply(const Scalar& x, F&& f) {
    mpfr c = x.center();
    mpfr lo = c - mpfr(x.radius());
    mpfr hi = c + mpfr(x.radius());
    mpfr flo = f(lo), fhi = f(hi);
    if (flo > fhi) std::swap(flo, fhi);
    mpfr mid = (flo + fhi) / 2;
    mpfr half = (fhi - flo) / 2;
    double rad = half.convert_to<double>() * (1 + 4e-16) +
                 round_eps(flo) + round_eps(fhi) + round_eps(mid);
    return Scalar::guarded(mid, rad);
}

} // namespace detail

inline Scalar guarded_log(const Scalar& x) {
    if (x.to_double() - x.radius() <= 0)
        throw input_error("log of a non-positive value");
    return detail::monotone_apply(x, [](const mpfr& v) { return log(v); });
}

inline Scalar guarded_exp(const Scalar& x) {
    return detail::monotone_apply(x, [](const mpfr& v) { return exp(v); });
}

inline Scalar guarded_sqrt(const Scalar& x) {
    if (x.to_double() + x.radius() < 0) throw input_error("sqrt of a negative value");
    return detail::monotone_apply(x, [](const mpfr& v) {
        return v.sign() <= 0 ? mpfr(0) : sqrt(v);
    });
}

// x^e for positive x and a double exponent; monotone in x for fixed e.
inline Scalar guarded_pow(const Scalar& x, double e) {
    if (x.to_double() - x.radius() <= 0)
        throw input_error("pow requires a certifiably positive base");
    return detail::monotone_apply(
        x, [e](const mpfr& v) { return pow(v, mpfr(e)); });
}

// --- scalar text grammar ------------------------------------------------
// integer | "p/q" | decimal | "sqrt(k)" | "golden" | "e" | "pi"
inline Scalar parse_scalar(const std::string& text) {
    std::string s = text;
    // trim
    auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    if (s.empty()) throw input_error("empty scalar literal");

    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = (s[0] == '-');
        s = s.substr(1);
    }
    auto finish = [neg](Scalar v) { return neg ? -v : v; };

    if (s == "golden") return finish(Scalar::golden());
    if (s == "e") return finish(Scalar::euler_e());
    if (s == "pi") return finish(Scalar::pi());
    if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
        std::string inner = s.substr(5, s.size() - 6);
        try {
            size_t pos = 0;
            unsigned long k = std::stoul(inner, &pos);
            if (pos != inner.size()) throw std::invalid_argument(inner);
            return finish(Scalar::sqrt_of(k));
        } catch (const std::exception&) {
            throw input_error("bad sqrt argument at position 5 in '" + text + "'");
        }
    }

    auto digits_only = [](const std::string& t) {
        return !t.empty() &&
               std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch); });
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den))
            throw input_error("bad rational literal '" + text + "' at position " +
                              std::to_string(slash));
        mpz_class n(num, 10), d(den, 10); // base 0 would read leading zeros as octal
        if (d == 0) throw input_error("zero denominator in '" + text + "'");
        return finish(Scalar::rational(mpq_class(n, d)));
    }

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || !digits_only(fp) || fp.empty())
            throw input_error("bad decimal literal '" + text + "' at position " +
                              std::to_string(dot));
        mpz_class n(ip + fp, 10);
        mpz_class d = 1;
        for (size_t i = 0; i < fp.size(); ++i) d *= 10;
        return finish(Scalar::rational(mpq_class(n, d)));
    }

    if (!digits_only(s))
        throw input_error("unrecognized scalar literal '" + text + "' at position 0");
    return finish(Scalar::rational(mpq_class(mpz_class(s, 10))));
}

} // namespace dioph
