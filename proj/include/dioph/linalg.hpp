#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/scalar.hpp"

namespace dioph {

// Integer vectors (q, p, y, a) are kept in machine integers: every
// enumeration bound in this artifact is far below 2^62.
using IVec = std::vector<long long>;

inline long long sup_norm(const IVec& v) {
    long long m = 0;
    for (long long x : v) m = std::max(m, std::llabs(x));
    return m;
}

inline bool is_zero(const IVec& v) {
    for (long long x : v)
        if (x != 0) return false;
    return true;
}

// Real vector of Scalars.
struct Vec {
    std::vector<Scalar> e;

    Vec() = default;
    explicit Vec(std::vector<Scalar> entries) : e(std::move(entries)) {}
    static Vec zeros(size_t n) { return Vec(std::vector<Scalar>(n, Scalar(0))); }

    size_t dim() const { return e.size(); }
    Scalar& operator[](size_t i) { return e[i]; }
    const Scalar& operator[](size_t i) const { return e[i]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        if (a.dim() != b.dim()) throw input_error("vector dimension mismatch");
        Vec r;
        r.e.reserve(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) r.e.push_back(a[i] + b[i]);
        return r;
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        if (a.dim() != b.dim()) throw input_error("vector dimension mismatch");
        Vec r;
        r.e.reserve(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) r.e.push_back(a[i] - b[i]);
        return r;
    }
};

inline Scalar sup_norm(const Vec& v) {
    if (v.dim() == 0) throw input_error("sup_norm of an empty vector");
    Scalar m = v[0].abs();
    for (size_t i = 1; i < v.dim(); ++i) {
        Scalar a = v[i].abs();
        if (certainly_less(m, a)) m = a;
        else if (!certified_le(a, m))
            throw precision_error("sup_norm: incomparable guarded entries");
    }
    return m;
}

// ||v|| = min over integer vectors p of sup|v - p|, componentwise distance
// to the nearest integer.
inline Scalar dist_to_int(const Vec& v) {
    if (v.dim() == 0) throw input_error("dist_to_int of an empty vector");
    Vec d;
    d.e.reserve(v.dim());
    for (const auto& x : v.e) d.e.push_back(x.dist_to_int());
    return sup_norm(d);
}

inline Scalar dot(const Vec& a, const IVec& b) {
    if (a.dim() != b.size()) throw input_error("dot: dimension mismatch");
    Scalar s(0);
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0) s = s + a[i] * Scalar(static_cast<long>(b[i]));
    return s;
}

inline Scalar dot(const Vec& a, const Vec& b) {
    if (a.dim() != b.dim()) throw input_error("dot: dimension mismatch");
    Scalar s(0);
    for (size_t i = 0; i < a.dim(); ++i) s = s + a[i] * b[i];
    return s;
}

// The fixed n x m matrix Theta, row-major.
struct Matrix {
    size_t n = 0, m = 0;
    std::vector<Scalar> a; // n*m entries

    Matrix() = default;
    Matrix(size_t n_, size_t m_, std::vector<Scalar> entries)
        : n(n_), m(m_), a(std::move(entries)) {
        if (n == 0 || m == 0 || a.size() != n * m)
            throw input_error("matrix dimensions inconsistent with entry count");
    }

    const Scalar& at(size_t i, size_t j) const { return a[i * m + j]; }
    Scalar& at(size_t i, size_t j) { return a[i * m + j]; }

    Matrix transpose() const {
        std::vector<Scalar> t;
        t.reserve(a.size());
        for (size_t j = 0; j < m; ++j)
            for (size_t i = 0; i < n; ++i) t.push_back(at(i, j));
        return Matrix(m, n, std::move(t));
    }

    bool all_rational() const {
        for (const auto& s : a)
            if (!s.is_rational()) return false;
        return true;
    }
};

// Theta * q for an integer vector q.
inline Vec mat_vec(const Matrix& th, const IVec& q) {
    if (q.size() != th.m) throw input_error("mat_vec: q has wrong dimension");
    Vec r;
    r.e.reserve(th.n);
    for (size_t i = 0; i < th.n; ++i) {
        Scalar s(0);
        for (size_t j = 0; j < th.m; ++j)
            if (q[j] != 0) s = s + th.at(i, j) * Scalar(static_cast<long>(q[j]));
        r.e.push_back(s);
    }
    return r;
}

inline Vec mat_vec(const Matrix& th, const Vec& q) {
    if (q.dim() != th.m) throw input_error("mat_vec: q has wrong dimension");
    Vec r;
    r.e.reserve(th.n);
    for (size_t i = 0; i < th.n; ++i) {
        Scalar s(0);
        for (size_t j = 0; j < th.m; ++j) s = s + th.at(i, j) * q[j];
        r.e.push_back(s);
    }
    return r;
}

// ||Theta q - eta||
inline Scalar remainder_norm(const Matrix& th, const IVec& q, const Vec& eta) {
    Vec r = mat_vec(th, q);
    if (eta.dim() != 0) {
        if (eta.dim() != th.n) throw input_error("eta has wrong dimension");
        r = r - eta;
    }
    return dist_to_int(r);
}

} // namespace dioph
