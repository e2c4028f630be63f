#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/linalg.hpp"
#include "dioph/report.hpp"

namespace dioph {

// Growth-lag constants for best-approximation sequences:
// P_{nu+A} >= 2 P_nu and psi(P_{nu+B}) <= psi(P_nu)/2.
inline long long growth_A(size_t n, size_t m) {
    long long r = 1;
    for (size_t i = 0; i < n + m; ++i) r *= 3;
    return r - 1;
}

inline long long growth_B(size_t n, size_t m) {
    long long p2 = 1LL << (m - 1);
    long long t = (1LL << (2 * n)) - (1LL << n);
    return p2 * t;
}

struct EnumOptions {
    long long budget = 200'000'000; // max enumeration points
    int threads = 1;
};

struct BestApproxRecord {
    IVec p;    // integer argument, dimension m
    IVec a;    // nearest integer vector to Theta p, dimension n
    long long P; // sup|p|
    Scalar r;  // ||Theta p|| = sup|Theta p - a|
};

struct BestApproxSequence {
    Matrix matrix;
    std::vector<BestApproxRecord> records;
    long long t_max = 0; // certified search bound
    std::optional<IVec> trivially_singular_witness;

    bool trivially_singular() const { return trivially_singular_witness.has_value(); }
};

struct InhomRecord {
    IVec q;
    long long Q;
    Scalar value; // ||Theta q - eta||
};

struct InhomApproxSequence {
    Matrix matrix;
    Vec eta;
    std::vector<InhomRecord> records;
    long long t_max = 0;
    std::optional<IVec> trivially_singular_witness;

    bool trivially_singular() const { return trivially_singular_witness.has_value(); }
};

namespace detail {

// Visit every q with sup|q| == s exactly once, in a fixed deterministic
// order. With canonical_only, only the representative of each antipodal
// pair {q,-q} whose first nonzero coordinate is positive is visited.
template <class F>
void iterate_shell(size_t m, long long s, bool canonical_only, F&& f) {
    IVec q(m, 0);
    // Pin coordinate j to +-s; earlier coordinates range in (-s, s),
    // later ones in [-s, s]. This partitions the shell.
    std::function<void(size_t, size_t, bool)> rec =
        [&](size_t pin, size_t idx, bool pinned) {
            if (idx == m) {
                if (canonical_only) {
                    for (long long x : q) {
                        if (x > 0) break;
                        if (x < 0) return;
                    }
                }
                f(const_cast<const IVec&>(q));
                return;
            }
            if (idx == pin) {
                q[idx] = s;
                rec(pin, idx + 1, true);
                q[idx] = -s;
                rec(pin, idx + 1, true);
                return;
            }
            long long lim = idx < pin ? s - 1 : s;
            for (long long x = -lim; x <= lim; ++x) {
                q[idx] = x;
                rec(pin, idx + 1, pinned);
            }
        };
    for (size_t pin = 0; pin < m; ++pin) rec(pin, 0, false);
}

struct ShellMin {
    IVec q;
    IVec a;
    Scalar r;
    bool zero = false;
    bool present = false;
};

inline IVec nearest_ints(const Vec& v) {
    IVec a;
    a.reserve(v.dim());
    for (const auto& x : v.e) {
        mpz_class z = x.nearest_int();
        if (!z.fits_slong_p()) throw input_error("integer part out of range");
        a.push_back(z.get_si());
    }
    return a;
}

// Per-shell minimum of ||Theta q - eta|| (eta empty => homogeneous, with
// antipodal representatives only). Ties keep the first q in iteration
// order, which is the lexicographically smallest. When two enclosures
// overlap (exact ties such as q vs -q at eta = 0 can never be separated),
// the incumbent representative is kept and its enclosure widened to
// [min lo, min hi], which still brackets the true shell minimum.
inline ShellMin shell_minimum(const Matrix& th, const Vec& eta, long long s,
                              bool canonical) {
    ShellMin best;
    iterate_shell(th.m, s, canonical, [&](const IVec& q) {
        if (best.zero) return;
        Vec img = mat_vec(th, q);
        if (eta.dim() != 0) img = img - eta;
        Scalar r = dist_to_int(img);
        if (r.is_exact_zero()) {
            best = ShellMin{q, nearest_ints(img), r, true, true};
            return;
        }
        if (!best.present || certainly_less(r, best.r)) {
            best = ShellMin{q, nearest_ints(img), r, false, true};
        } else if (!certified_le(best.r, r)) {
            mpfr lo1 = best.r.center() - best.r.radius();
            mpfr lo2 = r.center() - r.radius();
            mpfr hi1 = best.r.center() + best.r.radius();
            mpfr hi2 = r.center() + r.radius();
            mpfr lo = lo1 < lo2 ? lo1 : lo2;
            mpfr hi = hi1 < hi2 ? hi1 : hi2;
            mpfr c = (lo + hi) / 2;
            double w = static_cast<double>((hi - lo) / 2) * 1.000000001 + 1e-300;
            best.r = Scalar::guarded(c, w + detail::round_eps(c));
        }
    });
    return best;
}

inline void check_budget(size_t m, long long t_max, long long budget) {
    double pts = 1;
    for (size_t j = 0; j < m; ++j) pts *= 2.0 * static_cast<double>(t_max) + 1;
    if (pts > static_cast<double>(budget))
        throw budget_error("enumeration would visit ~" + std::to_string(pts) +
                           " points, budget is " + std::to_string(budget));
}

// Shared driver: per-shell minima for s = 1..t_max, computed in parallel
// (interleaved shells) and merged in shell order. Deterministic for any
// thread count.
inline std::vector<ShellMin> all_shell_minima(const Matrix& th, const Vec& eta,
                                              long long t_max, bool canonical,
                                              const EnumOptions& opt) {
    std::vector<ShellMin> mins(static_cast<size_t>(t_max));
    int workers = std::max(1, opt.threads);
    if (workers == 1) {
        for (long long s = 1; s <= t_max; ++s)
            mins[static_cast<size_t>(s - 1)] = shell_minimum(th, eta, s, canonical);
        return mins;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            apply_thread_precision();
            try {
                for (long long s = 1 + w; s <= t_max; s += workers)
                    mins[static_cast<size_t>(s - 1)] =
                        shell_minimum(th, eta, s, canonical);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return mins;
}

} // namespace detail

// Best-approximation sequence of Theta on [1, t_max], by exhaustive shell
// enumeration over one antipodal representative per pair. If Theta q hits
// the integer lattice exactly, the sequence is truncated before that norm
// and the witness recorded.
inline BestApproxSequence compute_best_approx(const Matrix& th, long long t_max,
                                              const EnumOptions& opt = {}) {
    if (t_max < 1) throw input_error("t_max must be >= 1");
    detail::check_budget(th.m, t_max, opt.budget);
    BestApproxSequence seq;
    seq.matrix = th;
    seq.t_max = t_max;
    auto mins = detail::all_shell_minima(th, Vec{}, t_max, true, opt);
    for (long long s = 1; s <= t_max; ++s) {
        auto& sm = mins[static_cast<size_t>(s - 1)];
        if (!sm.present) continue;
        if (sm.zero) {
            seq.trivially_singular_witness = sm.q;
            seq.t_max = s; // certified up to and including the witness norm
            return seq;
        }
        if (seq.records.empty() || certainly_less(sm.r, seq.records.back().r)) {
            seq.records.push_back(BestApproxRecord{sm.q, sm.a, s, sm.r});
        } else if (!certified_le(seq.records.back().r, sm.r)) {
            throw precision_error("record merge: cannot order shell minimum "
                                  "against current best");
        }
    }
    return seq;
}

// Inhomogeneous variant: realizes psi_{Theta,eta} on [1, t_max]. Both signs
// of q matter, so full shells are enumerated; q = 0 is never admitted.
inline InhomApproxSequence compute_inhom(const Matrix& th, const Vec& eta,
                                         long long t_max,
                                         const EnumOptions& opt = {}) {
    if (t_max < 1) throw input_error("t_max must be >= 1");
    if (eta.dim() != th.n) throw input_error("eta has wrong dimension");
    detail::check_budget(th.m, t_max, opt.budget);
    InhomApproxSequence seq;
    seq.matrix = th;
    seq.eta = eta;
    seq.t_max = t_max;
    auto mins = detail::all_shell_minima(th, eta, t_max, false, opt);
    for (long long s = 1; s <= t_max; ++s) {
        auto& sm = mins[static_cast<size_t>(s - 1)];
        if (!sm.present) continue;
        if (sm.zero) {
            seq.trivially_singular_witness = sm.q;
            seq.t_max = s;
            return seq;
        }
        if (seq.records.empty() || certainly_less(sm.r, seq.records.back().value)) {
            seq.records.push_back(InhomRecord{sm.q, s, sm.r});
        } else if (!certified_le(seq.records.back().value, sm.r)) {
            throw precision_error("record merge: cannot order shell minimum "
                                  "against current best");
        }
    }
    return seq;
}

// Step-function evaluation of psi_Theta.
inline Scalar psi(const BestApproxSequence& seq, double t) {
    if (t < 1 || t > static_cast<double>(seq.t_max))
        throw input_error("psi: t outside certified range [1, t_max]");
    if (seq.trivially_singular() &&
        t >= static_cast<double>(sup_norm(*seq.trivially_singular_witness)))
        return Scalar(0);
    const BestApproxRecord* last = nullptr;
    for (const auto& rec : seq.records) {
        if (static_cast<double>(rec.P) <= t) last = &rec;
        else break;
    }
    if (!last) throw input_error("psi: no record with P <= t");
    return last->r;
}

inline Scalar psi(const InhomApproxSequence& seq, double t) {
    if (t < 1 || t > static_cast<double>(seq.t_max))
        throw input_error("psi: t outside certified range [1, t_max]");
    if (seq.trivially_singular() &&
        t >= static_cast<double>(sup_norm(*seq.trivially_singular_witness)))
        return Scalar(0);
    const InhomRecord* last = nullptr;
    for (const auto& rec : seq.records) {
        if (static_cast<double>(rec.Q) <= t) last = &rec;
        else break;
    }
    if (!last) throw input_error("psi: no record with Q <= t");
    return last->value;
}

// Checks P_{nu+A} >= 2 P_nu and r_{nu+B} <= r_nu / 2 for every applicable
// index. No violations are expected for any matrix.
inline ExperimentReport check_growth_props(const BestApproxSequence& seq) {
    if (seq.trivially_singular())
        throw precondition_error("growth props: sequence is trivially singular");
    if (seq.records.empty())
        throw precondition_error("growth props: empty sequence");
    size_t n = seq.matrix.n, m = seq.matrix.m;
    long long A = growth_A(n, m), B = growth_B(n, m);
    ExperimentReport rep;
    rep.name = "growth_props";
    rep.metrics["A"] = static_cast<double>(A);
    rep.metrics["B"] = static_cast<double>(B);
    size_t len = seq.records.size();
    size_t checked_a = 0, checked_b = 0, viol = 0;
    for (size_t nu = 0; nu + static_cast<size_t>(A) < len; ++nu) {
        ++checked_a;
        if (seq.records[nu + A].P < 2 * seq.records[nu].P) {
            ++viol;
            rep.fail("norm-doubling violated at nu=" + std::to_string(nu + 1));
        }
    }
    for (size_t nu = 0; nu + static_cast<size_t>(B) < len; ++nu) {
        ++checked_b;
        Scalar half = seq.records[nu].r / Scalar(2);
        if (!certified_le(seq.records[nu + B].r, half)) {
            if (certainly_less(half, seq.records[nu + B].r)) {
                ++viol;
                rep.fail("remainder-halving violated at nu=" + std::to_string(nu + 1));
            } else {
                throw precision_error("growth props: halving check not certifiable");
            }
        }
    }
    rep.metrics["checked_norm_doubling"] = static_cast<double>(checked_a);
    rep.metrics["checked_remainder_halving"] = static_cast<double>(checked_b);
    rep.metrics["violations"] = static_cast<double>(viol);
    if (checked_a + checked_b == 0)
        rep.note("sequence shorter than both lags; checks vacuous");
    return rep;
}

// Finite-range exponent estimators. The Diophantine exponents are defined
// as limits; these are tail estimates, documented as such, never exact.
struct ExponentEstimate {
    double omega_est = 0;      // tail regression slope of -log r vs log P
    double omega_hat_est = 0;  // tail regression slope of -log r vs log P_{nu+1}
    double ratio_max = 0;      // max over tail of -log r_nu / log P_nu
    double ratio_hat_min = 0;  // min over tail of -log r_nu / log P_{nu+1}
};

inline ExponentEstimate estimate_exponents(const BestApproxSequence& seq,
                                           double tail_fraction = 0.2) {
    if (seq.trivially_singular())
        throw precondition_error("exponents undefined: trivially singular");
    size_t len = seq.records.size();
    if (len < 5) throw precondition_error("too few records to estimate exponents");
    size_t start = static_cast<size_t>(tail_fraction * static_cast<double>(len));
    start = std::min(start, len - 3);
    auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
        double xm = 0, ym = 0;
        for (size_t i = 0; i < x.size(); ++i) { xm += x[i]; ym += y[i]; }
        xm /= static_cast<double>(x.size());
        ym /= static_cast<double>(x.size());
        double num = 0, den = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            num += (x[i] - xm) * (y[i] - ym);
            den += (x[i] - xm) * (x[i] - xm);
        }
        return den > 0 ? num / den : 0.0;
    };
    std::vector<double> lp, lr, lpn, lrn;
    ExponentEstimate est;
    est.ratio_max = -1e300;
    est.ratio_hat_min = 1e300;
    for (size_t nu = start; nu < len; ++nu) {
        double logP = std::log(static_cast<double>(seq.records[nu].P));
        double mlogr = -std::log(seq.records[nu].r.to_double());
        if (logP > 0) {
            lp.push_back(logP);
            lr.push_back(mlogr);
            est.ratio_max = std::max(est.ratio_max, mlogr / logP);
        }
        if (nu + 1 < len) {
            double logP1 = std::log(static_cast<double>(seq.records[nu + 1].P));
            lpn.push_back(logP1);
            lrn.push_back(mlogr);
            est.ratio_hat_min = std::min(est.ratio_hat_min, mlogr / logP1);
        }
    }
    est.omega_est = slope(lp, lr);
    est.omega_hat_est = slope(lpn, lrn);
    return est;
}

} // namespace dioph
