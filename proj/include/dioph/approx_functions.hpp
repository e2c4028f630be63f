#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dioph/best_approx.hpp"
#include "dioph/errors.hpp"
#include "dioph/report.hpp"
#include "dioph/scalar.hpp"

namespace dioph {

// A member of the calculus of approximating functions. The represented
// function is F(T) = c * base(K * T), positive and strictly decreasing on
// [T_lo, infinity). Base families:
//   power_log(a,b): T^{-a} (log T)^{-b}
//   table:          monotone samples, interpolated linearly in log-log
//   dual_of:        g(T) = 1 / f^{-1}(1/T) for a wrapped f
class ApproxFunction {
public:
    enum class Family { PowerLog, Table, DualOf };

    static ApproxFunction power_log(double a, double b, double c = 1.0,
                                    double K = 1.0) {
        if (a < 0 || (a == 0 && b <= 0))
            throw input_error("power_log requires a > 0, or a = 0 with b > 0");
        if (c <= 0 || K <= 0) throw input_error("scales must be positive");
        ApproxFunction f;
        f.family_ = Family::PowerLog;
        f.a_ = a;
        f.b_ = b;
        f.c_ = c;
        f.K_ = K;
        double lo = 1e-12;
        if (b > 0) lo = std::max(lo, (1.0 + 1e-9) / K);
        if (b < 0) lo = std::max(lo, std::exp(-b / a) * (1.0 + 1e-9) / K);
        f.T_lo_ = lo;
        return f;
    }

    // Dirichlet normalization f_1(T) = 1/T.
    static ApproxFunction f1(double c = 1.0) { return power_log(1, 0, c); }

    static ApproxFunction table(std::vector<std::pair<double, double>> samples) {
        if (samples.size() < 2) throw input_error("table needs >= 2 samples");
        for (size_t i = 1; i < samples.size(); ++i) {
            if (!(samples[i].first > samples[i - 1].first))
                throw input_error("table grid must be strictly increasing");
            if (!(samples[i].second < samples[i - 1].second))
                throw input_error("table values must be strictly decreasing");
        }
        for (auto& [t, v] : samples)
            if (t <= 0 || v <= 0) throw input_error("table entries must be positive");
        ApproxFunction f;
        f.family_ = Family::Table;
        f.samples_ = std::move(samples);
        f.T_lo_ = f.samples_.front().first;
        return f;
    }

    Family family() const { return family_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double outer_scale() const { return c_; }
    double inner_scale() const { return K_; }
    double domain_lo() const { return T_lo_; }
    double invert_tol() const { return tol_; }
    void set_invert_tol(double t) { tol_ = t; }

    ApproxFunction scaled(double c_mult) const {
        ApproxFunction f = *this;
        if (c_mult <= 0) throw input_error("scale must be positive");
        if (family_ == Family::Table) {
            for (auto& [t, v] : f.samples_) v *= c_mult;
        } else {
            f.c_ *= c_mult;
        }
        return f;
    }

    // Fast center evaluation (no guard bookkeeping); used by bisection.
    double eval_center(double T) const {
        if (T < T_lo_) throw input_error("eval: T below domain start");
        switch (family_) {
        case Family::PowerLog: {
            double x = K_ * T;
            double v = c_ * std::pow(x, -a_);
            if (b_ != 0) v *= std::pow(std::log(x), -b_);
            return v;
        }
        case Family::Table: {
            double x = K_ * T;
            return c_ * interpolate(x);
        }
        case Family::DualOf: {
            double x = K_ * T;
            return c_ / inner_->invert(1.0 / x);
        }
        }
        throw error("unreachable");
    }

    // Guarded evaluation. Rational inputs through an exact power stay exact.
    Scalar eval(double T) const {
        if (T < T_lo_) throw input_error("eval: T below domain start");
        if (family_ == Family::PowerLog && b_ == 0 && a_ == std::floor(a_) &&
            a_ <= 16) {
            // c, K and T are dyadic rationals; an integer power is exact.
            Scalar x = Scalar::from_double_exact(K_) * Scalar::from_double_exact(T);
            Scalar p(1);
            for (int i = 0; i < static_cast<int>(a_); ++i) p = p * x;
            return Scalar::from_double_exact(c_) / p;
        }
        if (family_ == Family::PowerLog) {
            Scalar x = Scalar::from_double_exact(K_) * Scalar::from_double_exact(T);
            Scalar v = guarded_pow(x, -a_);
            if (b_ != 0) v = v * guarded_pow(guarded_log(x), -b_);
            return Scalar::from_double_exact(c_) * v;
        }
        double v = eval_center(T);
        return Scalar::guarded(mpfr(v), std::fabs(v) * 4 * tol_);
    }

    // Monotone inversion: the T with F(T) = y, to relative tolerance tol_.
    double invert(double y) const {
        if (y <= 0) throw input_error("invert: y must be positive");
        if (family_ == Family::PowerLog && b_ == 0) {
            return std::pow(c_ / y, 1.0 / a_) / K_;
        }
        double lo = T_lo_ * (1 + 1e-9) + 1e-300;
        double flo = eval_center(lo);
        if (flo < y) throw input_error("invert: y above the range of f");
        double hi = std::max(lo * 2, 2.0);
        int guard = 0;
        while (eval_center(hi) > y) {
            hi *= 2;
            if (++guard > 4000) throw input_error("invert: y below reachable range");
        }
        // bisection in log T
        double llo = std::log(lo), lhi = std::log(hi);
        for (int it = 0; it < 500 && (lhi - llo) > tol_ * 0.5; ++it) {
            double mid = 0.5 * (llo + lhi);
            if (eval_center(std::exp(mid)) > y) llo = mid;
            else lhi = mid;
        }
        return std::exp(0.5 * (llo + lhi));
    }

    // Transference partner g(T) = 1/f^{-1}(1/T). Pure powers invert in
    // closed form and stay exact; anything else is backed by invert.
    ApproxFunction dual() const {
        if (family_ == Family::PowerLog && b_ == 0) {
            // f(x) = c (Kx)^{-a}; f^{-1}(1/T) = (cT)^{1/a}/K
            return power_log(1.0 / a_, 0, K_ * std::pow(c_, -1.0 / a_), 1.0);
        }
        ApproxFunction g;
        g.family_ = Family::DualOf;
        g.inner_ = std::make_shared<ApproxFunction>(*this);
        g.tol_ = tol_;
        // need 1/T within the range of f
        double fmax = eval_center(T_lo_ * (1 + 1e-9) + 1e-300);
        g.T_lo_ = std::max(1.0 / fmax, 1e-12) * (1 + 1e-9);
        return g;
    }

    // Closed asymptotic form of the dual for the power-log family:
    // g_a(T) = a^{-b/a} T^{-1/a} (log T)^{b/a}. Asymptotic, not exact.
    ApproxFunction dual_asymptotic() const {
        if (family_ != Family::PowerLog)
            throw input_error("dual_asymptotic: power_log family only");
        if (c_ != 1.0 || K_ != 1.0)
            throw input_error("dual_asymptotic: unscaled power_log only");
        return power_log(1.0 / a_, -b_ / a_, std::pow(a_, -b_ / a_));
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (family_) {
        case Family::PowerLog:
            j["family"] = "power_log";
            j["a"] = a_;
            j["b"] = b_;
            j["c"] = c_;
            j["K"] = K_;
            break;
        case Family::Table: {
            j["family"] = "table";
            j["c"] = c_;
            j["K"] = K_;
            nlohmann::json s = nlohmann::json::array();
            for (auto& [t, v] : samples_) s.push_back({t, v});
            j["samples"] = s;
            break;
        }
        case Family::DualOf:
            j["family"] = "dual_of";
            j["inner"] = inner_->to_json();
            break;
        }
        return j;
    }

private:
    double interpolate(double x) const {
        const auto& s = samples_;
        if (x < s.front().first || x > s.back().first)
            throw input_error("table eval outside the sampled grid");
        auto it = std::lower_bound(
            s.begin(), s.end(), x,
            [](const std::pair<double, double>& p, double v) { return p.first < v; });
        if (it == s.begin()) return it->second;
        auto [t1, v1] = *(it - 1);
        auto [t2, v2] = *it;
        double w = (std::log(x) - std::log(t1)) / (std::log(t2) - std::log(t1));
        return std::exp((1 - w) * std::log(v1) + w * std::log(v2));
    }

    Family family_ = Family::PowerLog;
    double a_ = 1, b_ = 0;
    double c_ = 1, K_ = 1;
    double T_lo_ = 1e-12;
    double tol_ = 1e-12;
    std::vector<std::pair<double, double>> samples_;
    std::shared_ptr<ApproxFunction> inner_;
};

// CLI literal: "f1" | "power_log:a,b[:c=X][:K=X]", with an optional
// "X*" prefix scaling the whole function.
inline ApproxFunction parse_function(const std::string& text) {
    std::string s = text;
    double pre = 1.0;
    auto star = s.find('*');
    if (star != std::string::npos) {
        try {
            size_t pos = 0;
            pre = std::stod(s.substr(0, star), &pos);
            if (pos != star) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw input_error("bad scale prefix in function literal '" + text + "'");
        }
        s = s.substr(star + 1);
    }
    if (s == "f1") return ApproxFunction::f1(pre);
    if (s.rfind("power_log:", 0) != 0)
        throw input_error("unrecognized function literal '" + text + "'");
    std::string rest = s.substr(10);
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
        auto colon = rest.find(':', pos);
        parts.push_back(rest.substr(pos, colon == std::string::npos
                                             ? std::string::npos
                                             : colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    auto comma = parts[0].find(',');
    if (comma == std::string::npos)
        throw input_error("power_log literal needs 'a,b'");
    double a, b, c = 1.0, K = 1.0;
    try {
        a = std::stod(parts[0].substr(0, comma));
        b = std::stod(parts[0].substr(comma + 1));
        for (size_t i = 1; i < parts.size(); ++i) {
            if (parts[i].rfind("c=", 0) == 0) c = std::stod(parts[i].substr(2));
            else if (parts[i].rfind("K=", 0) == 0) K = std::stod(parts[i].substr(2));
            else throw std::invalid_argument(parts[i]);
        }
    } catch (const std::exception&) {
        throw input_error("bad function literal '" + text + "'");
    }
    return ApproxFunction::power_log(a, b, c * pre, K);
}

// --- technical condition (grid certificate) ------------------------------

struct ConditionParams {
    double gamma = 1;
    double alpha = 1;
    double beta = 1;
};

// Checks f(CT) <= C^{-gamma} f(T) on the sampled grid. A grid certificate,
// never a universal claim.
inline ExperimentReport check_technical(const ApproxFunction& f,
                                        const ConditionParams& params,
                                        const std::vector<double>& C_grid,
                                        const std::vector<double>& T_grid) {
    ExperimentReport rep;
    rep.name = "technical_condition";
    size_t checked = 0, violations = 0;
    double min_gamma = 1e300;
    for (double C : C_grid) {
        if (C <= 1) throw input_error("C grid entries must exceed 1");
        for (double T : T_grid) {
            if (T < f.domain_lo() || C * T < f.domain_lo())
                throw input_error("grid point below function domain");
            Scalar lhs = f.eval(C * T);
            Scalar rhs = guarded_pow(Scalar::from_double_exact(C), -params.gamma) *
                         f.eval(T);
            ++checked;
            if (certainly_less(rhs, lhs)) {
                ++violations;
            } else if (!certified_le(lhs, rhs) && !possibly_le(lhs, rhs)) {
                ++violations;
            }
            double g_obs = std::log(f.eval_center(T) / f.eval_center(C * T)) /
                           std::log(C);
            min_gamma = std::min(min_gamma, g_obs);
        }
    }
    rep.metrics["checked"] = static_cast<double>(checked);
    rep.metrics["violations"] = static_cast<double>(violations);
    rep.metrics["smallest_admissible_gamma"] = min_gamma;
    rep.pass = violations == 0;
    rep.note("grid certificate only; no claim beyond the sampled grid");
    return rep;
}

// --- series verdicts -----------------------------------------------------

enum class SeriesVerdict { Converges, Diverges };
enum class SeriesKind { KhintchineGroshev, KleinbockWadleigh };

// Symbolic convergence decision for the power-log family.
// sum k^{-p} (log k)^{-q} converges iff p > 1, or p = 1 and q > 1.
inline SeriesVerdict kg_series_verdict(const ApproxFunction& fn, SeriesKind kind) {
    if (fn.family() != ApproxFunction::Family::PowerLog)
        throw input_error("series verdict: numeric partial sums cannot decide "
                          "convergence for table-backed functions");
    double p, q;
    if (kind == SeriesKind::KhintchineGroshev) {
        // sum f(k)
        p = fn.a();
        q = fn.b();
    } else {
        // sum 1/(j^2 g(j)) with the given function in the role of g
        p = 2 - fn.a();
        q = -fn.b();
    }
    if (p > 1) return SeriesVerdict::Converges;
    if (p == 1 && q > 1) return SeriesVerdict::Converges;
    return SeriesVerdict::Diverges;
}

// Numeric diagnostic: decade increments of the partial sums up to k_max,
// plus the fitted decay exponent of the increments in the log-log scale of
// the decade index. Consistency check, not a proof.
struct SeriesTrend {
    std::vector<double> decade_increments;
    double increment_ratio_last = 0; // I_d / I_{d-1} for the last decade
    double fitted_exponent = 0;      // I_d ~ d^{-fitted_exponent}
    SeriesVerdict suggested;
};

inline SeriesTrend partial_sum_trend(const ApproxFunction& fn, SeriesKind kind,
                                     long long k_max = 1'000'000) {
    auto term = [&](double k) {
        if (kind == SeriesKind::KhintchineGroshev) return fn.eval_center(k);
        return 1.0 / (k * k * fn.eval_center(k));
    };
    SeriesTrend tr;
    double k_start = std::max(2.0, fn.domain_lo() * (1 + 1e-9));
    long long k0 = static_cast<long long>(std::ceil(k_start));
    double inc = 0;
    long long next_decade = 10;
    for (long long k = k0; k <= k_max; ++k) {
        inc += term(static_cast<double>(k));
        if (k == next_decade || k == k_max) {
            tr.decade_increments.push_back(inc);
            inc = 0;
            next_decade *= 10;
        }
    }
    size_t nd = tr.decade_increments.size();
    if (nd >= 2)
        tr.increment_ratio_last =
            tr.decade_increments[nd - 1] / tr.decade_increments[nd - 2];
    // Fit I_d ~ d^{-e} over the later decades.
    std::vector<double> xs, ys;
    for (size_t d = nd >= 4 ? nd - 4 : 0; d < nd; ++d) {
        if (tr.decade_increments[d] > 0) {
            xs.push_back(std::log(static_cast<double>(d + 1)));
            ys.push_back(std::log(tr.decade_increments[d]));
        }
    }
    double e = 0;
    if (xs.size() >= 2) {
        double xm = 0, ym = 0;
        for (size_t i = 0; i < xs.size(); ++i) { xm += xs[i]; ym += ys[i]; }
        xm /= static_cast<double>(xs.size());
        ym /= static_cast<double>(xs.size());
        double num = 0, den = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - xm) * (ys[i] - ym);
            den += (xs[i] - xm) * (xs[i] - xm);
        }
        e = den > 0 ? -num / den : 0;
    }
    tr.fitted_exponent = e;
    if (tr.increment_ratio_last < 0.3) {
        tr.suggested = SeriesVerdict::Converges; // geometric-like collapse
    } else {
        tr.suggested = e > 1 ? SeriesVerdict::Converges : SeriesVerdict::Diverges;
    }
    return tr;
}

// --- Kurzweil-type g-tilde construction ----------------------------------

// g~(T) = lambda^{n/m}(H(T)) / H(T), with H inverse to lambda/f.
// eval and eval_direct are two algebraic routes to the same value.
class KurzweilTildeG {
public:
    KurzweilTildeG(ApproxFunction f, ApproxFunction lambda, int n, int m,
                   const std::vector<double>& check_grid)
        : f_(std::move(f)), lambda_(std::move(lambda)), n_(n), m_(m) {
        if (n < 1 || m < 1) throw input_error("n, m must be positive");
        if (check_grid.size() < 2)
            throw input_error("need a grid to check monotonicity of lambda/f");
        double prev = ratio(check_grid.front());
        for (size_t i = 1; i < check_grid.size(); ++i) {
            double cur = ratio(check_grid[i]);
            if (!(check_grid[i] > check_grid[i - 1]))
                throw input_error("check grid must be increasing");
            if (!(cur > prev))
                throw precondition_error(
                    "lambda/f is not strictly increasing on the working grid");
            prev = cur;
        }
        grid_lo_ = ratio(check_grid.front());
        grid_hi_ = ratio(check_grid.back());
        t_lo_ = check_grid.front();
        t_hi_ = check_grid.back();
    }

    // H(T): the x with lambda(x)/f(x) = T, by bisection on the checked range.
    double H(double T) const {
        if (T < grid_lo_ || T > grid_hi_)
            throw input_error("H: T outside the verified monotone range");
        double lo = t_lo_, hi = t_hi_;
        for (int it = 0; it < 400 && (hi - lo) > 1e-13 * hi; ++it) {
            double mid = std::sqrt(lo * hi);
            if (ratio(mid) < T) lo = mid;
            else hi = mid;
        }
        return std::sqrt(lo * hi);
    }

    double eval(double T) const {
        double h = H(T);
        return std::pow(lambda_.eval_center(h), static_cast<double>(n_) / m_) / h;
    }

    // Same value through T^{n/m} f^{n/m}(H)/H; route for cross-checks.
    double eval_direct(double T) const {
        double h = H(T);
        return std::pow(T, static_cast<double>(n_) / m_) *
               std::pow(f_.eval_center(h), static_cast<double>(n_) / m_) / h;
    }

    ApproxFunction as_table(const std::vector<double>& grid) const {
        std::vector<std::pair<double, double>> samples;
        for (double T : grid) samples.emplace_back(T, eval(T));
        return ApproxFunction::table(std::move(samples));
    }

    // Partial sums of sum_nu lambda^{1/m}(Y_nu^n) over a best-approximation
    // sequence (Y_nu = record norms).
    std::vector<double> lambda_partial_sums(const BestApproxSequence& seq) const {
        std::vector<double> sums;
        double acc = 0;
        for (const auto& rec : seq.records) {
            double y = static_cast<double>(rec.P);
            double arg = std::pow(y, static_cast<double>(n_));
            if (arg < lambda_.domain_lo()) continue;
            acc += std::pow(lambda_.eval_center(arg), 1.0 / m_);
            sums.push_back(acc);
        }
        return sums;
    }

private:
    double ratio(double x) const {
        return lambda_.eval_center(x) / f_.eval_center(x);
    }

    ApproxFunction f_, lambda_;
    int n_, m_;
    double grid_lo_ = 0, grid_hi_ = 0, t_lo_ = 0, t_hi_ = 0;
};

inline KurzweilTildeG kurzweil_tilde_g(const ApproxFunction& f,
                                       const ApproxFunction& lambda, int n, int m,
                                       const std::vector<double>& check_grid) {
    return KurzweilTildeG(f, lambda, n, m, check_grid);
}

// --- classification against an approximating function -------------------

// (i) solvability of the f-Dirichlet system ||Theta q||^n <= f(T),
// 0 < |q|^m <= T for every integer T in [T_lo, T_hi];
// (ii) count of best-approximation records with r^n <= f(P^m).
inline ExperimentReport classify(const BestApproxSequence& seq,
                                 const ApproxFunction& f, long long T_lo,
                                 long long T_hi) {
    if (T_lo < 1 || T_hi < T_lo) throw input_error("classify: bad T range");
    size_t n = seq.matrix.n, m = seq.matrix.m;
    auto t_of_T = [m](long long T) {
        if (m == 1) return T;
        long long t = static_cast<long long>(std::floor(
            std::pow(static_cast<double>(T), 1.0 / static_cast<double>(m))));
        while (std::pow(static_cast<double>(t + 1), static_cast<double>(m)) <=
               static_cast<double>(T))
            ++t;
        while (t > 0 && std::pow(static_cast<double>(t), static_cast<double>(m)) >
                            static_cast<double>(T))
            --t;
        return t;
    };
    if (t_of_T(T_hi) > seq.t_max)
        throw input_error("classify: range exceeds the certified t_max");

    ExperimentReport rep;
    rep.name = "classify";
    long long first_fail = -1;
    long long solvable_count = 0, total = 0;
    for (long long T = T_lo; T <= T_hi; ++T) {
        ++total;
        long long t = t_of_T(T);
        bool ok = false;
        if (t >= 1) {
            Scalar ps = psi(seq, static_cast<double>(t));
            Scalar lhs(1);
            for (size_t i = 0; i < n; ++i) lhs = lhs * ps;
            Scalar rhs = f.eval(static_cast<double>(T));
            if (certified_le(lhs, rhs)) ok = true;
            else if (certainly_less(rhs, lhs)) ok = false;
            else throw precision_error("classify: solvability not certifiable");
        }
        if (ok) ++solvable_count;
        else if (first_fail < 0) first_fail = T;
    }
    rep.metrics["dirichlet_holds_everywhere"] = solvable_count == total ? 1 : 0;
    rep.metrics["first_failing_T"] = static_cast<double>(first_fail);
    rep.metrics["solvable_fraction"] =
        static_cast<double>(solvable_count) / static_cast<double>(total);

    long long approx_count = 0;
    for (const auto& rec : seq.records) {
        double Pm = std::pow(static_cast<double>(rec.P), static_cast<double>(m));
        if (Pm < f.domain_lo()) continue;
        Scalar lhs(1);
        for (size_t i = 0; i < n; ++i) lhs = lhs * rec.r;
        if (possibly_le(lhs, f.eval(Pm))) ++approx_count;
    }
    rep.metrics["approximable_record_count"] = static_cast<double>(approx_count);
    rep.pass = solvable_count == total;
    if (seq.trivially_singular())
        rep.note("sequence trivially singular: remainder 0 from the witness norm on");
    return rep;
}

} // namespace dioph
