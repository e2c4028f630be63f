#include <catch_amalgamated.hpp>

#include <cmath>

#include <dioph/approx_functions.hpp>

using namespace dioph;

TEST_CASE("f1 evaluates exactly on rational arguments") {
    auto f = ApproxFunction::f1();
    Scalar v = f.eval(4.0);
    REQUIRE(v.is_rational());
    CHECK(v.rat() == mpq_class(1, 4));
    CHECK(f.invert(0.25) == Catch::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("power_log with a log factor") {
    auto f = ApproxFunction::power_log(1, 1);
    double e2 = std::exp(2.0);
    // f(e^2) = e^{-2} / 2
    CHECK(f.eval(e2).to_double() ==
          Catch::Approx(std::exp(-2.0) / 2.0).epsilon(1e-12));
    CHECK(f.eval_center(e2) ==
          Catch::Approx(std::exp(-2.0) / 2.0).epsilon(1e-12));
    // a = 0 with b > 0 is a legal pure-log decay
    auto g = ApproxFunction::power_log(0, 2);
    CHECK(g.eval_center(std::exp(3.0)) == Catch::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK_THROWS_AS(ApproxFunction::power_log(0, 0), input_error);
    CHECK_THROWS_AS(ApproxFunction::power_log(-1, 0), input_error);
    CHECK_THROWS_AS(ApproxFunction::power_log(1, 0, 0.0), input_error);
}

TEST_CASE("function literals parse") {
    auto f = parse_function("f1");
    CHECK(f.a() == 1.0);
    CHECK(f.b() == 0.0);

    auto g = parse_function("power_log:2,1:c=0.5:K=3");
    CHECK(g.a() == 2.0);
    CHECK(g.b() == 1.0);
    CHECK(g.outer_scale() == 0.5);
    CHECK(g.inner_scale() == 3.0);

    auto h = parse_function("0.25*f1");
    CHECK(h.eval(2.0).rat() == mpq_class(1, 8));

    CHECK_THROWS_AS(parse_function("banana"), input_error);
    CHECK_THROWS_AS(parse_function("power_log:2"), input_error);
    CHECK_THROWS_AS(parse_function("power_log:x,y"), input_error);
    CHECK_THROWS_AS(parse_function("z*f1"), input_error);
}

TEST_CASE("pure powers dualize in closed form") {
    auto f = ApproxFunction::power_log(2, 0);
    auto g = f.dual();
    REQUIRE(g.family() == ApproxFunction::Family::PowerLog);
    CHECK(g.a() == Catch::Approx(0.5).epsilon(1e-14));
    // g(T) = 1/f^{-1}(1/T) = T^{-1/2}
    CHECK(g.eval_center(100.0) == Catch::Approx(0.1).epsilon(1e-12));

    // f1 is self-dual and stays exact
    auto d1 = ApproxFunction::f1().dual();
    CHECK(d1.eval(8.0).rat() == mpq_class(1, 8));
}

TEST_CASE("bisection dual tracks the asymptotic closed form") {
    auto f = ApproxFunction::power_log(2, 1);
    auto g = f.dual();
    auto ga = f.dual_asymptotic();
    double T = 1e6;
    double lg = std::log(g.eval_center(T));
    double la = std::log(ga.eval_center(T));
    CHECK(std::fabs(lg - la) / std::fabs(lg) < 0.02);
    // defining identity of the dual: f(1/g(T)) = 1/T
    double x = 1.0 / g.eval_center(T);
    CHECK(f.eval_center(x) == Catch::Approx(1.0 / T).epsilon(1e-6));

    CHECK_THROWS_AS(f.scaled(2.0).dual_asymptotic(), input_error);
}

TEST_CASE("technical condition grid certificate") {
    std::vector<double> C{2, 5, 10};
    std::vector<double> T{10, 100, 1000, 10000};
    ConditionParams p;
    p.gamma = 1;
    auto rep = check_technical(ApproxFunction::f1(), p, C, T);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("violations") == 0);
    CHECK(rep.metrics.at("smallest_admissible_gamma") ==
          Catch::Approx(1.0).margin(1e-9));

    // (log T)^{+1}: increasing, cannot satisfy any positive gamma
    auto bad = check_technical(ApproxFunction::power_log(1, -1), p, C, T);
    CHECK_FALSE(bad.pass);
    CHECK(bad.metrics.at("violations") > 0);

    CHECK_THROWS_AS(check_technical(ApproxFunction::f1(), p, {0.5}, T),
                    input_error);
}

TEST_CASE("series verdicts for the power-log family") {
    using V = SeriesVerdict;
    using K = SeriesKind;
    CHECK(kg_series_verdict(ApproxFunction::power_log(2, 0), K::KhintchineGroshev) ==
          V::Converges);
    CHECK(kg_series_verdict(ApproxFunction::f1(), K::KhintchineGroshev) ==
          V::Diverges);
    CHECK(kg_series_verdict(ApproxFunction::power_log(1, 2), K::KhintchineGroshev) ==
          V::Converges);
    // sum 1/(j^2 g(j)): g(j) = j^{-a} gives p = 2 - a
    CHECK(kg_series_verdict(ApproxFunction::power_log(0.5, 0),
                            K::KleinbockWadleigh) == V::Converges);
    CHECK(kg_series_verdict(ApproxFunction::power_log(1, 1),
                            K::KleinbockWadleigh) == V::Diverges);

    std::vector<std::pair<double, double>> samples{{1, 1}, {10, 0.1}, {100, 0.01}};
    CHECK_THROWS_AS(
        kg_series_verdict(ApproxFunction::table(samples), K::KhintchineGroshev),
        input_error);
}

TEST_CASE("partial sum trends agree with the symbolic verdicts") {
    auto conv = partial_sum_trend(ApproxFunction::power_log(2, 0),
                                  SeriesKind::KhintchineGroshev, 100000);
    CHECK(conv.suggested == SeriesVerdict::Converges);
    CHECK(conv.increment_ratio_last < 0.3);

    auto div = partial_sum_trend(ApproxFunction::f1(),
                                 SeriesKind::KhintchineGroshev, 100000);
    CHECK(div.suggested == SeriesVerdict::Diverges);
    CHECK(div.increment_ratio_last > 0.9);
}

TEST_CASE("table functions interpolate and invert") {
    std::vector<std::pair<double, double>> samples;
    for (double t = 1; t <= 1024; t *= 2) samples.emplace_back(t, 1.0 / t);
    auto f = ApproxFunction::table(samples);
    // log-log interpolation of 1/t is exact at and between grid points
    CHECK(f.eval_center(3.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(f.invert(0.01) == Catch::Approx(100.0).epsilon(1e-9));
    CHECK_THROWS_AS(f.eval(2000.0), input_error);
    CHECK_THROWS_AS(f.eval(0.5), input_error);
    CHECK_THROWS_AS(ApproxFunction::table({{1, 1}}), input_error);
    CHECK_THROWS_AS(ApproxFunction::table({{1, 1}, {2, 2}}), input_error);
}

TEST_CASE("kurzweil g-tilde construction") {
    std::vector<double> grid;
    for (double t = 10; t <= 1e7; t *= 2) grid.push_back(t);
    auto lam = ApproxFunction::power_log(0, 2);
    auto f = ApproxFunction::f1();
    auto kg = kurzweil_tilde_g(f, lam, 1, 1, grid);

    double h = kg.H(1e4);
    // lambda(h)/f(h) = h / (log h)^2 = 1e4 near h = 2.12e6
    CHECK(h / std::pow(std::log(h), 2) == Catch::Approx(1e4).epsilon(1e-9));
    CHECK(h == Catch::Approx(2.12e6).epsilon(0.01));

    double direct = kg.eval(1e4);
    CHECK(direct == Catch::Approx(kg.eval_direct(1e4)).epsilon(1e-6));
    CHECK(direct == Catch::Approx(std::pow(std::log(h), -2) / h).epsilon(1e-9));

    auto tab = kg.as_table({1e3, 1e4, 2e4});
    CHECK(tab.eval_center(1e4) == Catch::Approx(direct).epsilon(1e-9));

    Matrix th(1, 1, {Scalar::golden()});
    auto seq = compute_best_approx(th, 1000);
    auto sums = kg.lambda_partial_sums(seq);
    REQUIRE(sums.size() >= 2);
    for (size_t i = 1; i < sums.size(); ++i) CHECK(sums[i] > sums[i - 1]);

    // lambda/f decreasing: monotonicity precondition must trip
    CHECK_THROWS_AS(
        kurzweil_tilde_g(ApproxFunction::power_log(0, 2), f, 1, 1, grid),
        precondition_error);
}

TEST_CASE("classification of the golden sequence") {
    Matrix th(1, 1, {Scalar::golden()});
    auto seq = compute_best_approx(th, 200);
    auto rep = classify(seq, ApproxFunction::f1(), 5, 50);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("dirichlet_holds_everywhere") == 1);
    CHECK(rep.metrics.at("solvable_fraction") == 1.0);

    auto tight = classify(seq, ApproxFunction::f1(0.1), 5, 50);
    CHECK_FALSE(tight.pass);
    CHECK(tight.metrics.at("first_failing_T") >= 5);

    CHECK_THROWS_AS(classify(seq, ApproxFunction::f1(), 5, 1000), input_error);
    CHECK_THROWS_AS(classify(seq, ApproxFunction::f1(), 0, 10), input_error);
}
