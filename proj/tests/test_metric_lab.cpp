#include <catch_amalgamated.hpp>

#include <dioph/metric_lab.hpp>

using namespace dioph;

namespace {
Matrix golden_1x1() { return Matrix(1, 1, {Scalar::golden()}); }
} // namespace

TEST_CASE("eta sampling is a pure function of seed and index") {
    SampleConfig cfg;
    cfg.seed = 77;
    Vec a = detail::sample_eta(cfg, 2, 5);
    Vec b = detail::sample_eta(cfg, 2, 5);
    CHECK(a[0].rat() == b[0].rat());
    CHECK(a[1].rat() == b[1].rat());
    Vec c = detail::sample_eta(cfg, 2, 6);
    CHECK(a[0].rat() != c[0].rat());
    cfg.seed = 78;
    Vec d = detail::sample_eta(cfg, 2, 5);
    CHECK(a[0].rat() != d[0].rat());

    // subspace sampling stays on the line through the anchor
    SampleConfig sub;
    sub.seed = 3;
    sub.anchor = {0.25, 0.75};
    sub.basis = {{2, 0}}; // normalized internally
    Vec e = detail::sample_eta(sub, 2, 0);
    CHECK(e[1].to_double() == 0.75);
    CHECK(std::fabs(e[0].to_double() - 0.25) <= 0.5 + 1e-15);
}

TEST_CASE("uniform measure estimate for the golden ratio under f1") {
    SampleConfig cfg;
    cfg.seed = 11;
    cfg.count = 100;
    auto rep = measure_estimate_uniform(golden_1x1(), ApproxFunction::f1(), 5,
                                        20, cfg);
    // the classical theorem: solvable for every T and every shift
    CHECK(rep.metrics.at("fraction") == 1.0);
    double prev = 1.0;
    for (const auto& pt : rep.details.at("curve")) {
        double f = pt.at("fraction").get<double>();
        CHECK(f <= prev + 1e-15);
        prev = f;
    }
    cfg.count = 0;
    CHECK_THROWS_AS(
        measure_estimate_uniform(golden_1x1(), ApproxFunction::f1(), 5, 20, cfg),
        input_error);
}

TEST_CASE("asymptotic measure estimate") {
    SampleConfig cfg;
    cfg.seed = 12;
    cfg.count = 50;
    auto rep = measure_estimate_asymptotic(golden_1x1(), ApproxFunction::f1(),
                                           50, 0, cfg);
    CHECK(rep.metrics.at("fraction") == 1.0); // k_min = 0 is vacuous
    auto few = measure_estimate_asymptotic(golden_1x1(), ApproxFunction::f1(0.2),
                                           50, 3, cfg);
    CHECK(few.metrics.at("fraction") <= 1.0);
    CHECK(few.metrics.at("mean_solutions") >= 0.0);
}

TEST_CASE("projection measure matches 2 sigma") {
    SampleConfig cfg;
    cfg.seed = 4242;
    cfg.count = 20000;
    cfg.radius = 10;
    auto rep = projection_measure_check(cfg, {100.0}, 0.2);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("estimate") == Catch::Approx(0.4).margin(0.02));

    // sigma = 1/2 saturates: every point is within 1/2 of an integer
    auto full = projection_measure_check(cfg, {100.0}, 0.5);
    CHECK(full.metrics.at("estimate") == 1.0);

    SampleConfig sub = cfg;
    sub.anchor = {0, 0};
    sub.basis = {{1, 0}};
    CHECK_THROWS_AS(projection_measure_check(sub, {0, 1}, 0.2),
                    precondition_error);
    CHECK_THROWS_AS(projection_measure_check(cfg, {100.0}, 0.0), input_error);
}

TEST_CASE("chung-erdos lower bound") {
    // one event: bound is its own measure
    CHECK(chung_erdos_bound({0.3}, {{0.3}}) == Catch::Approx(0.3));
    // two disjoint halves: the union has full measure
    CHECK(chung_erdos_bound({0.5, 0.5}, {{0.5, 0.0}, {0.0, 0.5}}) ==
          Catch::Approx(1.0));
    // correlated pair: (0.5 + 0.5)^2 / (0.5 + 0.5 + 2 * 0.25) = 2/3
    CHECK(chung_erdos_bound({0.5, 0.5}, {{0.5, 0.25}, {0.25, 0.5}}) ==
          Catch::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(chung_erdos_bound({}, {}), input_error);
    CHECK_THROWS_AS(chung_erdos_bound({0.5}, {{0.4}}), input_error);
    CHECK_THROWS_AS(chung_erdos_bound({0.5, 0.5}, {{0.5, 0.1}, {0.2, 0.5}}),
                    input_error);
}

TEST_CASE("asymptotic directions of the golden sequence") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto ds = asymptotic_directions(seq, 0.2, 0.05);
    REQUIRE(ds.clusters.size() == 2); // +1 and -1
    CHECK(ds.clusters[0].dir[0] == -ds.clusters[1].dir[0]);
    size_t total = ds.clusters[0].count + ds.clusters[1].count;
    CHECK(total % 2 == 0); // both signs of every tail vector

    auto merged = asymptotic_directions(seq, 0.2, 3.2);
    CHECK(merged.clusters.size() == 1); // pi-wide tolerance swallows both

    auto tiny = compute_best_approx(golden_1x1(), 10);
    CHECK_THROWS_AS(asymptotic_directions(tiny), precondition_error);
}

TEST_CASE("exceptional direction counter") {
    Matrix th(1, 2, {Scalar::golden(), Scalar::sqrt_of(2)});
    auto seq = compute_best_approx(th, 700);
    REQUIRE(seq.records.size() >= 4);
    // a direction taken from the tail must register at permissive settings
    std::vector<double> v;
    double norm = 0;
    for (long long x : seq.records.back().p)
        norm += static_cast<double>(x) * static_cast<double>(x);
    norm = std::sqrt(norm);
    for (long long x : seq.records.back().p)
        v.push_back(static_cast<double>(x) / norm);
    auto rep = exceptional_test(v, seq, 0.1, 1.0);
    CHECK(rep.metrics.at("count") >= 1);

    // a punishing exponent with a tiny delta wipes the count
    auto strict = exceptional_test({1.0, 0.0}, seq, 5.0, 1e-9);
    CHECK(strict.metrics.at("count") == 0);

    CHECK_THROWS_AS(exceptional_test({0.0, 0.0}, seq, 1.0, 1.0), input_error);
    CHECK_THROWS_AS(exceptional_test({1.0}, seq, 1.0, 1.0), input_error);
}

TEST_CASE("boxes experiment on the golden ratio") {
    auto seq = compute_best_approx(golden_1x1(), 100);
    // levels from consecutive records: M = next norm, X slightly past 2/r
    std::vector<double> psi_k, M_k, X_k;
    for (size_t nu : {3u, 4u}) {
        psi_k.push_back(1.0);
        M_k.push_back(static_cast<double>(seq.records[nu + 1].P));
        X_k.push_back(2.0 / seq.records[nu].r.to_double() * 1.000001);
    }
    SampleConfig cfg;
    cfg.seed = 5;
    cfg.count = 5;
    auto rep = boxes_experiment(golden_1x1(), psi_k, M_k, X_k, cfg);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("hypothesis_holds") == 1);
    CHECK(rep.metrics.at("fraction_all_levels") == 1.0);
    CHECK(rep.metrics.at("boxes_hit") == rep.metrics.at("boxes_checked"));
    CHECK(rep.details.at("psi_M_ratios").size() == 1);

    // a tiny X makes the homogeneous floor unattainable: report, no verdict
    auto bad = boxes_experiment(golden_1x1(), {1.0}, {8.0}, {1.0}, cfg);
    CHECK_FALSE(bad.pass);
    CHECK(bad.metrics.at("hypothesis_holds") == 0);

    CHECK_THROWS_AS(boxes_experiment(golden_1x1(), {1.0}, {8.0}, {}, cfg),
                    input_error);
}
