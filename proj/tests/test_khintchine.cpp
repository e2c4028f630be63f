#include <catch_amalgamated.hpp>

#include <dioph/khintchine.hpp>

using namespace dioph;

namespace {
Matrix golden_1x1() { return Matrix(1, 1, {Scalar::golden()}); }
} // namespace

TEST_CASE("construct_eta picks gapped indices and a small tail") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto c = construct_eta(seq, ApproxFunction::f1(), 5, 2);
    REQUIRE(c.depth == 5);
    REQUIRE(c.indices.size() == 5);
    for (size_t i = 1; i < 5; ++i)
        CHECK(c.indices[i] >= c.indices[i - 1] + 2);
    REQUIRE(c.y_partials.size() == 5);
    CHECK(c.tail_bound.to_double() > 0);
    for (const auto& x : c.eta_mod.e) {
        CHECK(x.to_double() >= 0.0);
        CHECK(x.to_double() < 1.0);
    }
    auto j = c.to_json();
    CHECK(j["depth"] == 5);
    CHECK(j["indices"].size() == 5);

    auto shallow = construct_eta(seq, ApproxFunction::f1(), 1);
    CHECK(shallow.depth == 1);
    CHECK(shallow.gap == 2 * growth_B(1, 1)); // default gap is 2B
}

TEST_CASE("construct_eta rejects bad inputs") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    CHECK_THROWS_AS(construct_eta(seq, ApproxFunction::f1(), 0), input_error);
    CHECK_THROWS_AS(construct_eta(seq, ApproxFunction::f1(), 500, 2),
                    precondition_error);
    auto sing = compute_best_approx(Matrix(1, 1, {Scalar::rational(1, 2)}), 10);
    CHECK_THROWS_AS(construct_eta(sing, ApproxFunction::f1(), 1),
                    precondition_error);
}

TEST_CASE("different gaps give different shifts") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto a = construct_eta(seq, ApproxFunction::f1(), 4, 2);
    auto b = construct_eta(seq, ApproxFunction::f1(), 4, 5);
    CHECK(a.eta_mod[0].to_double() != b.eta_mod[0].to_double());
}

TEST_CASE("construction invariants hold exactly") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto c = construct_eta(seq, ApproxFunction::f1(), 6);
    auto rep = check_eta_invariants(c);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("violations") == 0);
}

TEST_CASE("verification passes in the control zone") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto c = construct_eta(seq, ApproxFunction::f1(), 6);
    auto rep = verify_construction(c, ApproxFunction::f1(), 1, 144);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("ratio") <= 1.1);
    CHECK(rep.metrics.at("S") > 0);
    CHECK(rep.metrics.at("I") > 0);
    // pushing into the truncation zone must refuse, not silently pass
    CHECK_THROWS_AS(verify_construction(c, ApproxFunction::f1(), 1, 100000),
                    precondition_error);
    CHECK_THROWS_AS(verify_construction(c, ApproxFunction::f1(), 10, 5),
                    input_error);
}

TEST_CASE("the constructed shift is approximable far beyond a generic one") {
    auto seq = compute_best_approx(golden_1x1(), 100000);
    auto c = construct_eta(seq, ApproxFunction::f1(), 6);
    // at the norm of the second-to-last partial sum, eta is approximable at
    // the remainder scale of the deepest chosen record
    long long t_star = sup_norm(c.y_partials[c.depth - 2]);
    auto constructed = compute_inhom(golden_1x1(), c.eta_mod, t_star);
    Vec rand_eta({Scalar::rational(41, 97)});
    auto generic = compute_inhom(golden_1x1(), rand_eta, t_star);
    double td = static_cast<double>(t_star);
    CHECK(psi(constructed, td).to_double() < psi(generic, td).to_double());
    // margin: a generic shift sits at the Dirichlet scale 1/t, the
    // construction burrows at least a full gap below it
    CHECK(psi(constructed, td).to_double() * td < 0.2);
}

TEST_CASE("bad approximability scan on the golden ratio") {
    auto rep = bad_approx_scan(golden_1x1(), 0.01, 1000, 20, 91);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("kept") > 0);
    CHECK(rep.metrics.at("min_floor") >= 0.01);
    // min over records of P ||P theta||: attained at P = 1 with theta^2
    CHECK(rep.metrics.at("homogeneous_floor") ==
          Catch::Approx(0.381966).epsilon(0.001));

    CHECK_THROWS_AS(bad_approx_scan(golden_1x1(), 0.0, 100, 5, 1), input_error);
    CHECK_THROWS_AS(bad_approx_scan(golden_1x1(), 0.05, 100, 0, 1), input_error);
}

TEST_CASE("scan refuses a nearly rational matrix") {
    Scalar th = Scalar::rational(1, 1000) +
                Scalar::golden() * Scalar::from_double_exact(1e-8);
    try {
        bad_approx_scan(Matrix(1, 1, {th}), 0.05, 2000, 5, 1);
        FAIL("expected precondition_error");
    } catch (const precondition_error& e) {
        CHECK(std::string(e.what()).find("not badly approximable") !=
              std::string::npos);
    }
}
