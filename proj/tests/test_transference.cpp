#include <catch_amalgamated.hpp>

#include <dioph/transference.hpp>

using namespace dioph;

namespace {
Matrix golden_1x1() { return Matrix(1, 1, {Scalar::golden()}); }
} // namespace

TEST_CASE("kappa is exact") {
    CHECK(kappa(1, 1).rat() == 2);
    CHECK(kappa(2, 1).rat() == 9);
    CHECK(kappa(1, 2).rat() == 9);
    CHECK(kappa(2, 2).rat() == 72);
    CHECK_THROWS_AS(kappa(0, 1), input_error);
}

TEST_CASE("cassels solver finds a witness for the golden ratio") {
    Vec eta({Scalar::rational(1, 2)});
    auto cert = cassels_solve(golden_1x1(), eta, 5, 23);
    CHECK(cert.witness_q == IVec{1});
    // ||golden - 1/2|| = 0.1180... <= kappa/Y = 0.4
    CHECK(cert.achieved.to_double() == Catch::Approx(0.1180339887).epsilon(1e-8));
    REQUIRE_FALSE(cert.hypothesis_log.empty());
    // log entries are strictly decreasing running minima
    for (size_t i = 1; i < cert.hypothesis_log.size(); ++i)
        CHECK(cert.hypothesis_log[i].dist.to_double() <
              cert.hypothesis_log[i - 1].dist.to_double());
    auto j = cert.to_json();
    CHECK(j["witness_q"][0] == 1);
}

TEST_CASE("cassels hypothesis violation reports the minimizing y") {
    Vec eta({Scalar::rational(1, 2)});
    try {
        cassels_solve(golden_1x1(), eta, 5, 10);
        FAIL("expected hypothesis_violated");
    } catch (const hypothesis_violated& e) {
        CHECK(e.y == IVec{5});
        // ||5 golden|| = 0.0901... < kappa/Q = 0.2
        CHECK(e.dist.to_double() == Catch::Approx(0.0901699437).epsilon(1e-8));
    }
}

TEST_CASE("homogeneous target still yields a nonzero witness") {
    Vec eta({Scalar(0)});
    auto cert = cassels_solve(golden_1x1(), eta, 3, 23);
    CHECK_FALSE(is_zero(cert.witness_q));
    CHECK(cert.achieved.to_double() <= 2.0 / 3.0 + 1e-12);
}

TEST_CASE("cassels input validation and budget") {
    Vec eta({Scalar(0)});
    CHECK_THROWS_AS(cassels_solve(golden_1x1(), eta, 0.5, 10), input_error);
    CHECK_THROWS_AS(cassels_solve(golden_1x1(), Vec({Scalar(0), Scalar(0)}), 5, 10),
                    input_error);
    EnumOptions opt;
    opt.budget = 1000;
    Matrix th(2, 2,
              {Scalar::golden(), Scalar::sqrt_of(2), Scalar::sqrt_of(3),
               Scalar::sqrt_of(5)});
    Vec eta2({Scalar::rational(1, 3), Scalar::rational(1, 7)});
    CHECK_THROWS_AS(cassels_solve(th, eta2, 40, 1000, opt), budget_error);
}

TEST_CASE("scalar product bound on golden ratio data") {
    Vec eta({Scalar::rational(1, 2)});
    auto sb = scalar_bound_check(golden_1x1(), eta, IVec{1}, IVec{5});
    // lhs = ||5/2|| = 1/2
    CHECK(sb.lhs.rat() == mpq_class(1, 2));
    // rhs = 1*1*||5 golden|| + 1*5*||golden - 1/2||
    CHECK(sb.rhs.to_double() == Catch::Approx(0.6803398875).epsilon(1e-8));
    CHECK(sb.lhs.to_double() <= sb.rhs.to_double());

    CHECK_THROWS_AS(scalar_bound_check(golden_1x1(), eta, IVec{1}, IVec{0}),
                    input_error);
    CHECK_THROWS_AS(scalar_bound_check(golden_1x1(), eta, IVec{1, 2}, IVec{1}),
                    input_error);
}

TEST_CASE("jarnik uniform check passes for the golden ratio") {
    Vec eta({Scalar::rational(1, 2)});
    auto bound = ApproxFunction::f1(0.05);
    auto rep = jarnik_uniform_check(golden_1x1(), eta, bound, 10, 1000);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("hypothesis_holds") == 1);
    CHECK(rep.metrics.at("violations") == 0);
    CHECK(rep.metrics.at("max_product") <= 2.0 + 1e-6);
}

TEST_CASE("jarnik reports a falsified hypothesis without a verdict") {
    Vec eta({Scalar::rational(1, 2)});
    // psi(t) <= 1/2 < 1/t at small t is false for c = 1 soon after t = 2
    auto rep = jarnik_uniform_check(golden_1x1(), eta, ApproxFunction::f1(1.0),
                                    10, 100);
    CHECK_FALSE(rep.pass);
    CHECK(rep.metrics.at("hypothesis_holds") == 0);
    bool mentioned = false;
    for (const auto& n : rep.notes)
        if (n.find("hypothesis fails at t=") != std::string::npos) mentioned = true;
    CHECK(mentioned);
}

TEST_CASE("exponent inequalities hold for algebraic instances") {
    Vec eta({Scalar::rational(1, 2)});
    auto rep = exponent_inequalities(golden_1x1(), eta, 100000);
    CHECK(rep.pass);
    CHECK(rep.metrics.at("omega_dual_est") == Catch::Approx(1.0).margin(0.1));
    CHECK(rep.metrics.at("residual_omega_vs_inv_omega_hat_dual") >= -0.1);

    Matrix r2(1, 1, {Scalar::sqrt_of(2)});
    auto hom = exponent_inequalities(r2, Vec({Scalar(0)}), 100000);
    CHECK(hom.pass);

    Matrix sing(1, 1, {Scalar::rational(1, 3)});
    CHECK_THROWS_AS(exponent_inequalities(sing, eta, 1000), precondition_error);
}
