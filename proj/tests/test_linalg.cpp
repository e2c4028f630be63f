#include <catch_amalgamated.hpp>

#include <dioph/linalg.hpp>

using namespace dioph;

TEST_CASE("integer vector helpers") {
    CHECK(sup_norm(IVec{3, -7, 2}) == 7);
    CHECK(sup_norm(IVec{0, 0}) == 0);
    CHECK(is_zero(IVec{0, 0, 0}));
    CHECK_FALSE(is_zero(IVec{0, 1}));
}

TEST_CASE("vector sup norm and distance to the lattice") {
    Vec v({Scalar::rational(7, 3), Scalar::rational(-1, 5)});
    CHECK(sup_norm(v).rat() == mpq_class(7, 3));
    CHECK(dist_to_int(v).rat() == mpq_class(1, 3));

    Vec w({Scalar::rational(1, 10), Scalar::rational(9, 10)});
    CHECK(dist_to_int(w).rat() == mpq_class(1, 10));

    CHECK_THROWS_AS(sup_norm(Vec{}), input_error);
}

TEST_CASE("sup norm refuses incomparable guarded entries") {
    Vec v({Scalar::guarded(mpfr(1.0), 0.5), Scalar::guarded(mpfr(1.2), 0.5)});
    CHECK_THROWS_AS(sup_norm(v), precision_error);
}

TEST_CASE("vector arithmetic and dot products") {
    Vec a({Scalar(1), Scalar(2)});
    Vec b({Scalar(3), Scalar(5)});
    CHECK((a + b)[1].rat() == 7);
    CHECK((b - a)[0].rat() == 2);
    CHECK(dot(a, IVec{2, -1}).rat() == 0);
    CHECK(dot(a, b).rat() == 13);
    CHECK_THROWS_AS(dot(a, IVec{1}), input_error);
}

TEST_CASE("matrix shape, transpose, and application") {
    Matrix th(2, 3,
              {Scalar(1), Scalar(2), Scalar(3), Scalar(4), Scalar(5), Scalar(6)});
    CHECK(th.at(1, 2).rat() == 6);
    Matrix tt = th.transpose();
    CHECK(tt.n == 3);
    CHECK(tt.m == 2);
    CHECK(tt.at(2, 1).rat() == 6);
    CHECK(th.all_rational());

    Vec img = mat_vec(th, IVec{1, 0, -1});
    CHECK(img[0].rat() == -2);
    CHECK(img[1].rat() == -2);
    CHECK_THROWS_AS(mat_vec(th, IVec{1, 2}), input_error);
    CHECK_THROWS_AS(Matrix(2, 2, {Scalar(1)}), input_error);
}

TEST_CASE("remainder norm with and without a shift") {
    Matrix th(1, 1, {Scalar::rational(1, 3)});
    CHECK(remainder_norm(th, IVec{2}, Vec{}).rat() == mpq_class(1, 3));
    Vec eta({Scalar::rational(1, 2)});
    CHECK(remainder_norm(th, IVec{2}, eta).rat() == mpq_class(1, 6));
    CHECK_THROWS_AS(remainder_norm(th, IVec{1}, Vec({Scalar(0), Scalar(0)})),
                    input_error);
}
