#include <doctest.h>

#include "myopic/matrix.h"

using namespace myopic;

TEST_CASE("matrix construction and element access") {
    Matrix m(2, 3, 1.5);
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m(i, j) == 1.5);
    m(1, 2) = -4.0;
    CHECK(m(1, 2) == -4.0);
    CHECK(m(0, 2) == 1.5);
}

TEST_CASE("identity, row and column extraction") {
    Matrix id = Matrix::identity(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    Matrix m(2, 3);
    int v = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ++v;
    CHECK(m.row(1) == std::vector<double>{4, 5, 6});
    CHECK(m.col(2) == std::vector<double>{3, 6});
}

TEST_CASE("dot and matrix-vector products") {
    CHECK(dot({1, 2, 3}, {4, 5, 6}) == doctest::Approx(32.0).epsilon(1e-15));

    Matrix m(2, 3);
    // [[1 2 3], [4 5 6]]
    int v = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ++v;
    std::vector<double> x{1, -1, 2};
    std::vector<double> y = mat_vec(m, x);
    CHECK(y == std::vector<double>{5, 11});

    std::vector<double> z = mat_tvec(m, {1, -1});  // M' (1,-1)
    CHECK(z == std::vector<double>{-3, -3, -3});
}

TEST_CASE("matrix product against hand computation") {
    Matrix a(2, 2), b(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    b(0, 0) = 5; b(0, 1) = 6; b(1, 0) = 7; b(1, 1) = 8;
    Matrix c = mat_mul(a, b);
    CHECK(c(0, 0) == 19);
    CHECK(c(0, 1) == 22);
    CHECK(c(1, 0) == 43);
    CHECK(c(1, 1) == 50);
}

TEST_CASE("mat_tvec matches transpose followed by mat_vec") {
    Matrix m(3, 2);
    m(0, 0) = 0.2; m(0, 1) = 0.8;
    m(1, 0) = 0.5; m(1, 1) = 0.5;
    m(2, 0) = 0.9; m(2, 1) = 0.1;
    std::vector<double> pi{0.3, 0.3, 0.4};
    std::vector<double> got = mat_tvec(m, pi);
    // column sums weighted by pi
    CHECK(got[0] == doctest::Approx(0.2 * 0.3 + 0.5 * 0.3 + 0.9 * 0.4).epsilon(1e-15));
    CHECK(got[1] == doctest::Approx(0.8 * 0.3 + 0.5 * 0.3 + 0.1 * 0.4).epsilon(1e-15));
}
