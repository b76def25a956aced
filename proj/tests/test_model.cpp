#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quadlind/json_io.hpp"
#include "quadlind/model.hpp"

using namespace quadlind;

namespace {

ModelSpec scalar_model(double lp, double lm, double h0 = 0.0) {
    ModelSpec s;
    s.L = 1;
    s.h = Matrix::Constant(1, 1, h0);
    s.lambda_plus = Matrix::Constant(1, 1, lp);
    s.lambda_minus = Matrix::Constant(1, 1, lm);
    return s;
}

}  // namespace

TEST_CASE("scalar Hermitian PSD model validates") {
    const Model m = validate_model(scalar_model(0.75, 0.25));
    CHECK(m.size() == 1);
    CHECK(m.hbar() == 1.0);
    CHECK(m.lambda_plus()(0, 0) == Complex(0.75, 0.0));
}

TEST_CASE("non-Hermitian h is rejected with the matrix named") {
    ModelSpec s;
    s.L = 2;
    s.h = Matrix::Zero(2, 2);
    s.h(0, 1) = 1.0;
    s.lambda_plus = Matrix::Zero(2, 2);
    s.lambda_minus = Matrix::Zero(2, 2);
    CHECK_THROWS_WITH_AS(validate_model(s), doctest::Contains("h not Hermitian"),
                         ValidationError);
}

TEST_CASE("negative Lambda+ is rejected as not PSD") {
    CHECK_THROWS_WITH_AS(validate_model(scalar_model(-0.1, 0.25)),
                         doctest::Contains("Lambda+ not PSD"), ValidationError);
}

TEST_CASE("dimension mismatch and bad scalars are rejected") {
    ModelSpec s = scalar_model(0.5, 0.5);
    s.lambda_minus = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(validate_model(s), ValidationError);

    ModelSpec bad_hbar = scalar_model(0.5, 0.5);
    bad_hbar.hbar = 0.0;
    CHECK_THROWS_AS(validate_model(bad_hbar), ValidationError);

    ModelSpec no_sites;
    no_sites.L = 0;
    CHECK_THROWS_AS(validate_model(no_sites), ValidationError);
}

TEST_CASE("hermiticity tolerance is configurable") {
    ModelSpec s = scalar_model(0.5, 0.5);
    s.L = 2;
    s.h = Matrix::Zero(2, 2);
    s.h(0, 1) = Complex(1.0, 1e-8);
    s.h(1, 0) = Complex(1.0, -1e-8 + 1e-9);  // asymmetry 1e-9
    s.lambda_plus = Matrix::Zero(2, 2);
    s.lambda_minus = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(validate_model(s), ValidationError);
    Tolerances loose;
    loose.hermitian = 1e-6;
    CHECK_NOTHROW(validate_model(s, loose));
}

TEST_CASE("xx chain: tridiagonal h with diagonal 2 h_z and off-diagonal J") {
    XXChainParams p;
    p.L = 3;
    p.J = 1.0;
    p.h_z = 0.5;
    p.Gamma_1 = 1.0;
    p.Gamma_L = 1.0;
    const ModelSpec s = build_xx_chain(p);
    Matrix expected(3, 3);
    expected << 1, 1, 0, 1, 1, 1, 0, 1, 1;
    CHECK(max_abs(Matrix(s.h - expected)) == 0.0);
}

TEST_CASE("xx chain: boundary rates split as nbar*Gamma and (1-nbar)*Gamma") {
    XXChainParams p;
    p.L = 2;
    p.J = 0.3;
    p.Gamma_1 = 2.0;
    p.nbar_1 = 0.75;
    p.Gamma_L = 0.0;
    const ModelSpec s = build_xx_chain(p);
    CHECK(s.lambda_plus(0, 0) == Complex(1.5, 0.0));
    CHECK(s.lambda_minus(0, 0) == Complex(0.5, 0.0));
}

TEST_CASE("xx chain: interior sites carry no dissipation") {
    XXChainParams p;
    p.L = 3;
    p.J = 1.0;
    p.Gamma_1 = 1.0;
    p.Gamma_L = 1.0;
    p.nbar_1 = 0.5;
    p.nbar_L = 0.5;
    const ModelSpec s = build_xx_chain(p);
    CHECK(std::abs(s.lambda_plus(1, 1)) == 0.0);
    CHECK(std::abs(s.lambda_minus(1, 1)) == 0.0);
    CHECK(s.lambda_plus.cwiseAbs().sum() ==
          doctest::Approx(std::abs(s.lambda_plus(0, 0)) + std::abs(s.lambda_plus(2, 2))));
}

TEST_CASE("xx chain params are range-checked") {
    XXChainParams p;
    p.L = 2;
    p.Gamma_1 = -1.0;
    CHECK_THROWS_AS(build_xx_chain(p), ValidationError);
    p.Gamma_1 = 1.0;
    p.nbar_1 = 1.5;
    CHECK_THROWS_AS(build_xx_chain(p), ValidationError);
}

TEST_CASE("every xx chain validates; Gamma and nbar are recoverable") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        XXChainParams p;
        p.L = 1 + static_cast<Index>(rng() % 6);
        p.J = 4.0 * u(rng) - 2.0;
        p.h_z = 2.0 * u(rng) - 1.0;
        p.Gamma_1 = 3.0 * u(rng);
        p.Gamma_L = 3.0 * u(rng);
        p.nbar_1 = u(rng);
        p.nbar_L = u(rng);
        const ModelSpec s = build_xx_chain(p);
        CHECK_NOTHROW(validate_model(s));
        if (p.L >= 2) {
            const double g1 = (s.lambda_plus(0, 0) + s.lambda_minus(0, 0)).real();
            CHECK(g1 == doctest::Approx(p.Gamma_1).epsilon(1e-14));
            if (p.Gamma_1 > 0.0) {
                CHECK(s.lambda_plus(0, 0).real() / g1 ==
                      doctest::Approx(p.nbar_1).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("model JSON round trip is bitwise") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist(0.0, 1.0);
    ModelSpec s;
    s.L = 3;
    s.hbar = 0.731;
    s.h = Matrix::Zero(3, 3);
    s.lambda_plus = Matrix::Zero(3, 3);
    s.lambda_minus = Matrix::Zero(3, 3);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            s.h(i, j) = Complex(dist(rng), dist(rng));
            s.lambda_plus(i, j) = Complex(dist(rng), dist(rng));
            s.lambda_minus(i, j) = Complex(dist(rng), dist(rng));
        }
    }
    const nlohmann::json j = model_to_json(s);
    const ModelSpec back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.L == s.L);
    CHECK(back.hbar == s.hbar);
    CHECK((back.h - s.h).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.lambda_plus - s.lambda_plus).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.lambda_minus - s.lambda_minus).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("xx_chain JSON shorthand builds the chain") {
    const auto j = nlohmann::json::parse(R"({"xx_chain": {"L": 3, "J": 1.0, "h_z": 0.5,
        "Gamma_1": 2.0, "Gamma_L": 0.5, "nbar_1": 1.0, "nbar_L": 0.0}})");
    const ModelSpec s = model_from_json(j);
    CHECK(s.L == 3);
    CHECK(s.h(0, 0) == Complex(1.0, 0.0));
    CHECK(s.lambda_plus(0, 0) == Complex(2.0, 0.0));
    CHECK(s.lambda_minus(2, 2) == Complex(0.5, 0.0));
}

TEST_CASE("bare reals are accepted for complex entries on input") {
    const auto j = nlohmann::json::parse(
        R"({"L": 1, "h": [[0.0]], "lambda_plus": [[[0.75, 0.0]]], "lambda_minus": [[0.25]]})");
    const ModelSpec s = model_from_json(j);
    CHECK(s.lambda_plus(0, 0) == Complex(0.75, 0.0));
    CHECK(s.lambda_minus(0, 0) == Complex(0.25, 0.0));
}
