#include <doctest.h>

#include <omp.h>

#include "covest/kernels.hpp"
#include "oracles.hpp"

using namespace covest;

namespace {

struct ThreadGuard {
    int saved = omp_get_max_threads();
    explicit ThreadGuard(int n) { omp_set_num_threads(n); }
    ~ThreadGuard() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    ThreadGuard threads(4);
    std::mt19937_64 rng(21);
    // small cases stay serial; the large ones cross the parallel threshold
    for (const auto [n, l] : {std::pair<Index, Index>{3, 5}, {16, 60}, {16, 800}, {32, 300}}) {
        CAPTURE(n);
        CAPTURE(l);
        const auto q = oracle::random_psd(n, rng);
        const DirectionMatrix u = oracle::random_complex(n, l, rng);

        RealVector a(l), b(l);
        kernels::probe_powers(q, u, 3.0, a);
        kernels::reference::probe_powers(q, u, 3.0, b);
        CHECK((a.array() == b.array()).all());

        std::vector<double> w(static_cast<std::size_t>(l));
        std::normal_distribution<double> nd;
        for (auto& x : w)
            x = nd(rng);
        const auto s1 = kernels::weighted_dyads(u, w, 0.25);
        const auto s2 = kernels::reference::weighted_dyads(u, w, 0.25);
        CHECK((s1.matrix().array() == s2.matrix().array()).all());

        const Eigen::MatrixXd d1 = kernels::glm_design(u);
        const Eigen::MatrixXd d2 = kernels::reference::glm_design(u);
        CHECK((d1.array() == d2.array()).all());

        const RealVector x = RealVector::Random(l + 1);
        RealVector y1(l + 1), y2(l + 1);
        kernels::matvec(d1, x, y1);
        kernels::reference::matvec(d1, x, y2);
        CHECK((y1.array() == y2.array()).all());
    }
}

TEST_CASE("kernels agree with direct formulas") {
    std::mt19937_64 rng(22);
    const Index n = 5, l = 7;
    const auto q = oracle::random_psd(n, rng);
    const DirectionMatrix u = oracle::random_complex(n, l, rng);

    RealVector lam(l);
    kernels::probe_powers(q, u, 2.0, lam);
    for (Index i = 0; i < l; ++i)
        CHECK(lam(i) == doctest::Approx(oracle::lambda(q.matrix(), u.col(i), 2.0)).epsilon(1e-12));

    std::vector<double> w{0.5, -1.0, 2.0, 0.0, 1.5, -0.25, 3.0};
    Eigen::MatrixXcd expected = 0.75 * Eigen::MatrixXcd::Identity(n, n);
    for (Index i = 0; i < l; ++i)
        expected += w[static_cast<std::size_t>(i)] * u.col(i) * u.col(i).adjoint();
    CHECK((kernels::weighted_dyads(u, w, 0.75).matrix() - expected).norm() < 1e-12);

    const Eigen::MatrixXd a = kernels::glm_design(u);
    CHECK(a(0, 0) == static_cast<double>(n));
    for (Index i = 0; i < l; ++i) {
        CHECK(a(0, i + 1) == doctest::Approx(u.col(i).squaredNorm()));
        CHECK(a(i + 1, 0) == a(0, i + 1));
        for (Index j = 0; j < l; ++j)
            CHECK(a(i + 1, j + 1) == doctest::Approx(std::norm(u.col(i).dot(u.col(j)))).epsilon(1e-12));
    }

    RealVector out(l + 1);
    const RealVector x = RealVector::Random(l + 1);
    kernels::matvec(a, x, out);
    CHECK((out - a * x).norm() < 1e-12 * (1.0 + (a * x).norm()));
}

TEST_CASE("kernel shape checks") {
    const DirectionMatrix u = DirectionMatrix::Ones(3, 4);
    RealVector out(4), wrong(3);
    CHECK_THROWS_AS(kernels::probe_powers(HermitianMatrix::zero(2), u, 1.0, out), DimensionMismatch);
    CHECK_THROWS_AS(kernels::probe_powers(HermitianMatrix::zero(3), u, 1.0, wrong), DimensionMismatch);
    std::vector<double> w(3);
    CHECK_THROWS_AS(kernels::weighted_dyads(u, w, 0.0), DimensionMismatch);
}
