#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "szego/lambert.hpp"

using szego::complex;
using Catch::Matchers::WithinAbs;

namespace {

// Independent oracle: bisection on w e^w = x over a real bracket.
double bisect_wew(double x, double lo, double hi) {
    auto f = [x](double w) { return w * std::exp(w) - x; };
    REQUIRE(f(lo) * f(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double func_residual(complex w, complex z) {
    return std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z));
}

} // namespace

TEST_CASE("principal branch at the anchor points") {
    CHECK(szego::w_principal(0.0).value == complex(0.0));
    CHECK_THAT(std::abs(szego::w_principal(std::numbers::e).value - 1.0),
               WithinAbs(0.0, 1e-14));
    CHECK(szego::w_principal(complex(-szego::inv_e)).value == complex(-1.0));

    const double oracle = bisect_wew(-std::exp(-3.0), -1.0 + 1e-12, 0.0);
    CHECK_THAT(szego::w_principal(-std::exp(-3.0)).value.real(),
               WithinAbs(oracle, 1e-13));
    CHECK_THAT(oracle, WithinAbs(-0.0525, 5e-5)); // sanity on the oracle itself
}

TEST_CASE("secondary branch on the real interval (-1/e, 0)") {
    CHECK(szego::w_branch(-1, complex(-szego::inv_e)).value == complex(-1.0));

    const double oracle = bisect_wew(-std::exp(-3.0), -40.0, -1.0 - 1e-12);
    const auto w = szego::w_branch(-1, -std::exp(-3.0));
    CHECK(w.value.imag() == 0.0);
    CHECK_THAT(w.value.real(), WithinAbs(oracle, 1e-12));
    CHECK_THAT(oracle, WithinAbs(-4.50524, 5e-5));

    CHECK_THAT(std::abs(szego::w_branch(0, std::numbers::e).value - 1.0),
               WithinAbs(0.0, 1e-14));
}

TEST_CASE("branch pole at z = 0 for k != 0") {
    CHECK_THROWS_AS(szego::w_branch(-1, 0.0), szego::domain_error);
    CHECK_THROWS_AS(szego::w_branch(2, 0.0), szego::domain_error);
}

TEST_CASE("functional equation and branch strips on random samples") {
    std::mt19937 rng(20240917);
    std::uniform_real_distribution<double> uarg(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> ulog(-6.0, 6.0);
    for (int k = -2; k <= 2; ++k) {
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const complex z = std::polar(std::exp(ulog(rng)), uarg(rng));
            const auto w = szego::w_branch(k, z);
            worst = std::max(worst, func_residual(w.value, z));
            CHECK(szego::branch_index_of(w.value) == k);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("strict monotonicity on (-1/e, 10]") {
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
        const double x = -szego::inv_e + 1e-9 + (10.0 + szego::inv_e) * i / 400.0;
        const auto w = szego::w_principal(x);
        CHECK(w.value.imag() == 0.0);
        CHECK(w.value.real() > prev);
        prev = w.value.real();
    }
}

TEST_CASE("derivative formula") {
    CHECK(szego::w_derivative(0, 0.0) == complex(1.0));
    CHECK_THAT(std::abs(szego::w_derivative(0, std::numbers::e) - std::exp(-1.0) / 2.0),
               WithinAbs(0.0, 1e-14));

    // central finite differences of w_principal at z = 1
    const double h = 1e-6;
    const complex fd =
        (szego::w_principal(1.0 + h).value - szego::w_principal(1.0 - h).value) / (2 * h);
    CHECK_THAT(std::abs(szego::w_derivative(0, 1.0) - fd), WithinAbs(0.0, 1e-9));
    CHECK_THAT(szego::w_derivative(0, 1.0).real(), WithinAbs(0.3619, 1e-4));

    CHECK_THROWS_AS(szego::w_derivative(0, complex(-szego::inv_e)),
                    szego::singularity_error);
}

TEST_CASE("derivative matches central differences away from cuts") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k : {-1, 0, 1}) {
        for (int i = 0; i < 200; ++i) {
            complex z(u(rng) * 3.0, u(rng) * 3.0);
            if (std::abs(z) < 0.05 || std::abs(z + szego::inv_e) < 0.05)
                continue;
            if (std::abs(z.imag()) < 0.05 && (k != 0 || z.real() < 0.0))
                continue; // stay away from the cuts of this branch
            const double h = 1e-6 * std::max(1.0, std::abs(z));
            const complex fd =
                (szego::w_branch(k, z + h).value - szego::w_branch(k, z - h).value) / (2 * h);
            const complex d = szego::w_derivative(k, z);
            CHECK(std::abs(d - fd) / std::abs(d) < 1e-6);
        }
    }
}

TEST_CASE("Maclaurin series oracle near the origin") {
    CHECK(szego::w_series(0.0, 10) == complex(0.0));
    CHECK_THAT(std::abs(szego::w_series(0.1, 30) - szego::w_principal(0.1).value),
               WithinAbs(0.0, 1e-12));
    // 60 terms at z = -0.3 leave a 1.626e-8 tail (verified in 40-digit
    // arithmetic); convergence is slow this close to -1/e.
    CHECK_THAT(std::abs(szego::w_series(-0.3, 60) - szego::w_principal(-0.3).value),
               WithinAbs(0.0, 2.5e-8));
    CHECK_THAT(std::abs(szego::w_series(-0.3, 90) - szego::w_principal(-0.3).value),
               WithinAbs(0.0, 1e-8));
    CHECK_THROWS_AS(szego::w_series(0.4, 10), szego::domain_error);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        complex z(u(rng), u(rng));
        z *= 0.2 / std::max(1.0, std::abs(z) / 0.2 * 1.0);
        if (std::abs(z) > 0.2)
            z *= 0.2 / std::abs(z);
        CHECK(std::abs(szego::w_series(z, 80) - szego::w_principal(z).value) < 1e-12);
    }
}

TEST_CASE("cut side convention: limits from the upper half-plane") {
    // on the cut (-inf,-1/e], plain real input takes the upper limit
    const auto w = szego::w_principal(complex(-2.0, 0.0));
    CHECK(w.value.imag() > 0.0);
    // a negatively signed zero selects the lower side, the conjugate value
    const auto wl = szego::w_principal(complex(-2.0, -0.0));
    CHECK_THAT(std::abs(wl.value - std::conj(w.value)), WithinAbs(0.0, 1e-15));

    // conjugation symmetry W_k(conj z) = conj(W_{-k}(z))
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k : {-2, -1, 0, 1, 2}) {
        for (int i = 0; i < 100; ++i) {
            const complex z(u(rng), u(rng));
            if (std::abs(z) < 1e-3 || z.imag() == 0.0)
                continue;
            const complex a = szego::w_branch(k, std::conj(z)).value;
            const complex b = std::conj(szego::w_branch(-k, z).value);
            CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("iteration metadata is reported") {
    const auto w = szego::w_branch(1, complex(0.4, 0.7));
    CHECK(w.iterations > 0);
    CHECK(w.residual <= 1e-13 * std::max(1.0, std::abs(complex(0.4, 0.7))));
}
