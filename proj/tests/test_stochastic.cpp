#include "semilab/stochastic.hpp"

#include "semilab/approximants.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace semilab;

TEST_CASE("sampling is reproducible and partition independent") {
    DistributionSemigroup ds = DistributionSemigroup::auxiliary_poisson(3.0);
    SampleBatch batch = sample(ds, 1.5, 200000, 42);
    SampleBatch again = sample(ds, 1.5, 200000, 42);
    CHECK(batch.values == again.values);

    // law_values slices reproduce the batch bit for bit across chunk seams.
    std::vector<double> windowed(1000);
    law_values(ds, 1.5, 42, 65000, 66000, windowed.data());
    for (std::size_t i = 0; i < windowed.size(); ++i) {
        CHECK(windowed[i] == batch.values[65000 + i]);
    }
}

TEST_CASE("laws are supported correctly") {
    for (auto ds : {DistributionSemigroup::dirac(), DistributionSemigroup::scaled_poisson(2.0),
                    DistributionSemigroup::auxiliary_poisson(2.0)}) {
        SampleBatch batch = sample(ds, 0.7, 5000, 7);
        CHECK(std::all_of(batch.values.begin(), batch.values.end(),
                          [](double x) { return x >= 0.0; }));
        SampleBatch at_zero = sample(ds, 0.0, 100, 7);
        CHECK(std::all_of(at_zero.values.begin(), at_zero.values.end(),
                          [](double x) { return x == 0.0; }));
    }
    SampleBatch dirac = sample(DistributionSemigroup::dirac(), 0.7, 10, 7);
    CHECK(std::all_of(dirac.values.begin(), dirac.values.end(),
                      [](double x) { return x == 0.7; }));
}

TEST_CASE("closed-form moments") {
    CHECK(moments(DistributionSemigroup::dirac(), 2.0).mean == doctest::Approx(2.0));
    CHECK(moments(DistributionSemigroup::dirac(), 2.0).variance == 0.0);

    LawMoments scaled = moments(DistributionSemigroup::scaled_poisson(4.0), 3.0);
    CHECK(scaled.mean == doctest::Approx(3.0));
    CHECK(scaled.variance == doctest::Approx(3.0 / 4.0));

    LawMoments aux = moments(DistributionSemigroup::auxiliary_poisson(4.0), 3.0);
    CHECK(aux.mean == doctest::Approx(3.0));
    CHECK(aux.variance == doctest::Approx(2.0 * 3.0 / 4.0));

    LawMoments gauss = moments(DistributionSemigroup::gaussian(0.5, 2.0), 3.0);
    CHECK(gauss.mean == doctest::Approx(1.5));
    CHECK(gauss.variance == doctest::Approx(6.0));
}

TEST_CASE("characteristic functions match the high-precision references") {
    struct Row {
        double lambda, t, omega;
        Complex aux, scaled;
    };
    const Row rows[] = {
        {1.0, 1.0, 1.0, Complex(0.53228073021567071484, 0.29078628821269184886),
         Complex(0.42079361743004560186, 0.47084264330993586067)},
        {5.0, 2.0, 0.7, Complex(0.16207187274344191655, 0.80904130053457689066),
         Complex(0.15820628001056622484, 0.89288634851526353245)},
        {20.0, 10.0, 0.3, Complex(-0.94634865383873100087, 0.13555041047333936821),
         Complex(-0.96795126798435813448, 0.13808921484945575488)},
    };
    for (const Row& row : rows) {
        Complex aux = characteristic_fn(DistributionSemigroup::auxiliary_poisson(row.lambda), row.t,
                                        row.omega);
        Complex scaled = characteristic_fn(DistributionSemigroup::scaled_poisson(row.lambda), row.t,
                                           row.omega);
        CHECK(std::abs(aux - row.aux) <= 1e-14);
        CHECK(std::abs(scaled - row.scaled) <= 1e-14);
    }
    CHECK(std::abs(characteristic_fn(DistributionSemigroup::dirac(), 2.0, 0.5) -
                   std::exp(Complex(0.0, 1.0))) <= 1e-15);
}

TEST_CASE("empirical statistics agree with the closed forms") {
    const std::size_t n = 200000;
    for (auto ds : {DistributionSemigroup::scaled_poisson(3.0),
                    DistributionSemigroup::auxiliary_poisson(3.0),
                    DistributionSemigroup::gaussian(1.0, 0.5)}) {
        SampleBatch batch = sample(ds, 2.0, n, 9);
        LawMoments closed = moments(ds, 2.0);
        Estimate mean = empirical_mean(batch);
        Estimate variance = empirical_variance(batch);
        CHECK(std::abs(mean.value - closed.mean) <= 5.0 * mean.std_error);
        CHECK(std::abs(variance.value - closed.variance) <= 5.0 * variance.std_error);
        ComplexEstimate phi = empirical_char_fn(batch, 0.8);
        CHECK(std::abs(phi.value - characteristic_fn(ds, 2.0, 0.8)) <= 5.0 * phi.std_error + 1e-12);
    }
}

TEST_CASE("laws form convolution semigroups") {
    for (auto ds : {DistributionSemigroup::scaled_poisson(2.0),
                    DistributionSemigroup::auxiliary_poisson(2.0)}) {
        double dev = semigroup_law_check(ds, 0.5, 2.0, 100000, {0.5, 1.0, 2.0}, 11);
        CHECK(dev <= 5.0 / std::sqrt(100000.0));
    }
}

TEST_CASE("laws are weakly continuous at small times") {
    // E[min(theta, 1)] -> 0 along t -> 0 for the Poisson variants.
    DistributionSemigroup ds = DistributionSemigroup::auxiliary_poisson(2.0);
    double previous = 1.0;
    for (double t : {1.0, 0.25, 0.0625, 0.015625}) {
        SampleBatch batch = sample(ds, t, 50000, 13);
        double value = 0.0;
        for (double x : batch.values) value += std::min(x, 1.0);
        value /= static_cast<double>(batch.values.size());
        CHECK(value < previous);
        previous = value;
    }
    CHECK(previous <= 0.05);
}

TEST_CASE("dirac expectation reproduces the semigroup exactly") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = Complex(-0.5, 1.0);
    BoundedGenerator g(a);
    McMatrix mc = expectation_of_semigroup(g, DistributionSemigroup::dirac(), 1.3, 100, 5);
    CHECK(operator_norm(mc.mean - evaluate(g, 1.3)) <= 1e-13);
    // Identical samples: the residual spread is accumulation rounding only.
    CHECK(mc.std_error <= 1e-8);
}

TEST_CASE("expectation sampler rejects unsupported inputs") {
    BoundedGenerator dissipative(-ComplexMatrix::Identity(2, 2));
    CHECK_THROWS_AS(expectation_of_semigroup(dissipative, DistributionSemigroup::gaussian(1.0, 1.0),
                                             1.0, 100, 5),
                    std::invalid_argument);
    BoundedGenerator expanding(ComplexMatrix::Identity(2, 2));
    CHECK_THROWS_AS(expectation_of_semigroup(expanding, DistributionSemigroup::dirac(), 1.0, 100, 5),
                    std::invalid_argument);
}

TEST_CASE("family product expectation matches the split expectation") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = -0.25;
    CommutingFamily fam({a, 0.5 * a});
    std::vector<DistributionSemigroup> laws{DistributionSemigroup::dirac(),
                                            DistributionSemigroup::dirac()};
    McMatrix mc = expectation_of_family_product(fam, laws, {0.7, 1.1}, 50, 3);
    CHECK(operator_norm(mc.mean - family_product(fam, {0.7, 1.1})) <= 1e-13);
}
