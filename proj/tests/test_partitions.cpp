#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "meandim/partitions.hpp"
#include "oracles.hpp"

using namespace meandim;

TEST_CASE("raw entropy values") {
    CHECK(entropy_nats({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(std::log(4.0)));
    CHECK(entropy_nats({1.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(entropy_nats({0.5, 0.25, 0.25}) == doctest::Approx(1.5 * std::log(2.0)));
}

TEST_CASE("partition_for_eps certifies its diameter bound") {
    for (Sided sided : {Sided::OneSided, Sided::TwoSided}) {
        for (double eps : {0.5, 0.25, 0.1, 0.03, 0.008}) {
            for (MetricKind kind :
                 {MetricKind::GeometricSum, MetricKind::SupWeighted, MetricKind::Coordinate0}) {
                GridPartition P = GridPartition::forEpsilon(kind, 0.5, sided, eps);
                CHECK(P.diameterBound(sided) <= eps + 1e-12);
                CHECK(P.bins >= 1);
            }
        }
    }
}

TEST_CASE("refinement closed form") {
    GridPartition P;
    P.window = 0;
    P.bins = 2;
    RefinedGrid r3 = refine_n(P, Sided::OneSided, 3);
    CHECK(r3.coordLo == 0);
    CHECK(r3.coordHi == 2);
    CHECK(r3.logCellCount == doctest::Approx(std::log(8.0)));

    RefinedGrid r1 = refine_n(P, Sided::OneSided, 1);
    CHECK(r1.coordinateCount() == 1);

    GridPartition Q;
    Q.window = 1;
    Q.bins = 3;
    RefinedGrid q2 = refine_n(Q, Sided::TwoSided, 2);
    CHECK(q2.coordLo == -1);
    CHECK(q2.coordHi == 2);
    CHECK(q2.logCellCount == doctest::Approx(std::log(81.0)));

    // oracle: join the translated grids explicitly; cells are distinct bin
    // tuples over the union of windows, so the count is bins^(coords)
    int coords = q2.coordinateCount();
    double explicitCount = std::pow(3.0, coords);
    CHECK(std::exp(q2.logCellCount) == doctest::Approx(explicitCount));
}

TEST_CASE("entropy rate closed forms") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(2, Sided::OneSided);

    SUBCASE("one-cell partition has rate zero") {
        GridPartition P;
        P.window = 0;
        P.bins = 1;
        MeasureModel mu = MeasureModel::bernoulli(0.3);
        EntropySequence s = entropy_rate(sys, P, mu, 6);
        CHECK(s.limitEstimate == doctest::Approx(0.0));
    }

    SUBCASE("generating grid over a fair coin gives log 2") {
        GridPartition P;
        P.window = 0;
        P.bins = 2;
        MeasureModel mu = MeasureModel::bernoulli(0.5);
        EntropySequence s = entropy_rate(sys, P, mu, 8);
        CHECK(s.limitEstimate == doctest::Approx(std::log(2.0)));
        CHECK(s.exact);
        // H(P^n)/n nonincreasing toward the limit
        for (size_t i = 1; i < s.valuesOverN.size(); ++i)
            CHECK(s.valuesOverN[i] <= s.valuesOverN[i - 1] + 1e-12);
        CHECK(s.valuesOverN.back() >= s.limitEstimate - 1e-12);
    }

    SUBCASE("continuous uniform product: exactly log(1/mesh) per step") {
        SymbolicSystem grid = SymbolicSystem::uniformLevels(16, Sided::TwoSided);
        GridPartition P;
        P.window = 3;
        P.bins = 10;
        MeasureModel mu = MeasureModel::continuousUniform();
        EntropySequence s = entropy_rate(grid, P, mu, 5);
        CHECK(s.limitEstimate == doctest::Approx(std::log(10.0)).epsilon(1e-14));
        for (int n = 1; n <= 5; ++n) {
            double coords = double(2 * 3 + n);
            CHECK(s.valuesOverN[size_t(n - 1)] ==
                  doctest::Approx(coords * std::log(10.0) / n).epsilon(1e-14));
        }
    }
}

TEST_CASE("grid refinement never decreases the rate") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(8, Sided::OneSided);
    MeasureModel mu = MeasureModel::uniformOnLevels(8);
    double prev = -1.0;
    for (int bins : {2, 4, 8, 16}) {
        GridPartition P;
        P.window = 0;
        P.bins = bins;
        double h = entropy_rate(sys, P, mu, 1).limitEstimate;
        CHECK(h >= prev - 1e-12);
        prev = h;
    }
}

TEST_CASE("join entropy subadditivity") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(8, Sided::OneSided);
    MeasureModel mu = MeasureModel::productOnLevels(
        {0.05, 0.1, 0.15, 0.2, 0.05, 0.1, 0.15, 0.2}, "skewed");
    GridPartition P;
    P.window = 1;
    P.bins = 3;
    GridPartition Q;
    Q.window = 2;
    Q.bins = 5;
    double hp = partition_entropy(sys, P, mu);
    double hq = partition_entropy(sys, Q, mu);
    double hj = join_entropy(sys, P, Q, mu);
    CHECK(hj <= hp + hq + 1e-12);
    CHECK(hj >= std::max(hp, hq) - 1e-12);

    MeasureModel leb = MeasureModel::continuousUniform();
    double lp = partition_entropy(sys, P, leb);
    double lq = partition_entropy(sys, Q, leb);
    double lj = join_entropy(sys, P, Q, leb);
    CHECK(lj <= lp + lq + 1e-12);
}

TEST_CASE("information dimension estimates") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(2, Sided::OneSided);
    std::vector<double> eps = {0.25, 0.125, 0.0625, 0.03125, 0.015625};

    SUBCASE("point mass: zero") {
        MeasureModel mu = MeasureModel::pointMass(2, 0);
        MridEstimate est = mrid_estimate(sys, mu, MetricKind::GeometricSum, 0.5, eps);
        CHECK(est.dim.slope == doctest::Approx(0.0));
        CHECK(est.dim.upper == doctest::Approx(0.0));
    }
    SUBCASE("finite-entropy product: slope collapses") {
        MeasureModel mu = MeasureModel::bernoulli(0.3);
        MridEstimate est = mrid_estimate(sys, mu, MetricKind::GeometricSum, 0.5, eps);
        for (double h : est.h) CHECK(h <= std::log(2.0) + 1e-12);
        CHECK(std::abs(est.dim.slope) <= 1e-9);
    }
    SUBCASE("continuous uniform product: slope exactly one on a dyadic sweep") {
        SymbolicSystem grid = SymbolicSystem::uniformLevels(16, Sided::TwoSided);
        MeasureModel mu = MeasureModel::continuousUniform();
        MridEstimate est = mrid_estimate(grid, mu, MetricKind::GeometricSum, 0.5, eps);
        CHECK(std::abs(est.dim.slope - 1.0) <= 1e-6);
        // h(eps) = log(1/eps) + log 6 on this sweep
        for (size_t i = 0; i < eps.size(); ++i)
            CHECK(est.h[i] == doctest::Approx(std::log(6.0 / eps[i])).epsilon(1e-12));
        CHECK(est.csv.find("epsilon,h,ratio,slope_running") == 0);
    }
}

TEST_CASE("mixture block entropy is concave between components") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(2, Sided::OneSided);
    MeasureModel a = MeasureModel::bernoulli(0.1);
    MeasureModel b = MeasureModel::bernoulli(0.9);
    GridPartition P;
    P.window = 0;
    P.bins = 2;
    for (double w : {0.25, 0.5, 0.75}) {
        MeasureModel mix = MeasureModel::mixture(a, b, w);
        for (int n : {1, 3, 6}) {
            double hm = refined_entropy(sys, P, mix, n);
            double ha = refined_entropy(sys, P, a, n);
            double hb = refined_entropy(sys, P, b, n);
            CHECK(hm >= w * ha + (1 - w) * hb - 1e-12);
        }
    }
    // the n = 1 generating-partition case has a closed form
    MeasureModel half = MeasureModel::mixture(a, b, 0.5);
    CHECK(refined_entropy(sys, P, half, 1) == doctest::Approx(std::log(2.0)));
}
