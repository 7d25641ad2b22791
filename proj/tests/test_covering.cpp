#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "meandim/covering.hpp"
#include "oracles.hpp"

using namespace meandim;

namespace {

// m levels placed at coordinate 0, padded to the metric range for (n=1, w).
std::vector<PointWindow> levelPoints(const SymbolicSystem& sys, const MetricSpec& m) {
    int lo, hi;
    m.requiredRange(1, sys.sided, lo, hi);
    std::vector<PointWindow> pts;
    for (int s = 0; s < sys.alphabetSize(); ++s) {
        PointWindow w(lo, std::vector<uint8_t>(size_t(hi - lo + 1), 0));
        w.symbols[size_t(-lo)] = uint8_t(s);
        pts.push_back(std::move(w));
    }
    return pts;
}

}  // namespace

TEST_CASE("greedy separated: degenerate families") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(11, Sided::OneSided);
    MetricSpec m(MetricKind::Coordinate0, 0.5, 0);
    auto pts = levelPoints(sys, m);

    auto single = greedy_separated(sys, {pts[0]}, 1, 0.25, m);
    CHECK(single.size() == 1);

    // two points at distance 1.0, eps 0.5: both kept
    auto pair = greedy_separated(sys, {pts.front(), pts.back()}, 1, 0.5, m);
    CHECK(pair.size() == 2);
}

TEST_CASE("greedy separated on the 11-level grid matches exhaustive packing") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(11, Sided::OneSided);
    MetricSpec m(MetricKind::Coordinate0, 0.5, 0);
    auto pts = levelPoints(sys, m);

    auto kept = greedy_separated(sys, pts, 1, 0.25, m);
    CHECK(kept.size() == 4);
    CHECK(sys.level(kept[0].symbolAt(0)) == doctest::Approx(0.0));
    CHECK(sys.level(kept[1].symbolAt(0)) == doctest::Approx(0.3));
    CHECK(sys.level(kept[2].symbolAt(0)) == doctest::Approx(0.6));
    CHECK(sys.level(kept[3].symbolAt(0)) == doctest::Approx(0.9));

    size_t best = oracle::brute_max_separated(pts.size(), 0.25, [&](size_t a, size_t b) {
        return bowen_distance(sys, pts[a], pts[b], 1, m).lo;
    });
    CHECK(best == 4);

    // pairwise separation and maximality-under-inclusion
    for (size_t a = 0; a < kept.size(); ++a)
        for (size_t b = a + 1; b < kept.size(); ++b)
            CHECK(bowen_distance(sys, kept[a], kept[b], 1, m).lo >= 0.25);
    double tail = m.tailMass(sys.sided);
    for (const auto& p : pts) {
        double nearest = 1e9;
        for (const auto& k : kept)
            nearest = std::min(nearest, bowen_distance(sys, p, k, 1, m).hi);
        CHECK(nearest < 0.25 + 2 * tail);
    }
}

TEST_CASE("greedy separated rejects epsilon below resolution") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(2, Sided::TwoSided);
    MetricSpec m(MetricKind::GeometricSum, 0.5, 1);  // tail = 1.0
    auto pts = levelPoints(sys, m);
    CHECK_THROWS_AS(greedy_separated(sys, pts, 1, 0.5, m), std::invalid_argument);
}

TEST_CASE("exact small spanning counts") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(11, Sided::OneSided);
    MetricSpec m(MetricKind::Coordinate0, 0.5, 0);
    auto pts = levelPoints(sys, m);

    CHECK(spanning_exact_small(sys, {pts[3]}, 1, 0.25, m) == 1);
    CHECK(spanning_exact_small(sys, pts, 1, 0.25, m) == 3);
    CHECK(spanning_exact_small(sys, pts, 1, 1.5, m) == 1);  // eps beyond diameter

    size_t brute = oracle::brute_min_cover(pts.size(), [&](size_t c, size_t p) {
        return bowen_distance(sys, pts[c], pts[p], 1, m).hi < 0.25;
    });
    CHECK(brute == 3);

    SymbolicSystem big = SymbolicSystem::uniformLevels(21, Sided::OneSided);
    MetricSpec m0(MetricKind::Coordinate0, 0.5, 0);
    auto manyPts = levelPoints(big, m0);
    CHECK_THROWS_AS(spanning_exact_small(big, manyPts, 1, 0.25, m0), CapExceeded);
}

TEST_CASE("sandwich between separated and spanning counts on exhaustive instances") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(11, Sided::OneSided);
    MetricSpec m(MetricKind::Coordinate0, 0.5, 0);
    auto pts = levelPoints(sys, m);
    for (double eps : {0.15, 0.25, 0.4}) {
        size_t sep = greedy_separated(sys, pts, 1, eps, m).size();
        size_t span = spanning_exact_small(sys, pts, 1, eps, m);
        CHECK(span <= sep);  // maximal packings cover
        // a 2eps-separated family lower-bounds the eps-covering count
        size_t sep2 = greedy_separated(sys, pts, 1, 2 * eps, m).size();
        CHECK(sep2 <= span);
    }
}

TEST_CASE("growth rate estimation") {
    CountTable t;
    t.epsilons = {0.1};
    t.ns = {2, 4, 6, 8};
    t.modes = {"exact"};

    SUBCASE("constant counts give rate zero") {
        t.cells = {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
        RateEstimate r = growth_rate(t, 0);
        CHECK(r.value == doctest::Approx(0.0));
    }
    SUBCASE("pure exponential recovers log of the base") {
        t.cells = {{}};
        for (int n : t.ns)
            t.cells[0].push_back({uint64_t(std::pow(3.0, n)), 1, 1});
        RateEstimate r = growth_rate(t, 0);
        CHECK(r.value == doctest::Approx(std::log(3.0)).epsilon(1e-10));
        CHECK(r.residual == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("prefactor does not bias the slope") {
        t.cells = {{}};
        for (int n : t.ns)
            t.cells[0].push_back({uint64_t(7.0 * std::pow(2.0, n)), 1, 1});
        RateEstimate r = growth_rate(t, 0);
        CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
        // last-n estimate still carries the prefactor
        CHECK(r.lastN > r.value);
    }
    SUBCASE("insufficient depths throw") {
        t.ns = {2, 4};
        t.cells = {{{4, 1, 1}, {16, 1, 1}}};
        CHECK_THROWS_AS(growth_rate(t, 0), std::invalid_argument);
    }
}

TEST_CASE("mdim estimate: single-level system is zero") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(1, Sided::TwoSided);
    MdimOptions opt;
    auto est = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625},
                             {1, 2, 3}, opt);
    CHECK(est.dim.slope == doctest::Approx(0.0));
    CHECK(est.dim.upper == doctest::Approx(0.0));
}

TEST_CASE("mdim estimate: full 2-shift has vanishing dimension slope") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(2, Sided::TwoSided);
    MdimOptions opt;
    opt.budget = 300000;
    auto est = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625},
                             {1, 2, 3}, opt);
    // every rate is log 2 up to family noise; the eps-slope vanishes
    CHECK(std::abs(est.dim.slope) <= 0.05);
    for (double r : est.rates) CHECK(r <= std::log(2.0) + 0.35);
}

TEST_CASE("mdim estimate: quantized unit-interval shift tracks slope one") {
    // 64 levels swept over the quantization-valid regime eps >= 1/m
    SymbolicSystem sys = SymbolicSystem::uniformLevels(64, Sided::TwoSided);
    MdimOptions opt;
    std::vector<double> eps;
    for (int k = 2; k <= 6; ++k) eps.push_back(std::pow(2.0, -k));
    auto est = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, eps, {1, 2, 3}, opt);
    CHECK(est.dim.slope >= 0.85);
    CHECK(est.dim.slope <= 1.05);
    CHECK(est.dim.residual <= 1e-9);
}

TEST_CASE("mdim estimate bounds and table consistency") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(8, Sided::TwoSided);
    MdimOptions opt;
    auto est = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625},
                             {1, 2, 3}, opt);
    // ratios at the two smallest eps are bounded by log m over the
    // second-smallest log(1/eps)
    double bound = std::log(8.0) / std::log(1.0 / 0.125) * 1.05;
    CHECK(est.dim.upper <= bound);
    CHECK(est.dim.lower >= 0.0);

    // anti-monotonicity: smaller eps never decreases a separated count
    for (size_t e = 0; e + 1 < est.table.epsilons.size(); ++e)
        for (size_t i = 0; i < est.table.ns.size(); ++i)
            CHECK(est.table.cells[e + 1][i].sep >= est.table.cells[e][i].sep);

    // spanLo lower-bounds the separated count cell-wise
    for (size_t e = 0; e < est.table.epsilons.size(); ++e)
        for (size_t i = 0; i < est.table.ns.size(); ++i)
            CHECK(est.table.cells[e][i].spanLo <= est.table.cells[e][i].sep);

    std::string csv = est.table.toCsv();
    CHECK(csv.find("epsilon,n,sep,span_lo,span_hi,mode") == 0);
}

TEST_CASE("exact mode on the full shift with coordinate-0 metric counts cylinders") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(3, Sided::OneSided);
    MdimOptions opt;
    auto est = estimate_mdim(sys, MetricKind::Coordinate0, 0.5, {0.3, 0.2, 0.1}, {1, 2, 3}, opt);
    // eps below the level gap (0.5): all cylinders separated
    for (size_t e = 0; e < est.table.epsilons.size(); ++e) {
        CHECK(est.table.modes[e] == "exact");
        for (size_t i = 0; i < est.table.ns.size(); ++i)
            CHECK(est.table.cells[e][i].sep ==
                  uint64_t(std::pow(3.0, est.table.ns[i]) + 0.5));
    }
}

TEST_CASE("mdim estimate is deterministic given the seed") {
    SymbolicSystem sys = SymbolicSystem::uniformLevels(5, Sided::TwoSided);
    MdimOptions opt;
    opt.budget = 50;  // force sampling
    opt.sampleCount = 400;
    opt.seed = 42;
    auto a = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625}, {1, 2, 3}, opt);
    auto b = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625}, {1, 2, 3}, opt);
    CHECK(a.table.toCsv() == b.table.toCsv());
    for (size_t e = 0; e < a.table.epsilons.size(); ++e)
        CHECK(a.table.modes[e] == "sampled-lower-bound");

    opt.jobs = 3;
    auto c = estimate_mdim(sys, MetricKind::GeometricSum, 0.5, {0.25, 0.125, 0.0625}, {1, 2, 3}, opt);
    CHECK(a.table.toCsv() == c.table.toCsv());
}

TEST_CASE("tame growth of covering numbers") {
    SUBCASE("finite alphabet below the gap: constant log r1 forced to zero") {
        SymbolicSystem sys = SymbolicSystem::uniformLevels(4, Sided::TwoSided);
        std::vector<double> eps = {0.25, 0.125, 0.0625, 0.03125, 0.015625};
        auto rep = tame_growth_check(sys, MetricKind::Coordinate0, 0.5, {0.5, 1.0, 2.0}, eps);
        // r1 saturates at m once eps is below the gap
        CHECK(rep.r1.back() == 4);
        for (const auto& pt : rep.perTheta) {
            CHECK(pt.tailDecreasing);
            CHECK(pt.sequence.back() < pt.sequence.front());
        }
    }
    SUBCASE("covering counts stay close to the interval covering closed form") {
        SymbolicSystem sys = SymbolicSystem::uniformLevels(64, Sided::TwoSided);
        std::vector<double> eps = {0.25, 0.125, 0.0625};
        auto rep = tame_growth_check(sys, MetricKind::Coordinate0, 0.5, {1.0}, eps);
        for (size_t i = 0; i < eps.size(); ++i) {
            double closedForm = std::min(64.0, std::ceil(1.0 / (2.0 * eps[i])));
            CHECK(double(rep.r1[i]) >= closedForm * 0.5);
            CHECK(double(rep.r1[i]) <= closedForm * 2.5 + 1);
        }
    }
    SUBCASE("theta = 1 halving sweep does not grow") {
        SymbolicSystem sys = SymbolicSystem::uniformLevels(16, Sided::TwoSided);
        std::vector<double> eps = {0.5, 0.25, 0.125, 0.0625, 0.03125};
        auto rep = tame_growth_check(sys, MetricKind::Coordinate0, 0.5, {1.0}, eps);
        const auto& seq = rep.perTheta[0].sequence;
        for (size_t i = 3; i + 1 < seq.size(); ++i) {
            if (seq[i] <= 0 || seq[i + 1] <= 0) continue;
            CHECK(seq[i + 1] <= seq[i] + 1e-9);
        }
        CHECK_THROWS_AS(tame_growth_check(sys, MetricKind::Coordinate0, 0.5, {-1.0}, eps),
                        std::invalid_argument);
    }
}
