#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meandim/shift_space.hpp"
#include "meandim/util.hpp"

namespace meandim {

/// Maximal-under-inclusion separated subset of `points` in scan order
/// (first-fit). Pairwise lower Bowen distance >= eps, so the result is a
/// certified packing; by maximality every input point lies within
/// hi < eps + 2*tail of some member. Throws if eps <= 2*tail(metric).
std::vector<PointWindow> greedy_separated(const SymbolicSystem& sys,
                                          const std::vector<PointWindow>& points, int n,
                                          double eps, const MetricSpec& metric);

/// Exact minimum number of points (centers drawn from `points`) whose
/// conservative balls {hi(d_n) < eps} cover all of `points`. Exhaustive
/// set cover; throws CapExceeded for more than 20 points.
size_t spanning_exact_small(const SymbolicSystem& sys, const std::vector<PointWindow>& points,
                            int n, double eps, const MetricSpec& metric);

// ============================================================================
// Count tables and growth rates
// ============================================================================

struct CountCell {
    uint64_t sep = 0;      // |greedy_separated(eps)|
    uint64_t spanLo = 0;   // 2eps-separated count: lower bound for r_n(eps)
    uint64_t spanHi = 0;   // conservative cover count: upper bound for r_n of the family
};

struct CountTable {
    std::vector<double> epsilons;  // descending
    std::vector<int> ns;           // ascending
    std::vector<std::string> modes;               // per epsilon: point-family provenance
    std::vector<std::vector<CountCell>> cells;    // [epsIndex][nIndex]

    std::string toCsv() const;  // columns: epsilon,n,sep,span_lo,span_hi,mode
};

struct RateEstimate {
    double value = 0.0;     // least-squares slope of log(count) against n
    double lastN = 0.0;     // log(count at n_max) / n_max
    double residual = 0.0;
    std::string method = "slope-regression";
};

/// Exponential growth rate of the separated counts at one epsilon.
/// Needs at least 3 depths; throws invalid_argument otherwise.
RateEstimate growth_rate(const CountTable& table, size_t epsIndex);

// ============================================================================
// Metric mean dimension estimate
// ============================================================================

struct MdimEstimate {
    DimensionTriple dim;
    std::vector<double> epsilons;   // the epsilons that produced rates
    std::vector<double> rates;      // one per epsilon
    CountTable table;
    bool budgetExhausted = false;   // some sweep cells were dropped
};

struct MdimOptions {
    uint64_t budget = 10'000'000;  // point-family size cap per epsilon
    uint64_t sampleCount = 100'000;  // candidates drawn in sampling mode
    uint64_t seed = 1;
    unsigned jobs = 1;
};

/// Separated-count growth normalized by log(1/eps). Point families per
/// epsilon: full window enumeration when it fits the budget, otherwise
/// cylinder representatives over an eps-spaced sub-alphabet (core
/// coordinates free, tail pinned), otherwise seeded random sampling.
/// Representative and sampled counts are lower bounds and are labeled in
/// the table's mode column.
MdimEstimate estimate_mdim(const SymbolicSystem& sys, MetricKind kind, double base,
                           const std::vector<double>& epsList, const std::vector<int>& nList,
                           const MdimOptions& opt);

/// Maximal eps-separated subset of the alphabet levels, scanned in
/// ascending order. Used for representative point families.
std::vector<int> spaced_level_subset(const SymbolicSystem& sys, double eps);

// ============================================================================
// Tame growth diagnostic
// ============================================================================

struct TameGrowthReport {
    std::vector<double> epsilons;
    std::vector<uint64_t> r1;  // one-step covering counts
    struct PerTheta {
        double theta = 0.0;
        std::vector<double> sequence;  // eps^theta * log r1(eps)
        bool tailDecreasing = false;   // nonincreasing over the last half
    };
    std::vector<PerTheta> perTheta;
};

/// eps^theta * log r_1(eps) sweeps with a monotone-tail verdict per theta.
TameGrowthReport tame_growth_check(const SymbolicSystem& sys, MetricKind kind, double base,
                                   const std::vector<double>& thetaList,
                                   const std::vector<double>& epsList);

}  // namespace meandim
