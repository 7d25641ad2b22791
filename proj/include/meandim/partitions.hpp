#pragma once

#include <string>
#include <vector>

#include "meandim/measures.hpp"
#include "meandim/shift_space.hpp"
#include "meandim/util.hpp"

namespace meandim {

/// Coordinate-window grid partition: each cell fixes, for every coordinate
/// in the base window, one bin of a uniform mesh of [0,1]. The mesh stored
/// is the effective one (1/bins), which is at most the requested delta, so
/// the certified diameter bound is preserved.
struct GridPartition {
    int window = 0;          // base window half-width (one-sided: depth)
    int bins = 1;            // bins per coordinate
    MetricKind metricKind = MetricKind::GeometricSum;
    double weightBase = 0.5;

    double mesh() const { return 1.0 / double(bins); }

    /// Certified diameter upper bound under the stored metric.
    double diameterBound(Sided sided) const;

    /// Partition whose certified diameter is at most eps: the window
    /// controls the truncation tail, the mesh splits the rest of the
    /// eps budget.
    static GridPartition forEpsilon(MetricKind kind, double base, Sided sided, double eps);
};

/// Closed-form descriptor of the n-fold dynamical refinement of a grid
/// partition on a shift: the same mesh over an extended window.
struct RefinedGrid {
    int coordLo = 0;
    int coordHi = 0;
    int bins = 1;
    double logCellCount = 0.0;

    int coordinateCount() const { return coordHi - coordLo + 1; }
};

RefinedGrid refine_n(const GridPartition& P, Sided sided, int n);

/// Per-coordinate bin masses of a measure (products and the continuous
/// uniform model).
std::vector<double> coordinate_bin_masses(const SymbolicSystem& sys, const MeasureModel& mu,
                                          int bins);

/// H_mu(P) for the base partition (natural log). Product closed form.
double partition_entropy(const SymbolicSystem& sys, const GridPartition& P,
                         const MeasureModel& mu);

/// H_mu(P^n) for the n-fold refinement. Products and the continuous model
/// use the closed form; mixtures enumerate occupied cells (capped).
double refined_entropy(const SymbolicSystem& sys, const GridPartition& P,
                       const MeasureModel& mu, int n, uint64_t cellCap = (uint64_t(1) << 22));

/// Entropy of the join of two grid partitions (product measures). The join
/// refines per coordinate wherever both windows overlap.
double join_entropy(const SymbolicSystem& sys, const GridPartition& P, const GridPartition& Q,
                    const MeasureModel& mu);

struct EntropySequence {
    std::vector<int> ns;
    std::vector<double> valuesOverN;  // H(P^n)/n
    double limitEstimate = 0.0;
    bool exact = true;  // closed-form product path
};

/// H_mu(P^n)/n for n = 1..nmax plus the limit. For i.i.d. products the
/// sequence is (coords(n)/n) * H_coord exactly and the limit is H_coord.
EntropySequence entropy_rate(const SymbolicSystem& sys, const GridPartition& P,
                             const MeasureModel& mu, int nmax);

struct MridEstimate {
    DimensionTriple dim;
    std::vector<double> epsilons;
    std::vector<double> h;  // partition entropy rate at each epsilon
    std::string csv;        // columns: epsilon,h,ratio,slope_running
};

/// Information-dimension estimate over the constructed grid family:
/// h(eps) = entropy rate of the eps-sized grid partition; values are upper
/// bounds on the infimum over all partitions of diameter <= eps.
MridEstimate mrid_estimate(const SymbolicSystem& sys, const MeasureModel& mu, MetricKind kind,
                           double base, const std::vector<double>& epsList);

}  // namespace meandim
