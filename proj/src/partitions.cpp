#include "meandim/partitions.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace meandim {

namespace {

// Sum of window weights sum_{|j|<=w} base^|j| (or one-sided), and its
// w -> infinity limit used as the mesh normalizer.
double weight_sum(MetricKind kind, double base, Sided sided, int w) {
    if (kind == MetricKind::Coordinate0 || kind == MetricKind::SupWeighted) return 1.0;
    double s = 1.0, p = 1.0;
    for (int i = 1; i <= w; ++i) {
        p *= base;
        s += sided == Sided::TwoSided ? 2.0 * p : p;
    }
    return s;
}

double weight_sum_limit(MetricKind kind, double base, Sided sided) {
    if (kind == MetricKind::Coordinate0 || kind == MetricKind::SupWeighted) return 1.0;
    return sided == Sided::TwoSided ? (1.0 + base) / (1.0 - base) : 1.0 / (1.0 - base);
}

int bin_of_level(double level, int bins) {
    int b = int(std::floor(level * double(bins)));
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    return b;
}

int base_coord_lo(const GridPartition& P, Sided sided) {
    return sided == Sided::TwoSided ? -P.window : 0;
}

}  // namespace

double GridPartition::diameterBound(Sided sided) const {
    MetricSpec m(metricKind, metricKind == MetricKind::Coordinate0 ? 0.5 : weightBase, window);
    return mesh() * weight_sum(metricKind, weightBase, sided, window) + m.tailMass(sided);
}

GridPartition GridPartition::forEpsilon(MetricKind kind, double base, Sided sided, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("GridPartition::forEpsilon: eps > 0");
    GridPartition P;
    P.metricKind = kind;
    P.weightBase = base;
    if (kind == MetricKind::Coordinate0) {
        P.window = 0;
    } else {
        // tail(w) <= eps/2
        P.window = std::max(0, int(std::ceil(std::log(4.0 / eps) / std::log(1.0 / base))));
    }
    double delta = eps / (2.0 * weight_sum_limit(kind, base, sided));
    P.bins = std::max(1, int(std::ceil(1.0 / delta - 1e-9)));
    if (P.diameterBound(sided) > eps + 1e-12)
        throw std::logic_error("GridPartition::forEpsilon: certified bound violated");
    return P;
}

RefinedGrid refine_n(const GridPartition& P, Sided sided, int n) {
    if (n < 1) throw std::invalid_argument("refine_n: n >= 1");
    RefinedGrid r;
    r.coordLo = base_coord_lo(P, sided);
    r.coordHi = P.window + n - 1;
    r.bins = P.bins;
    r.logCellCount = double(r.coordinateCount()) * std::log(double(P.bins));
    return r;
}

std::vector<double> coordinate_bin_masses(const SymbolicSystem& sys, const MeasureModel& mu,
                                          int bins) {
    std::vector<double> masses(size_t(bins), 0.0);
    if (mu.isContinuous()) {
        for (auto& m : masses) m = 1.0 / double(bins);
        return masses;
    }
    if (!mu.isProduct())
        throw std::invalid_argument("coordinate_bin_masses: product or continuous measure");
    for (int s = 0; s < sys.alphabetSize(); ++s)
        masses[size_t(bin_of_level(sys.level(s), bins))] += mu.symbolProb(s);
    return masses;
}

namespace {

double coordinate_entropy(const SymbolicSystem& sys, const MeasureModel& mu, int bins) {
    if (mu.isContinuous()) return std::log(double(bins));  // uniform bins, exact
    return entropy_nats(coordinate_bin_masses(sys, mu, bins));
}

}  // namespace

double partition_entropy(const SymbolicSystem& sys, const GridPartition& P,
                         const MeasureModel& mu) {
    return refined_entropy(sys, P, mu, 1);
}

double refined_entropy(const SymbolicSystem& sys, const GridPartition& P,
                       const MeasureModel& mu, int n, uint64_t cellCap) {
    RefinedGrid grid = refine_n(P, sys.sided, n);
    const int coords = grid.coordinateCount();
    if (mu.isProduct() || mu.isContinuous())
        return double(coords) * coordinate_entropy(sys, mu, P.bins);

    if (!mu.isMixture()) throw std::invalid_argument("refined_entropy: unsupported measure");
    // Mixture: enumerate occupied bin tuples. Cell mass is the weighted sum
    // of component product masses; components share the level -> bin map.
    std::vector<std::vector<double>> comp;  // per component: bin masses
    for (const auto& c : mu.components)
        comp.push_back(coordinate_bin_masses(sys, c, P.bins));
    std::vector<int> occupied;
    for (int b = 0; b < P.bins; ++b) {
        bool any = false;
        for (const auto& cm : comp)
            if (cm[size_t(b)] > 0.0) any = true;
        if (any) occupied.push_back(b);
    }
    uint64_t total = 1;
    for (int i = 0; i < coords; ++i) {
        if (total > cellCap / std::max<uint64_t>(occupied.size(), 1))
            throw CapExceeded("refined_entropy: mixture cell enumeration over cap");
        total *= occupied.size();
    }
    KahanSum H;
    std::vector<size_t> odo(size_t(coords), 0);
    while (true) {
        double mass = 0.0;
        for (size_t c = 0; c < comp.size(); ++c) {
            double m = mu.weights[c];
            for (int i = 0; i < coords; ++i) m *= comp[c][size_t(occupied[odo[size_t(i)]])];
            mass += m;
        }
        H.add(-xlogx(mass));
        int pos = coords - 1;
        while (pos >= 0 && odo[size_t(pos)] == occupied.size() - 1) odo[size_t(pos--)] = 0;
        if (pos < 0) break;
        ++odo[size_t(pos)];
    }
    return H.value();
}

double join_entropy(const SymbolicSystem& sys, const GridPartition& P, const GridPartition& Q,
                    const MeasureModel& mu) {
    if (!mu.isProduct() && !mu.isContinuous())
        throw std::invalid_argument("join_entropy: product or continuous measure");
    const int lo = std::min(base_coord_lo(P, sys.sided), base_coord_lo(Q, sys.sided));
    const int hi = std::max(P.window, Q.window);
    KahanSum H;
    for (int c = lo; c <= hi; ++c) {
        bool inP = c >= base_coord_lo(P, sys.sided) && c <= P.window;
        bool inQ = c >= base_coord_lo(Q, sys.sided) && c <= Q.window;
        if (mu.isContinuous()) {
            // refinement of two uniform meshes: boundary union
            std::vector<double> cuts;
            if (inP)
                for (int b = 1; b < P.bins; ++b) cuts.push_back(double(b) / double(P.bins));
            if (inQ)
                for (int b = 1; b < Q.bins; ++b) cuts.push_back(double(b) / double(Q.bins));
            cuts.push_back(0.0);
            cuts.push_back(1.0);
            std::sort(cuts.begin(), cuts.end());
            std::vector<double> masses;
            for (size_t i = 1; i < cuts.size(); ++i)
                if (cuts[i] - cuts[i - 1] > 1e-15) masses.push_back(cuts[i] - cuts[i - 1]);
            H.add(entropy_nats(masses));
        } else {
            // group levels by the (binP, binQ) pair
            std::map<std::pair<int, int>, double> cellMass;
            for (int s = 0; s < sys.alphabetSize(); ++s) {
                int bp = inP ? bin_of_level(sys.level(s), P.bins) : 0;
                int bq = inQ ? bin_of_level(sys.level(s), Q.bins) : 0;
                cellMass[{bp, bq}] += mu.symbolProb(s);
            }
            std::vector<double> masses;
            for (auto& kv : cellMass) masses.push_back(kv.second);
            H.add(entropy_nats(masses));
        }
    }
    return H.value();
}

EntropySequence entropy_rate(const SymbolicSystem& sys, const GridPartition& P,
                             const MeasureModel& mu, int nmax) {
    if (nmax < 1) throw std::invalid_argument("entropy_rate: nmax >= 1");
    EntropySequence seq;
    if (mu.isProduct() || mu.isContinuous()) {
        double hc = coordinate_entropy(sys, mu, P.bins);
        for (int n = 1; n <= nmax; ++n) {
            seq.ns.push_back(n);
            double coords = double(refine_n(P, sys.sided, n).coordinateCount());
            seq.valuesOverN.push_back(coords * hc / double(n));
        }
        seq.limitEstimate = hc;
        seq.exact = true;
        return seq;
    }
    for (int n = 1; n <= nmax; ++n) {
        seq.ns.push_back(n);
        seq.valuesOverN.push_back(refined_entropy(sys, P, mu, n) / double(n));
    }
    seq.limitEstimate = seq.valuesOverN.back();
    seq.exact = false;
    return seq;
}

MridEstimate mrid_estimate(const SymbolicSystem& sys, const MeasureModel& mu, MetricKind kind,
                           double base, const std::vector<double>& epsList) {
    if (epsList.size() < 3) throw std::invalid_argument("mrid_estimate: need >= 3 epsilons");
    MridEstimate est;
    est.epsilons = epsList;
    for (double eps : epsList) {
        GridPartition P = GridPartition::forEpsilon(kind, base, sys.sided, eps);
        est.h.push_back(entropy_rate(sys, P, mu, 1).limitEstimate);
    }
    est.dim = dimension_from_sweep(epsList, est.h);

    std::ostringstream csv;
    csv << "epsilon,h,ratio,slope_running\n";
    for (size_t i = 0; i < epsList.size(); ++i) {
        double ratio = est.h[i] / std::log(1.0 / epsList[i]);
        double running = 0.0;
        if (i >= 1) {
            std::vector<double> xs, ys;
            for (size_t j = 0; j <= i; ++j) {
                xs.push_back(std::log(1.0 / epsList[j]));
                ys.push_back(est.h[j]);
            }
            running = fit_line(xs, ys).slope;
        }
        csv << format_double(epsList[i]) << ',' << format_double(est.h[i]) << ','
            << format_double(ratio) << ',' << format_double(running) << '\n';
    }
    est.csv = csv.str();
    return est;
}

}  // namespace meandim
