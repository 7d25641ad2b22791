#include "meandim/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace meandim {

namespace {

// ----------------------------------------------------------------------------
// Rejection index for first-fit packing.
//
// A candidate can only collide (lo < eps) with an accepted window that stays
// within eps of it on every core coordinate j in [0, n): the weight-1 central
// term bounds lo from below. Three lookup strategies, all exact:
//   core-bucket : every pair of distinct symbols appearing in core coords is
//                 >= eps apart, so a rejector must share the exact core.
//   grid        : core levels quantized at eps; rejectors live in one of the
//                 3^n adjacent cells. Only used for small n.
//   linear      : plain scan fallback.
// ----------------------------------------------------------------------------

class SeparationIndex {
public:
    SeparationIndex(const SymbolicSystem& sys, const std::vector<PointWindow>& points, int n,
                    double eps)
        : sys_(sys), n_(n), eps_(eps) {
        bool symbolSeen[256] = {false};
        for (const auto& p : points)
            for (int j = 0; j < n; ++j) symbolSeen[p.symbolAt(j)] = true;
        double minGap = std::numeric_limits<double>::infinity();
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (int s = 0; s < sys.alphabetSize(); ++s) {
            if (!symbolSeen[s]) continue;
            double lv = sys.level(s);
            if (!std::isnan(prev)) minGap = std::min(minGap, lv - prev);
            prev = lv;
        }
        if (minGap >= eps) mode_ = Mode::CoreBucket;
        else if (n <= 6) mode_ = Mode::Grid;
        else mode_ = Mode::Linear;
    }

    void insert(const PointWindow& w, uint32_t id) {
        if (mode_ == Mode::Linear) {
            linear_.push_back(id);
            return;
        }
        buckets_[keyOf(w)].push_back(id);
    }

    // Indices of accepted windows that might reject `w`.
    template <typename Fn>
    bool anyCandidate(const PointWindow& w, Fn&& isRejector) const {
        switch (mode_) {
            case Mode::Linear: {
                for (uint32_t id : linear_)
                    if (isRejector(id)) return true;
                return false;
            }
            case Mode::CoreBucket: {
                auto it = buckets_.find(keyOf(w));
                if (it == buckets_.end()) return false;
                for (uint32_t id : it->second)
                    if (isRejector(id)) return true;
                return false;
            }
            case Mode::Grid: {
                std::vector<int32_t> base(static_cast<size_t>(n_));
                for (int j = 0; j < n_; ++j) base[size_t(j)] = cellOf(w, j);
                std::vector<int32_t> probe(static_cast<size_t>(n_));
                std::vector<int> off(static_cast<size_t>(n_), -1);
                while (true) {
                    for (int j = 0; j < n_; ++j) probe[size_t(j)] = base[size_t(j)] + off[size_t(j)];
                    auto it = buckets_.find(packKey(probe));
                    if (it != buckets_.end())
                        for (uint32_t id : it->second)
                            if (isRejector(id)) return true;
                    int pos = n_ - 1;
                    while (pos >= 0 && off[size_t(pos)] == 1) off[size_t(pos--)] = -1;
                    if (pos < 0) break;
                    ++off[size_t(pos)];
                }
                return false;
            }
        }
        return false;
    }

private:
    enum class Mode { CoreBucket, Grid, Linear };

    int32_t cellOf(const PointWindow& w, int j) const {
        return int32_t(std::floor(sys_.level(w.symbolAt(j)) / eps_));
    }

    std::string keyOf(const PointWindow& w) const {
        if (mode_ == Mode::CoreBucket) {
            std::string k(static_cast<size_t>(n_), '\0');
            for (int j = 0; j < n_; ++j) k[size_t(j)] = char(w.symbolAt(j));
            return k;
        }
        std::vector<int32_t> cells(static_cast<size_t>(n_));
        for (int j = 0; j < n_; ++j) cells[size_t(j)] = cellOf(w, j);
        return packKey(cells);
    }

    static std::string packKey(const std::vector<int32_t>& cells) {
        std::string k(cells.size() * sizeof(int32_t), '\0');
        std::memcpy(k.data(), cells.data(), k.size());
        return k;
    }

    const SymbolicSystem& sys_;
    int n_;
    double eps_;
    Mode mode_;
    std::unordered_map<std::string, std::vector<uint32_t>> buckets_;
    std::vector<uint32_t> linear_;
};

void check_point_family(const SymbolicSystem& sys, const std::vector<PointWindow>& points,
                        int n, const MetricSpec& metric) {
    if (points.empty()) throw std::invalid_argument("separated/spanning: empty point family");
    int lo, hi;
    metric.requiredRange(n, sys.sided, lo, hi);
    for (const auto& p : points) {
        if (p.lo != points.front().lo || p.length() != points.front().length())
            throw std::invalid_argument("separated/spanning: points must share one range");
        if (!p.covers(lo, hi))
            throw std::invalid_argument("separated/spanning: range too small for (n, w)");
    }
}

// First-fit packing at threshold `eps` on the lower Bowen estimate.
std::vector<uint32_t> first_fit_packing(const SymbolicSystem& sys,
                                        const std::vector<PointWindow>& points, int n,
                                        double eps, const MetricSpec& metric) {
    SeparationIndex index(sys, points, n, eps);
    std::vector<uint32_t> kept;
    for (uint32_t i = 0; i < points.size(); ++i) {
        const PointWindow& cand = points[i];
        bool rejected = index.anyCandidate(cand, [&](uint32_t id) {
            return bowen_lower(sys, points[id], cand, n, metric) < eps;
        });
        if (!rejected) {
            index.insert(cand, i);
            kept.push_back(i);
        }
    }
    return kept;
}

}  // namespace

std::vector<PointWindow> greedy_separated(const SymbolicSystem& sys,
                                          const std::vector<PointWindow>& points, int n,
                                          double eps, const MetricSpec& metric) {
    check_point_family(sys, points, n, metric);
    double tail = metric.tailMass(sys.sided);
    if (!(eps > 2.0 * tail))
        throw std::invalid_argument("greedy_separated: epsilon below resolution (eps <= 2*tail)");
    std::vector<uint32_t> kept = first_fit_packing(sys, points, n, eps, metric);
    std::vector<PointWindow> out;
    out.reserve(kept.size());
    for (uint32_t id : kept) out.push_back(points[id]);
    return out;
}

size_t spanning_exact_small(const SymbolicSystem& sys, const std::vector<PointWindow>& points,
                            int n, double eps, const MetricSpec& metric) {
    check_point_family(sys, points, n, metric);
    const size_t N = points.size();
    if (N > 20) throw CapExceeded("spanning_exact_small: more than 20 points");
    double tail = metric.tailMass(sys.sided);

    // coverage[c] = bitmask of points inside the conservative ball of c
    std::vector<uint32_t> coverage(N, 0);
    for (size_t c = 0; c < N; ++c)
        for (size_t p = 0; p < N; ++p)
            if (bowen_lower(sys, points[c], points[p], n, metric) + tail < eps)
                coverage[c] |= uint32_t(1) << p;

    const uint32_t all = N == 32 ? ~uint32_t(0) : (uint32_t(1) << N) - 1;
    for (size_t k = 1; k <= N; ++k) {
        // iterate k-subsets via combination odometer
        std::vector<size_t> pick(k);
        for (size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            uint32_t covered = 0;
            for (size_t i = 0; i < k; ++i) covered |= coverage[pick[i]];
            if (covered == all) return k;
            size_t i = k;
            while (i > 0 && pick[i - 1] == N - k + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return N;  // covering by all points always succeeds (each covers itself)
}

std::string CountTable::toCsv() const {
    std::ostringstream out;
    out << "epsilon,n,sep,span_lo,span_hi,mode\n";
    for (size_t e = 0; e < epsilons.size(); ++e)
        for (size_t i = 0; i < ns.size(); ++i) {
            const CountCell& c = cells[e][i];
            out << format_double(epsilons[e]) << ',' << ns[i] << ',' << c.sep << ','
                << c.spanLo << ',' << c.spanHi << ',' << modes[e] << '\n';
        }
    return out.str();
}

RateEstimate growth_rate(const CountTable& table, size_t epsIndex) {
    if (epsIndex >= table.epsilons.size())
        throw std::invalid_argument("growth_rate: bad epsilon index");
    std::vector<double> xs, ys;
    for (size_t i = 0; i < table.ns.size(); ++i) {
        uint64_t c = table.cells[epsIndex][i].sep;
        if (c == 0) continue;
        xs.push_back(double(table.ns[i]));
        ys.push_back(std::log(double(c)));
    }
    if (xs.size() < 3) throw std::invalid_argument("growth_rate: insufficient data (need >= 3 depths)");
    LineFit f = fit_line(xs, ys);
    RateEstimate r;
    r.value = f.slope;
    r.residual = f.residual;
    r.lastN = ys.back() / xs.back();
    return r;
}

std::vector<int> spaced_level_subset(const SymbolicSystem& sys, double eps) {
    std::vector<int> out;
    double last = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < sys.alphabetSize(); ++s) {
        if (sys.level(s) - last >= eps) {
            out.push_back(s);
            last = sys.level(s);
        }
    }
    return out;
}

namespace {

// Point-family strategy for one epsilon. The same strategy is used for
// every depth of that epsilon so the n-regression sees one consistent
// boundary prefactor.
enum class FamilyMode { Exact, Representative, Sampled };

bool power_fits(uint64_t base, int exponent, uint64_t budget) {
    uint64_t total = 1;
    for (int i = 0; i < exponent; ++i) {
        if (base != 0 && total > budget / base) return false;
        total *= base;
    }
    return total <= budget;
}

FamilyMode pick_family_mode(const SymbolicSystem& sys, const MetricSpec& metric, double eps,
                            int maxN, const MdimOptions& opt) {
    int rlo, rhi;
    metric.requiredRange(maxN, sys.sided, rlo, rhi);
    if (power_fits(uint64_t(sys.alphabetSize()), rhi - rlo + 1, opt.budget))
        return FamilyMode::Exact;
    size_t sub = spaced_level_subset(sys, eps).size();
    if (power_fits(uint64_t(sub), maxN, opt.budget)) return FamilyMode::Representative;
    return FamilyMode::Sampled;
}

const char* family_mode_name(FamilyMode m) {
    switch (m) {
        case FamilyMode::Exact: return "exact";
        case FamilyMode::Representative: return "representative";
        case FamilyMode::Sampled: return "sampled-lower-bound";
    }
    return "?";
}

// Family for one (eps, n) cell: the window range is exactly the one the
// depth-n Bowen evaluation reads, so boundary freedom is n-independent.
std::vector<PointWindow> build_family(const SymbolicSystem& sys, const MetricSpec& metric,
                                      double eps, int n, FamilyMode mode,
                                      const MdimOptions& opt, uint64_t cellSeed) {
    int rlo, rhi;
    metric.requiredRange(n, sys.sided, rlo, rhi);
    const int len = rhi - rlo + 1;
    const uint64_t m = uint64_t(sys.alphabetSize());

    switch (mode) {
        case FamilyMode::Exact:
            return enumerate_windows(sys, rlo, rhi, opt.budget + 1);

        case FamilyMode::Representative: {
            // Cylinder representatives: eps-spaced sub-alphabet on the core
            // block [0, n), everything else pinned to the first level.
            std::vector<int> sub = spaced_level_subset(sys, eps);
            std::vector<PointWindow> points;
            std::vector<size_t> odo(static_cast<size_t>(n), 0);
            while (true) {
                PointWindow w(rlo, std::vector<uint8_t>(static_cast<size_t>(len), 0));
                for (int j = 0; j < n; ++j)
                    w.symbols[size_t(j - rlo)] = uint8_t(sub[odo[size_t(j)]]);
                points.push_back(std::move(w));
                int pos = n - 1;
                while (pos >= 0 && odo[size_t(pos)] == sub.size() - 1) odo[size_t(pos--)] = 0;
                if (pos < 0) break;
                ++odo[size_t(pos)];
            }
            return points;
        }

        case FamilyMode::Sampled: {
            std::vector<PointWindow> points;
            Rng rng(cellSeed);
            points.reserve(opt.sampleCount);
            for (uint64_t i = 0; i < opt.sampleCount; ++i) {
                std::vector<uint8_t> syms(static_cast<size_t>(len));
                for (auto& s : syms) s = uint8_t(rng.below(m));
                points.emplace_back(rlo, std::move(syms));
            }
            std::sort(points.begin(), points.end(), window_less);
            points.erase(std::unique(points.begin(), points.end()), points.end());
            return points;
        }
    }
    return {};
}

}  // namespace

MdimEstimate estimate_mdim(const SymbolicSystem& sys, MetricKind kind, double base,
                           const std::vector<double>& epsList, const std::vector<int>& nList,
                           const MdimOptions& opt) {
    if (epsList.size() < 3)
        throw std::invalid_argument("estimate_mdim: need >= 3 epsilons");
    for (size_t i = 0; i + 1 < epsList.size(); ++i)
        if (!(epsList[i] > epsList[i + 1]))
            throw std::invalid_argument("estimate_mdim: epsilons must decrease");
    if (nList.size() < 3) throw std::invalid_argument("estimate_mdim: need >= 3 depths");
    std::vector<int> ns = nList;
    std::sort(ns.begin(), ns.end());

    MdimEstimate est;
    est.table.epsilons = epsList;
    est.table.ns = ns;
    est.table.modes.assign(epsList.size(), "");
    est.table.cells.assign(epsList.size(), std::vector<CountCell>(ns.size()));

    parallel_for(opt.jobs, epsList.size(), [&](size_t e) {
        double eps = epsList[e];
        MetricSpec metric = MetricSpec::forEpsilon(kind, base, eps);
        FamilyMode mode = pick_family_mode(sys, metric, eps, ns.back(), opt);
        est.table.modes[e] = family_mode_name(mode);
        double tail = metric.tailMass(sys.sided);
        for (size_t i = 0; i < ns.size(); ++i) {
            int n = ns[i];
            std::vector<PointWindow> pts =
                build_family(sys, metric, eps, n, mode, opt, Rng::derive(opt.seed, e * 1024 + size_t(n)));
            CountCell cell;
            cell.sep = first_fit_packing(sys, pts, n, eps, metric).size();
            cell.spanLo = first_fit_packing(sys, pts, n, 2.0 * eps, metric).size();
            if (pts.size() <= 20) {
                cell.spanHi = spanning_exact_small(sys, pts, n, eps, metric);
            } else {
                // First-fit packing at (eps - tail) on lo doubles as a cover
                // by {hi < eps} balls.
                cell.spanHi = first_fit_packing(sys, pts, n, eps - tail, metric).size();
            }
            est.table.cells[e][i] = cell;
        }
    });

    std::vector<double> goodEps, rates;
    for (size_t e = 0; e < epsList.size(); ++e) {
        try {
            RateEstimate r = growth_rate(est.table, e);
            goodEps.push_back(epsList[e]);
            rates.push_back(r.value);
        } catch (const std::invalid_argument&) {
            est.budgetExhausted = true;
        }
    }
    if (goodEps.size() < 3)
        throw std::runtime_error("estimate_mdim: budget exhausted, fewer than 3 usable epsilons");
    est.epsilons = goodEps;
    est.rates = rates;
    est.dim = dimension_from_sweep(goodEps, rates);
    return est;
}

TameGrowthReport tame_growth_check(const SymbolicSystem& sys, MetricKind kind, double base,
                                   const std::vector<double>& thetaList,
                                   const std::vector<double>& epsList) {
    for (double t : thetaList)
        if (!(t > 0.0)) throw std::invalid_argument("tame_growth_check: theta > 0 required");
    TameGrowthReport rep;
    rep.epsilons = epsList;
    for (double eps : epsList) {
        MetricSpec metric = MetricSpec::forEpsilon(kind, base, eps);
        int rlo, rhi;
        metric.requiredRange(1, sys.sided, rlo, rhi);
        std::vector<PointWindow> pts;
        for (int s = 0; s < sys.alphabetSize(); ++s) {
            PointWindow w(rlo, std::vector<uint8_t>(size_t(rhi - rlo + 1), 0));
            w.symbols[size_t(-rlo)] = uint8_t(s);
            pts.push_back(std::move(w));
        }
        double tail = metric.tailMass(sys.sided);
        uint64_t r1;
        if (pts.size() <= 20) {
            r1 = spanning_exact_small(sys, pts, 1, eps, metric);
        } else {
            r1 = first_fit_packing(sys, pts, 1, eps - tail, metric).size();
        }
        rep.r1.push_back(r1);
    }
    for (double theta : thetaList) {
        TameGrowthReport::PerTheta pt;
        pt.theta = theta;
        for (size_t i = 0; i < epsList.size(); ++i)
            pt.sequence.push_back(std::pow(epsList[i], theta) * std::log(double(rep.r1[i])));
        pt.tailDecreasing = true;
        size_t from = epsList.size() / 2;
        for (size_t i = from; i + 1 < epsList.size(); ++i)
            if (pt.sequence[i + 1] > pt.sequence[i] + 1e-12) pt.tailDecreasing = false;
        rep.perTheta.push_back(std::move(pt));
    }
    return rep;
}

}  // namespace meandim
