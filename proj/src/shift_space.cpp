#include "meandim/shift_space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace meandim {

SymbolicSystem::SymbolicSystem(std::vector<double> lv, Sided s, std::string n)
    : levels(std::move(lv)), sided(s), name(std::move(n)) {
    if (levels.empty())
        throw std::invalid_argument("SymbolicSystem: need at least one level");
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0.0 || levels[i] > 1.0)
            throw std::invalid_argument("SymbolicSystem: levels must lie in [0,1]");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw std::invalid_argument("SymbolicSystem: levels must strictly increase");
    }
    if (levels.size() > 256)
        throw std::invalid_argument("SymbolicSystem: alphabet limited to 256 levels");
}

double SymbolicSystem::levelGap() const {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < levels.size(); ++i)
        g = std::min(g, levels[i] - levels[i - 1]);
    return g;
}

double SymbolicSystem::diameter() const { return levels.back() - levels.front(); }

SymbolicSystem SymbolicSystem::uniformLevels(int m, Sided s, std::string name) {
    if (m < 1) throw std::invalid_argument("uniformLevels: m >= 1");
    std::vector<double> lv;
    lv.reserve(size_t(m));
    if (m == 1) {
        lv.push_back(0.0);
    } else {
        for (int i = 0; i < m; ++i) lv.push_back(double(i) / double(m - 1));
    }
    if (name.empty()) name = "uniform-" + std::to_string(m);
    return SymbolicSystem(std::move(lv), s, std::move(name));
}

MetricSpec::MetricSpec(MetricKind k, double base, int w)
    : kind(k), weightBase(base), window(w) {
    if (k != MetricKind::Coordinate0 && (base <= 0.0 || base >= 1.0))
        throw std::invalid_argument("MetricSpec: weightBase must lie in (0,1)");
    if (w < 0) throw std::invalid_argument("MetricSpec: window >= 0");
}

double MetricSpec::tailMass(Sided sided) const {
    switch (kind) {
        case MetricKind::Coordinate0:
            return 0.0;
        case MetricKind::SupWeighted:
            return std::pow(weightBase, window + 1);
        case MetricKind::GeometricSum: {
            double t = std::pow(weightBase, window + 1) / (1.0 - weightBase);
            return sided == Sided::TwoSided ? 2.0 * t : t;
        }
    }
    return 0.0;
}

MetricSpec MetricSpec::forEpsilon(MetricKind k, double base, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("MetricSpec::forEpsilon: eps > 0");
    if (k == MetricKind::Coordinate0) return MetricSpec(k, 0.5, 0);
    int w = int(std::ceil(std::log(8.0 / eps) / std::log(1.0 / base)));
    if (w < 0) w = 0;
    return MetricSpec(k, base, w);
}

void MetricSpec::requiredRange(int n, Sided sided, int& lo, int& hi) const {
    if (kind == MetricKind::Coordinate0) {
        lo = 0;
        hi = n - 1;
        return;
    }
    lo = sided == Sided::TwoSided ? -window : 0;
    hi = n - 1 + window;
}

IntervalValue::IntervalValue(double l, double h) : lo(l), hi(h) {
    if (!(lo <= hi)) throw std::invalid_argument("IntervalValue: lo <= hi required");
}

PointWindow::PointWindow(int lo_, std::vector<uint8_t> syms)
    : lo(lo_), symbols(std::move(syms)) {
    if (symbols.empty()) throw std::invalid_argument("PointWindow: range nonempty");
}

namespace {

// Weighted per-step distance at Bowen time j, truncated to the metric window.
inline double step_distance(const SymbolicSystem& sys, const PointWindow& a,
                            const PointWindow& b, int j, const MetricSpec& m) {
    switch (m.kind) {
        case MetricKind::Coordinate0:
            return std::abs(sys.level(a.symbolAt(j)) - sys.level(b.symbolAt(j)));
        case MetricKind::SupWeighted: {
            double best = 0.0;
            int ilo = sys.sided == Sided::TwoSided ? -m.window : 0;
            for (int i = ilo; i <= m.window; ++i) {
                double wi = std::pow(m.weightBase, std::abs(i));
                double d = std::abs(sys.level(a.symbolAt(j + i)) - sys.level(b.symbolAt(j + i)));
                best = std::max(best, wi * d);
            }
            return best;
        }
        case MetricKind::GeometricSum: {
            double sum = std::abs(sys.level(a.symbolAt(j)) - sys.level(b.symbolAt(j)));
            double w = 1.0;
            for (int i = 1; i <= m.window; ++i) {
                w *= m.weightBase;
                double d = std::abs(sys.level(a.symbolAt(j + i)) - sys.level(b.symbolAt(j + i)));
                if (sys.sided == Sided::TwoSided)
                    d += std::abs(sys.level(a.symbolAt(j - i)) - sys.level(b.symbolAt(j - i)));
                sum += w * d;
            }
            return sum;
        }
    }
    return 0.0;
}

inline void check_ranges(const SymbolicSystem& sys, const PointWindow& a,
                         const PointWindow& b, int n, const MetricSpec& m) {
    if (n < 1) throw std::invalid_argument("bowen_distance: n >= 1");
    if (a.lo != b.lo || a.symbols.size() != b.symbols.size())
        throw std::invalid_argument("bowen_distance: range mismatch between windows");
    int lo, hi;
    m.requiredRange(n, sys.sided, lo, hi);
    if (!a.covers(lo, hi))
        throw std::invalid_argument("bowen_distance: window range too small for (n, w)");
}

}  // namespace

IntervalValue bowen_distance(const SymbolicSystem& sys, const PointWindow& a,
                             const PointWindow& b, int n, const MetricSpec& metric) {
    double lo = bowen_lower(sys, a, b, n, metric);
    return IntervalValue(lo, lo + metric.tailMass(sys.sided));
}

double bowen_lower(const SymbolicSystem& sys, const PointWindow& a,
                   const PointWindow& b, int n, const MetricSpec& metric) {
    check_ranges(sys, a, b, n, metric);
    double best = 0.0;
    for (int j = 0; j < n; ++j)
        best = std::max(best, step_distance(sys, a, b, j, metric));
    return best;
}

uint64_t enumeration_count(const SymbolicSystem& sys, int lo, int hi, uint64_t cap) {
    if (hi < lo) throw std::invalid_argument("enumeration: empty range");
    uint64_t m = uint64_t(sys.alphabetSize());
    uint64_t total = 1;
    for (int i = lo; i <= hi; ++i) {
        if (m != 0 && total > cap / m + 1) throw CapExceeded("enumeration cap exceeded");
        total *= m;
        if (total > cap) throw CapExceeded("enumeration cap exceeded");
    }
    return total;
}

void for_each_window(const SymbolicSystem& sys, int lo, int hi,
                     const std::function<void(const PointWindow&)>& fn, uint64_t cap) {
    enumeration_count(sys, lo, hi, cap);
    const int len = hi - lo + 1;
    const int m = sys.alphabetSize();
    PointWindow w(lo, std::vector<uint8_t>(size_t(len), 0));
    // Odometer with the leftmost coordinate most significant.
    while (true) {
        fn(w);
        int pos = len - 1;
        while (pos >= 0 && w.symbols[size_t(pos)] == uint8_t(m - 1)) {
            w.symbols[size_t(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++w.symbols[size_t(pos)];
    }
}

std::vector<PointWindow> enumerate_windows(const SymbolicSystem& sys, int lo, int hi,
                                           uint64_t cap) {
    std::vector<PointWindow> out;
    out.reserve(size_t(enumeration_count(sys, lo, hi, cap)));
    for_each_window(sys, lo, hi, [&](const PointWindow& w) { out.push_back(w); }, cap);
    return out;
}

PointWindow shift_window(const PointWindow& x, int k) {
    int lo = std::max(x.lo, x.lo - k);
    int hi = std::min(x.hi(), x.hi() - k);
    if (hi < lo) throw std::invalid_argument("shift_window: shift exhausts the window");
    std::vector<uint8_t> syms(size_t(hi - lo + 1));
    for (int i = lo; i <= hi; ++i) syms[size_t(i - lo)] = x.symbolAt(i + k);
    return PointWindow(lo, std::move(syms));
}

bool window_less(const PointWindow& a, const PointWindow& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.symbols < b.symbols;
}

}  // namespace meandim
