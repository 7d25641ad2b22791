#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "meandim/util.hpp"

namespace meandim {

enum class Sided { OneSided, TwoSided };

/// A shift space over a finite alphabet of levels embedded in [0,1].
/// Levels are strictly increasing; the full m-shift on {i/(m-1)} is the
/// workhorse instance.
struct SymbolicSystem {
    std::vector<double> levels;
    Sided sided = Sided::TwoSided;
    std::string name;

    SymbolicSystem(std::vector<double> lv, Sided s, std::string n);

    int alphabetSize() const { return int(levels.size()); }
    double level(int sym) const { return levels[size_t(sym)]; }

    /// Smallest spacing between adjacent levels (+inf for a single level).
    double levelGap() const;
    /// max level - min level.
    double diameter() const;

    static SymbolicSystem uniformLevels(int m, Sided s, std::string name = {});
};

enum class MetricKind { GeometricSum, SupWeighted, Coordinate0 };

/// Metric on the shift space, evaluated on finite windows with a certified
/// truncation tail. GeometricSum is sum_i base^|i| |x_i - y_i|; SupWeighted
/// takes the sup of the same weighted terms; Coordinate0 is |x_0 - y_0|.
struct MetricSpec {
    MetricKind kind = MetricKind::GeometricSum;
    double weightBase = 0.5;  // in (0,1)
    int window = 0;           // truncation window w >= 0

    MetricSpec() = default;
    MetricSpec(MetricKind k, double base, int w);

    /// Mass of the discarded tail: an upper bound on the distance
    /// contribution of coordinates beyond the window (level diffs <= 1).
    double tailMass(Sided sided) const;

    /// Window sized so that tailMass <= eps/4 (coordinate-0 needs none).
    static MetricSpec forEpsilon(MetricKind k, double base, double eps);

    /// Coordinate interval the Bowen evaluation of depth n reads.
    void requiredRange(int n, Sided sided, int& lo, int& hi) const;
};

/// Closed interval [lo, hi]; distances carry truncation uncertainty.
struct IntervalValue {
    double lo = 0.0;
    double hi = 0.0;

    IntervalValue() = default;
    IntervalValue(double l, double h);
    double width() const { return hi - lo; }
};

/// A cylinder representative: symbols on a finite coordinate interval.
struct PointWindow {
    int lo = 0;  // first coordinate index
    std::vector<uint8_t> symbols;

    PointWindow() = default;
    PointWindow(int lo_, std::vector<uint8_t> syms);

    int hi() const { return lo + int(symbols.size()) - 1; }
    int length() const { return int(symbols.size()); }
    bool covers(int a, int b) const { return lo <= a && b <= hi(); }
    uint8_t symbolAt(int idx) const { return symbols[size_t(idx - lo)]; }

    bool operator==(const PointWindow& o) const { return lo == o.lo && symbols == o.symbols; }
};

/// Bowen distance max_{0<=j<n} d(T^j x, T^j y) evaluated on windows.
/// Returns [lo, lo + tail]; the true distance lies inside.
/// Throws on range mismatch or a range too small for (n, w).
IntervalValue bowen_distance(const SymbolicSystem& sys, const PointWindow& a,
                             const PointWindow& b, int n, const MetricSpec& metric);

/// Lower Bowen estimate only (same value as bowen_distance().lo, cheaper call).
double bowen_lower(const SymbolicSystem& sys, const PointWindow& a,
                   const PointWindow& b, int n, const MetricSpec& metric);

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of windows an enumeration over [lo,hi] would yield; throws
/// CapExceeded past the cap.
uint64_t enumeration_count(const SymbolicSystem& sys, int lo, int hi, uint64_t cap);

/// Visit every symbol assignment on [lo,hi] exactly once in lexicographic
/// order (leftmost coordinate most significant). Default cap ~1.6e7 windows.
void for_each_window(const SymbolicSystem& sys, int lo, int hi,
                     const std::function<void(const PointWindow&)>& fn,
                     uint64_t cap = (uint64_t(1) << 24));

/// Convenience: materialized lexicographic enumeration.
std::vector<PointWindow> enumerate_windows(const SymbolicSystem& sys, int lo, int hi,
                                           uint64_t cap = (uint64_t(1) << 24));

/// Applies T^k by index translation and restricts to the original index
/// set: result_i = x_{i+k} on {i in x.range : i+k in x.range}.
/// Throws if the restriction is empty.
PointWindow shift_window(const PointWindow& x, int k);

/// Lexicographic comparison used for deterministic candidate ordering.
bool window_less(const PointWindow& a, const PointWindow& b);

}  // namespace meandim
