#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace meandim {

// ============================================================================
// Numeric helpers
// ============================================================================

/// Compensated (Neumaier) summation. Keeps entropy/information identities
/// tight at the 1e-12 level even for a few thousand terms.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// x*log(x) with the 0*log(0) = 0 convention. Natural log throughout.
inline double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

/// Shannon entropy (nats) of a nonnegative mass vector. Masses need not be
/// normalized exactly; zero masses are skipped.
inline double entropy_nats(const std::vector<double>& masses) {
    KahanSum s;
    for (double p : masses) s.add(-xlogx(p));
    return s.value();
}

/// Binary entropy H(p) in nats.
inline double binary_entropy(double p) {
    return -xlogx(p) - xlogx(1.0 - p);
}

// ============================================================================
// Least-squares rate fitting
// ============================================================================

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of fit residuals
};

/// Ordinary least squares y = a + b*x. Requires >= 2 points; with exactly
/// two points the fit is exact and the residual is 0.
inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    const size_t n = xs.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0)
        throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / double(n));
    return f;
}

/// Index of the first entry of the fitting window for a descending epsilon
/// sweep: the smallest ceil(half) of the sweep, but never fewer than two
/// points. The limit lives at eps -> 0, so fits anchor on the small end.
inline size_t fit_window_begin(size_t count) {
    if (count < 2) throw std::invalid_argument("fit_window_begin: need >= 2 samples");
    size_t w = (count + 1) / 2;
    if (w < 2) w = 2;
    return count - w;
}

struct DimensionTriple {
    double upper = 0.0;   // max of value/log(1/eps) over the two smallest eps
    double lower = 0.0;   // min over the same pair
    double slope = 0.0;   // regression of value against log(1/eps), small-eps window
    double residual = 0.0;
};

/// Shared dimension-from-sweep estimator: ratio extremes at the two smallest
/// epsilons plus the regression slope over the small-eps window.
inline DimensionTriple dimension_from_sweep(const std::vector<double>& epsDescending,
                                            const std::vector<double>& values) {
    if (epsDescending.size() != values.size() || epsDescending.size() < 3)
        throw std::invalid_argument("dimension_from_sweep: need >= 3 samples");
    const size_t n = epsDescending.size();
    for (size_t i = 0; i + 1 < n; ++i)
        if (!(epsDescending[i] > epsDescending[i + 1]))
            throw std::invalid_argument("dimension_from_sweep: epsilons must decrease");
    double r1 = values[n - 1] / std::log(1.0 / epsDescending[n - 1]);
    double r2 = values[n - 2] / std::log(1.0 / epsDescending[n - 2]);
    DimensionTriple t;
    t.upper = std::max(r1, r2);
    t.lower = std::min(r1, r2);
    std::vector<double> xs, ys;
    for (size_t i = fit_window_begin(n); i < n; ++i) {
        xs.push_back(std::log(1.0 / epsDescending[i]));
        ys.push_back(values[i]);
    }
    LineFit f = fit_line(xs, ys);
    t.slope = f.slope;
    t.residual = f.residual;
    return t;
}

// ============================================================================
// Deterministic RNG
// ============================================================================

/// splitmix64; used both as a generator and to derive independent
/// per-cell seeds so results do not depend on scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // Rejection-free modulo is fine here; n is tiny vs 2^64.
        return next() % n;
    }

    static uint64_t derive(uint64_t seed, uint64_t index) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return r.next();
    }

private:
    uint64_t state_;
};

// ============================================================================
// Deterministic parallel map
// ============================================================================

/// Runs fn(i) for i in [0, count) on `jobs` threads. Each slot writes only
/// its own result, so the output is independent of scheduling.
inline void parallel_for(unsigned jobs, size_t count, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (size_t i = t; i < count; i += jobs) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ============================================================================
// Stable text formatting (CSV output must be byte-identical across runs)
// ============================================================================

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

}  // namespace meandim
