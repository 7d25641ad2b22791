#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meandim/shift_space.hpp"
#include "meandim/util.hpp"

namespace meandim {

/// Finite joint law p[x][y]; entries nonnegative, total mass 1 within 1e-12.
struct JointDistribution {
    std::vector<std::vector<double>> p;

    explicit JointDistribution(std::vector<std::vector<double>> matrix);

    std::vector<double> marginalX() const;
    std::vector<double> marginalY() const;

    static JointDistribution fromChannel(const std::vector<double>& source,
                                         const std::vector<std::vector<double>>& channel);
};

/// I(X;Y) in nats by the direct sum, with 0*log(0/a) = 0. Clamped at 0
/// against rounding; finite inputs keep the entropy identity within 1e-12.
double mutual_information(const JointDistribution& J);

/// H(X) + H(Y) - H(X,Y); equals mutual_information on every finite joint.
double mutual_information_identity(const JointDistribution& J);

// ============================================================================
// Distortions and the rate-distortion solver
// ============================================================================

struct DistortionMatrix {
    std::vector<std::vector<double>> rho;  // source x reproduction
    std::string kind;
    std::vector<double> reproductionLevels;

    /// |x - y|^p per-step distortion between level values.
    static DistortionMatrix lp(const std::vector<double>& sourceLevels,
                               const std::vector<double>& reproLevels, double p);

    /// 0/1 distortion: 1 iff the per-step distance reaches eps.
    static DistortionMatrix indicator(const std::vector<double>& sourceLevels,
                                      const std::vector<double>& reproLevels, double eps);

    /// Reproduction alphabet option: source levels plus midpoints of
    /// adjacent levels.
    static std::vector<double> midpointEnriched(const std::vector<double>& levels);
};

struct BaResult {
    double rate = 0.0;        // nats per symbol
    double distortion = 0.0;  // achieved E[rho]
    std::vector<std::vector<double>> channel;
    uint64_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

/// Single-letter R(D) by alternating minimization over the channel, with an
/// outer bisection in the trade-off multiplier to land on the requested
/// distortion level. When maxIters is exhausted the best iterate is
/// returned with converged = false.
BaResult blahut_arimoto(const std::vector<double>& source, const DistortionMatrix& rho,
                        double D, double tol = 1e-9, uint64_t maxIters = 100000);

// ============================================================================
// Excess-count (L-infinity style) rate distortion
// ============================================================================

struct RdLinfOptions {
    bool enrichReproduction = false;
    double tol = 1e-9;
    uint64_t maxIters = 100000;
};

/// Rate at threshold eps and excess-frequency budget s: i.i.d. sources
/// reduce to the single-letter solver with the indicator distortion at
/// level s.
BaResult rd_linf(const SymbolicSystem& sys, const std::vector<double>& source, double eps,
                 double s, const RdLinfOptions& opt = {});

struct RdLimitResult {
    std::vector<double> sGrid;
    std::vector<double> rates;
    double value = 0.0;     // rate at the smallest s (primary)
    double envelope = 0.0;  // monotone extrapolation, >= every sample
};

/// Small-s limit of rd_linf along a decreasing s grid. The raw smallest-s
/// value is primary; the extrapolated envelope is advisory.
RdLimitResult rd_linf_limit(const SymbolicSystem& sys, const std::vector<double>& source,
                            double eps, const std::vector<double>& sGrid,
                            const RdLinfOptions& opt = {});

/// Exhaustive n-block cross-check of the single-letter reduction (n <= 3):
/// rate per step of the block source under the additive per-step indicator.
double rd_linf_block(const SymbolicSystem& sys, const std::vector<double>& source, double eps,
                     double s, int n, const RdLinfOptions& opt = {});

// ============================================================================
// Rate-distortion curves and dimension
// ============================================================================

struct RDCurvePoint {
    double level = 0.0;  // eps (indicator) or D (lp)
    double rate = 0.0;
    uint64_t iters = 0;
    double residual = 0.0;
};

struct RDCurve {
    std::vector<RDCurvePoint> points;  // level descending
    std::string kind;

    std::string toCsv() const;  // columns: level,rate_nats,iters,residual,kind
};

struct RdimEstimate {
    DimensionTriple dim;
    RDCurve curve;
};

/// Dimension estimate of a rate curve sampled over a descending eps list.
RdimEstimate rdim_estimate(const RDCurve& curve);

/// Convenience sweep: rd_linf_limit at each eps of a descending list.
RDCurve rd_linf_curve(const SymbolicSystem& sys, const std::vector<double>& source,
                      const std::vector<double>& epsList, const std::vector<double>& sGrid,
                      const RdLinfOptions& opt = {});

}  // namespace meandim
