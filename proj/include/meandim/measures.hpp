#pragma once

#include <string>
#include <vector>

#include "meandim/shift_space.hpp"
#include "meandim/util.hpp"

namespace meandim {

/// Shift-invariant measure models. ProductOnLevels is an i.i.d. product of a
/// fixed distribution over the alphabet levels; ContinuousProductUniform is
/// the analytic stand-in for the product of uniform measures on [0,1];
/// Mixture is an explicit convex combination of product components (a
/// mixture is not itself a product and is evaluated component-wise).
enum class MeasureKind { ProductOnLevels, ContinuousProductUniform, Mixture };

struct MeasureModel {
    MeasureKind kind = MeasureKind::ProductOnLevels;
    std::vector<double> levelProbs;  // ProductOnLevels
    std::vector<MeasureModel> components;  // Mixture
    std::vector<double> weights;           // Mixture
    std::string id;

    static MeasureModel productOnLevels(std::vector<double> probs, std::string id = {});
    static MeasureModel bernoulli(double pOne, std::string id = {});  // 2 levels, P(level 1) = pOne
    static MeasureModel uniformOnLevels(int m, std::string id = {});
    static MeasureModel pointMass(int m, int atSymbol, std::string id = {});
    static MeasureModel continuousUniform(std::string id = {});
    static MeasureModel mixture(const MeasureModel& a, const MeasureModel& b, double weightA,
                                std::string id = {});

    bool isProduct() const { return kind == MeasureKind::ProductOnLevels; }
    bool isContinuous() const { return kind == MeasureKind::ContinuousProductUniform; }
    bool isMixture() const { return kind == MeasureKind::Mixture; }

    /// Per-coordinate entropy for discrete products (nats).
    double coordinateEntropy() const;

    /// Probability of a symbol at one coordinate (products only).
    double symbolProb(int sym) const { return levelProbs[size_t(sym)]; }

    /// Draw one symbol (products only).
    int sampleSymbol(Rng& rng) const;

    /// Draw a window of symbols on [lo,hi]. For the continuous model the
    /// system's levels act as the sampling grid and each coordinate is
    /// drawn uniformly over them (diagnostics only; analytic paths do not
    /// sample).
    PointWindow sampleWindow(const SymbolicSystem& sys, int lo, int hi, Rng& rng) const;

    void validate(const SymbolicSystem& sys) const;
};

/// Histogram of a window's coordinates [0, n) over the alphabet levels:
/// the empirical measure of the orbit segment pushed through the level
/// partition at coordinate 0.
struct EmpiricalMeasure {
    std::vector<double> histogram;
    int n = 0;

    static EmpiricalMeasure fromWindow(const SymbolicSystem& sys, const PointWindow& w, int n);

    /// Total-variation distance to a product measure's level distribution.
    double tvDistance(const MeasureModel& mu) const;
};

}  // namespace meandim
