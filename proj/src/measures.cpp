#include "meandim/measures.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace meandim {

MeasureModel MeasureModel::productOnLevels(std::vector<double> probs, std::string id) {
    MeasureModel m;
    m.kind = MeasureKind::ProductOnLevels;
    m.levelProbs = std::move(probs);
    double sum = std::accumulate(m.levelProbs.begin(), m.levelProbs.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("MeasureModel: probabilities must sum to 1");
    for (double p : m.levelProbs)
        if (p < 0.0) throw std::invalid_argument("MeasureModel: negative probability");
    m.id = id.empty() ? "product" : std::move(id);
    return m;
}

MeasureModel MeasureModel::bernoulli(double pOne, std::string id) {
    if (pOne < 0.0 || pOne > 1.0) throw std::invalid_argument("bernoulli: p in [0,1]");
    if (id.empty()) id = "bernoulli-" + format_double(pOne);
    return productOnLevels({1.0 - pOne, pOne}, std::move(id));
}

MeasureModel MeasureModel::uniformOnLevels(int m, std::string id) {
    if (m < 1) throw std::invalid_argument("uniformOnLevels: m >= 1");
    if (id.empty()) id = "uniform-levels-" + std::to_string(m);
    return productOnLevels(std::vector<double>(size_t(m), 1.0 / double(m)), std::move(id));
}

MeasureModel MeasureModel::pointMass(int m, int atSymbol, std::string id) {
    if (atSymbol < 0 || atSymbol >= m) throw std::invalid_argument("pointMass: symbol out of range");
    std::vector<double> p(size_t(m), 0.0);
    p[size_t(atSymbol)] = 1.0;
    if (id.empty()) id = "point-mass-" + std::to_string(atSymbol);
    return productOnLevels(std::move(p), std::move(id));
}

MeasureModel MeasureModel::continuousUniform(std::string id) {
    MeasureModel m;
    m.kind = MeasureKind::ContinuousProductUniform;
    m.id = id.empty() ? "lebesgue-product" : std::move(id);
    return m;
}

MeasureModel MeasureModel::mixture(const MeasureModel& a, const MeasureModel& b, double weightA,
                                   std::string id) {
    if (weightA < 0.0 || weightA > 1.0)
        throw std::invalid_argument("mixture: weight in [0,1]");
    if (!a.isProduct() || !b.isProduct())
        throw std::invalid_argument("mixture: components must be product measures");
    MeasureModel m;
    m.kind = MeasureKind::Mixture;
    m.components = {a, b};
    m.weights = {weightA, 1.0 - weightA};
    m.id = id.empty() ? ("mix-" + format_double(weightA) + "-" + a.id + "-" + b.id)
                      : std::move(id);
    return m;
}

double MeasureModel::coordinateEntropy() const {
    if (!isProduct())
        throw std::invalid_argument("coordinateEntropy: product measures only");
    return entropy_nats(levelProbs);
}

int MeasureModel::sampleSymbol(Rng& rng) const {
    if (!isProduct()) throw std::invalid_argument("sampleSymbol: product measures only");
    double u = rng.uniform();
    double acc = 0.0;
    for (size_t i = 0; i < levelProbs.size(); ++i) {
        acc += levelProbs[i];
        if (u < acc) return int(i);
    }
    return int(levelProbs.size()) - 1;
}

PointWindow MeasureModel::sampleWindow(const SymbolicSystem& sys, int lo, int hi,
                                       Rng& rng) const {
    if (hi < lo) throw std::invalid_argument("sampleWindow: empty range");
    std::vector<uint8_t> syms(size_t(hi - lo + 1));
    if (isMixture()) {
        double u = rng.uniform();
        size_t c = u < weights[0] ? 0 : 1;
        return components[c].sampleWindow(sys, lo, hi, rng);
    }
    for (auto& s : syms) {
        if (isContinuous())
            s = uint8_t(rng.below(uint64_t(sys.alphabetSize())));
        else
            s = uint8_t(sampleSymbol(rng));
    }
    return PointWindow(lo, std::move(syms));
}

void MeasureModel::validate(const SymbolicSystem& sys) const {
    if (isProduct() && int(levelProbs.size()) != sys.alphabetSize())
        throw std::invalid_argument("MeasureModel: arity does not match system alphabet");
    if (isMixture())
        for (const auto& c : components) c.validate(sys);
}

EmpiricalMeasure EmpiricalMeasure::fromWindow(const SymbolicSystem& sys, const PointWindow& w,
                                              int n) {
    if (n < 1 || !w.covers(0, n - 1))
        throw std::invalid_argument("EmpiricalMeasure: window must cover [0, n)");
    EmpiricalMeasure e;
    e.n = n;
    e.histogram.assign(size_t(sys.alphabetSize()), 0.0);
    for (int j = 0; j < n; ++j) e.histogram[w.symbolAt(j)] += 1.0 / double(n);
    return e;
}

double EmpiricalMeasure::tvDistance(const MeasureModel& mu) const {
    if (!mu.isProduct())
        throw std::invalid_argument("tvDistance: product reference required");
    if (mu.levelProbs.size() != histogram.size())
        throw std::invalid_argument("tvDistance: arity mismatch");
    double s = 0.0;
    for (size_t i = 0; i < histogram.size(); ++i)
        s += std::abs(histogram[i] - mu.levelProbs[i]);
    return 0.5 * s;
}

}  // namespace meandim
