#include "meandim/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace meandim {

JointDistribution::JointDistribution(std::vector<std::vector<double>> matrix)
    : p(std::move(matrix)) {
    if (p.empty() || p[0].empty())
        throw std::invalid_argument("JointDistribution: empty matrix");
    KahanSum total;
    for (const auto& row : p) {
        if (row.size() != p[0].size())
            throw std::invalid_argument("JointDistribution: ragged matrix");
        for (double v : row) {
            if (v < 0.0) throw std::invalid_argument("JointDistribution: negative entry");
            total.add(v);
        }
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("JointDistribution: mass must be 1 within 1e-12");
}

std::vector<double> JointDistribution::marginalX() const {
    std::vector<double> mx(p.size(), 0.0);
    for (size_t x = 0; x < p.size(); ++x) {
        KahanSum s;
        for (double v : p[x]) s.add(v);
        mx[x] = s.value();
    }
    return mx;
}

std::vector<double> JointDistribution::marginalY() const {
    std::vector<double> my(p[0].size(), 0.0);
    for (size_t y = 0; y < p[0].size(); ++y) {
        KahanSum s;
        for (size_t x = 0; x < p.size(); ++x) s.add(p[x][y]);
        my[y] = s.value();
    }
    return my;
}

JointDistribution JointDistribution::fromChannel(
    const std::vector<double>& source, const std::vector<std::vector<double>>& channel) {
    std::vector<std::vector<double>> j(source.size());
    for (size_t x = 0; x < source.size(); ++x) {
        j[x].resize(channel[x].size());
        for (size_t y = 0; y < channel[x].size(); ++y) j[x][y] = source[x] * channel[x][y];
    }
    return JointDistribution(std::move(j));
}

double mutual_information(const JointDistribution& J) {
    std::vector<double> mx = J.marginalX();
    std::vector<double> my = J.marginalY();
    KahanSum s;
    for (size_t x = 0; x < J.p.size(); ++x)
        for (size_t y = 0; y < J.p[x].size(); ++y) {
            double v = J.p[x][y];
            if (v > 0.0) s.add(v * std::log(v / (mx[x] * my[y])));
        }
    return std::max(0.0, s.value());
}

double mutual_information_identity(const JointDistribution& J) {
    std::vector<double> joint;
    for (const auto& row : J.p)
        for (double v : row) joint.push_back(v);
    return entropy_nats(J.marginalX()) + entropy_nats(J.marginalY()) - entropy_nats(joint);
}

DistortionMatrix DistortionMatrix::lp(const std::vector<double>& sourceLevels,
                                      const std::vector<double>& reproLevels, double p) {
    if (p < 1.0) throw std::invalid_argument("DistortionMatrix::lp: p >= 1");
    DistortionMatrix d;
    d.kind = "lp(" + format_double(p) + ")";
    d.reproductionLevels = reproLevels;
    d.rho.assign(sourceLevels.size(), std::vector<double>(reproLevels.size(), 0.0));
    for (size_t x = 0; x < sourceLevels.size(); ++x)
        for (size_t y = 0; y < reproLevels.size(); ++y)
            d.rho[x][y] = std::pow(std::abs(sourceLevels[x] - reproLevels[y]), p);
    return d;
}

DistortionMatrix DistortionMatrix::indicator(const std::vector<double>& sourceLevels,
                                             const std::vector<double>& reproLevels,
                                             double eps) {
    if (eps <= 0.0) throw std::invalid_argument("DistortionMatrix::indicator: eps > 0");
    DistortionMatrix d;
    d.kind = "indicator(" + format_double(eps) + ")";
    d.reproductionLevels = reproLevels;
    d.rho.assign(sourceLevels.size(), std::vector<double>(reproLevels.size(), 0.0));
    for (size_t x = 0; x < sourceLevels.size(); ++x)
        for (size_t y = 0; y < reproLevels.size(); ++y)
            d.rho[x][y] = std::abs(sourceLevels[x] - reproLevels[y]) >= eps ? 1.0 : 0.0;
    return d;
}

std::vector<double> DistortionMatrix::midpointEnriched(const std::vector<double>& levels) {
    std::vector<double> out = levels;
    for (size_t i = 1; i < levels.size(); ++i)
        out.push_back(0.5 * (levels[i - 1] + levels[i]));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct BetaSolve {
    double rate = 0.0;
    double distortion = 0.0;
    std::vector<std::vector<double>> channel;
    uint64_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

// Alternating minimization at a fixed trade-off multiplier beta. Row minima
// are factored out of the exponentials so large beta stays finite. The
// output marginal can be warm-started from a neighboring beta.
BetaSolve ba_fixed_beta(const std::vector<double>& px,
                        const std::vector<std::vector<double>>& rho, double beta, double tol,
                        uint64_t maxIters, const std::vector<double>* warmStart = nullptr) {
    const size_t X = px.size(), Y = rho[0].size();
    std::vector<std::vector<double>> A(X, std::vector<double>(Y));
    for (size_t x = 0; x < X; ++x) {
        double rowMin = *std::min_element(rho[x].begin(), rho[x].end());
        for (size_t y = 0; y < Y; ++y) A[x][y] = std::exp(-beta * (rho[x][y] - rowMin));
    }
    std::vector<double> q(Y, 1.0 / double(Y));
    if (warmStart && warmStart->size() == Y) {
        // keep a small uniform floor so no output is starved by the warm start
        for (size_t y = 0; y < Y; ++y) q[y] = (1.0 - 1e-6) * (*warmStart)[y] + 1e-6 / double(Y);
    }
    std::vector<std::vector<double>> Q(X, std::vector<double>(Y, 0.0));

    double prevRate = std::numeric_limits<double>::infinity();
    BetaSolve out;
    for (uint64_t it = 1; it <= maxIters; ++it) {
        for (size_t x = 0; x < X; ++x) {
            double Z = 0.0;
            for (size_t y = 0; y < Y; ++y) Z += q[y] * A[x][y];
            if (!(Z > 0.0)) throw std::runtime_error("blahut_arimoto: degenerate partition sum");
            for (size_t y = 0; y < Y; ++y) Q[x][y] = q[y] * A[x][y] / Z;
        }
        std::vector<double> qNew(Y, 0.0);
        for (size_t x = 0; x < X; ++x)
            for (size_t y = 0; y < Y; ++y) qNew[y] += px[x] * Q[x][y];
        q = qNew;

        double rate = 0.0;
        for (size_t x = 0; x < X; ++x)
            for (size_t y = 0; y < Y; ++y)
                if (Q[x][y] > 0.0 && q[y] > 0.0)
                    rate += px[x] * Q[x][y] * std::log(Q[x][y] / q[y]);
        rate = std::max(0.0, rate);

        double delta = std::abs(rate - prevRate) / std::max(1.0, std::abs(rate));
        out.iterations = it;
        out.residual = delta;
        if (delta < tol) {
            out.rate = rate;
            out.converged = true;
            double dist = 0.0;
            for (size_t x = 0; x < X; ++x)
                for (size_t y = 0; y < Y; ++y) dist += px[x] * Q[x][y] * rho[x][y];
            out.distortion = dist;
            out.channel = Q;
            return out;
        }
        prevRate = rate;
    }
    out.converged = false;
    out.rate = std::isfinite(prevRate) ? prevRate : 0.0;
    double dist = 0.0;
    for (size_t x = 0; x < X; ++x)
        for (size_t y = 0; y < Y; ++y) dist += px[x] * Q[x][y] * rho[x][y];
    out.distortion = dist;
    out.channel = Q;
    return out;
}

}  // namespace

BaResult blahut_arimoto(const std::vector<double>& source, const DistortionMatrix& d,
                        double D, double tol, uint64_t maxIters) {
    if (source.empty() || d.rho.size() != source.size())
        throw std::invalid_argument("blahut_arimoto: source/distortion size mismatch");
    if (D < 0.0) throw std::invalid_argument("blahut_arimoto: D >= 0");
    const size_t X = source.size(), Y = d.rho[0].size();

    // Zero-rate threshold: best constant reproduction.
    double dMax = std::numeric_limits<double>::infinity();
    size_t bestY = 0;
    for (size_t y = 0; y < Y; ++y) {
        double e = 0.0;
        for (size_t x = 0; x < X; ++x) e += source[x] * d.rho[x][y];
        if (e < dMax) {
            dMax = e;
            bestY = y;
        }
    }
    if (D >= dMax - 1e-15) {
        BaResult r;
        r.rate = 0.0;
        r.distortion = dMax;
        r.channel.assign(X, std::vector<double>(Y, 0.0));
        for (size_t x = 0; x < X; ++x) r.channel[x][bestY] = 1.0;
        r.converged = true;
        return r;
    }

    double dMin = 0.0;
    for (size_t x = 0; x < X; ++x)
        dMin += source[x] * *std::min_element(d.rho[x].begin(), d.rho[x].end());
    if (D < dMin - 1e-12)
        throw std::invalid_argument("blahut_arimoto: D below the attainable minimum distortion");

    // Bisection in beta; achieved distortion decreases as beta grows. The
    // bracketing runs at a coarse inner tolerance with warm-started output
    // marginals; the chosen beta gets one full-precision solve at the end.
    const double coarseTol = std::max(tol, 1e-7);
    const uint64_t coarseIters = std::min<uint64_t>(maxIters, 5000);
    double betaLo = 0.0, betaHi = 64.0;
    std::vector<double> warm;
    auto solve = [&](double beta, double innerTol, uint64_t innerIters) {
        BetaSolve s = ba_fixed_beta(source, d.rho, beta, innerTol, innerIters,
                                    warm.empty() ? nullptr : &warm);
        if (!s.channel.empty())
            warm = JointDistribution::fromChannel(source, s.channel).marginalY();
        return s;
    };
    BetaSolve hi = solve(betaHi, coarseTol, coarseIters);
    while (hi.distortion > D + 1e-8 && betaHi < 1e8) {
        betaLo = betaHi;
        betaHi *= 4.0;
        hi = solve(betaHi, coarseTol, coarseIters);
    }
    double betaChosen = betaHi;
    for (int step = 0; step < 100; ++step) {
        if (betaHi - betaLo < 1e-10 * std::max(1.0, betaHi)) break;
        double mid = 0.5 * (betaLo + betaHi);
        BetaSolve ms = solve(mid, coarseTol, coarseIters);
        if (ms.distortion > D + 1e-8) {
            betaLo = mid;
        } else {
            betaHi = mid;
            betaChosen = mid;
            if (std::abs(ms.distortion - D) <= 1e-8) break;
        }
    }
    BetaSolve chosen = solve(betaChosen, tol, maxIters);
    if (chosen.distortion > D + 1e-7) {
        // full-precision refinement drifted across the budget: step back
        chosen = solve(betaHi * (1.0 + 1e-9) + 1e-12, tol, maxIters);
    }

    BaResult r;
    r.rate = chosen.rate;
    r.distortion = chosen.distortion;
    r.channel = chosen.channel;
    r.iterations = chosen.iterations;
    r.residual = chosen.residual;
    r.converged = chosen.converged;
    return r;
}

BaResult rd_linf(const SymbolicSystem& sys, const std::vector<double>& source, double eps,
                 double s, const RdLinfOptions& opt) {
    if (s <= 0.0 || s > 1.0) throw std::invalid_argument("rd_linf: s in (0, 1]");
    if (int(source.size()) != sys.alphabetSize())
        throw std::invalid_argument("rd_linf: source must match the system alphabet");
    std::vector<double> repro =
        opt.enrichReproduction ? DistortionMatrix::midpointEnriched(sys.levels) : sys.levels;
    DistortionMatrix d = DistortionMatrix::indicator(sys.levels, repro, eps);
    // strict excess-frequency budget: keep the feasible set just inside s
    double D = std::max(0.0, s * (1.0 - 1e-12) - 1e-15);
    return blahut_arimoto(source, d, D, opt.tol, opt.maxIters);
}

RdLimitResult rd_linf_limit(const SymbolicSystem& sys, const std::vector<double>& source,
                            double eps, const std::vector<double>& sGrid,
                            const RdLinfOptions& opt) {
    if (sGrid.size() < 2) throw std::invalid_argument("rd_linf_limit: need >= 2 s values");
    for (size_t i = 0; i + 1 < sGrid.size(); ++i)
        if (!(sGrid[i] > sGrid[i + 1]))
            throw std::invalid_argument("rd_linf_limit: s grid must decrease");
    RdLimitResult out;
    out.sGrid = sGrid;
    for (double s : sGrid) out.rates.push_back(rd_linf(sys, source, eps, s, opt).rate);
    out.value = out.rates.back();

    // Monotone envelope: continue the last increment geometrically when the
    // increments are shrinking, never below any sample.
    double extrap = out.value;
    size_t k = out.rates.size();
    if (k >= 3) {
        double d1 = out.rates[k - 1] - out.rates[k - 2];
        double d0 = out.rates[k - 2] - out.rates[k - 3];
        if (d1 > 0.0 && d0 > d1) {
            double ratio = d1 / d0;
            extrap = out.rates[k - 1] + d1 * ratio / (1.0 - ratio);
        }
    }
    for (double r : out.rates) extrap = std::max(extrap, r);
    out.envelope = extrap;
    return out;
}

double rd_linf_block(const SymbolicSystem& sys, const std::vector<double>& source, double eps,
                     double s, int n, const RdLinfOptions& opt) {
    if (n < 1 || n > 3) throw std::invalid_argument("rd_linf_block: n in 1..3");
    const size_t m = source.size();
    size_t M = 1;
    for (int i = 0; i < n; ++i) M *= m;

    std::vector<double> blockSource(M, 1.0);
    std::vector<std::vector<double>> rho(M, std::vector<double>(M, 0.0));
    auto digits = [&](size_t code) {
        std::vector<size_t> ds(static_cast<size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            ds[size_t(i)] = code % m;
            code /= m;
        }
        return ds;
    };
    for (size_t a = 0; a < M; ++a) {
        auto da = digits(a);
        for (size_t i = 0; i < size_t(n); ++i) blockSource[a] *= source[da[i]];
        for (size_t b = 0; b < M; ++b) {
            auto db = digits(b);
            double cnt = 0.0;
            for (size_t i = 0; i < size_t(n); ++i)
                if (std::abs(sys.level(int(da[i])) - sys.level(int(db[i]))) >= eps) cnt += 1.0;
            rho[a][b] = cnt / double(n);
        }
    }
    DistortionMatrix d;
    d.kind = "indicator-block";
    d.rho = std::move(rho);
    double D = std::max(0.0, s * (1.0 - 1e-12) - 1e-15);
    BaResult r = blahut_arimoto(blockSource, d, D, opt.tol, opt.maxIters);
    return r.rate / double(n);
}

std::string RDCurve::toCsv() const {
    std::ostringstream out;
    out << "level,rate_nats,iters,residual,kind\n";
    for (const auto& pt : points)
        out << format_double(pt.level) << ',' << format_double(pt.rate) << ',' << pt.iters
            << ',' << format_double(pt.residual) << ',' << kind << '\n';
    return out.str();
}

RdimEstimate rdim_estimate(const RDCurve& curve) {
    if (curve.points.size() < 3)
        throw std::invalid_argument("rdim_estimate: insufficient data (need >= 3 curve points)");
    std::vector<double> eps, rates;
    for (const auto& pt : curve.points) {
        eps.push_back(pt.level);
        rates.push_back(pt.rate);
    }
    RdimEstimate est;
    est.dim = dimension_from_sweep(eps, rates);
    est.curve = curve;
    return est;
}

RDCurve rd_linf_curve(const SymbolicSystem& sys, const std::vector<double>& source,
                      const std::vector<double>& epsList, const std::vector<double>& sGrid,
                      const RdLinfOptions& opt) {
    RDCurve curve;
    curve.kind = "rd-linf";
    for (double eps : epsList) {
        RdLimitResult lim = rd_linf_limit(sys, source, eps, sGrid, opt);
        BaResult last = rd_linf(sys, source, eps, sGrid.back(), opt);
        RDCurvePoint pt;
        pt.level = eps;
        pt.rate = lim.value;
        pt.iters = last.iterations;
        pt.residual = last.residual;
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace meandim
