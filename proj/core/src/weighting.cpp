#include "risklab/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "risklab/errors.hpp"

namespace risklab {

WeightingFunction WeightingFunction::cvar(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("cvar: alpha must lie in (0,1]");
    return WeightingFunction(Kind::cvar, alpha, 1.0 / alpha);
}

WeightingFunction WeightingFunction::var(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("var: alpha must lie in (0,1]");
    return WeightingFunction(Kind::var, alpha, std::numeric_limits<double>::infinity());
}

WeightingFunction WeightingFunction::expectation() {
    return WeightingFunction(Kind::expectation, 1.0, 1.0);
}

WeightingFunction WeightingFunction::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw DomainError("piecewise_linear: need at least two knots");
    if (knots.front() != std::pair<double, double>{0.0, 0.0} ||
        knots.back() != std::pair<double, double>{1.0, 1.0})
        throw DomainError("piecewise_linear: knots must run from (0,0) to (1,1)");
    double max_slope = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        auto [t0, v0] = knots[i - 1];
        auto [t1, v1] = knots[i];
        if (!(t1 > t0)) throw DomainError("piecewise_linear: knot abscissae must strictly increase");
        if (v1 < v0) throw DomainError("piecewise_linear: knot values must be nondecreasing");
        if (v1 < 0.0 || v1 > 1.0 || v0 < 0.0) throw DomainError("piecewise_linear: knot values outside [0,1]");
        max_slope = std::max(max_slope, (v1 - v0) / (t1 - t0));
    }
    WeightingFunction w(Kind::piecewise_linear, 0.0, max_slope);
    w.knots_ = std::move(knots);
    return w;
}

double WeightingFunction::operator()(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("weighting: tau outside [0,1]");
    switch (kind_) {
        case Kind::cvar:
            return std::min(tau / alpha_, 1.0);
        case Kind::expectation:
            return tau;
        case Kind::var:
            // right-continuous unit step: all dG-mass sits at tau = alpha, so
            // the Stieltjes sum picks out the alpha-quantile
            return tau >= alpha_ ? 1.0 : 0.0;
        case Kind::piecewise_linear: {
            if (tau >= 1.0) return knots_.back().second;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), tau,
                                       [](double t, const std::pair<double, double>& k) { return t < k.first; });
            // tau < 1 and the first knot sits at 0, so it is interior
            auto [t1, v1] = *it;
            auto [t0, v0] = *(it - 1);
            return v0 + (v1 - v0) * (tau - t0) / (t1 - t0);
        }
    }
    return 0.0;
}

std::string WeightingFunction::kind_name() const {
    switch (kind_) {
        case Kind::cvar: return "cvar";
        case Kind::var: return "var";
        case Kind::expectation: return "expectation";
        case Kind::piecewise_linear: return "piecewise_linear";
    }
    return "?";
}

WeightingFunction make_weighting(const std::string& kind, double alpha,
                                 std::vector<std::pair<double, double>> knots) {
    if (kind == "cvar") return WeightingFunction::cvar(alpha);
    if (kind == "var") return WeightingFunction::var(alpha);
    if (kind == "expectation") return WeightingFunction::expectation();
    if (kind == "piecewise_linear") return WeightingFunction::piecewise_linear(std::move(knots));
    throw DomainError("unknown weighting kind: " + kind);
}

double phi_quantile(const DiscreteDistribution& dist, const WeightingFunction& g) {
    const auto& grid = dist.grid();
    const auto& cdf = dist.cumulative();
    double acc = 0.0;
    double g_prev = g(0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double g_cur = g(cdf[j]);
        acc += grid[j] * (g_cur - g_prev);
        g_prev = g_cur;
    }
    return acc;
}

double phi_cdf(const DiscreteDistribution& dist, const WeightingFunction& g) {
    const auto& grid = dist.grid();
    const auto& cdf = dist.cumulative();
    std::size_t top = dist.quantile_index(1.0);  // integration stops at F†(1)
    double z_max = grid[top];
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 <= top; ++j) integral += (grid[j + 1] - grid[j]) * g(cdf[j]);
    return z_max - integral;
}

}  // namespace risklab
