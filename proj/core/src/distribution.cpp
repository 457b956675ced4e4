#include "risklab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "risklab/errors.hpp"

namespace risklab {

namespace {
constexpr double kMassTolerance = 1e-12;
constexpr double kPruneThreshold = 1e-15;
}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> grid, std::vector<double> mass)
    : grid_(std::move(grid)), mass_(std::move(mass)) {
    if (grid_.empty()) throw DomainError("distribution: empty grid");
    if (grid_.size() != mass_.size()) throw DomainError("distribution: grid/mass size mismatch");
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (!std::isfinite(grid_[j])) throw DomainError("distribution: non-finite grid value");
        if (j > 0 && !(grid_[j] > grid_[j - 1]))
            throw DomainError("distribution: grid not strictly increasing at index " + std::to_string(j));
        if (!(mass_[j] >= 0.0)) throw DomainError("distribution: negative mass at index " + std::to_string(j));
    }
    cdf_.resize(mass_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < mass_.size(); ++j) {
        acc += mass_[j];
        cdf_[j] = std::min(acc, 1.0);
    }
    if (std::abs(acc - 1.0) > kMassTolerance)
        throw DomainError("distribution: mass sums to " + std::to_string(acc) + ", expected 1");
    cdf_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
    return DiscreteDistribution({value}, {1.0});
}

DiscreteDistribution DiscreteDistribution::from_lattice(const std::vector<double>& lattice_mass, double eta) {
    if (lattice_mass.empty()) throw DomainError("from_lattice: empty mass vector");
    if (!(eta > 0.0)) throw DomainError("from_lattice: eta must be positive");
    double kept = 0.0;
    for (double m : lattice_mass)
        if (m > kPruneThreshold) kept += m;
    if (kept <= 0.0) throw DomainError("from_lattice: no mass above prune threshold");
    std::vector<double> grid, mass;
    for (std::size_t i = 0; i < lattice_mass.size(); ++i) {
        if (lattice_mass[i] > kPruneThreshold) {
            grid.push_back(static_cast<double>(i) * eta);
            mass.push_back(lattice_mass[i] / kept);
        }
    }
    return DiscreteDistribution(std::move(grid), std::move(mass));
}

double DiscreteDistribution::mean() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) acc += grid_[j] * mass_[j];
    return acc;
}

double DiscreteDistribution::cdf(double x) const {
    // index of first grid value > x; everything before it is <= x
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return 0.0;
    return cdf_[static_cast<std::size_t>(it - grid_.begin()) - 1];
}

std::size_t DiscreteDistribution::quantile_index(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("quantile: tau outside [0,1]");
    // smallest j with F_j >= tau; F_m = 1 guarantees existence
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), tau);
    return static_cast<std::size_t>(it - cdf_.begin());
}

double DiscreteDistribution::quantile(double tau) const { return grid_[quantile_index(tau)]; }

double cdf_sup_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    double worst = 0.0;
    auto probe = [&](double x) {
        double d = std::abs(a.cdf(x) - b.cdf(x));
        if (d > worst) worst = d;
    };
    for (double x : a.grid()) probe(x);
    for (double x : b.grid()) probe(x);
    return worst;
}

}  // namespace risklab
