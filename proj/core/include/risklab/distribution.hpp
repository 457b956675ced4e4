#pragma once

#include <cstddef>
#include <vector>

namespace risklab {

/// Probability mass on a strictly increasing finite grid of real values.
/// Immutable after construction; all operations are pure.
class DiscreteDistribution {
  public:
    /// Validates: grid strictly increasing and non-empty, masses >= 0 summing
    /// to 1 within 1e-12. Throws DomainError otherwise.
    DiscreteDistribution(std::vector<double> grid, std::vector<double> mass);

    static DiscreteDistribution point_mass(double value);

    /// Builds a distribution from mass over lattice indices {0, 1, ..., n}
    /// with value i*eta. Atoms below 1e-15 are pruned and the rest
    /// renormalized (the convention for Bellman-produced distributions).
    static DiscreteDistribution from_lattice(const std::vector<double>& lattice_mass, double eta);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& mass() const { return mass_; }
    /// Cumulative masses F_j = sum_{i<=j} p_i; clamped into [0,1] with
    /// F_m = 1 exactly so quantile/cdf algebra is closed.
    const std::vector<double>& cumulative() const { return cdf_; }

    std::size_t size() const { return grid_.size(); }
    double min_support() const { return grid_.front(); }
    double max_support() const { return grid_.back(); }
    double mean() const;

    /// F(x) = sum of mass at grid points <= x (right-continuous).
    double cdf(double x) const;

    /// Generalized inverse F†(tau) = inf{x : F(x) >= tau}: the smallest grid
    /// value whose cumulative mass reaches tau. tau = 0 returns the minimum
    /// support point. Throws DomainError for tau outside [0,1].
    double quantile(double tau) const;

    /// Grid index of quantile(tau); exact lattice arithmetic for tests.
    std::size_t quantile_index(double tau) const;

  private:
    std::vector<double> grid_;
    std::vector<double> mass_;
    std::vector<double> cdf_;
};

/// sup_x |F_a(x) - F_b(x)| over the union of both grids. Grid values produced
/// by the same lattice are compared exactly.
double cdf_sup_distance(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace risklab
