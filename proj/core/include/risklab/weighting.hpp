#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "risklab/distribution.hpp"

namespace risklab {

/// The CDF G over quantile levels tau in [0,1] that defines the risk
/// objective Phi = ∫ F†(tau) dG(tau). Immutable; evaluation is pure.
///
/// Built-in kinds:
///   cvar(alpha):  G(tau) = min(tau/alpha, 1), Lipschitz 1/alpha
///   expectation:  G(tau) = tau, Lipschitz 1
///   var(alpha):   unit step at alpha (Dirac weight on the alpha-quantile),
///                 Lipschitz infinity — evaluation only
///   piecewise_linear(knots): knots (tau_i, v_i) from (0,0) to (1,1)
class WeightingFunction {
  public:
    enum class Kind { cvar, var, expectation, piecewise_linear };

    static WeightingFunction cvar(double alpha);
    static WeightingFunction var(double alpha);
    static WeightingFunction expectation();
    static WeightingFunction piecewise_linear(std::vector<std::pair<double, double>> knots);

    /// G(tau). Throws DomainError for tau outside [0,1].
    double operator()(double tau) const;

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    /// Lipschitz constant L_G (infinity for var).
    double lipschitz() const { return lipschitz_; }
    bool has_finite_lipschitz() const { return lipschitz_ < std::numeric_limits<double>::infinity(); }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    std::string kind_name() const;

  private:
    WeightingFunction(Kind kind, double alpha, double lipschitz) : kind_(kind), alpha_(alpha), lipschitz_(lipschitz) {}
    Kind kind_;
    double alpha_ = 0.0;
    double lipschitz_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
};

/// Factory from a kind name ("cvar", "var", "expectation", "piecewise_linear")
/// used by CLI flags and JSON configs.
WeightingFunction make_weighting(const std::string& kind, double alpha = 0.0,
                                 std::vector<std::pair<double, double>> knots = {});

/// Phi by its definition: the Stieltjes sum over the quantile function,
/// sum_j z_j * (G(F_j) - G(F_{j-1})). Exact for discrete distributions.
double phi_quantile(const DiscreteDistribution& dist, const WeightingFunction& g);

/// Phi by the dual route: z_max - ∫ G(F(x)) dx over [z_1, z_max] with
/// z_max = F†(1). Agrees with phi_quantile up to float round-off; the two
/// evaluations deliberately share no code path.
double phi_cdf(const DiscreteDistribution& dist, const WeightingFunction& g);

}  // namespace risklab
