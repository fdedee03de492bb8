#pragma once

#include <antgen/rng.hpp>

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

namespace antgen {

enum class TailMode
{
    two_sided,  // p = 2 min(Phi(m), 1 - Phi(m))
    lower_tail, // p = Phi(m)
};

std::string_view to_string(TailMode mode) noexcept;

/// One normal distribution (mu, sigma) of an agent behaviour.
struct BehaviourSpec
{
    double mu = 0.0;
    double sigma = 0.0;
    bool include_in_anomaly = true;

    /// The inclusion flag c: set only for random, included behaviours.
    [[nodiscard]] bool counts_toward_anomaly() const noexcept { return sigma > 0.0 && include_in_anomaly; }

    bool operator==(const BehaviourSpec&) const = default;
};

struct BehaviourSample
{
    double m = 0.0;            // raw N(0,1) draw
    double m_tilde = 0.0;      // fuzz-blended draw
    double value_stat = 0.0;   // mu + sigma m
    double value_visual = 0.0; // mu + sigma m_tilde
    double p = 1.0;

    bool operator==(const BehaviourSample&) const = default;
};

struct AnomalyScore
{
    double r_bar = 1.0;
    double w_bar = 1.0;
    double omega = 1.0;
    bool is_anomaly = false;

    bool operator==(const AnomalyScore&) const = default;
};

struct StatsConfig
{
    double v = 0.05; // anomaly threshold and fuzz dead-zone half-width
    double z = 0.0;  // fuzziness coefficient
    TailMode tail_mode = TailMode::two_sided;
    double p_floor = 1e-300;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    bool operator==(const StatsConfig&) const = default;
};

/// Draw m ~ N(0,1) by Box-Muller from two open-interval uniforms.
inline double sample_standard_normal(SeededRng& rng) { return rng.standard_normal(); }

/// Cubic dead-zone transform: (n+v)^3 below -v, (n-v)^3 above v, 0 between.
template <typename Scalar>
Scalar fuzz_transform(Scalar n, Scalar v)
{
    if (n <= -v) {
        const Scalar s = n + v;
        return s * s * s;
    }
    if (n >= v) {
        const Scalar s = n - v;
        return s * s * s;
    }
    return Scalar(0);
}

/// z n + (1 - z) fuzz_transform(n, v). Exact at the endpoints z = 0 and z = 1.
template <typename Scalar>
Scalar blend_fuzz(Scalar n, Scalar v, Scalar z)
{
    if (z == Scalar(1))
        return n;
    if (z == Scalar(0))
        return fuzz_transform(n, v);
    return z * n + (Scalar(1) - z) * fuzz_transform(n, v);
}

/// Coefficient-wise blend over an Eigen array expression.
template <typename Derived>
auto blend_fuzz(const Eigen::ArrayBase<Derived>& n, typename Derived::Scalar v, typename Derived::Scalar z)
{
    using Scalar = typename Derived::Scalar;
    return n.unaryExpr([v, z](Scalar x) { return blend_fuzz(x, v, z); });
}

/// Standard-normal CDF via erfc.
double standard_normal_cdf(double x) noexcept;

/// Per-behaviour p-value of a raw draw m, clamped to [p_floor, 1].
double behaviour_p_value(double m, const StatsConfig& cfg);

/// Build a sample from a known draw m (the deterministic half of sample_behaviour).
BehaviourSample make_behaviour_sample(const BehaviourSpec& spec, const StatsConfig& cfg, double m);

/// Draw m once from rng and build the sample.
BehaviourSample sample_behaviour(const BehaviourSpec& spec, const StatsConfig& cfg, SeededRng& rng);

/// Regularised upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

/// Chi-squared survival function with dof degrees of freedom, Q(dof/2, x/2).
double chi_squared_sf(double x, int dof);

/// Fisher combination of the included p-values: chi-squared SF with 2k dof at
/// S = sum of -2 ln p_j. Returns 1 when nothing is included.
double combine_p_values(std::span<const BehaviourSample> samples, std::span<const bool> included,
                        const StatsConfig& cfg);

std::vector<double> normalize_class_weights(std::span<const double> weights);

inline double overall_likelihood(double w_bar, double r_bar) noexcept { return w_bar * r_bar; }

inline bool label_anomaly(double omega, double v) noexcept { return omega <= v; }

/// r_bar, w_bar, omega and the anomaly flag for one agent.
AnomalyScore score_agent(std::span<const BehaviourSample> samples, std::span<const bool> included, double w_bar,
                         const StatsConfig& cfg);

} // namespace antgen
