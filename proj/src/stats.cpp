#include <antgen/stats.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace antgen {

std::string_view to_string(TailMode mode) noexcept
{
    return mode == TailMode::two_sided ? "two_sided" : "lower_tail";
}

void StatsConfig::validate() const
{
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("stats.v must lie in [0, 1]");
    if (!(z >= 0.0 && z <= 1.0))
        throw std::invalid_argument("stats.z must lie in [0, 1]");
    if (!(p_floor > 0.0 && p_floor < 1.0))
        throw std::invalid_argument("stats.p_floor must lie in (0, 1)");
}

double box_muller(double u1, double u2) noexcept
{
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double standard_normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double behaviour_p_value(double m, const StatsConfig& cfg)
{
    double p = 0.0;
    switch (cfg.tail_mode) {
    case TailMode::two_sided:
        // 2 min(Phi, 1 - Phi) without cancellation in the far tail.
        p = std::erfc(std::abs(m) / std::numbers::sqrt2);
        break;
    case TailMode::lower_tail:
        p = standard_normal_cdf(m);
        break;
    }
    return std::clamp(p, cfg.p_floor, 1.0);
}

BehaviourSample make_behaviour_sample(const BehaviourSpec& spec, const StatsConfig& cfg, double m)
{
    BehaviourSample s;
    s.m = m;
    s.m_tilde = blend_fuzz(m, cfg.v, cfg.z);
    s.value_stat = spec.mu + spec.sigma * s.m;
    s.value_visual = spec.mu + spec.sigma * s.m_tilde;
    s.p = spec.sigma > 0.0 ? behaviour_p_value(m, cfg) : 1.0;
    return s;
}

BehaviourSample sample_behaviour(const BehaviourSpec& spec, const StatsConfig& cfg, SeededRng& rng)
{
    return make_behaviour_sample(spec, cfg, sample_standard_normal(rng));
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIterations = 10000;

// exp(-x + a ln x - lgamma(a)), the common prefactor of P and Q.
double gamma_prefactor(double a, double x)
{
    return std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double lower_series(double a, double x)
{
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            break;
    }
    return sum * gamma_prefactor(a, x);
}

// Modified Lentz evaluation of the continued fraction for Q.
double upper_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            break;
    }
    return h * gamma_prefactor(a, x);
}

} // namespace

double regularized_gamma_q(double a, double x)
{
    if (!(a > 0.0))
        throw std::invalid_argument("regularized_gamma_q: a must be positive");
    if (!(x >= 0.0))
        throw std::invalid_argument("regularized_gamma_q: x must be non-negative");
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    if (x < a + 1.0)
        return std::clamp(1.0 - lower_series(a, x), 0.0, 1.0);
    return std::clamp(upper_fraction(a, x), 0.0, 1.0);
}

double chi_squared_sf(double x, int dof)
{
    if (dof < 1)
        throw std::invalid_argument("chi_squared_sf: dof must be >= 1");
    if (!(x >= 0.0))
        throw std::invalid_argument("chi_squared_sf: x must be non-negative");
    return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double combine_p_values(std::span<const BehaviourSample> samples, std::span<const bool> included,
                        const StatsConfig& cfg)
{
    if (samples.size() != included.size())
        throw std::invalid_argument("combine_p_values: samples and flags differ in length");
    int k = 0;
    double statistic = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double p = samples[j].p;
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("combine_p_values: p-value outside (0, 1]: " + std::to_string(p));
        if (!included[j])
            continue;
        statistic += -2.0 * std::log(std::max(p, cfg.p_floor));
        ++k;
    }
    if (k == 0)
        return 1.0;
    return chi_squared_sf(statistic, 2 * k);
}

std::vector<double> normalize_class_weights(std::span<const double> weights)
{
    if (weights.empty())
        throw std::invalid_argument("normalize_class_weights: no classes");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("normalize_class_weights: weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("normalize_class_weights: all weights are zero");
    std::vector<double> out(weights.begin(), weights.end());
    for (double& w : out)
        w /= total;
    return out;
}

AnomalyScore score_agent(std::span<const BehaviourSample> samples, std::span<const bool> included, double w_bar,
                         const StatsConfig& cfg)
{
    AnomalyScore score;
    score.r_bar = combine_p_values(samples, included, cfg);
    score.w_bar = w_bar;
    score.omega = overall_likelihood(w_bar, score.r_bar);
    score.is_anomaly = label_anomaly(score.omega, cfg.v);
    return score;
}

} // namespace antgen
