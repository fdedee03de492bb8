#pragma once

// Independent reference implementations used to check the library. None of
// these call into antgen; they are deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Upper tail of the chi-squared distribution by quadrature. Substituting
/// t = u^2 removes the dof = 1 singularity at the origin.
inline double chi_squared_sf(double x, int dof)
{
    const long double k = dof;
    const long double log_norm = (k / 2) * std::log(2.0L) + std::lgamma(static_cast<double>(k / 2));
    const auto integrand = [&](long double u) {
        if (u <= 0)
            return dof == 1 ? 2.0L * std::exp(-log_norm) : 0.0L;
        return 2.0L * std::exp((k - 1) * std::log(u) - u * u / 2 - log_norm);
    };
    const long double lo = std::sqrt(static_cast<long double>(x));
    const long double mode = std::sqrt(std::max(0.0L, k - 1));
    const long double hi = std::max(lo, mode) + 40.0L;
    const int n = 200000; // even
    const long double h = (hi - lo) / n;
    long double sum = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0L : 2.0L) * integrand(lo + i * h);
    return static_cast<double>(sum * h / 3);
}

/// Two-sided one-sample Kolmogorov-Smirnov p-value against Uniform(0, 1),
/// using the asymptotic Kolmogorov distribution with the Stephens correction.
inline double ks_uniform_p_value(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max(d, (i + 1) / n - xs[i]);
        d = std::max(d, xs[i] - i / n);
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int j = 1; j <= 200; ++j)
        p += 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

/// Plain pinhole projection, written out longhand.
struct Pixel
{
    double x;
    double y;
};

inline Pixel pinhole(double vx, double vy, double vz, int width, int height, double fov_degrees)
{
    const double pi = 3.14159265358979323846;
    const double f = (height / 2.0) / std::tan(fov_degrees * pi / 360.0);
    return {width / 2.0 + f * vx / vz, height / 2.0 - f * vy / vz};
}

/// Small deterministic generators for property tests.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    bool coin() { return integer(0, 1) == 1; }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace oracle
