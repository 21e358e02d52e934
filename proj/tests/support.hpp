#pragma once

// Shared generators and brute-force oracles for the test suites. Nothing
// here calls into the code under test.

#include "covidfc/series.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace covidfc::testing {

inline Vector random_series(std::mt19937_64& rng, Index n, double scale = 50.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

/// Plain nested loops over the definition.
inline std::vector<double> forward_sums(const Vector& v, int h) {
    std::vector<double> out;
    for (Index t = 0; t + h < v.size(); ++t) {
        double s = 0.0;
        for (int i = 1; i <= h; ++i) s += v(t + i);
        out.push_back(s);
    }
    return out;
}

inline std::vector<double> backward_sums(const Vector& v, int h) {
    std::vector<double> out;
    for (Index t = h - 1; t < v.size(); ++t) {
        double s = 0.0;
        for (Index i = t - h + 1; i <= t; ++i) s += v(i);
        out.push_back(s);
    }
    return out;
}

/// A smooth epidemic-like curve: a few overlapping waves plus weekly
/// reporting dips, in raw cases per day.
inline Vector epidemic_curve(Index n, double peak, std::uint64_t seed, double noise = 0.05) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, noise);
    Vector v(n);
    for (Index t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        double wave = 0.0;
        wave += std::exp(-std::pow((x - 0.20 * n) / (0.06 * n), 2.0));
        wave += 0.7 * std::exp(-std::pow((x - 0.45 * n) / (0.08 * n), 2.0));
        wave += 1.3 * std::exp(-std::pow((x - 0.85 * n) / (0.05 * n), 2.0));
        const double weekly = (t % 7 == 6) ? 0.7 : 1.0;
        v(t) = std::max(0.0, peak * (0.02 + wave) * weekly * (1.0 + eps(rng)));
    }
    return v;
}

inline RegionSeries make_region(std::string id, Country c, std::int64_t population, Date start, Vector daily) {
    RegionSeries r;
    r.region_id = std::move(id);
    r.country = c;
    r.population = population;
    r.start = start;
    r.daily_confirmed = std::move(daily);
    return r;
}

}  // namespace covidfc::testing
