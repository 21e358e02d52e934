#include "covidfc/series.hpp"

#include <algorithm>

namespace covidfc {
namespace {

// Left-to-right summation so results are reproducible element by element.
double window_sum(const Vector& v, Index first, Index count) {
    double acc = 0.0;
    for (Index i = first; i < first + count; ++i) acc += v(i);
    return acc;
}

}  // namespace

std::string_view to_string(Country c) { return c == Country::US ? "US" : "RU"; }

Country parse_country(std::string_view text) {
    if (text == "US") return Country::US;
    if (text == "RU") return Country::RU;
    throw DataError("unknown country '" + std::string(text) + "' (expected US or RU)");
}

NormalizedSeries normalize_per_100k(const RegionSeries& series) {
    if (series.population <= 0) {
        throw DataError("region '" + series.region_id + "' has non-positive population");
    }
    NormalizedSeries out;
    out.start = series.start;
    out.values = series.daily_confirmed * 100000.0 / static_cast<double>(series.population);
    return out;
}

TargetSeries build_target_series(const NormalizedSeries& norm, int horizon) {
    if (horizon <= 0) throw ConfigError("forecast horizon must be positive");
    const Index n = norm.size();
    if (n <= horizon) {
        throw InsufficientHistory("target series needs more than " + std::to_string(horizon) +
                                  " days, got " + std::to_string(n));
    }
    TargetSeries out;
    out.horizon = horizon;
    out.start = norm.start;
    out.values.resize(n - horizon);
    for (Index t = 0; t < out.values.size(); ++t) {
        out.values(t) = window_sum(norm.values, t + 1, horizon);
    }
    return out;
}

SumSeries build_sum_series(const NormalizedSeries& norm, int horizon) {
    if (horizon <= 0) throw ConfigError("forecast horizon must be positive");
    const Index n = norm.size();
    if (n < horizon) {
        throw InsufficientHistory("sum series needs at least " + std::to_string(horizon) +
                                  " days, got " + std::to_string(n));
    }
    SumSeries out;
    out.horizon = horizon;
    out.start = norm.start + Days{horizon - 1};
    out.values.resize(n - horizon + 1);
    for (Index k = 0; k < out.values.size(); ++k) {
        out.values(k) = window_sum(norm.values, k, horizon);
    }
    return out;
}

namespace {

template <typename TargetAt>
std::vector<WindowSample> windows_impl(const DatedSeries& source, const WindowSpec& spec,
                                       Date target_first, Date target_end,
                                       std::string_view region_id, TargetAt target_at) {
    if (spec.lag <= 0) throw ConfigError("lag must be positive");
    // Anchor t needs source days [t - lag + 1, t] and a defined target at t.
    Date first = std::max(source.start + Days{spec.lag - 1}, target_first);
    Date end = std::min(source.end(), target_end);
    if (spec.anchors) {
        first = std::max(first, spec.anchors->first);
        end = std::min(end, spec.anchors->end);
    }
    std::vector<WindowSample> out;
    if (end <= first) return out;
    out.reserve(static_cast<std::size_t>((end - first).count()));
    for (Date t = first; t < end; t += Days{1}) {
        WindowSample s;
        const Index last = source.index_of(t);
        s.inputs = source.values.segment(last - spec.lag + 1, spec.lag) / spec.input_scale;
        s.target = target_at(t) / spec.target_scale;
        s.region_id = std::string(region_id);
        s.anchor = t;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::vector<WindowSample> make_lag_windows(const DatedSeries& source, const TargetSeries& target,
                                           const WindowSpec& spec, std::string_view region_id) {
    return windows_impl(source, spec, target.start, target.end(), region_id, [&](Date t) {
        return Vector::Constant(1, target.values(target.index_of(t))).eval();
    });
}

std::vector<WindowSample> make_daily_path_windows(const DatedSeries& source,
                                                  const NormalizedSeries& norm, int horizon,
                                                  const WindowSpec& spec,
                                                  std::string_view region_id) {
    if (horizon <= 0) throw ConfigError("forecast horizon must be positive");
    return windows_impl(source, spec, norm.start, norm.end() - Days{horizon}, region_id,
                        [&](Date t) {
                            return norm.values.segment(norm.index_of(t) + 1, horizon).eval();
                        });
}

RegionSeries aggregate_country(std::span<const RegionSeries> regions, Country country,
                               std::string region_id) {
    RegionSeries out;
    out.region_id = std::move(region_id);
    out.country = country;
    bool any = false;
    Date first{}, end{};
    for (const auto& r : regions) {
        if (r.country != country || r.daily_confirmed.size() == 0) continue;
        first = any ? std::min(first, r.start) : r.start;
        end = any ? std::max(end, r.end()) : r.end();
        any = true;
    }
    if (!any) throw DataError("no regions to aggregate for country " + std::string(to_string(country)));
    out.start = first;
    out.daily_confirmed = Vector::Zero((end - first).count());
    for (const auto& r : regions) {
        if (r.country != country || r.daily_confirmed.size() == 0) continue;
        out.daily_confirmed.segment((r.start - first).count(), r.daily_confirmed.size()) +=
            r.daily_confirmed;
        out.population += r.population;
    }
    return out;
}

}  // namespace covidfc
