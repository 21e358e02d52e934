#include "covidfc/series.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace covidfc;
using covidfc::testing::backward_sums;
using covidfc::testing::forward_sums;
using covidfc::testing::make_region;
using covidfc::testing::random_series;

namespace {

NormalizedSeries norm_of(std::initializer_list<double> values, Date start = make_date(2020, 3, 12)) {
    NormalizedSeries n;
    n.start = start;
    n.values.resize(static_cast<Index>(values.size()));
    Index i = 0;
    for (double v : values) n.values(i++) = v;
    return n;
}

// Anchors t with lag inputs ending at t and a forward target inside the series.
Index enumerate_anchors(Index n, int lag, int fh) {
    Index count = 0;
    for (Index t = 0; t < n; ++t) {
        if (t - lag + 1 >= 0 && t + fh <= n - 1) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("normalize_per_100k scales by population") {
    const auto start = make_date(2020, 3, 12);
    auto r = make_region("a", Country::RU, 1'000'000, start, Vector::Constant(1, 50.0));
    CHECK(normalize_per_100k(r).values(0) == doctest::Approx(5.0).epsilon(1e-15));

    r = make_region("b", Country::RU, 146'000'000, start, Vector::Zero(3));
    CHECK(normalize_per_100k(r).values.isZero(0.0));

    r = make_region("c", Country::US, 331'000, start, Vector::Constant(1, 123.0));
    const double expected = 123.0 * 100000.0 / 331000.0;  // 37.16012084592145...
    CHECK(normalize_per_100k(r).values(0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(expected == doctest::Approx(37.1601208459).epsilon(1e-10));

    r.population = 0;
    CHECK_THROWS_AS(normalize_per_100k(r), DataError);
    r.population = -5;
    CHECK_THROWS_AS(normalize_per_100k(r), DataError);
}

TEST_CASE("normalization round trip") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> pop(1000, 200'000'000);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = make_region("x", Country::US, pop(rng), make_date(2020, 3, 12), random_series(rng, 40, 5000.0));
        const auto n = normalize_per_100k(r);
        const Vector back = n.values * static_cast<double>(r.population) / 100000.0;
        for (Index i = 0; i < back.size(); ++i) {
            if (r.daily_confirmed(i) == 0.0) continue;
            CHECK(std::abs(back(i) - r.daily_confirmed(i)) / r.daily_confirmed(i) < 1e-12);
        }
    }
}

TEST_CASE("build_target_series examples") {
    const auto t = build_target_series(norm_of({1, 2, 3, 4}), 2);
    REQUIRE(t.size() == 2);
    CHECK(t.values(0) == 5.0);
    CHECK(t.values(1) == 7.0);
    CHECK(t.start == make_date(2020, 3, 12));

    NormalizedSeries c;
    c.values = Vector::Constant(60, 3.25);
    const auto tc = build_target_series(c, 14);
    CHECK(tc.size() == 46);
    CHECK((tc.values.array() == 14 * 3.25).all());

    NormalizedSeries short_series;
    short_series.values = Vector::Ones(14);
    CHECK_THROWS_AS(build_target_series(short_series, 14), InsufficientHistory);
}

TEST_CASE("build_sum_series examples") {
    const auto s = build_sum_series(norm_of({1, 2, 3, 4}), 2);
    REQUIRE(s.size() == 3);
    CHECK(s.values(0) == 3.0);
    CHECK(s.values(1) == 5.0);
    CHECK(s.values(2) == 7.0);
    CHECK(s.start == make_date(2020, 3, 13));

    NormalizedSeries z;
    z.values = Vector::Zero(30);
    CHECK(build_sum_series(z, 14).values.isZero(0.0));

    NormalizedSeries c;
    c.values = Vector::Constant(50, 2.5);
    CHECK((build_sum_series(c, 28).values.array() == 28 * 2.5).all());

    NormalizedSeries short_series;
    short_series.values = Vector::Ones(13);
    CHECK_THROWS_AS(build_sum_series(short_series, 14), InsufficientHistory);
}

TEST_CASE("target and sum series match brute force and each other") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(43, 300);
    for (int trial = 0; trial < 300; ++trial) {
        NormalizedSeries n;
        n.values = random_series(rng, len(rng));
        for (int fh : {1, 2, 14, 28, 42}) {
            const auto target = build_target_series(n, fh);
            const auto sums = build_sum_series(n, fh);
            const auto fwd = forward_sums(n.values, fh);
            const auto bwd = backward_sums(n.values, fh);
            REQUIRE(target.size() == static_cast<Index>(fwd.size()));
            REQUIRE(sums.size() == static_cast<Index>(bwd.size()));
            CHECK(target.size() == n.size() - fh);
            CHECK(sums.size() == n.size() - fh + 1);
            for (Index t = 0; t < target.size(); ++t) {
                REQUIRE(target.values(t) == fwd[static_cast<std::size_t>(t)]);
                // Shift identity: forward sum at t == backward sum ending at t + fh.
                REQUIRE(target.values(t) == sums.values(sums.index_of(target.date_at(t) + Days{fh})));
            }
            for (Index k = 0; k < sums.size(); ++k) REQUIRE(sums.values(k) == bwd[static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("make_lag_windows anchoring and counts") {
    NormalizedSeries n;
    n.start = make_date(2020, 3, 12);
    n.values = Vector::LinSpaced(30, 0.0, 29.0);
    const auto target = build_target_series(n, 14);
    WindowSpec spec;
    spec.lag = 14;
    const auto w = make_lag_windows(n, target, spec, "r");
    CHECK(static_cast<Index>(w.size()) == enumerate_anchors(30, 14, 14));
    CHECK(w.size() == 3);
    for (const auto& s : w) {
        const Index t = n.index_of(s.anchor);
        CHECK(s.inputs(13) == n.values(t));  // inputs end on the anchor day
        CHECK(s.inputs(0) == n.values(t - 13));
        CHECK(s.target(0) == target.values(t));
        CHECK(s.anchor + Days{14} <= n.end() - Days{1});
        CHECK(s.region_id == "r");
    }

    // Boundary: length lag + fh gives exactly one sample.
    NormalizedSeries b;
    b.values = Vector::Ones(28);
    CHECK(make_lag_windows(b, build_target_series(b, 14), spec).size() == 1);

    spec.lag = 0;
    CHECK_THROWS_AS(make_lag_windows(n, target, spec), ConfigError);
}

TEST_CASE("window count matches enumeration on random lengths") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(15, 200), lag(1, 30);
    for (int trial = 0; trial < 300; ++trial) {
        NormalizedSeries n;
        n.values = random_series(rng, len(rng));
        const int l = lag(rng);
        for (int fh : {14, 28, 42}) {
            if (n.size() <= fh) continue;
            WindowSpec spec;
            spec.lag = l;
            const auto w = make_lag_windows(n, build_target_series(n, fh), spec);
            CHECK(static_cast<Index>(w.size()) == enumerate_anchors(n.size(), l, fh));
            CHECK(static_cast<Index>(w.size()) == window_count(n.size(), l, fh));
        }
    }
}

TEST_CASE("network scaling and daily path targets") {
    NormalizedSeries n;
    n.values = Vector::Constant(60, 2000.0);
    WindowSpec spec;
    spec.lag = 28;
    spec.input_scale = 1000.0;
    spec.target_scale = 1000.0;
    const auto w = make_daily_path_windows(n, n, 14, spec);
    REQUIRE(!w.empty());
    CHECK(w.size() == static_cast<std::size_t>(window_count(60, 28, 14)));
    CHECK(w.front().inputs.size() == 28);
    CHECK((w.front().inputs.array() == 2.0).all());
    CHECK(w.front().target.size() == 14);
    CHECK((w.front().target.array() == 2.0).all());
}

TEST_CASE("sum-series windows anchor on calendar dates") {
    NormalizedSeries n;
    n.start = make_date(2021, 1, 1);
    n.values = Vector::LinSpaced(80, 1.0, 80.0);
    const auto sums = build_sum_series(n, 14);
    const auto target = build_target_series(n, 14);
    WindowSpec spec;
    spec.lag = 14;
    const auto w = make_lag_windows(sums, target, spec);
    // First anchor needs 13 + 14 earlier days.
    CHECK(w.front().anchor == n.start + Days{26});
    CHECK(w.back().anchor == n.end() - Days{15});
    CHECK(w.front().inputs(13) == sums.values(sums.index_of(w.front().anchor)));
}

TEST_CASE("aggregate_country sums counts and populations over the union of dates") {
    const auto d0 = make_date(2020, 3, 12);
    std::vector<RegionSeries> regions{
        make_region("a", Country::RU, 100, d0, Vector::Constant(3, 1.0)),
        make_region("b", Country::RU, 200, d0 + Days{2}, Vector::Constant(3, 2.0)),
        make_region("c", Country::US, 999, d0, Vector::Constant(3, 5.0)),
    };
    const auto ru = aggregate_country(regions, Country::RU, "RU_TOTAL");
    CHECK(ru.population == 300);
    CHECK(ru.start == d0);
    REQUIRE(ru.daily_confirmed.size() == 5);
    CHECK(ru.daily_confirmed(0) == 1.0);
    CHECK(ru.daily_confirmed(2) == 3.0);
    CHECK(ru.daily_confirmed(4) == 2.0);
}
