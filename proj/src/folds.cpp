#include "covidfc/folds.hpp"

#include "covidfc/types.hpp"

#include <cmath>

namespace covidfc {

void FoldPlan::validate() const {
    if (global_end <= global_start) throw ConfigError("fold plan: global_end must follow global_start");
    Date prev = global_start;
    for (std::size_t k = 0; k < boundaries.size(); ++k) {
        if (boundaries[k] <= prev) {
            throw ConfigError("fold plan: boundary " + format_iso_date(boundaries[k]) +
                              " is not strictly after " + format_iso_date(prev));
        }
        prev = boundaries[k];
    }
    if (prev >= global_end) throw ConfigError("fold plan: last boundary must precede global_end");
}

std::array<FoldSplit, kFoldCount> split_cumulative(const FoldPlan& plan) {
    plan.validate();
    std::array<FoldSplit, kFoldCount> out;
    const Date end = plan.global_end + Days{1};
    for (int k = 0; k < kFoldCount; ++k) {
        out[k].fold_index = k + 1;
        out[k].train = {plan.global_start, plan.boundaries[k]};
        out[k].test = {plan.boundaries[k], k + 1 < kFoldCount ? plan.boundaries[k + 1] : end};
    }
    return out;
}

FoldPlan equally_spaced_plan(Date global_start, Date global_end) {
    FoldPlan plan;
    plan.global_start = global_start;
    plan.global_end = global_end;
    const long total = (global_end - global_start).count() + 1;
    for (int k = 0; k < kFoldCount; ++k) {
        plan.boundaries[k] = global_start + Days{(total * (k + 1) + 3) / 6};
    }
    plan.validate();
    return plan;
}

ValidationSplit validation_tail(const DateRange& train, double fraction) {
    const long days = train.days();
    if (days < 5) {
        throw InsufficientHistory("validation tail needs at least 5 training days, got " +
                                  std::to_string(days));
    }
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("validation fraction must be in (0,1)");
    // Snap products that are integral up to rounding (0.2 * 100 etc.).
    const double raw = fraction * static_cast<double>(days);
    const double nearest = std::round(raw);
    const long val = std::abs(raw - nearest) < 1e-9 ? static_cast<long>(nearest)
                                                    : static_cast<long>(std::ceil(raw));
    const Date split = train.end - Days{val};
    return {{train.first, split}, {split, train.end}};
}

}  // namespace covidfc
