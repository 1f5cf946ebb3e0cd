#include "melodify/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "melodify/error.hpp"

namespace melodify::stats {

namespace {

void require_length(std::span<const double> series, std::size_t at_least) {
    if (series.size() < at_least) {
        throw Error(ErrorCode::TooShort, "series needs at least " +
                                             std::to_string(at_least) + " points");
    }
}

// Moment sums of a segment with local abscissa 0..n-1. Values are taken
// relative to a reference so that integer-valued series stay exact and a
// constant offset of the whole series cancels bit-for-bit.
struct Moments {
    double n = 0;
    double sx = 0;
    double sxx = 0;
    double sy = 0;
    double syy = 0;
    double sxy = 0;
};

SegmentFit fit_from_moments(const Moments& m) {
    const double c = m.n * m.sxx - m.sx * m.sx;
    const double b = m.n * m.sxy - m.sx * m.sy;
    const double a = m.n * m.syy - m.sy * m.sy;
    const double slope = b / c;
    const double residual = std::max(0.0, (a * c - b * b) / (m.n * c));
    return SegmentFit{slope, residual};
}

// Prefix sums of y, i*y and y^2 relative to series[0].
class PrefixMoments {
public:
    explicit PrefixMoments(std::span<const double> series)
        : sy_(series.size() + 1, 0.0), siy_(series.size() + 1, 0.0),
          syy_(series.size() + 1, 0.0) {
        const double ref = series.front();
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double y = series[i] - ref;
            sy_[i + 1] = sy_[i] + y;
            siy_[i + 1] = siy_[i] + static_cast<double>(i) * y;
            syy_[i + 1] = syy_[i] + y * y;
        }
    }

    SegmentFit fit(std::size_t start, std::size_t end) const {
        Moments m;
        const double n = static_cast<double>(end - start + 1);
        m.n = n;
        m.sx = n * (n - 1) / 2;
        m.sxx = (n - 1) * n * (2 * n - 1) / 6;
        m.sy = sy_[end + 1] - sy_[start];
        m.syy = syy_[end + 1] - syy_[start];
        m.sxy = (siy_[end + 1] - siy_[start]) - static_cast<double>(start) * m.sy;
        return fit_from_moments(m);
    }

private:
    std::vector<double> sy_;
    std::vector<double> siy_;
    std::vector<double> syy_;
};

double total_sum_of_squares(std::span<const double> series) {
    const double n = static_cast<double>(series.size());
    double sy = 0;
    double syy = 0;
    for (double v : series) {
        const double y = v - series.front();
        sy += y;
        syy += y * y;
    }
    return std::max(0.0, (n * syy - sy * sy) / n);
}

struct SegmentationTable {
    // cost[k][e]: best residual covering [0, e] with k + 1 segments.
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<std::size_t>> from;
};

SegmentationTable solve(std::span<const double> series, int max_segments) {
    const std::size_t n = series.size();
    const auto k_max = static_cast<std::size_t>(max_segments);
    constexpr double inf = std::numeric_limits<double>::infinity();
    PrefixMoments prefix(series);

    SegmentationTable t;
    t.cost.assign(k_max, std::vector<double>(n, inf));
    t.from.assign(k_max, std::vector<std::size_t>(n, 0));
    for (std::size_t e = 1; e < n; ++e) t.cost[0][e] = prefix.fit(0, e).residual;

    for (std::size_t k = 1; k < k_max; ++k) {
        for (std::size_t e = 1; e < n; ++e) {
            // The last segment is [s, e]; s is the shared breakpoint.
            for (std::size_t s = 1; s + 1 <= e; ++s) {
                const double head = t.cost[k - 1][s];
                if (head == inf) continue;
                const double total = head + prefix.fit(s, e).residual;
                if (total < t.cost[k][e]) {
                    t.cost[k][e] = total;
                    t.from[k][e] = s;
                }
            }
        }
    }
    return t;
}

}  // namespace

SegmentFit fit_range(std::span<const double> series, std::size_t start, std::size_t end) {
    if (end >= series.size() || end < start + 1) {
        throw Error(ErrorCode::TooShort, "segment must span at least two indices");
    }
    const double ref = series[start];
    Moments m;
    for (std::size_t i = start; i <= end; ++i) {
        const double x = static_cast<double>(i - start);
        const double y = series[i] - ref;
        m.n += 1;
        m.sx += x;
        m.sxx += x * x;
        m.sy += y;
        m.syy += y * y;
        m.sxy += x * y;
    }
    return fit_from_moments(m);
}

double least_squares_slope(std::span<const double> series) {
    require_length(series, 2);
    return fit_range(series, 0, series.size() - 1).slope;
}

double trend_epsilon(std::span<const double> series) {
    require_length(series, 2);
    auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    return kTrendEpsilonFraction * (*hi - *lo) / static_cast<double>(series.size() - 1);
}

TrendDirection classify_slope(double slope, double epsilon) {
    if (slope > epsilon) return TrendDirection::Ascending;
    if (slope < -epsilon) return TrendDirection::Descending;
    return TrendDirection::Neutral;
}

std::vector<double> segmentation_costs(std::span<const double> series, int max_segments) {
    require_length(series, 2);
    if (max_segments < 1) throw Error(ErrorCode::InvalidValue, "max_segments must be >= 1");
    SegmentationTable t = solve(series, max_segments);
    std::vector<double> out;
    for (const auto& row : t.cost) out.push_back(row.back());
    return out;
}

std::vector<TrendSegment> segment_trends(std::span<const double> series, int max_segments) {
    require_length(series, 2);
    if (max_segments < 1) throw Error(ErrorCode::InvalidValue, "max_segments must be >= 1");
    const std::size_t n = series.size();
    const int feasible = std::min<int>(max_segments, static_cast<int>(n - 1));
    SegmentationTable t = solve(series, feasible);

    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : t.cost) best = std::min(best, row.back());
    const double slack = 1e-12 * total_sum_of_squares(series);
    std::size_t chosen = 0;
    while (t.cost[chosen].back() > (1.0 + kSegmentationPenalty) * best + slack) ++chosen;

    std::vector<std::size_t> bounds{n - 1};
    for (std::size_t k = chosen, e = n - 1; k > 0; --k) {
        e = t.from[k][e];
        bounds.push_back(e);
    }
    bounds.push_back(0);
    std::reverse(bounds.begin(), bounds.end());

    const double eps = trend_epsilon(series);
    std::vector<TrendSegment> segments;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double slope = fit_range(series, bounds[i], bounds[i + 1]).slope;
        segments.push_back({bounds[i], bounds[i + 1], slope, classify_slope(slope, eps)});
    }
    return segments;
}

DensityClass compute_density(std::size_t series_length, int bar_count) {
    if (bar_count < 1) throw Error(ErrorCode::InvalidValue, "bar_count must be >= 1");
    const double ppb = static_cast<double>(series_length) / bar_count;
    DensityLevel level = DensityLevel::Low;
    if (ppb >= kDensityHighFrom) {
        level = DensityLevel::High;
    } else if (ppb >= kDensityMediumFrom) {
        level = DensityLevel::Medium;
    }
    return DensityClass{level, ppb};
}

double quantile(std::span<const double> series, double q) {
    require_length(series, 1);
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

VarianceClass variance_class(VarianceLevel level, double dispersion) {
    switch (level) {
        case VarianceLevel::Narrow: return {level, 12, dispersion};
        case VarianceLevel::Medium: return {level, 24, dispersion};
        case VarianceLevel::Wide: return {level, 36, dispersion};
    }
    return {VarianceLevel::Narrow, 12, dispersion};
}

VarianceClass compute_variance(std::span<const double> series) {
    require_length(series, 2);
    const double q1 = quantile(series, 0.25);
    const double q3 = quantile(series, 0.75);
    double c = 0.0;
    if (q3 + q1 != 0.0) {
        c = (q3 - q1) / std::abs(q3 + q1);
    } else {
        double mean_abs = 0;
        for (double y : series) mean_abs += std::abs(y);
        mean_abs /= static_cast<double>(series.size());
        if (mean_abs > 0) {
            auto [lo, hi] = std::minmax_element(series.begin(), series.end());
            c = (*hi - *lo) / mean_abs;
        }
    }
    VarianceLevel level = VarianceLevel::Narrow;
    if (c >= kVarianceWideFrom) {
        level = VarianceLevel::Wide;
    } else if (c >= kVarianceMediumFrom) {
        level = VarianceLevel::Medium;
    }
    return variance_class(level, c);
}

Proportions proportions(const std::vector<std::pair<std::string, double>>& categories) {
    double total = 0;
    for (const auto& [name, value] : categories) {
        if (!(value >= 0)) {
            throw Error(ErrorCode::NegativeProportion,
                        "category '" + name + "' has a negative value");
        }
        total += value;
    }
    if (!(total > 0)) throw Error(ErrorCode::AllZero, "all category values are zero");
    Proportions out;
    for (const auto& [name, value] : categories) out.entries.emplace_back(name, value / total);
    return out;
}

const char* to_string(TrendDirection d) {
    switch (d) {
        case TrendDirection::Ascending: return "ascending";
        case TrendDirection::Descending: return "descending";
        case TrendDirection::Neutral: return "neutral";
    }
    return "neutral";
}

const char* to_string(DensityLevel d) {
    switch (d) {
        case DensityLevel::Low: return "low";
        case DensityLevel::Medium: return "medium";
        case DensityLevel::High: return "high";
    }
    return "low";
}

const char* to_string(VarianceLevel v) {
    switch (v) {
        case VarianceLevel::Narrow: return "narrow";
        case VarianceLevel::Medium: return "medium";
        case VarianceLevel::Wide: return "wide";
    }
    return "narrow";
}

}  // namespace melodify::stats
