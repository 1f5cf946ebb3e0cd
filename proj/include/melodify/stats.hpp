#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace melodify::stats {

// Neutral trend: |slope| at most this fraction of the full range per step.
inline constexpr double kTrendEpsilonFraction = 0.05;
// A smaller segment count is kept when its cost is within (1 + penalty) of
// the best achievable cost.
inline constexpr double kSegmentationPenalty = 0.05;
inline constexpr std::size_t kMinSegmentPoints = 2;
inline constexpr int kDefaultMaxSegments = 6;
// Density is measured against a phrase of this many bars.
inline constexpr int kReferenceBars = 4;
inline constexpr double kDensityMediumFrom = 2.0;
inline constexpr double kDensityHighFrom = 8.0;
inline constexpr double kVarianceMediumFrom = 0.1;
inline constexpr double kVarianceWideFrom = 0.4;

enum class TrendDirection { Ascending, Descending, Neutral };

struct TrendSegment {
    std::size_t start_index;
    std::size_t end_index;  // inclusive; shared with the next segment's start
    double slope;
    TrendDirection direction;
};

enum class DensityLevel { Low, Medium, High };

struct DensityClass {
    DensityLevel level;
    double points_per_bar;
};

enum class VarianceLevel { Narrow, Medium, Wide };

struct VarianceClass {
    VarianceLevel level;
    int semitone_span;  // 12, 24 or 36
    double dispersion;  // the statistic the level was read from
};

struct Proportions {
    std::vector<std::pair<std::string, double>> entries;
};

struct SegmentFit {
    double slope;
    double residual;  // sum of squared residuals
};

double least_squares_slope(std::span<const double> series);

/// Least-squares fit of the inclusive index range [start, end].
SegmentFit fit_range(std::span<const double> series, std::size_t start, std::size_t end);

double trend_epsilon(std::span<const double> series);
TrendDirection classify_slope(double slope, double epsilon);

/// Optimal piecewise-linear segmentation by dynamic programming over
/// breakpoints. Adjacent segments share their boundary index.
std::vector<TrendSegment> segment_trends(std::span<const double> series,
                                         int max_segments = kDefaultMaxSegments);

/// Optimal total residual for exactly k segments, k = 1..max_segments
/// (entries past the feasible count are +inf).
std::vector<double> segmentation_costs(std::span<const double> series, int max_segments);

DensityClass compute_density(std::size_t series_length, int bar_count = kReferenceBars);

/// Inclusive linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::span<const double> series, double q);

VarianceClass compute_variance(std::span<const double> series);
VarianceClass variance_class(VarianceLevel level, double dispersion = 0.0);

Proportions proportions(const std::vector<std::pair<std::string, double>>& categories);

const char* to_string(TrendDirection d);
const char* to_string(DensityLevel d);
const char* to_string(VarianceLevel v);

}  // namespace melodify::stats
