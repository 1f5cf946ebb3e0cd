#pragma once

// Independent reference implementations used to check the library. They are
// deliberately naive: exhaustive search and textbook two-pass formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Fit {
    double slope;
    double residual;
};

// Centered two-pass least squares over series[start..end].
inline Fit fit(std::span<const double> y, std::size_t start, std::size_t end) {
    const std::size_t n = end - start + 1;
    double mx = 0;
    double my = 0;
    for (std::size_t i = start; i <= end; ++i) {
        mx += static_cast<double>(i - start);
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = start; i <= end; ++i) {
        const double dx = static_cast<double>(i - start) - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    double sse = 0;
    for (std::size_t i = start; i <= end; ++i) {
        const double r = y[i] - (my + slope * (static_cast<double>(i - start) - mx));
        sse += r * r;
    }
    return {slope, sse};
}

struct TwoWay {
    std::optional<std::size_t> breakpoint;  // none: one segment wins
    std::vector<double> slopes;
};

// Best segmentation with at most two segments (each >= 2 points), by trying
// every breakpoint; the one-segment fit is kept when it is within
// (1 + penalty) of the best cost.
inline TwoWay segment_two(std::span<const double> y, double penalty) {
    const std::size_t n = y.size();
    const Fit whole = fit(y, 0, n - 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_b = 0;
    Fit left{};
    Fit right{};
    for (std::size_t b = 1; b + 1 < n; ++b) {
        const Fit l = fit(y, 0, b);
        const Fit r = fit(y, b, n - 1);
        if (l.residual + r.residual < best) {
            best = l.residual + r.residual;
            best_b = b;
            left = l;
            right = r;
        }
    }
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double sst = 0;
    for (double v : y) sst += (v - mean) * (v - mean);
    const double floor_cost = std::min(whole.residual, best);
    if (!(best < whole.residual) || whole.residual <= (1 + penalty) * floor_cost + 1e-12 * sst) {
        return {std::nullopt, {whole.slope}};
    }
    return {best_b, {left.slope, right.slope}};
}

inline std::uint32_t decode_vlq(std::span<const std::uint8_t> bytes, std::size_t& used) {
    std::uint32_t value = 0;
    used = 0;
    for (std::uint8_t b : bytes) {
        ++used;
        value = value * 128 + (b & 0x7F);
        if ((b & 0x80) == 0) return value;
        if (used == 4) break;
    }
    throw std::runtime_error("unterminated quantity");
}

// Nearest in-scale MIDI pitch to anchor + fraction * span, searching the whole
// window; ties go to the lower pitch.
inline int nearest_member(double value, double lo, double hi, const std::vector<int>& classes,
                          int span, int anchor) {
    double fraction = hi > lo ? (value - lo) / (hi - lo) : 0.0;
    fraction = std::clamp(fraction, 0.0, 1.0);
    const double target = anchor + fraction * span;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int p = anchor; p <= anchor + span; ++p) {
        if (std::find(classes.begin(), classes.end(), p % 12) == classes.end()) continue;
        const double d = std::abs(p - target);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

// Exhaustive apportionment of `units` among quotas minimizing the squared
// deviation. Only practical for a handful of parts.
inline double best_apportionment_cost(const std::vector<double>& quotas, long units) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> parts(quotas.size(), 0);
    auto rec = [&](auto& self, std::size_t i, long left, double cost) -> void {
        if (cost >= best) return;
        if (i + 1 == quotas.size()) {
            const double d = static_cast<double>(left) - quotas[i];
            best = std::min(best, cost + d * d);
            return;
        }
        for (long a = 0; a <= left; ++a) {
            const double d = static_cast<double>(a) - quotas[i];
            self(self, i + 1, left - a, cost + d * d);
        }
    };
    rec(rec, 0, units, 0.0);
    return best;
}

}  // namespace oracle
