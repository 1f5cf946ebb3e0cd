#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "melodify/ingest.hpp"
#include "melodify/score.hpp"
#include "melodify/stats.hpp"
#include "melodify/theory.hpp"

namespace melodify::melodifier {

inline constexpr int kVelocityNormal = 80;
inline constexpr int kVelocityAccent = 112;
inline constexpr int kVelocityCadence = 96;
inline constexpr int kPieCycleBars = 4;

struct TonalPlan {
    theory::Scale scale;
    theory::PitchClass key_root;
    int tempo_bpm;
    theory::TimeSignature time_signature;
    theory::CadenceKind cadence;

    /// Scale the cadence is built on: the major key named by key_root.
    theory::Scale cadence_scale() const;
    theory::Valence valence() const;
};

struct DataCharacter {
    std::vector<stats::TrendSegment> segments;  // Line only
    stats::DensityClass density;
    stats::VarianceClass variance;
    std::optional<stats::Proportions> proportions;  // Pie only
};

struct MelodifyOptions {
    int max_segments = stats::kDefaultMaxSegments;
    int ticks_per_quarter = score::kDefaultTicksPerQuarter;
    bool substitute_diminished = true;
};

/// Palette to mode, tempo, metre and cadence; explicit spec values win.
/// Negative plays the relative minor of the named key so that its deceptive
/// cadence (V to vi of that key) stays inside the scale.
TonalPlan apply_palette(const ingest::MelodySpec& spec);

/// Lowest melody pitch: the key root in the octave below middle C.
theory::Pitch default_anchor(theory::PitchClass key_root);
/// Cadences sit one octave below the melody anchor.
theory::Pitch cadence_anchor(theory::PitchClass key_root);

/// The bound y values in playing order: sorted by x (stable) when an x
/// field is bound for Line/Scatter, row order otherwise.
std::vector<double> playing_order(const ingest::Dataset& dataset,
                                  const ingest::MelodySpec& spec,
                                  const ingest::Binding& binding);

DataCharacter characterize(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                           const ingest::Binding& binding, const MelodifyOptions& options = {});

/// Largest-remainder apportionment of `cycle_ticks` on a `grid` lattice.
std::vector<score::Tick> apportion_durations(std::span<const double> ratios,
                                             score::Tick cycle_ticks, score::Tick grid);

/// 1 when every segment slope is an integer, else the mean step of the data.
double slope_unit(std::span<const stats::TrendSegment> segments, std::span<const double> series);
/// Scale degree an arpeggio is built on for a given segment slope.
int slope_degree(double slope, double unit);

score::Score melodify_bar(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                          const TonalPlan& plan, const DataCharacter& character,
                          const MelodifyOptions& options = {});
score::Score melodify_pie(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                          const TonalPlan& plan, const DataCharacter& character,
                          const MelodifyOptions& options = {});
score::Score melodify_line(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                           const TonalPlan& plan, const DataCharacter& character,
                           const MelodifyOptions& options = {});
score::Score melodify_scatter(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                              const TonalPlan& plan, const DataCharacter& character,
                              const MelodifyOptions& options = {});

/// validate_binding, characterize, apply_palette, then the idiom's mapping.
score::Score melodify(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                      const MelodifyOptions& options = {});

}  // namespace melodify::melodifier
