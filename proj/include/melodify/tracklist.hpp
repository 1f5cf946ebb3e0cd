#pragma once

#include <optional>
#include <string>
#include <vector>

#include "melodify/emit.hpp"
#include "melodify/ingest.hpp"
#include "melodify/score.hpp"
#include "melodify/stats.hpp"

namespace melodify::tracklist {

struct Track {
    std::string name;  // file stem, e.g. "07-scatter-loden-hivar"
    ingest::Dataset data;
    ingest::MelodySpec spec;
    // Classes the synthetic data was built to land in.
    std::optional<stats::DensityLevel> expected_density;
    std::optional<stats::VarianceLevel> expected_variance;
};

struct RenderedTrack {
    std::string name;
    score::Score score;  // loop markers kept
    emit::Bytes midi;    // loops expanded
    std::string text;
};

/// The nine demonstration tracks, built from synthetic data.
std::vector<Track> bundled_tracks();

/// Throws Error(StructuralViolation) if a track's data does not classify as
/// intended.
void check_track_character(const Track& track);

RenderedTrack render_track(const Track& track);

}  // namespace melodify::tracklist
