#include "melodify/tracklist.hpp"

#include "melodify/error.hpp"
#include "melodify/melodifier.hpp"

namespace melodify::tracklist {

using ingest::Column;
using ingest::ColumnKind;
using ingest::Dataset;
using ingest::Idiom;
using ingest::MelodySpec;
using ingest::Palette;

namespace {

Column numeric(std::string name, std::vector<double> values) {
    Column c;
    c.name = std::move(name);
    c.kind = ColumnKind::Quantitative;
    c.numbers = std::move(values);
    return c;
}

Column categorical(std::string name, std::vector<std::string> labels) {
    Column c;
    c.name = std::move(name);
    c.kind = ColumnKind::Categorical;
    c.labels = std::move(labels);
    return c;
}

Dataset table(std::vector<Column> columns) {
    Dataset d;
    d.row_count = columns.front().size();
    d.columns = std::move(columns);
    return d;
}

MelodySpec spec_for(Idiom idiom, Palette palette, std::optional<std::string> x, std::string y) {
    MelodySpec s;
    s.idiom = idiom;
    s.palette = palette;
    s.x_field = std::move(x);
    s.y_field = std::move(y);
    return s;
}

Dataset bar_data() {
    return table({categorical("quarter", {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6"}),
                  numeric("sales", {14, 22, 9, 31, 26, 18})});
}

// Two exact trends: +1 per step, then -2 per step.
Dataset line_data() {
    std::vector<double> x;
    for (int i = 0; i <= 10; ++i) x.push_back(i);
    return table({numeric("t", std::move(x)),
                  numeric("value", {0, 1, 2, 3, 4, 5, 6, 4, 2, 0, -2})});
}

Dataset pie_data() {
    return table({categorical("section", {"strings", "winds", "brass", "percussion"}),
                  numeric("players", {40, 25, 20, 15})});
}

// Few points, widely spread.
Dataset sparse_wide_data() {
    return table({numeric("x", {1, 2, 3, 4, 5, 6, 7}),
                  numeric("y", {3, 40, 12, 85, 25, 60, 95})});
}

// Many points hugging 50.
Dataset dense_narrow_data() {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(i);
        y.push_back(50 + (i * 3) % 7 - 3);
    }
    return table({numeric("x", std::move(x)), numeric("y", std::move(y))});
}

// Many points spread over 5..100, listed out of x order.
Dataset dense_wide_data() {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back((i * 17) % 40);
        y.push_back(5 + (i * 37) % 96);
    }
    return table({numeric("x", std::move(x)), numeric("y", std::move(y))});
}

}  // namespace

std::vector<Track> bundled_tracks() {
    using stats::DensityLevel;
    using stats::VarianceLevel;
    std::vector<Track> tracks;
    tracks.push_back({"01-bar-positive", bar_data(),
                      spec_for(Idiom::Bar, Palette::Positive, "quarter", "sales"), {}, {}});
    tracks.push_back({"02-bar-negative", bar_data(),
                      spec_for(Idiom::Bar, Palette::Negative, "quarter", "sales"), {}, {}});
    tracks.push_back({"03-line-positive", line_data(),
                      spec_for(Idiom::Line, Palette::Positive, "t", "value"), {}, {}});
    tracks.push_back({"04-line-negative", line_data(),
                      spec_for(Idiom::Line, Palette::Negative, "t", "value"), {}, {}});
    tracks.push_back({"05-line-grey", line_data(),
                      spec_for(Idiom::Line, Palette::Grey, "t", "value"), {}, {}});
    tracks.push_back({"06-pie-positive", pie_data(),
                      spec_for(Idiom::Pie, Palette::Positive, "section", "players"), {}, {}});
    tracks.push_back({"07-scatter-loden-hivar", sparse_wide_data(),
                      spec_for(Idiom::Scatter, Palette::Positive, "x", "y"), DensityLevel::Low,
                      VarianceLevel::Wide});
    tracks.push_back({"08-scatter-hiden-lovar", dense_narrow_data(),
                      spec_for(Idiom::Scatter, Palette::Positive, "x", "y"), DensityLevel::High,
                      VarianceLevel::Narrow});
    tracks.push_back({"09-scatter-grey", dense_wide_data(),
                      spec_for(Idiom::Scatter, Palette::Grey, "x", "y"), DensityLevel::High,
                      VarianceLevel::Wide});
    return tracks;
}

void check_track_character(const Track& track) {
    const auto binding = ingest::validate_binding(track.data, track.spec);
    const auto character = melodifier::characterize(track.data, track.spec, binding);
    if (track.expected_density && character.density.level != *track.expected_density) {
        throw Error(ErrorCode::StructuralViolation,
                    track.name + ": data density is " + stats::to_string(character.density.level));
    }
    if (track.expected_variance && character.variance.level != *track.expected_variance) {
        throw Error(ErrorCode::StructuralViolation,
                    track.name + ": data variance is " + stats::to_string(character.variance.level));
    }
}

RenderedTrack render_track(const Track& track) {
    check_track_character(track);
    RenderedTrack out;
    out.name = track.name;
    out.score = melodifier::melodify(track.data, track.spec);
    out.midi = emit::write_smf(score::expand_loops(out.score));
    out.text = emit::write_text_score(out.score);
    return out;
}

}  // namespace melodify::tracklist
