#include "melodify/melodifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "melodify/error.hpp"

namespace melodify::melodifier {

using ingest::Idiom;
using ingest::Palette;
using score::Articulation;
using score::NoteEvent;
using score::Score;
using score::Tick;
using theory::Mode;
using theory::Pitch;

namespace {

Score empty_score(const TonalPlan& plan, const MelodifyOptions& options) {
    Score s;
    s.ticks_per_quarter = options.ticks_per_quarter;
    s.tempo_bpm = plan.tempo_bpm;
    s.time_signature = plan.time_signature;
    s.key_signature = {plan.scale.root(), plan.scale.mode()};
    return s;
}

Tick round_up(Tick t, Tick multiple) { return (t + multiple - 1) / multiple * multiple; }

Tick note_step(const Score& s, stats::DensityLevel level) {
    const Tick beat = s.ticks_per_beat();
    switch (level) {
        case stats::DensityLevel::Low: return beat;
        case stats::DensityLevel::Medium: return std::max<Tick>(1, beat / 2);
        case stats::DensityLevel::High: return std::max<Tick>(1, beat / 4);
    }
    return beat;
}

void add_chord(Score& s, const std::array<Pitch, 3>& pitches, Tick onset, Tick duration,
               int velocity) {
    for (const Pitch& p : pitches) {
        s.add_note(NoteEvent{onset, duration, p.midi(), velocity, Articulation::Normal});
    }
}

// Appends the plan's cadence at `at`, one bar per chord. Returns the end tick.
Tick append_cadence(Score& s, const TonalPlan& plan, Tick at) {
    const auto chords =
        theory::make_cadence(plan.valence(), plan.cadence_scale(), cadence_anchor(plan.key_root));
    for (const auto& chord : chords) {
        add_chord(s, chord.pitches, at, s.ticks_per_bar(), kVelocityCadence);
        at += s.ticks_per_bar();
    }
    return at;
}

// Chord for one category: quantized root, diatonic triad on its degree.
std::array<Pitch, 3> category_chord(double value, theory::ValueDomain domain,
                                    const TonalPlan& plan, const DataCharacter& character,
                                    const MelodifyOptions& options) {
    const Pitch anchor = default_anchor(plan.key_root);
    const Pitch root = theory::quantize_pitch(value, domain, plan.scale,
                                              character.variance.semitone_span, anchor);
    if (plan.scale.mode() == Mode::Chromatic) {
        return {root, Pitch(root.midi() + 4), Pitch(root.midi() + 7)};
    }
    const int degree = *plan.scale.degree_of(root.pitch_class());
    const theory::Chord chord = theory::degree_triad(plan.scale, degree, root);
    if (options.substitute_diminished) return theory::avoid_diminished(plan.scale, chord);
    return chord.pitches;
}

theory::ValueDomain domain_of(std::span<const double> values) {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

std::vector<double> y_values(const ingest::Dataset& dataset, const ingest::MelodySpec& spec) {
    const auto binding = ingest::validate_binding(dataset, spec);
    return playing_order(dataset, spec, binding);
}

}  // namespace

theory::Scale TonalPlan::cadence_scale() const {
    return theory::build_scale(key_root, Mode::Major);
}

theory::Valence TonalPlan::valence() const {
    switch (cadence) {
        case theory::CadenceKind::Perfect: return theory::Valence::Positive;
        case theory::CadenceKind::Deceptive: return theory::Valence::Negative;
        case theory::CadenceKind::None: break;
    }
    return theory::Valence::Grey;
}

TonalPlan apply_palette(const ingest::MelodySpec& spec) {
    const theory::PitchClass key = spec.key_root;
    TonalPlan plan{theory::build_scale(key, Mode::Major), key, 120,
                   theory::TimeSignature{4, 4}, theory::CadenceKind::Perfect};
    switch (spec.palette) {
        case Palette::Positive:
            break;
        case Palette::Negative:
            plan.scale = theory::build_scale((key + 9) % 12, Mode::NaturalMinor);
            plan.tempo_bpm = 88;
            plan.cadence = theory::CadenceKind::Deceptive;
            break;
        case Palette::Grey:
            plan.scale = theory::build_scale(key, Mode::Chromatic);
            plan.tempo_bpm = 100;
            plan.cadence = theory::CadenceKind::None;
            break;
        case Palette::Exciting:
            plan.tempo_bpm = 160;
            plan.time_signature = {2, 4};
            break;
        case Palette::Calm:
            plan.tempo_bpm = 72;
            plan.time_signature = {3, 4};
            break;
    }
    if (spec.tempo_bpm) plan.tempo_bpm = *spec.tempo_bpm;
    if (spec.time_signature) plan.time_signature = *spec.time_signature;
    return plan;
}

Pitch default_anchor(theory::PitchClass key_root) { return Pitch(theory::kMiddleC - 12 + key_root); }

Pitch cadence_anchor(theory::PitchClass key_root) { return Pitch(theory::kMiddleC - 24 + key_root); }

std::vector<double> playing_order(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                                  const ingest::Binding& binding) {
    const auto& y = dataset.columns[binding.y_column].numbers;
    const bool sort_by_x = binding.x_column &&
                           (spec.idiom == Idiom::Line || spec.idiom == Idiom::Scatter) &&
                           dataset.columns[*binding.x_column].kind ==
                               ingest::ColumnKind::Quantitative;
    if (!sort_by_x) return y;
    const auto& x = dataset.columns[*binding.x_column].numbers;
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> out;
    out.reserve(y.size());
    for (std::size_t i : order) out.push_back(y[i]);
    return out;
}

DataCharacter characterize(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                           const ingest::Binding& binding, const MelodifyOptions& options) {
    const auto series = playing_order(dataset, spec, binding);
    DataCharacter c{{},
                    stats::compute_density(series.size()),
                    series.size() >= 2 ? stats::compute_variance(series)
                                       : stats::variance_class(stats::VarianceLevel::Narrow),
                    std::nullopt};
    if (spec.idiom == Idiom::Line) c.segments = stats::segment_trends(series, options.max_segments);
    if (spec.idiom == Idiom::Pie) {
        const auto& labels = dataset.columns[*binding.x_column].labels;
        std::vector<std::pair<std::string, double>> categories;
        for (std::size_t i = 0; i < series.size(); ++i) categories.emplace_back(labels[i], series[i]);
        c.proportions = stats::proportions(categories);
    }
    return c;
}

std::vector<Tick> apportion_durations(std::span<const double> ratios, Tick cycle_ticks, Tick grid) {
    if (grid < 1 || cycle_ticks % grid != 0) {
        throw Error(ErrorCode::InvalidValue, "cycle length must be a whole number of grid steps");
    }
    const Tick units = cycle_ticks / grid;
    std::vector<Tick> whole(ratios.size());
    std::vector<double> remainder(ratios.size());
    Tick assigned = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double quota = ratios[i] * static_cast<double>(units);
        whole[i] = static_cast<Tick>(std::floor(quota));
        remainder[i] = quota - static_cast<double>(whole[i]);
        assigned += whole[i];
    }
    std::vector<std::size_t> order(ratios.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < units && k < order.size(); ++k, ++assigned) {
        ++whole[order[k]];
    }
    for (auto& w : whole) w *= grid;
    return whole;
}

double slope_unit(std::span<const stats::TrendSegment> segments, std::span<const double> series) {
    const bool integral = std::all_of(segments.begin(), segments.end(), [](const auto& seg) {
        return std::abs(seg.slope - std::round(seg.slope)) <= 1e-9 * std::max(1.0, std::abs(seg.slope));
    });
    if (integral || series.size() < 2) return 1.0;
    auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double unit = (*hi - *lo) / static_cast<double>(series.size() - 1);
    return unit > 0 ? unit : 1.0;
}

int slope_degree(double slope, double unit) {
    const double scaled = std::round(std::abs(slope) / unit);
    return static_cast<int>(std::clamp(scaled, 1.0, 7.0));
}

Score melodify_bar(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                   const TonalPlan& plan, const DataCharacter& character,
                   const MelodifyOptions& options) {
    const auto values = y_values(dataset, spec);
    Score s = empty_score(plan, options);
    const Tick bar = s.ticks_per_bar();
    const auto domain = domain_of(values);

    Tick t = 0;
    for (double v : values) {
        add_chord(s, category_chord(v, domain, plan, character, options), t, bar, kVelocityNormal);
        t += bar;
    }
    if (spec.histogram && character.density.level == stats::DensityLevel::Low) {
        s.add_pedal(0, score::PedalState::Down);
        s.add_pedal(t, score::PedalState::Up);
    }
    append_cadence(s, plan, t);
    s.sort_events();
    return s;
}

Score melodify_pie(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                   const TonalPlan& plan, const DataCharacter& character,
                   const MelodifyOptions& options) {
    if (!character.proportions) {
        throw Error(ErrorCode::AllZero, "pie idiom needs category proportions");
    }
    const auto values = y_values(dataset, spec);
    Score s = empty_score(plan, options);
    const Tick cycle = kPieCycleBars * s.ticks_per_bar();
    const Tick grid = s.ticks_per_quarter / 4;

    std::vector<double> ratios;
    for (const auto& [_, r] : character.proportions->entries) ratios.push_back(r);
    const auto durations = apportion_durations(ratios, cycle, grid);
    const auto domain = domain_of(values);

    Tick t = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (durations[i] == 0) continue;  // too small to reach one grid step
        add_chord(s, category_chord(values[i], domain, plan, character, options), t, durations[i],
                  kVelocityNormal);
        t += durations[i];
    }
    s.loop = score::LoopRegion{0, cycle, spec.loop_count};
    append_cadence(s, plan, cycle);
    s.sort_events();
    return s;
}

Score melodify_line(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                    const TonalPlan& plan, const DataCharacter& character,
                    const MelodifyOptions& options) {
    const auto series = y_values(dataset, spec);
    if (character.segments.empty()) throw Error(ErrorCode::TooShort, "line needs trend segments");
    Score s = empty_score(plan, options);
    const Tick step = note_step(s, character.density.level);
    const bool chromatic = plan.scale.mode() == Mode::Chromatic;
    const theory::Scale base = chromatic ? plan.cadence_scale() : plan.scale;
    const auto kind = plan.scale.mode() == Mode::NaturalMinor ? theory::TriadKind::MinorOnDegree
                                                              : theory::TriadKind::MajorOnDegree;
    const double unit = slope_unit(character.segments, series);
    const int figure_length = 3 * (character.variance.semitone_span / 12) + 1;
    const Pitch anchor = default_anchor(plan.key_root);

    Tick t = 0;
    for (std::size_t k = 0; k < character.segments.size(); ++k) {
        const auto& seg = character.segments[k];
        const int count = static_cast<int>(seg.end_index - seg.start_index + 1);
        const auto chord =
            theory::degree_triad(base, slope_degree(seg.slope, unit), anchor, kind);

        std::vector<Pitch> tones;
        if (seg.direction == stats::TrendDirection::Neutral) {
            tones.assign(static_cast<std::size_t>(count), chord.pitches[0]);
        } else {
            const auto dir = seg.direction == stats::TrendDirection::Ascending
                                 ? theory::ArpeggioDirection::Up
                                 : theory::ArpeggioDirection::Down;
            const auto figure = theory::arpeggiate(chord, dir, std::min(count, figure_length));
            for (int i = 0; i < count; ++i) tones.push_back(figure[static_cast<std::size_t>(i) % figure.size()]);
        }

        for (std::size_t i = 0; i < tones.size(); ++i) {
            const bool accent = k > 0 && i == 0;
            NoteEvent note{t, step, tones[i].midi(), accent ? kVelocityAccent : kVelocityNormal,
                           accent ? Articulation::Accent : Articulation::Legato};
            const bool has_next = i + 1 < tones.size();
            const int gap = has_next ? tones[i + 1].midi() - tones[i].midi() : 0;
            if (chromatic && std::abs(gap) > 2 && step >= 2) {
                // Chromatic passing tone a semitone short of the next chord tone.
                note.duration = step / 2;
                s.add_note(note);
                s.add_note(NoteEvent{t + step / 2, step - step / 2,
                                     tones[i + 1].midi() - (gap > 0 ? 1 : -1), kVelocityNormal,
                                     Articulation::Legato});
            } else {
                s.add_note(note);
            }
            t += step;
        }
    }
    append_cadence(s, plan, round_up(t, s.ticks_per_bar()));
    s.sort_events();
    return s;
}

Score melodify_scatter(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
                       const TonalPlan& plan, const DataCharacter& character,
                       const MelodifyOptions& options) {
    const auto series = y_values(dataset, spec);
    Score s = empty_score(plan, options);
    const Tick step = note_step(s, character.density.level);
    const auto domain = domain_of(series);
    const Pitch anchor = default_anchor(plan.key_root);

    Tick t = 0;
    for (double v : series) {
        const Pitch p = theory::quantize_pitch(v, domain, plan.scale,
                                               character.variance.semitone_span, anchor);
        s.add_note(NoteEvent{t, step, p.midi(), kVelocityNormal, Articulation::Staccato});
        t += step;
    }
    const Tick phrase_end = round_up(t, s.ticks_per_bar());
    if (character.density.level == stats::DensityLevel::Low) {
        s.add_pedal(0, score::PedalState::Down);
        s.add_pedal(phrase_end, score::PedalState::Up);
    }
    append_cadence(s, plan, phrase_end);
    s.sort_events();
    return s;
}

Score melodify(const ingest::Dataset& dataset, const ingest::MelodySpec& spec,
               const MelodifyOptions& options) {
    const auto binding = ingest::validate_binding(dataset, spec);
    const auto character = characterize(dataset, spec, binding, options);
    const auto plan = apply_palette(spec);

    Score s = [&] {
        switch (spec.idiom) {
            case Idiom::Bar: return melodify_bar(dataset, spec, plan, character, options);
            case Idiom::Pie: return melodify_pie(dataset, spec, plan, character, options);
            case Idiom::Line: return melodify_line(dataset, spec, plan, character, options);
            case Idiom::Scatter: return melodify_scatter(dataset, spec, plan, character, options);
        }
        throw Error(ErrorCode::UnknownIdiom, "unknown idiom");
    }();

    const auto report = score::validate(s);
    if (score::has_structural_violations(report)) {
        for (const auto& v : report) {
            if (v.severity == score::Severity::Error) {
                throw Error(ErrorCode::StructuralViolation, "generated score invalid: " + v.message);
            }
        }
    }
    return s;
}

}  // namespace melodify::melodifier
