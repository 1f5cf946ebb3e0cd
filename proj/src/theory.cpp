#include "melodify/theory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "melodify/error.hpp"

namespace melodify::theory {

namespace {

constexpr std::array<int, 7> kMajorOffsets{0, 2, 4, 5, 7, 9, 11};
constexpr std::array<int, 7> kMinorOffsets{0, 2, 3, 5, 7, 8, 10};

int mod12(int v) { return ((v % 12) + 12) % 12; }

// Lowest pitch strictly above `floor` with pitch class `pc`.
int next_above(int floor, PitchClass pc) {
    int step = mod12(pc - floor);
    return floor + (step == 0 ? 12 : step);
}

// Lowest pitch at or above `floor` with pitch class `pc`.
int at_or_above(int floor, PitchClass pc) {
    return floor + mod12(pc - floor);
}

}  // namespace

Pitch::Pitch(int midi_number) : midi_(midi_number) {
    if (midi_number < 0 || midi_number > 127) {
        throw Error(ErrorCode::OutOfMidiRange,
                    "pitch " + std::to_string(midi_number) + " outside MIDI range");
    }
}

Scale::Scale(PitchClass root, Mode mode, std::vector<PitchClass> members)
    : root_(root), mode_(mode), members_(std::move(members)) {}

bool Scale::contains(PitchClass pc) const noexcept {
    return std::find(members_.begin(), members_.end(), mod12(pc)) != members_.end();
}

std::optional<int> Scale::degree_of(PitchClass pc) const noexcept {
    auto it = std::find(members_.begin(), members_.end(), mod12(pc));
    if (it == members_.end()) return std::nullopt;
    return static_cast<int>(it - members_.begin()) + 1;
}

PitchClass Scale::degree_class(int degree) const {
    if (degree < 1) throw Error(ErrorCode::InvalidDegree, "degree must be >= 1");
    return members_[static_cast<std::size_t>(degree - 1) % members_.size()];
}

Scale build_scale(PitchClass root, Mode mode) {
    if (root < 0 || root > 11) {
        throw Error(ErrorCode::InvalidValue, "scale root must be a pitch class 0-11");
    }
    std::vector<PitchClass> members;
    switch (mode) {
        case Mode::Major:
            for (int off : kMajorOffsets) members.push_back(mod12(root + off));
            break;
        case Mode::NaturalMinor:
            for (int off : kMinorOffsets) members.push_back(mod12(root + off));
            break;
        case Mode::Chromatic:
            for (int off = 0; off < 12; ++off) members.push_back(mod12(root + off));
            break;
    }
    return Scale(root, mode, std::move(members));
}

Scale relative_major(const Scale& scale) {
    switch (scale.mode()) {
        case Mode::Major:
            return scale;
        case Mode::NaturalMinor:
            return build_scale(mod12(scale.root() + 3), Mode::Major);
        case Mode::Chromatic:
            break;
    }
    throw Error(ErrorCode::ChromaticMode, "chromatic scale has no relative major");
}

std::optional<ChordQuality> classify_triad(const std::array<Pitch, 3>& pitches) {
    int lower = pitches[1].midi() - pitches[0].midi();
    int upper = pitches[2].midi() - pitches[1].midi();
    if (lower == 4 && upper == 3) return ChordQuality::Major;
    if (lower == 3 && upper == 4) return ChordQuality::Minor;
    if (lower == 3 && upper == 3) return ChordQuality::Diminished;
    return std::nullopt;
}

Chord degree_triad(const Scale& scale, int degree, Pitch anchor, TriadKind kind) {
    if (scale.mode() == Mode::Chromatic) {
        throw Error(ErrorCode::ChromaticMode, "chromatic scale has no functional degrees");
    }
    if (degree < 1 || degree > 7) {
        throw Error(ErrorCode::InvalidDegree,
                    "degree " + std::to_string(degree) + " outside 1-7");
    }
    int root = at_or_above(anchor.midi(), scale.degree_class(degree));
    int third = 0;
    int fifth = 0;
    switch (kind) {
        case TriadKind::Diatonic:
            third = next_above(root, scale.degree_class(degree + 2));
            fifth = next_above(third, scale.degree_class(degree + 4));
            break;
        case TriadKind::MajorOnDegree:
            third = root + 4;
            fifth = root + 7;
            break;
        case TriadKind::MinorOnDegree:
            third = root + 3;
            fifth = root + 7;
            break;
    }
    std::array<Pitch, 3> pitches{Pitch(root), Pitch(third), Pitch(fifth)};
    auto quality = classify_triad(pitches);
    if (!quality) {
        throw Error(ErrorCode::InvalidDegree, "degree does not form a tertian triad");
    }
    return Chord{degree, *quality, pitches};
}

Interval interval_semitones(Pitch a, Pitch b) noexcept {
    int d = std::abs(a.midi() - b.midi());
    return Interval{d, d % 12};
}

bool is_tritone(Pitch a, Pitch b) noexcept {
    return interval_semitones(a, b).class_value == 6;
}

std::vector<Chord> make_cadence(Valence valence, const Scale& scale, Pitch anchor) {
    if (valence == Valence::Grey) return {};
    if (scale.mode() == Mode::Chromatic) {
        throw Error(ErrorCode::ChromaticMode, "no functional cadence in a chromatic scale");
    }
    if (scale.mode() != Mode::Major) {
        throw Error(ErrorCode::ModeMismatch, "cadences are built on a major scale");
    }
    int resolution = valence == Valence::Positive ? 1 : 6;
    return {degree_triad(scale, 5, anchor), degree_triad(scale, resolution, anchor)};
}

Pitch quantize_pitch(double value, ValueDomain domain, const Scale& scale,
                     int span_semitones, Pitch anchor) {
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::InvalidValue, "cannot quantize a non-finite value");
    }
    if (span_semitones < 0) {
        throw Error(ErrorCode::InvalidValue, "span must be non-negative");
    }
    if (anchor.midi() + span_semitones > 127) {
        throw Error(ErrorCode::OutOfMidiRange, "anchor + span exceeds MIDI range");
    }
    if (!scale.contains(anchor)) {
        throw Error(ErrorCode::InvalidValue, "anchor must be a scale member");
    }
    if (!(domain.max > domain.min)) return anchor;

    double fraction = (value - domain.min) / (domain.max - domain.min);
    fraction = std::clamp(fraction, 0.0, 1.0);
    double target = fraction * span_semitones;

    int best = 0;
    double best_distance = target;  // the anchor itself, offset 0
    for (int offset = 1; offset <= span_semitones; ++offset) {
        if (!scale.contains(anchor.midi() + offset)) continue;
        double distance = std::abs(offset - target);
        if (distance < best_distance) {
            best = offset;
            best_distance = distance;
        }
    }
    return Pitch(anchor.midi() + best);
}

std::vector<Pitch> arpeggiate(const Chord& chord, ArpeggioDirection direction,
                              int note_count) {
    if (note_count < 1) {
        throw Error(ErrorCode::InvalidValue, "arpeggio needs at least one note");
    }
    std::vector<Pitch> out;
    out.reserve(static_cast<std::size_t>(note_count));
    for (int i = 0; i < note_count; ++i) {
        int midi = chord.pitches[static_cast<std::size_t>(i % 3)].midi() + 12 * (i / 3);
        out.emplace_back(midi);
    }
    if (direction == ArpeggioDirection::Down) std::reverse(out.begin(), out.end());
    return out;
}

std::array<Pitch, 3> avoid_diminished(const Scale& scale, const Chord& chord) {
    if (chord.quality != ChordQuality::Diminished) return chord.pitches;
    const Pitch bass = chord.pitches[0];
    Chord dominant = degree_triad(scale, 5, bass);
    std::vector<int> upper;
    bool bass_in_dominant = false;
    for (const Pitch& p : dominant.pitches) {
        if (p.pitch_class() == bass.pitch_class()) {
            bass_in_dominant = true;
        } else {
            upper.push_back(next_above(bass.midi(), p.pitch_class()));
        }
    }
    if (!bass_in_dominant || upper.size() != 2) {
        throw Error(ErrorCode::InvalidDegree, "diminished root is not a dominant chord tone");
    }
    std::sort(upper.begin(), upper.end());
    return {bass, Pitch(upper[0]), Pitch(upper[1])};
}

std::optional<PitchClass> parse_note_name(std::string_view name) {
    if (name.empty() || name.size() > 2) return std::nullopt;
    static constexpr std::array<int, 7> kLetterClass{9, 11, 0, 2, 4, 5, 7};  // A..G
    char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (letter < 'A' || letter > 'G') return std::nullopt;
    int pc = kLetterClass[static_cast<std::size_t>(letter - 'A')];
    if (name.size() == 2) {
        if (name[1] != '#') return std::nullopt;
        pc = mod12(pc + 1);
    }
    return pc;
}

std::string note_name(PitchClass pc) {
    static constexpr std::array<const char*, 12> kNames{
        "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};
    return kNames[static_cast<std::size_t>(mod12(pc))];
}

}  // namespace melodify::theory
