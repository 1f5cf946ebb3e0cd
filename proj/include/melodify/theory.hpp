#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace melodify::theory {

/// Pitch class in [0, 12), 0 = C.
using PitchClass = int;

/// MIDI note number in [0, 127]; 60 is middle C.
class Pitch {
public:
    /// Throws Error(OutOfMidiRange) outside [0, 127].
    explicit Pitch(int midi_number);

    int midi() const noexcept { return midi_; }
    PitchClass pitch_class() const noexcept { return midi_ % 12; }

    auto operator<=>(const Pitch&) const = default;

private:
    int midi_;
};

inline constexpr int kMiddleC = 60;

enum class Mode { Major, NaturalMinor, Chromatic };

struct TimeSignature {
    int numerator = 4;
    int denominator = 4;

    bool operator==(const TimeSignature&) const = default;
};

class Scale {
public:
    Scale(PitchClass root, Mode mode, std::vector<PitchClass> members);

    PitchClass root() const noexcept { return root_; }
    Mode mode() const noexcept { return mode_; }

    /// Member pitch classes in scale order, starting from the root.
    const std::vector<PitchClass>& members() const noexcept { return members_; }

    bool contains(PitchClass pc) const noexcept;
    bool contains(Pitch p) const noexcept { return contains(p.pitch_class()); }

    /// 1-based scale degree of `pc`, or nullopt if it is not a member.
    std::optional<int> degree_of(PitchClass pc) const noexcept;

    /// Pitch class of 1-based degree `degree`; wraps past the last member.
    PitchClass degree_class(int degree) const;

    bool operator==(const Scale&) const = default;

private:
    PitchClass root_;
    Mode mode_;
    std::vector<PitchClass> members_;
};

Scale build_scale(PitchClass root, Mode mode);

/// Relative major of a natural-minor scale (root + 3); identity for Major.
Scale relative_major(const Scale& scale);

enum class ChordQuality { Major, Minor, Diminished };

struct Chord {
    int degree;
    ChordQuality quality;
    std::array<Pitch, 3> pitches;  // root position, strictly ascending
};

enum class TriadKind {
    Diatonic,       // stack scale members d, d+2, d+4
    MajorOnDegree,  // major triad on the degree's pitch class, ignoring diatonic quality
    MinorOnDegree,  // minor triad on the degree's pitch class
};

/// Root-position triad on `degree` whose root is the lowest pitch >= anchor
/// carrying that degree's pitch class.
Chord degree_triad(const Scale& scale, int degree, Pitch anchor,
                   TriadKind kind = TriadKind::Diatonic);

/// Quality implied by the two stacked intervals of a root-position triad.
std::optional<ChordQuality> classify_triad(const std::array<Pitch, 3>& pitches);

struct Interval {
    int semitones;    // absolute distance
    int class_value;  // distance mod 12
};

Interval interval_semitones(Pitch a, Pitch b) noexcept;
bool is_tritone(Pitch a, Pitch b) noexcept;

enum class Valence { Positive, Negative, Grey };
enum class CadenceKind { Perfect, Deceptive, None };

/// Positive: [V, I]; Negative: [V, vi]; Grey: []. The scale must be Major
/// for Positive and Negative.
std::vector<Chord> make_cadence(Valence valence, const Scale& scale, Pitch anchor);

struct ValueDomain {
    double min;
    double max;
};

/// Maps `value` linearly onto [anchor, anchor + span_semitones] and snaps to
/// the nearest scale member, ties going down. Monotone non-decreasing in value.
Pitch quantize_pitch(double value, ValueDomain domain, const Scale& scale,
                     int span_semitones, Pitch anchor);

enum class ArpeggioDirection { Up, Down };

std::vector<Pitch> arpeggiate(const Chord& chord, ArpeggioDirection direction,
                              int note_count);

/// Revoices a diminished triad as the degree-5 triad of `scale` with the
/// diminished root kept as the bass, so the tritone disappears without
/// moving the lowest voice. Non-diminished chords are returned as-is.
std::array<Pitch, 3> avoid_diminished(const Scale& scale, const Chord& chord);

/// Parses "C".."B" with optional '#', case-insensitive.
std::optional<PitchClass> parse_note_name(std::string_view name);
std::string note_name(PitchClass pc);

}  // namespace melodify::theory
