#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "melodify/theory.hpp"

namespace melodify::score {

using Tick = std::int64_t;

inline constexpr int kDefaultTicksPerQuarter = 480;

enum class Articulation { Normal, Staccato, Legato, Accent };

struct NoteEvent {
    Tick onset = 0;
    Tick duration = 0;
    int pitch = 60;
    int velocity = 80;
    Articulation articulation = Articulation::Normal;

    bool operator==(const NoteEvent&) const = default;
};

enum class PedalState { Down, Up };

struct PedalEvent {
    Tick tick = 0;
    PedalState state = PedalState::Down;

    bool operator==(const PedalEvent&) const = default;
};

using Event = std::variant<NoteEvent, PedalEvent>;

Tick onset_of(const Event& e) noexcept;

struct KeySignature {
    theory::PitchClass root = 0;
    theory::Mode mode = theory::Mode::Major;

    bool operator==(const KeySignature&) const = default;
};

struct LoopRegion {
    Tick start = 0;
    Tick end = 0;
    int count = 1;

    bool operator==(const LoopRegion&) const = default;
};

struct Score {
    int ticks_per_quarter = kDefaultTicksPerQuarter;
    int tempo_bpm = 120;
    theory::TimeSignature time_signature;
    KeySignature key_signature;
    std::vector<Event> events;
    std::optional<LoopRegion> loop;

    bool operator==(const Score&) const = default;

    void add_note(const NoteEvent& note) { events.emplace_back(note); }
    void add_pedal(Tick tick, PedalState state) { events.emplace_back(PedalEvent{tick, state}); }

    /// Stable sort by onset; pedal events precede notes within a tick.
    void sort_events();

    Tick ticks_per_bar() const noexcept;
    Tick ticks_per_beat() const noexcept;
    std::vector<NoteEvent> notes() const;
    std::vector<PedalEvent> pedals() const;
};

enum class Severity { Error, Warning };

struct Violation {
    Severity severity;
    std::string message;
};

/// Structural checks fail as errors; scale membership and co-sounding
/// tritones are reported as warnings.
std::vector<Violation> validate(const Score& score);
bool has_structural_violations(const std::vector<Violation>& report);

/// Latest note end, with the loop region repeated `count` times.
Tick total_duration_ticks(const Score& score);

/// Unrolls the loop region; events after it are shifted accordingly.
Score expand_loops(const Score& score);

const char* to_string(Articulation a);

}  // namespace melodify::score
