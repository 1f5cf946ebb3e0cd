#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "melodify/score.hpp"

namespace melodify::emit {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kMaxVlq = (1u << 28) - 1;
inline constexpr std::uint8_t kPedalController = 64;

struct SmfConfig {
    int program = 0;  // General MIDI acoustic grand piano
    int channel = 0;
};

/// Big-endian base-128 with the continuation bit on all but the last byte.
Bytes encode_vlq(std::uint32_t value);

/// Sounding length of a note after its articulation gate (always >= 1).
score::Tick gate_ticks(score::Articulation articulation, score::Tick duration);

/// Articulation whose gate each note uses: accents borrow the gate of the
/// closest preceding non-accent note (Normal when there is none).
std::vector<score::Articulation> effective_gates(const std::vector<score::NoteEvent>& notes);

/// Sharps (positive) or flats (negative) for the key signature meta event.
int key_signature_accidentals(const score::KeySignature& key);

/// Format-0 Standard MIDI File. The score must be loop-free and structurally
/// valid. No running status.
Bytes write_smf(const score::Score& score, const SmfConfig& config = {});

struct ParsedNote {
    score::Tick onset;
    score::Tick duration;
    int pitch;
    int velocity;

    bool operator==(const ParsedNote&) const = default;
};

struct ParsedPedal {
    score::Tick tick;
    bool down;

    bool operator==(const ParsedPedal&) const = default;
};

struct ParsedSmf {
    int format = 0;
    int division = 0;
    int tempo_us_per_quarter = 0;
    int time_numerator = 0;
    int time_denominator = 0;
    int key_accidentals = 0;
    bool key_minor = false;
    int program = -1;
    std::vector<ParsedNote> notes;   // ordered by (onset, pitch)
    std::vector<ParsedPedal> pedals;
};

/// Decoder for files produced by write_smf; throws Error(MalformedSmf).
ParsedSmf parse_smf_minimal(std::span<const std::uint8_t> bytes);

/// Deterministic line-per-event rendering used for golden files.
std::string write_text_score(const score::Score& score);

}  // namespace melodify::emit
