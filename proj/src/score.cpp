#include "melodify/score.hpp"

#include <algorithm>
#include <cstdlib>

namespace melodify::score {

namespace {

int kind_rank(const Event& e) { return std::holds_alternative<PedalEvent>(e) ? 0 : 1; }

Tick event_end(const Event& e) {
    if (const auto* n = std::get_if<NoteEvent>(&e)) return n->onset + n->duration;
    return std::get<PedalEvent>(e).tick;
}

Event shifted(Event e, Tick by) {
    if (auto* n = std::get_if<NoteEvent>(&e)) {
        n->onset += by;
    } else {
        std::get<PedalEvent>(e).tick += by;
    }
    return e;
}

Tick unrolled_end(const Score& score) {
    Tick end = 0;
    for (const auto& e : score.events) end = std::max(end, event_end(e));
    return end;
}

}  // namespace

Tick onset_of(const Event& e) noexcept {
    if (const auto* n = std::get_if<NoteEvent>(&e)) return n->onset;
    return std::get<PedalEvent>(e).tick;
}

void Score::sort_events() {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        const Tick ta = onset_of(a);
        const Tick tb = onset_of(b);
        if (ta != tb) return ta < tb;
        return kind_rank(a) < kind_rank(b);
    });
}

Tick Score::ticks_per_bar() const noexcept {
    return static_cast<Tick>(ticks_per_quarter) * 4 * time_signature.numerator /
           time_signature.denominator;
}

Tick Score::ticks_per_beat() const noexcept {
    return static_cast<Tick>(ticks_per_quarter) * 4 / time_signature.denominator;
}

std::vector<NoteEvent> Score::notes() const {
    std::vector<NoteEvent> out;
    for (const auto& e : events) {
        if (const auto* n = std::get_if<NoteEvent>(&e)) out.push_back(*n);
    }
    return out;
}

std::vector<PedalEvent> Score::pedals() const {
    std::vector<PedalEvent> out;
    for (const auto& e : events) {
        if (const auto* p = std::get_if<PedalEvent>(&e)) out.push_back(*p);
    }
    return out;
}

std::vector<Violation> validate(const Score& score) {
    std::vector<Violation> report;
    auto error = [&](std::string msg) { report.push_back({Severity::Error, std::move(msg)}); };
    auto warn = [&](std::string msg) { report.push_back({Severity::Warning, std::move(msg)}); };

    if (score.ticks_per_quarter < 1) error("non-positive ticks per quarter");
    if (score.tempo_bpm < 1) error("non-positive tempo");
    const auto& ts = score.time_signature;
    if (ts.numerator < 1 || ts.denominator < 1 || (ts.denominator & (ts.denominator - 1)) != 0) {
        error("invalid time signature");
    }

    Tick last_tick = 0;
    int last_rank = 0;
    bool pedal_down = false;
    bool pedal_balanced = true;
    for (const auto& e : score.events) {
        const Tick t = onset_of(e);
        const int rank = kind_rank(e);
        if (t < last_tick || (t == last_tick && rank < last_rank)) error("events not sorted");
        last_tick = t;
        last_rank = rank;
        if (t < 0) error("negative onset");

        if (const auto* n = std::get_if<NoteEvent>(&e)) {
            if (n->duration < 1) error("non-positive duration at tick " + std::to_string(t));
            if (n->pitch < 0 || n->pitch > 127) error("pitch out of range at tick " + std::to_string(t));
            if (n->velocity < 1 || n->velocity > 127) {
                error("velocity out of range at tick " + std::to_string(t));
            }
        } else {
            const bool down = std::get<PedalEvent>(e).state == PedalState::Down;
            if (down == pedal_down) pedal_balanced = false;
            pedal_down = down;
        }
    }
    if (pedal_down) pedal_balanced = false;
    if (!pedal_balanced) error("unbalanced pedal");

    if (score.loop) {
        const auto& l = *score.loop;
        if (l.start < 0 || l.end <= l.start || l.end > unrolled_end(score) || l.count < 1) {
            error("loop region out of bounds");
        }
    }

    if (score.key_signature.mode != theory::Mode::Chromatic) {
        const auto scale = theory::build_scale(score.key_signature.root, score.key_signature.mode);
        for (const auto& n : score.notes()) {
            if (n.pitch >= 0 && !scale.contains(n.pitch)) {
                warn("pitch " + std::to_string(n.pitch) + " at tick " + std::to_string(n.onset) +
                     " outside key scale");
            }
        }
    }

    const auto notes = score.notes();
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const Tick end_i = notes[i].onset + notes[i].duration;
        for (std::size_t j = i + 1; j < notes.size() && notes[j].onset < end_i; ++j) {
            const int gap = std::abs(notes[i].pitch - notes[j].pitch);
            if (gap % 12 == 6) {
                warn("tritone between pitches " + std::to_string(notes[i].pitch) + " and " +
                     std::to_string(notes[j].pitch) + " at tick " + std::to_string(notes[j].onset));
            }
        }
    }
    return report;
}

bool has_structural_violations(const std::vector<Violation>& report) {
    return std::any_of(report.begin(), report.end(),
                       [](const Violation& v) { return v.severity == Severity::Error; });
}

Tick total_duration_ticks(const Score& score) {
    Tick end = unrolled_end(score);
    if (score.loop && score.loop->count > 1) {
        end += static_cast<Tick>(score.loop->count - 1) * (score.loop->end - score.loop->start);
    }
    return end;
}

Score expand_loops(const Score& score) {
    if (!score.loop) return score;
    const LoopRegion loop = *score.loop;
    const Tick length = loop.end - loop.start;

    Score out = score;
    out.loop.reset();
    out.events.clear();
    for (const auto& e : score.events) {
        if (onset_of(e) < loop.start) out.events.push_back(e);
    }
    for (int pass = 0; pass < loop.count; ++pass) {
        for (const auto& e : score.events) {
            const Tick t = onset_of(e);
            if (t >= loop.start && t < loop.end) out.events.push_back(shifted(e, pass * length));
        }
    }
    for (const auto& e : score.events) {
        if (onset_of(e) >= loop.end) {
            out.events.push_back(shifted(e, static_cast<Tick>(loop.count - 1) * length));
        }
    }
    out.sort_events();
    return out;
}

const char* to_string(Articulation a) {
    switch (a) {
        case Articulation::Normal: return "normal";
        case Articulation::Staccato: return "staccato";
        case Articulation::Legato: return "legato";
        case Articulation::Accent: return "accent";
    }
    return "normal";
}

}  // namespace melodify::score
