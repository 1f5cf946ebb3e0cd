#include "melodify/emit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "melodify/error.hpp"

namespace melodify::emit {

using score::Articulation;
using score::NoteEvent;
using score::Tick;

namespace {

void put_u16(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32(Bytes& out, std::uint32_t v) {
    put_u16(out, v >> 16);
    put_u16(out, v & 0xFFFF);
}

void put_vlq(Bytes& out, std::uint32_t v) {
    const Bytes enc = encode_vlq(v);
    out.insert(out.end(), enc.begin(), enc.end());
}

struct Message {
    Tick tick;
    int rank;  // note-off, then pedal, then note-on within a tick
    std::size_t order;
    std::array<std::uint8_t, 3> data;
};

int log2_exact(int v) {
    int r = 0;
    while ((1 << r) < v) ++r;
    return r;
}

const char* mode_name(theory::Mode m) {
    switch (m) {
        case theory::Mode::Major: return "major";
        case theory::Mode::NaturalMinor: return "minor";
        case theory::Mode::Chromatic: return "chromatic";
    }
    return "major";
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    bool done() const { return pos_ >= bytes_.size(); }
    std::size_t pos() const { return pos_; }

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint8_t peek() {
        need(1);
        return bytes_[pos_];
    }
    std::uint32_t u16() {
        std::uint32_t hi = u8();
        return (hi << 8) | u8();
    }
    std::uint32_t u32() {
        std::uint32_t hi = u16();
        return (hi << 16) | u16();
    }
    std::uint32_t vlq() {
        std::uint32_t value = 0;
        for (int i = 0; i < 4; ++i) {
            const std::uint8_t b = u8();
            value = (value << 7) | (b & 0x7F);
            if ((b & 0x80) == 0) return value;
        }
        throw Error(ErrorCode::MalformedSmf, "variable-length quantity longer than 4 bytes");
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw Error(ErrorCode::MalformedSmf, "truncated MIDI data");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void expect_tag(Reader& r, const char* tag) {
    for (int i = 0; i < 4; ++i) {
        if (r.u8() != static_cast<std::uint8_t>(tag[i])) {
            throw Error(ErrorCode::MalformedSmf, std::string("expected chunk ") + tag);
        }
    }
}

}  // namespace

Bytes encode_vlq(std::uint32_t value) {
    if (value > kMaxVlq) {
        throw Error(ErrorCode::Overflow, "value " + std::to_string(value) + " exceeds 2^28 - 1");
    }
    Bytes out{static_cast<std::uint8_t>(value & 0x7F)};
    value >>= 7;
    while (value > 0) {
        out.push_back(static_cast<std::uint8_t>(0x80 | (value & 0x7F)));
        value >>= 7;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Tick gate_ticks(Articulation articulation, Tick duration) {
    Tick gated = duration;
    switch (articulation) {
        case Articulation::Staccato: gated = duration / 2; break;
        case Articulation::Legato: gated = duration; break;
        case Articulation::Normal:
        case Articulation::Accent: gated = duration * 85 / 100; break;
    }
    return std::max<Tick>(1, gated);
}

std::vector<Articulation> effective_gates(const std::vector<NoteEvent>& notes) {
    std::vector<Articulation> out;
    out.reserve(notes.size());
    Articulation carried = Articulation::Normal;
    for (const auto& n : notes) {
        if (n.articulation != Articulation::Accent) carried = n.articulation;
        out.push_back(n.articulation == Articulation::Accent ? carried : n.articulation);
    }
    return out;
}

int key_signature_accidentals(const score::KeySignature& key) {
    // Major-key accidentals indexed by tonic pitch class (flat spellings for
    // Db, Eb, F, Ab, Bb).
    static constexpr std::array<int, 12> kMajor{0, -5, 2, -3, 4, -1, 6, 1, -4, 3, -2, 5};
    switch (key.mode) {
        case theory::Mode::Major: return kMajor[static_cast<std::size_t>(key.root % 12)];
        case theory::Mode::NaturalMinor:
            return kMajor[static_cast<std::size_t>((key.root + 3) % 12)];
        case theory::Mode::Chromatic: return 0;
    }
    return 0;
}

Bytes write_smf(const score::Score& score, const SmfConfig& config) {
    if (score.loop) throw Error(ErrorCode::UnexpandedLoop, "expand loops before writing MIDI");
    for (const auto& v : score::validate(score)) {
        if (v.severity == score::Severity::Error) {
            throw Error(ErrorCode::StructuralViolation, v.message);
        }
    }
    if (config.channel < 0 || config.channel > 15 || config.program < 0 || config.program > 127) {
        throw Error(ErrorCode::InvalidValue, "channel must be 0-15 and program 0-127");
    }
    if (score.ticks_per_quarter > 0x7FFF) {
        throw Error(ErrorCode::InvalidValue, "division does not fit 15 bits");
    }
    const auto ch = static_cast<std::uint8_t>(config.channel);

    std::vector<Message> messages;
    const auto notes = score.notes();
    const auto gates = effective_gates(notes);
    for (std::size_t i = 0; i < notes.size(); ++i) {
        const auto& n = notes[i];
        const auto pitch = static_cast<std::uint8_t>(n.pitch);
        const auto vel = static_cast<std::uint8_t>(n.velocity);
        messages.push_back({n.onset, 2, messages.size(),
                            {static_cast<std::uint8_t>(0x90 | ch), pitch, vel}});
        messages.push_back({n.onset + gate_ticks(gates[i], n.duration), 0, messages.size(),
                            {static_cast<std::uint8_t>(0x80 | ch), pitch, 0x40}});
    }
    for (const auto& p : score.pedals()) {
        const std::uint8_t value = p.state == score::PedalState::Down ? 127 : 0;
        messages.push_back(
            {p.tick, 1, messages.size(), {static_cast<std::uint8_t>(0xB0 | ch), kPedalController, value}});
    }
    std::sort(messages.begin(), messages.end(), [](const Message& a, const Message& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.order < b.order;
    });

    Bytes track;
    const auto tempo_us =
        static_cast<std::uint32_t>(std::lround(60'000'000.0 / static_cast<double>(score.tempo_bpm)));
    track.insert(track.end(), {0x00, 0xFF, 0x51, 0x03,
                               static_cast<std::uint8_t>((tempo_us >> 16) & 0xFF),
                               static_cast<std::uint8_t>((tempo_us >> 8) & 0xFF),
                               static_cast<std::uint8_t>(tempo_us & 0xFF)});
    track.insert(track.end(),
                 {0x00, 0xFF, 0x58, 0x04, static_cast<std::uint8_t>(score.time_signature.numerator),
                  static_cast<std::uint8_t>(log2_exact(score.time_signature.denominator)), 24, 8});
    const int sf = key_signature_accidentals(score.key_signature);
    const std::uint8_t minor = score.key_signature.mode == theory::Mode::NaturalMinor ? 1 : 0;
    track.insert(track.end(), {0x00, 0xFF, 0x59, 0x02, static_cast<std::uint8_t>(sf), minor});
    track.insert(track.end(),
                 {0x00, static_cast<std::uint8_t>(0xC0 | ch), static_cast<std::uint8_t>(config.program)});

    Tick now = 0;
    for (const auto& m : messages) {
        const Tick delta = m.tick - now;
        if (delta > static_cast<Tick>(kMaxVlq)) {
            throw Error(ErrorCode::Overflow, "delta time exceeds variable-length range");
        }
        put_vlq(track, static_cast<std::uint32_t>(delta));
        track.insert(track.end(), m.data.begin(), m.data.end());
        now = m.tick;
    }
    track.insert(track.end(), {0x00, 0xFF, 0x2F, 0x00});

    Bytes out{'M', 'T', 'h', 'd'};
    put_u32(out, 6);
    put_u16(out, 0);
    put_u16(out, 1);
    put_u16(out, static_cast<std::uint32_t>(score.ticks_per_quarter));
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    put_u32(out, static_cast<std::uint32_t>(track.size()));
    out.insert(out.end(), track.begin(), track.end());
    return out;
}

ParsedSmf parse_smf_minimal(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    ParsedSmf out;
    expect_tag(r, "MThd");
    if (r.u32() != 6) throw Error(ErrorCode::MalformedSmf, "header length must be 6");
    out.format = static_cast<int>(r.u16());
    const auto tracks = r.u16();
    out.division = static_cast<int>(r.u16());
    if (out.format != 0 || tracks != 1) {
        throw Error(ErrorCode::MalformedSmf, "only single-track format 0 is supported");
    }
    if (out.division == 0 || (out.division & 0x8000) != 0) {
        throw Error(ErrorCode::MalformedSmf, "unsupported division");
    }

    expect_tag(r, "MTrk");
    const std::uint32_t length = r.u32();
    Reader t(r.take(length));
    if (!r.done()) throw Error(ErrorCode::MalformedSmf, "trailing bytes after track chunk");

    std::map<int, std::deque<std::pair<Tick, int>>> sounding;
    Tick now = 0;
    std::uint8_t status = 0;
    bool ended = false;
    while (!t.done()) {
        if (ended) throw Error(ErrorCode::MalformedSmf, "events after end of track");
        now += t.vlq();
        if (t.peek() & 0x80) status = t.u8();
        if (status == 0) throw Error(ErrorCode::MalformedSmf, "missing status byte");

        if (status == 0xFF) {
            const std::uint8_t type = t.u8();
            const auto data = t.take(t.vlq());
            if (type == 0x2F) {
                ended = true;
            } else if (type == 0x51 && data.size() == 3) {
                out.tempo_us_per_quarter = (data[0] << 16) | (data[1] << 8) | data[2];
            } else if (type == 0x58 && data.size() == 4) {
                out.time_numerator = data[0];
                out.time_denominator = 1 << data[1];
            } else if (type == 0x59 && data.size() == 2) {
                out.key_accidentals = static_cast<std::int8_t>(data[0]);
                out.key_minor = data[1] != 0;
            }
            status = 0;
            continue;
        }
        if (status == 0xF0 || status == 0xF7) {
            t.skip(t.vlq());
            status = 0;
            continue;
        }

        const std::uint8_t kind = status & 0xF0;
        const std::uint8_t a = t.u8();
        const bool two_bytes = kind != 0xC0 && kind != 0xD0;
        const std::uint8_t b = two_bytes ? t.u8() : 0;
        if ((a | b) & 0x80) throw Error(ErrorCode::MalformedSmf, "data byte has high bit set");

        if (kind == 0x90 && b > 0) {
            sounding[a].emplace_back(now, b);
        } else if (kind == 0x80 || kind == 0x90) {
            auto& queue = sounding[a];
            if (queue.empty()) throw Error(ErrorCode::MalformedSmf, "note-off without note-on");
            auto [onset, velocity] = queue.front();
            queue.pop_front();
            out.notes.push_back({onset, now - onset, a, velocity});
        } else if (kind == 0xB0 && a == kPedalController) {
            out.pedals.push_back({now, b >= 64});
        } else if (kind == 0xC0) {
            out.program = a;
        }
    }
    if (!ended) throw Error(ErrorCode::MalformedSmf, "missing end-of-track event");
    for (const auto& [pitch, queue] : sounding) {
        if (!queue.empty()) throw Error(ErrorCode::MalformedSmf, "note left sounding at end");
    }
    std::stable_sort(out.notes.begin(), out.notes.end(), [](const ParsedNote& x, const ParsedNote& y) {
        if (x.onset != y.onset) return x.onset < y.onset;
        return x.pitch < y.pitch;
    });
    return out;
}

std::string write_text_score(const score::Score& score) {
    std::ostringstream out;
    out << "ppq " << score.ticks_per_quarter << '\n';
    out << "tempo " << score.tempo_bpm << '\n';
    out << "time " << score.time_signature.numerator << '/' << score.time_signature.denominator
        << '\n';
    out << "key " << theory::note_name(score.key_signature.root) << ' '
        << mode_name(score.key_signature.mode) << '\n';
    if (score.loop) {
        out << "loop " << score.loop->start << ' ' << score.loop->end << ' ' << score.loop->count
            << '\n';
    }
    for (const auto& e : score.events) {
        if (const auto* n = std::get_if<NoteEvent>(&e)) {
            out << n->onset << ' ' << n->pitch << ' ' << n->duration << ' ' << n->velocity << ' '
                << score::to_string(n->articulation) << '\n';
        } else {
            const auto& p = std::get<score::PedalEvent>(e);
            out << p.tick << " PEDAL " << (p.state == score::PedalState::Down ? "down" : "up")
                << '\n';
        }
    }
    return out.str();
}

}  // namespace melodify::emit
