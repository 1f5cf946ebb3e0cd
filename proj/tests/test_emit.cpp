#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "melodify/emit.hpp"
#include "melodify/error.hpp"
#include "oracles.hpp"

using namespace melodify;
using namespace melodify::emit;
using score::Articulation;
using score::Score;

namespace {

std::uint32_t be32(const Bytes& b, std::size_t at) {
    return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
           (std::uint32_t{b[at + 2]} << 8) | b[at + 3];
}

bool contains(const Bytes& hay, const Bytes& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

TEST(Vlq, Examples) {
    EXPECT_EQ(encode_vlq(0), (Bytes{0x00}));
    EXPECT_EQ(encode_vlq(127), (Bytes{0x7F}));
    EXPECT_EQ(encode_vlq(128), (Bytes{0x81, 0x00}));
    EXPECT_EQ(encode_vlq(0x3FFF), (Bytes{0xFF, 0x7F}));
    EXPECT_EQ(encode_vlq(kMaxVlq), (Bytes{0xFF, 0xFF, 0xFF, 0x7F}));
    try {
        encode_vlq(kMaxVlq + 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Overflow);
    }
}

TEST(Vlq, ExhaustiveRoundTripBelow65536) {
    for (std::uint32_t n = 0; n < (1u << 16); ++n) {
        const auto bytes = encode_vlq(n);
        std::size_t used = 0;
        ASSERT_EQ(oracle::decode_vlq(bytes, used), n);
        ASSERT_EQ(used, bytes.size());
        ASSERT_EQ(bytes.size(), n < 128 ? 1u : n < 16384 ? 2u : 3u);
    }
}

TEST(Vlq, RandomRoundTripBelow2To28) {
    gen::Rng rng(41);
    std::uniform_int_distribution<std::uint32_t> dist(0, kMaxVlq);
    for (int i = 0; i < 100000; ++i) {
        const auto n = dist(rng);
        std::size_t used = 0;
        ASSERT_EQ(oracle::decode_vlq(encode_vlq(n), used), n);
    }
}

TEST(Gates, Ratios) {
    EXPECT_EQ(gate_ticks(Articulation::Staccato, 480), 240);
    EXPECT_EQ(gate_ticks(Articulation::Staccato, 1), 1);
    EXPECT_EQ(gate_ticks(Articulation::Staccato, 3), 1);
    EXPECT_EQ(gate_ticks(Articulation::Legato, 480), 480);
    EXPECT_EQ(gate_ticks(Articulation::Normal, 480), 408);
    EXPECT_EQ(gate_ticks(Articulation::Normal, 1), 1);
}

TEST(Gates, AccentInheritsPrecedingArticulation) {
    std::vector<score::NoteEvent> notes{{0, 100, 60, 80, Articulation::Legato},
                                        {100, 100, 62, 112, Articulation::Accent},
                                        {200, 100, 64, 80, Articulation::Staccato},
                                        {300, 100, 65, 112, Articulation::Accent}};
    EXPECT_EQ(effective_gates(notes),
              (std::vector<Articulation>{Articulation::Legato, Articulation::Legato,
                                         Articulation::Staccato, Articulation::Staccato}));
    std::vector<score::NoteEvent> lone{{0, 100, 60, 112, Articulation::Accent}};
    EXPECT_EQ(effective_gates(lone), std::vector<Articulation>{Articulation::Normal});
}

TEST(KeySignature, CircleOfFifths) {
    using theory::Mode;
    EXPECT_EQ(key_signature_accidentals({0, Mode::Major}), 0);
    EXPECT_EQ(key_signature_accidentals({7, Mode::Major}), 1);
    EXPECT_EQ(key_signature_accidentals({5, Mode::Major}), -1);
    EXPECT_EQ(key_signature_accidentals({9, Mode::NaturalMinor}), 0);
    EXPECT_EQ(key_signature_accidentals({4, Mode::NaturalMinor}), 1);
    EXPECT_EQ(key_signature_accidentals({3, Mode::Chromatic}), 0);
}

TEST(WriteSmf, EmptyScoreLayout) {
    const auto bytes = write_smf(Score{});
    const Bytes header{0x4D, 0x54, 0x68, 0x64, 0, 0, 0, 6, 0, 0, 0, 1, 0x01, 0xE0};
    ASSERT_GE(bytes.size(), header.size() + 8);
    EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
    EXPECT_EQ(std::string(bytes.begin() + 14, bytes.begin() + 18), "MTrk");
    EXPECT_EQ(be32(bytes, 18), bytes.size() - 22);
    EXPECT_TRUE(contains(bytes, {0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20}));
    EXPECT_TRUE(contains(bytes, {0xFF, 0x58, 0x04, 4, 2, 24, 8}));
    const Bytes eot{0x00, 0xFF, 0x2F, 0x00};
    EXPECT_TRUE(std::equal(eot.begin(), eot.end(), bytes.end() - 4));
    const auto parsed = parse_smf_minimal(bytes);
    EXPECT_TRUE(parsed.notes.empty());
    EXPECT_TRUE(parsed.pedals.empty());
    EXPECT_EQ(parsed.tempo_us_per_quarter, 500000);
}

TEST(WriteSmf, SingleNoteAndPedal) {
    Score s;
    s.add_pedal(0, score::PedalState::Down);
    s.add_note({0, 480, 60, 80, Articulation::Normal});
    s.add_pedal(480, score::PedalState::Up);
    s.sort_events();
    const auto bytes = write_smf(s);
    EXPECT_TRUE(contains(bytes, {0x00, 0xB0, 0x40, 0x7F}));
    EXPECT_TRUE(contains(bytes, {0x00, 0x90, 0x3C, 0x50}));
    EXPECT_TRUE(contains(bytes, {0x83, 0x18, 0x80, 0x3C, 0x40}));  // off after 408 ticks
    const auto parsed = parse_smf_minimal(bytes);
    ASSERT_EQ(parsed.notes.size(), 1u);
    EXPECT_EQ(parsed.notes[0], (ParsedNote{0, 408, 60, 80}));
    ASSERT_EQ(parsed.pedals.size(), 2u);
    EXPECT_EQ(parsed.pedals[0], (ParsedPedal{0, true}));
    EXPECT_EQ(parsed.pedals[1], (ParsedPedal{480, false}));
}

TEST(WriteSmf, MetaFromScore) {
    Score s;
    s.tempo_bpm = 88;
    s.time_signature = {3, 4};
    s.key_signature = {9, theory::Mode::NaturalMinor};
    s.ticks_per_quarter = 96;
    const auto parsed = parse_smf_minimal(write_smf(s, SmfConfig{40, 0}));
    EXPECT_EQ(parsed.division, 96);
    EXPECT_EQ(parsed.tempo_us_per_quarter, 681818);
    EXPECT_EQ(parsed.time_numerator, 3);
    EXPECT_EQ(parsed.time_denominator, 4);
    EXPECT_EQ(parsed.key_accidentals, 0);
    EXPECT_TRUE(parsed.key_minor);
    EXPECT_EQ(parsed.program, 40);
}

TEST(WriteSmf, Errors) {
    Score looped;
    looped.add_note({0, 480, 60, 80, Articulation::Normal});
    looped.loop = score::LoopRegion{0, 480, 2};
    try {
        write_smf(looped);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnexpandedLoop);
    }
    Score bad;
    bad.add_note({0, 0, 60, 80, Articulation::Normal});
    try {
        write_smf(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StructuralViolation);
    }
}

TEST(WriteSmf, RandomScoresRoundTrip) {
    gen::Rng rng(42);
    const Articulation arts[] = {Articulation::Normal, Articulation::Staccato, Articulation::Legato,
                                 Articulation::Accent};
    for (int trial = 0; trial < 200; ++trial) {
        Score s;
        const int n = gen::uniform_int(rng, 0, 40);
        for (int i = 0; i < n; ++i) {
            s.add_note({gen::uniform_int(rng, 0, 20000), gen::uniform_int(rng, 1, 3000),
                        gen::uniform_int(rng, 0, 127), gen::uniform_int(rng, 1, 127),
                        arts[gen::uniform_int(rng, 0, 3)]});
        }
        if (trial % 2) {
            const int down = gen::uniform_int(rng, 0, 5000);
            s.add_pedal(down, score::PedalState::Down);
            s.add_pedal(down + gen::uniform_int(rng, 1, 5000), score::PedalState::Up);
        }
        s.sort_events();
        const auto bytes = write_smf(s);
        ASSERT_EQ(be32(bytes, 18), bytes.size() - 22);
        const auto parsed = parse_smf_minimal(bytes);

        const auto notes = s.notes();
        const auto gates = effective_gates(notes);
        std::vector<ParsedNote> expected;
        for (std::size_t i = 0; i < notes.size(); ++i) {
            expected.push_back({notes[i].onset, gate_ticks(gates[i], notes[i].duration),
                                notes[i].pitch, notes[i].velocity});
        }
        std::vector<ParsedNote> got = parsed.notes;
        auto key = [](const ParsedNote& a, const ParsedNote& b) {
            return std::tie(a.onset, a.pitch, a.duration, a.velocity) <
                   std::tie(b.onset, b.pitch, b.duration, b.velocity);
        };
        std::sort(expected.begin(), expected.end(), key);
        std::sort(got.begin(), got.end(), key);
        // Overlapping notes of one pitch pair first-on/first-off, so only the
        // multiset of onsets and pitches is guaranteed for them.
        ASSERT_EQ(got.size(), expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].onset, expected[i].onset);
            EXPECT_EQ(got[i].pitch, expected[i].pitch);
        }
        EXPECT_EQ(parsed.pedals.size(), s.pedals().size());
    }
}

TEST(ParseSmf, RejectsTruncatedAndGarbage) {
    Score s;
    s.add_note({0, 480, 60, 80, Articulation::Normal});
    const auto bytes = write_smf(s);
    for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
        Bytes truncated(bytes.begin(), bytes.begin() + static_cast<long>(cut));
        try {
            parse_smf_minimal(truncated);
            ADD_FAILURE() << "accepted a file cut at " << cut;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedSmf);
        }
    }
    EXPECT_THROW(parse_smf_minimal(Bytes{'R', 'I', 'F', 'F'}), Error);
}

TEST(TextScore, Examples) {
    const std::string empty = write_text_score(Score{});
    EXPECT_EQ(empty, "ppq 480\ntempo 120\ntime 4/4\nkey C major\n");
    Score one;
    one.add_note({0, 480, 60, 80, Articulation::Staccato});
    const auto text = write_text_score(one);
    EXPECT_EQ(text, empty + "0 60 480 80 staccato\n");
    EXPECT_EQ(write_text_score(one), text);

    Score loop;
    loop.key_signature = {9, theory::Mode::NaturalMinor};
    loop.add_pedal(0, score::PedalState::Down);
    loop.add_note({0, 480, 57, 80, Articulation::Normal});
    loop.add_pedal(480, score::PedalState::Up);
    loop.loop = score::LoopRegion{0, 480, 2};
    EXPECT_EQ(write_text_score(loop),
              "ppq 480\ntempo 120\ntime 4/4\nkey A minor\nloop 0 480 2\n"
              "0 PEDAL down\n0 57 480 80 normal\n480 PEDAL up\n");
}
