#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "melodify/theory.hpp"

namespace melodify::ingest {

enum class ColumnKind { Categorical, Quantitative };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    std::vector<double> numbers;       // populated when Quantitative
    std::vector<std::string> labels;   // populated when Categorical

    std::size_t size() const noexcept {
        return kind == ColumnKind::Quantitative ? numbers.size() : labels.size();
    }
};

struct Dataset {
    std::vector<Column> columns;
    std::size_t row_count = 0;

    const Column* find(std::string_view name) const noexcept;
};

enum class TableFormat { Csv, Json };

enum class Idiom { Bar, Pie, Line, Scatter };
enum class Palette { Positive, Negative, Grey, Exciting, Calm };

inline constexpr int kDefaultLoopCount = 2;
inline constexpr int kMinTempo = 20;
inline constexpr int kMaxTempo = 300;

struct MelodySpec {
    Idiom idiom = Idiom::Line;
    Palette palette = Palette::Positive;
    theory::PitchClass key_root = 0;
    std::optional<std::string> x_field;
    std::string y_field;
    std::optional<int> tempo_bpm;
    std::optional<theory::TimeSignature> time_signature;
    int loop_count = kDefaultLoopCount;
    // Bar data binned over a numeric x may carry pedal reverb.
    bool histogram = false;
};

/// Parses CSV (header row mandatory) or a JSON array of row objects.
/// A column is Quantitative iff every cell parses as a finite real.
Dataset parse_table(std::string_view raw, TableFormat format);

/// Parses a JSON melody spec object.
MelodySpec parse_spec(std::string_view raw);

/// Indices of the bound columns inside the dataset.
struct Binding {
    std::optional<std::size_t> x_column;
    std::size_t y_column = 0;
};

/// Checks field kinds against the idiom; throws on the first mismatch.
Binding validate_binding(const Dataset& dataset, const MelodySpec& spec);

Idiom parse_idiom(std::string_view name);
Palette parse_palette(std::string_view name);
theory::PitchClass parse_key(std::string_view name);
theory::TimeSignature parse_time_signature(std::string_view text);
int check_tempo(long long bpm);
int check_loop_count(long long count);

const char* to_string(Idiom idiom);
const char* to_string(Palette palette);
const char* to_string(ColumnKind kind);

}  // namespace melodify::ingest
