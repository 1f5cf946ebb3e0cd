#include "melodify/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <set>

#include <json.hpp>

#include "melodify/error.hpp"

namespace melodify::ingest {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::MalformedInput, what);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + extra >= s.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Reject overlong forms, surrogates and out-of-range code points.
        static constexpr std::uint32_t kMinForLength[4] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += extra + 1;
    }
    return true;
}

std::optional<double> parse_real(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

struct Cell {
    std::string text;
    std::optional<double> number;
};

Dataset build_dataset(const std::vector<std::string>& names,
                      const std::vector<std::vector<Cell>>& rows) {
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) malformed("column names must be non-empty");
        if (!seen.insert(name).second) malformed("duplicate column name '" + name + "'");
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "table has no data rows");

    Dataset ds;
    ds.row_count = rows.size();
    for (std::size_t c = 0; c < names.size(); ++c) {
        Column col;
        col.name = names[c];
        const bool numeric = std::all_of(rows.begin(), rows.end(),
                                         [c](const auto& row) { return row[c].number.has_value(); });
        if (numeric) {
            col.kind = ColumnKind::Quantitative;
            for (const auto& row : rows) col.numbers.push_back(*row[c].number);
        } else {
            col.kind = ColumnKind::Categorical;
            for (const auto& row : rows) {
                if (row[c].text.empty()) {
                    malformed("empty cell in categorical column '" + col.name + "'");
                }
                col.labels.push_back(row[c].text);
            }
        }
        ds.columns.push_back(std::move(col));
    }
    return ds;
}

std::vector<std::vector<std::string>> split_csv(std::string_view raw) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_content = false;

    auto end_field = [&] {
        record.push_back(field_was_quoted ? field : std::string(trim(field)));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (record_has_content) records.push_back(std::move(record));
        record.clear();
        record_has_content = false;
    };

    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char ch = raw[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < raw.size() && raw[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!trim(field).empty()) malformed("quote inside an unquoted field");
                field.clear();
                in_quotes = true;
                field_was_quoted = true;
                record_has_content = true;
                break;
            case ',':
                end_field();
                record_has_content = true;
                break;
            case '\r':
                if (i + 1 < raw.size() && raw[i + 1] == '\n') break;
                malformed("bare carriage return");
            case '\n':
                end_record();
                break;
            default:
                if (field_was_quoted) malformed("text after closing quote");
                field.push_back(ch);
                record_has_content = true;
        }
    }
    if (in_quotes) malformed("unterminated quoted field");
    end_record();
    return records;
}

Dataset parse_csv(std::string_view raw) {
    auto records = split_csv(raw);
    if (records.empty()) malformed("CSV has no header row");
    const auto names = records.front();
    std::vector<std::vector<Cell>> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != names.size()) {
            malformed("row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                      " fields, expected " + std::to_string(names.size()));
        }
        std::vector<Cell> row;
        for (auto& text : records[r]) {
            auto number = parse_real(text);
            row.push_back(Cell{std::move(text), number});
        }
        rows.push_back(std::move(row));
    }
    return build_dataset(names, rows);
}

Dataset parse_json_table(std::string_view raw) {
    ordered_json doc = ordered_json::parse(raw, nullptr, false);
    if (doc.is_discarded()) malformed("invalid JSON");
    if (!doc.is_array()) malformed("JSON table must be an array of row objects");
    if (doc.empty()) throw Error(ErrorCode::EmptyDataset, "table has no data rows");

    std::vector<std::string> names;
    for (const auto& [key, _] : doc.front().items()) names.push_back(key);

    std::vector<std::vector<Cell>> rows;
    for (const auto& obj : doc) {
        if (!obj.is_object() || obj.size() != names.size()) {
            malformed("every JSON row must be an object with the same keys");
        }
        std::vector<Cell> row;
        for (const auto& name : names) {
            auto it = obj.find(name);
            if (it == obj.end()) malformed("row is missing key '" + name + "'");
            if (it->is_number()) {
                const double v = it->get<double>();
                if (!std::isfinite(v)) malformed("non-finite number");
                row.push_back(Cell{it->dump(), v});
            } else if (it->is_string()) {
                auto text = it->get<std::string>();
                auto number = parse_real(text);
                row.push_back(Cell{std::move(text), number});
            } else {
                malformed("cell values must be numbers or strings");
            }
        }
        rows.push_back(std::move(row));
    }
    return build_dataset(names, rows);
}

std::string require_string(const ordered_json& value, const char* key) {
    if (!value.is_string()) {
        throw Error(ErrorCode::InvalidValue, std::string("'") + key + "' must be a string");
    }
    return value.get<std::string>();
}

long long require_integer(const ordered_json& value, const char* key) {
    if (!value.is_number_integer()) {
        throw Error(ErrorCode::InvalidValue, std::string("'") + key + "' must be an integer");
    }
    return value.get<long long>();
}

}  // namespace

const Column* Dataset::find(std::string_view name) const noexcept {
    for (const auto& c : columns) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

Dataset parse_table(std::string_view raw, TableFormat format) {
    if (!valid_utf8(raw)) malformed("input is not valid UTF-8");
    if (raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
    return format == TableFormat::Csv ? parse_csv(raw) : parse_json_table(raw);
}

Idiom parse_idiom(std::string_view name) {
    const auto key = lower(name);
    if (key == "bar") return Idiom::Bar;
    if (key == "pie") return Idiom::Pie;
    if (key == "line") return Idiom::Line;
    if (key == "scatter") return Idiom::Scatter;
    throw Error(ErrorCode::UnknownIdiom, "unknown idiom '" + std::string(name) + "'");
}

Palette parse_palette(std::string_view name) {
    const auto key = lower(name);
    if (key == "positive") return Palette::Positive;
    if (key == "negative") return Palette::Negative;
    if (key == "grey" || key == "gray") return Palette::Grey;
    if (key == "exciting") return Palette::Exciting;
    if (key == "calm") return Palette::Calm;
    throw Error(ErrorCode::UnknownPalette, "unknown palette '" + std::string(name) + "'");
}

theory::PitchClass parse_key(std::string_view name) {
    if (auto pc = theory::parse_note_name(name)) return *pc;
    throw Error(ErrorCode::InvalidValue, "invalid key '" + std::string(name) + "'");
}

theory::TimeSignature parse_time_signature(std::string_view text) {
    auto fail = [&]() -> theory::TimeSignature {
        throw Error(ErrorCode::InvalidValue,
                    "invalid time signature '" + std::string(text) + "'");
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return fail();
    int num = 0;
    int den = 0;
    auto a = text.substr(0, slash);
    auto b = text.substr(slash + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), num);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), den);
    if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} ||
        r2.ptr != b.data() + b.size()) {
        return fail();
    }
    const bool power_of_two = den > 0 && (den & (den - 1)) == 0;
    if (num < 1 || num > 32 || !power_of_two || den > 32) return fail();
    return theory::TimeSignature{num, den};
}

int check_tempo(long long bpm) {
    if (bpm < kMinTempo || bpm > kMaxTempo) {
        throw Error(ErrorCode::InvalidValue,
                    "tempo " + std::to_string(bpm) + " outside [20, 300]");
    }
    return static_cast<int>(bpm);
}

int check_loop_count(long long count) {
    if (count < 1 || count > 64) {
        throw Error(ErrorCode::InvalidValue, "loop count must be in [1, 64]");
    }
    return static_cast<int>(count);
}

MelodySpec parse_spec(std::string_view raw) {
    if (!valid_utf8(raw)) malformed("spec is not valid UTF-8");
    ordered_json doc = ordered_json::parse(raw, nullptr, false);
    if (doc.is_discarded()) malformed("invalid JSON in spec");
    if (!doc.is_object()) malformed("spec must be a JSON object");

    static const std::set<std::string> kKnown{"idiom", "palette", "key",  "x",        "y",
                                              "tempo", "time_signature", "loop", "histogram"};
    for (const auto& [key, _] : doc.items()) {
        if (!kKnown.contains(key)) {
            throw Error(ErrorCode::InvalidValue, "unknown spec key '" + key + "'");
        }
    }
    for (const char* required : {"idiom", "palette", "y"}) {
        if (!doc.contains(required)) {
            throw Error(ErrorCode::MissingField, std::string("spec is missing '") + required + "'");
        }
    }

    MelodySpec spec;
    spec.idiom = parse_idiom(require_string(doc["idiom"], "idiom"));
    spec.palette = parse_palette(require_string(doc["palette"], "palette"));
    spec.y_field = require_string(doc["y"], "y");
    if (doc.contains("key")) spec.key_root = parse_key(require_string(doc["key"], "key"));
    if (doc.contains("x") && !doc["x"].is_null()) spec.x_field = require_string(doc["x"], "x");
    if (doc.contains("tempo")) spec.tempo_bpm = check_tempo(require_integer(doc["tempo"], "tempo"));
    if (doc.contains("time_signature")) {
        spec.time_signature =
            parse_time_signature(require_string(doc["time_signature"], "time_signature"));
    }
    if (doc.contains("loop")) spec.loop_count = check_loop_count(require_integer(doc["loop"], "loop"));
    if (doc.contains("histogram")) {
        if (!doc["histogram"].is_boolean()) {
            throw Error(ErrorCode::InvalidValue, "'histogram' must be a boolean");
        }
        spec.histogram = doc["histogram"].get<bool>();
    }
    return spec;
}

Binding validate_binding(const Dataset& dataset, const MelodySpec& spec) {
    if (dataset.row_count == 0) throw Error(ErrorCode::EmptyDataset, "dataset has no rows");

    auto index_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < dataset.columns.size(); ++i) {
            if (dataset.columns[i].name == name) return i;
        }
        throw Error(ErrorCode::UnknownColumn, "no column named '" + name + "'");
    };
    auto kind_error = [](const std::string& what) {
        return Error(ErrorCode::KindMismatch, what);
    };

    Binding b;
    b.y_column = index_of(spec.y_field);
    if (spec.x_field) b.x_column = index_of(*spec.x_field);
    const Column& y = dataset.columns[b.y_column];
    if (y.kind != ColumnKind::Quantitative) {
        throw kind_error("y field '" + y.name + "' must be quantitative");
    }

    switch (spec.idiom) {
        case Idiom::Bar:
        case Idiom::Pie: {
            if (!b.x_column) {
                throw Error(ErrorCode::MissingField,
                            std::string(to_string(spec.idiom)) + " needs a categorical x field");
            }
            const Column& x = dataset.columns[*b.x_column];
            const bool binned = spec.idiom == Idiom::Bar && spec.histogram;
            if (x.kind != ColumnKind::Categorical && !binned) {
                throw kind_error("x field '" + x.name + "' must be categorical");
            }
            break;
        }
        case Idiom::Line:
        case Idiom::Scatter:
            if (b.x_column && dataset.columns[*b.x_column].kind != ColumnKind::Quantitative) {
                throw kind_error("x field '" + dataset.columns[*b.x_column].name +
                                 "' must be quantitative");
            }
            break;
    }

    if (spec.idiom == Idiom::Pie) {
        double total = 0;
        for (double v : y.numbers) {
            if (v < 0) throw Error(ErrorCode::NegativeProportion, "pie values must be non-negative");
            total += v;
        }
        if (!(total > 0)) throw Error(ErrorCode::AllZero, "pie values sum to zero");
    }
    return b;
}

const char* to_string(Idiom idiom) {
    switch (idiom) {
        case Idiom::Bar: return "bar";
        case Idiom::Pie: return "pie";
        case Idiom::Line: return "line";
        case Idiom::Scatter: return "scatter";
    }
    return "bar";
}

const char* to_string(Palette palette) {
    switch (palette) {
        case Palette::Positive: return "positive";
        case Palette::Negative: return "negative";
        case Palette::Grey: return "grey";
        case Palette::Exciting: return "exciting";
        case Palette::Calm: return "calm";
    }
    return "positive";
}

const char* to_string(ColumnKind kind) {
    return kind == ColumnKind::Quantitative ? "quantitative" : "categorical";
}

}  // namespace melodify::ingest
