#include "melodify/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "melodify/emit.hpp"
#include "melodify/ingest.hpp"
#include "melodify/melodifier.hpp"
#include "melodify/stats.hpp"
#include "melodify/tracklist.hpp"

namespace melodify::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Options {
    std::string data;
    std::string spec;
    std::string idiom;
    std::string palette;
    std::string key;
    std::string x;
    std::string y;
    std::optional<int> tempo;
    std::string time;
    std::optional<int> loop;
    std::string emit = "midi";
    std::string out;
    int max_segments = stats::kDefaultMaxSegments;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void write_file(const fs::path& path, const emit::Bytes& bytes) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

ingest::Dataset load_dataset(const std::string& path) {
    const auto format = fs::path(path).extension() == ".json" ? ingest::TableFormat::Json
                                                              : ingest::TableFormat::Csv;
    return ingest::parse_table(read_file(path), format);
}

// Spec file (if any) with command-line values layered on top.
ingest::MelodySpec resolve_spec(const Options& o) {
    ordered_json doc = ordered_json::object();
    if (!o.spec.empty()) {
        doc = ordered_json::parse(read_file(o.spec), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorCode::MalformedInput, "spec file is not a JSON object");
        }
    }
    if (!o.idiom.empty()) doc["idiom"] = o.idiom;
    if (!o.palette.empty()) doc["palette"] = o.palette;
    if (!o.key.empty()) doc["key"] = o.key;
    if (!o.x.empty()) doc["x"] = o.x;
    if (!o.y.empty()) doc["y"] = o.y;
    if (o.tempo) doc["tempo"] = *o.tempo;
    if (!o.time.empty()) doc["time_signature"] = o.time;
    if (o.loop) doc["loop"] = *o.loop;
    return ingest::parse_spec(doc.dump());
}

double seconds(score::Tick ticks, const score::Score& s) {
    return static_cast<double>(ticks) / s.ticks_per_quarter * 60.0 / s.tempo_bpm;
}

int cmd_compile(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw Error(ErrorCode::MissingField, "--out is required");
    const auto dataset = load_dataset(o.data);
    const auto spec = resolve_spec(o);
    const auto score = melodifier::melodify(dataset, spec);

    fs::path midi_path = o.out;
    fs::path text_path = o.out;
    if (o.emit == "both") {
        if (midi_path.extension() == ".mid") {
            text_path.replace_extension(".txt");
        } else {
            midi_path += ".mid";
            text_path += ".txt";
        }
    }
    if (o.emit != "text") write_file(midi_path, emit::write_smf(score::expand_loops(score)));
    if (o.emit != "midi") write_file(text_path, emit::write_text_score(score));

    const auto total = score::total_duration_ticks(score);
    out << ingest::to_string(spec.idiom) << '/' << ingest::to_string(spec.palette) << ": "
        << score::expand_loops(score).notes().size() << " notes, " << total << " ticks ("
        << std::fixed << std::setprecision(2) << seconds(total, score) << " s)\n";
    return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    const auto dataset = load_dataset(o.data);
    std::string y = o.y;
    if (y.empty()) {
        for (const auto& c : dataset.columns) {
            if (c.kind == ingest::ColumnKind::Quantitative && c.name != o.x) {
                y = c.name;
                break;
            }
        }
        if (y.empty()) throw Error(ErrorCode::KindMismatch, "no quantitative column to analyze");
    }

    ingest::MelodySpec spec;
    spec.idiom = ingest::Idiom::Line;
    spec.y_field = y;
    const ingest::Column* x_col = o.x.empty() ? nullptr : dataset.find(o.x);
    if (!o.x.empty() && x_col == nullptr) {
        throw Error(ErrorCode::UnknownColumn, "no column named '" + o.x + "'");
    }
    if (x_col && x_col->kind == ingest::ColumnKind::Quantitative) spec.x_field = o.x;
    const auto binding = ingest::validate_binding(dataset, spec);
    const auto series = melodifier::playing_order(dataset, spec, binding);

    ordered_json doc;
    doc["rows"] = dataset.row_count;
    doc["y"] = y;
    ordered_json segments = ordered_json::array();
    for (const auto& seg : stats::segment_trends(series, o.max_segments)) {
        segments.push_back({{"start", seg.start_index},
                            {"end", seg.end_index},
                            {"slope", seg.slope},
                            {"direction", stats::to_string(seg.direction)}});
    }
    doc["segments"] = segments;
    const auto density = stats::compute_density(series.size());
    doc["density"] = {{"level", stats::to_string(density.level)},
                      {"points_per_bar", density.points_per_bar}};
    const auto variance = stats::compute_variance(series);
    doc["variance"] = {{"level", stats::to_string(variance.level)},
                       {"semitone_span", variance.semitone_span},
                       {"dispersion", variance.dispersion}};
    if (x_col && x_col->kind == ingest::ColumnKind::Categorical) {
        std::vector<std::pair<std::string, double>> categories;
        const auto& values = dataset.columns[binding.y_column].numbers;
        for (std::size_t i = 0; i < values.size(); ++i) {
            categories.emplace_back(x_col->labels[i], values[i]);
        }
        ordered_json props = ordered_json::array();
        for (const auto& [name, ratio] : stats::proportions(categories).entries) {
            props.push_back({{"category", name}, {"ratio", ratio}});
        }
        doc["proportions"] = props;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
}

int cmd_tracklist(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw Error(ErrorCode::MissingField, "--out DIR is required");
    const fs::path dir = o.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::Io, "cannot create directory '" + dir.string() + "'");
    }
    for (const auto& track : tracklist::bundled_tracks()) {
        const auto rendered = tracklist::render_track(track);
        write_file(dir / (rendered.name + ".mid"), rendered.midi);
        write_file(dir / (rendered.name + ".txt"), rendered.text);
        out << rendered.name << ": " << rendered.score.notes().size() << " notes\n";
    }
    return kExitOk;
}

}  // namespace

std::string_view error_tag(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
            return "E_IO";
        case ErrorCode::MalformedInput:
        case ErrorCode::EmptyDataset:
        case ErrorCode::UnknownIdiom:
        case ErrorCode::UnknownPalette:
        case ErrorCode::MissingField:
        case ErrorCode::InvalidValue:
            return "E_PARSE";
        case ErrorCode::UnknownColumn:
        case ErrorCode::KindMismatch:
        case ErrorCode::TooShort:
            return "E_BINDING";
        case ErrorCode::NegativeProportion:
        case ErrorCode::AllZero:
            return "E_PROPORTION";
        default:
            return "E_INTERNAL";
    }
}

int exit_code_for(ErrorCode code) {
    return error_tag(code) == "E_INTERNAL" ? kExitInternal : kExitInput;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile tabular data and a chart spec into a classical-style MIDI score"};
    app.require_subcommand(1);
    Options o;

    auto* compile = app.add_subcommand("compile", "Compile data + spec into MIDI and/or text");
    compile->add_option("--data", o.data, "CSV or JSON table")->required();
    compile->add_option("--spec", o.spec, "JSON melody spec");
    compile->add_option("--idiom", o.idiom, "bar | pie | line | scatter");
    compile->add_option("--palette", o.palette, "positive | negative | grey | exciting | calm");
    compile->add_option("--key", o.key, "Key root, C..B with optional #");
    compile->add_option("--x", o.x, "x column");
    compile->add_option("--y", o.y, "y column");
    compile->add_option("--tempo", o.tempo, "Tempo in BPM (20-300)");
    compile->add_option("--time", o.time, "Time signature N/D");
    compile->add_option("--loop", o.loop, "Pie loop count");
    compile->add_option("--emit", o.emit, "midi | text | both")
        ->check(CLI::IsMember({"midi", "text", "both"}));
    compile->add_option("--out", o.out, "Output path");

    auto* analyze = app.add_subcommand("analyze", "Print trend, density and variance as JSON");
    analyze->add_option("--data", o.data, "CSV or JSON table")->required();
    analyze->add_option("--x", o.x, "x column (quantitative: sort key; categorical: proportions)");
    analyze->add_option("--y", o.y, "y column (default: first quantitative column)");
    analyze->add_option("--max-segments", o.max_segments, "Segment limit")
        ->check(CLI::PositiveNumber);

    auto* tracks = app.add_subcommand("tracklist", "Render the nine bundled demonstration tracks");
    tracks->add_option("--out", o.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error[E_PARSE]: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*compile) return cmd_compile(o, out);
        if (*analyze) return cmd_analyze(o, out);
        return cmd_tracklist(o, out);
    } catch (const Error& e) {
        err << "error[" << error_tag(e.code()) << "]: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error[E_INTERNAL]: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace melodify::cli
