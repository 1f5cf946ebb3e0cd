#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "melodify/emit.hpp"
#include "melodify/error.hpp"
#include "melodify/ingest.hpp"
#include "melodify/melodifier.hpp"
#include "melodify/stats.hpp"
#include "melodify/theory.hpp"
#include "melodify/tracklist.hpp"

namespace py = pybind11;
using namespace melodify;

namespace {

PyObject* melodify_error = nullptr;

py::bytes to_bytes(const emit::Bytes& b) {
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

ingest::TableFormat table_format(const std::string& name) {
    if (name == "csv") return ingest::TableFormat::Csv;
    if (name == "json") return ingest::TableFormat::Json;
    throw Error(ErrorCode::InvalidValue, "format must be 'csv' or 'json'");
}

py::dict segment_dict(const stats::TrendSegment& s) {
    py::dict d;
    d["start"] = s.start_index;
    d["end"] = s.end_index;
    d["slope"] = s.slope;
    d["direction"] = stats::to_string(s.direction);
    return d;
}

py::list segments(const std::vector<double>& series, int max_segments) {
    py::list out;
    for (const auto& s : stats::segment_trends(series, max_segments)) out.append(segment_dict(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_melodify, m) {
    m.doc() = "Data-to-music compiler";

    // Messages carry the error code name, e.g. "NegativeProportion: ...".
    melodify_error = py::exception<Error>(m, "MelodifyError").release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const auto message = std::string(to_string(e.code())) + ": " + e.what();
            PyErr_SetString(melodify_error, message.c_str());
        }
    });

    py::class_<score::Score>(m, "Score")
        .def_readonly("ticks_per_quarter", &score::Score::ticks_per_quarter)
        .def_readonly("tempo_bpm", &score::Score::tempo_bpm)
        .def_property_readonly("time_signature",
                               [](const score::Score& s) {
                                   return py::make_tuple(s.time_signature.numerator,
                                                         s.time_signature.denominator);
                               })
        .def_property_readonly("loop",
                               [](const score::Score& s) -> py::object {
                                   if (!s.loop) return py::none();
                                   return py::make_tuple(s.loop->start, s.loop->end, s.loop->count);
                               })
        .def_property_readonly("notes",
                               [](const score::Score& s) {
                                   py::list out;
                                   for (const auto& n : s.notes()) {
                                       out.append(py::make_tuple(n.onset, n.pitch, n.duration,
                                                                 n.velocity,
                                                                 score::to_string(n.articulation)));
                                   }
                                   return out;
                               })
        .def_property_readonly("pedals",
                               [](const score::Score& s) {
                                   py::list out;
                                   for (const auto& p : s.pedals()) {
                                       out.append(py::make_tuple(
                                           p.tick, p.state == score::PedalState::Down ? "down" : "up"));
                                   }
                                   return out;
                               })
        .def("total_ticks", &score::total_duration_ticks)
        .def("expand_loops", &score::expand_loops)
        .def("to_text", &emit::write_text_score)
        .def(
            "to_midi",
            [](const score::Score& s, int program) {
                return to_bytes(emit::write_smf(score::expand_loops(s), emit::SmfConfig{program, 0}));
            },
            py::arg("program") = 0);

    m.def(
        "compile",
        [](const std::string& data, const std::string& spec, const std::string& format) {
            return melodifier::melodify(ingest::parse_table(data, table_format(format)),
                                        ingest::parse_spec(spec));
        },
        py::arg("data"), py::arg("spec"), py::arg("format") = "csv",
        "Compile table text and a JSON spec into a Score.");

    m.def(
        "analyze",
        [](const std::vector<double>& series, int max_segments) {
            py::dict d;
            d["segments"] = segments(series, max_segments);
            const auto density = stats::compute_density(series.size());
            d["density"] = stats::to_string(density.level);
            const auto variance = stats::compute_variance(series);
            d["variance"] = stats::to_string(variance.level);
            d["semitone_span"] = variance.semitone_span;
            return d;
        },
        py::arg("series"), py::arg("max_segments") = stats::kDefaultMaxSegments);

    m.def("least_squares_slope",
          [](const std::vector<double>& s) { return stats::least_squares_slope(s); });
    m.def("segment_trends", &segments, py::arg("series"),
          py::arg("max_segments") = stats::kDefaultMaxSegments);
    m.def(
        "compute_density",
        [](std::size_t n, int bars) {
            const auto d = stats::compute_density(n, bars);
            return py::make_tuple(stats::to_string(d.level), d.points_per_bar);
        },
        py::arg("series_length"), py::arg("bar_count") = stats::kReferenceBars);
    m.def("compute_variance", [](const std::vector<double>& s) {
        const auto v = stats::compute_variance(s);
        return py::make_tuple(stats::to_string(v.level), v.semitone_span);
    });

    m.def(
        "quantize_pitch",
        [](double value, double lo, double hi, int key, const std::string& mode, int span, int anchor) {
            theory::Mode m_ = theory::Mode::Major;
            if (mode == "minor") {
                m_ = theory::Mode::NaturalMinor;
            } else if (mode == "chromatic") {
                m_ = theory::Mode::Chromatic;
            } else if (mode != "major") {
                throw Error(ErrorCode::InvalidValue, "mode must be major, minor or chromatic");
            }
            return theory::quantize_pitch(value, {lo, hi}, theory::build_scale(key, m_), span,
                                          theory::Pitch(anchor))
                .midi();
        },
        py::arg("value"), py::arg("lo"), py::arg("hi"), py::arg("key") = 0, py::arg("mode") = "major",
        py::arg("span") = 12, py::arg("anchor") = 48);

    m.def("encode_vlq", [](std::uint32_t n) { return to_bytes(emit::encode_vlq(n)); });

    m.def("parse_smf", [](const py::bytes& data) {
        const std::string raw = data;
        const auto parsed = emit::parse_smf_minimal(
            std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
        py::dict d;
        d["division"] = parsed.division;
        d["tempo_us_per_quarter"] = parsed.tempo_us_per_quarter;
        py::list notes;
        for (const auto& n : parsed.notes) {
            notes.append(py::make_tuple(n.onset, n.pitch, n.duration, n.velocity));
        }
        d["notes"] = notes;
        py::list pedals;
        for (const auto& p : parsed.pedals) pedals.append(py::make_tuple(p.tick, p.down));
        d["pedals"] = pedals;
        return d;
    });

    m.def("tracklist", [] {
        py::dict out;
        for (const auto& track : tracklist::bundled_tracks()) {
            const auto r = tracklist::render_track(track);
            out[py::str(r.name)] = py::make_tuple(r.text, to_bytes(r.midi));
        }
        return out;
    });
}
