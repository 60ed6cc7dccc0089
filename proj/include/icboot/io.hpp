#pragma once

// CSV datasets: current status (t,delta), intervals (left,right) and
// mixed-case long format (id,time,delta). Parsing reports 1-based line
// numbers; serialization is canonical and round-trips exactly.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "icboot/data.hpp"
#include "icboot/error.hpp"

namespace icboot {

enum class DatasetFormat { current_status, intervals, mixed_long };

inline DatasetFormat parse_format(std::string_view name) {
    if (name == "current-status") return DatasetFormat::current_status;
    if (name == "intervals") return DatasetFormat::intervals;
    if (name == "mixed-long") return DatasetFormat::mixed_long;
    throw InputError("unknown dataset format '" + std::string(name) + "'");
}

inline std::string format_name(DatasetFormat f) {
    switch (f) {
        case DatasetFormat::current_status: return "current-status";
        case DatasetFormat::intervals: return "intervals";
        case DatasetFormat::mixed_long: return "mixed-long";
    }
    return "";
}

struct Dataset {
    DatasetFormat format = DatasetFormat::current_status;
    CurrentStatusSample current_status;
    std::vector<CensoringInterval> intervals;
    std::vector<std::string> ids;  // mixed-long only, parallel to mixed
    MixedCaseSample mixed;

    std::size_t size() const {
        switch (format) {
            case DatasetFormat::current_status: return current_status.size();
            case DatasetFormat::intervals: return intervals.size();
            case DatasetFormat::mixed_long: return mixed.size();
        }
        return 0;
    }

    MixedCaseSample subjects() const {
        switch (format) {
            case DatasetFormat::current_status: return to_mixed_case(current_status);
            case DatasetFormat::intervals: return subjects_from_intervals(intervals);
            case DatasetFormat::mixed_long: return mixed;
        }
        return {};
    }

    std::vector<CensoringInterval> censoring_intervals() const {
        if (format == DatasetFormat::intervals) return intervals;
        if (format == DatasetFormat::mixed_long) return reduce_to_intervals(mixed);
        std::vector<CensoringInterval> out;
        for (const auto& r : current_status) {
            out.push_back(r.delta == 1 ? CensoringInterval(0.0, r.t) : CensoringInterval(r.t, kInfinity));
        }
        return out;
    }
};

// %.17g, with infinity spelled "inf".
inline std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

[[noreturn]] inline void fail_line(std::size_t line, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ": " + msg);
}

inline double parse_real(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail_line(line, std::string("cannot parse ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

inline int parse_indicator(std::string_view s, std::size_t line) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    fail_line(line, "delta must be 0 or 1, got '" + std::string(s) + "'");
}

inline bool is_infinity(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower.empty() || lower == "inf" || lower == "+inf" || lower == "infinity";
}

struct Rows {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line, cells)
};

inline Rows read_rows(std::string_view text, const std::vector<std::string_view>& header) {
    Rows out;
    std::size_t line_no = 0, start = 0;
    bool seen_header = false;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (!seen_header) {
            if (cells != header) {
                std::string want;
                for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + std::string(header[i]);
                fail_line(line_no, "expected header '" + want + "'");
            }
            seen_header = true;
            continue;
        }
        if (cells.size() != header.size()) {
            fail_line(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(cells.size()));
        }
        out.rows.emplace_back(line_no, std::move(cells));
    }
    if (!seen_header) throw InputError("dataset has no header row");
    return out;
}

}  // namespace detail

inline Dataset parse_dataset(std::string_view text, DatasetFormat format) {
    Dataset ds;
    ds.format = format;
    switch (format) {
        case DatasetFormat::current_status: {
            auto rows = detail::read_rows(text, {"t", "delta"});
            for (const auto& [line, c] : rows.rows) {
                double t = detail::parse_real(c[0], line, "time");
                if (!std::isfinite(t) || !(t > 0.0)) detail::fail_line(line, "time must be finite and positive");
                ds.current_status.push_back({t, detail::parse_indicator(c[1], line)});
            }
            break;
        }
        case DatasetFormat::intervals: {
            auto rows = detail::read_rows(text, {"left", "right"});
            for (const auto& [line, c] : rows.rows) {
                double l = detail::parse_real(c[0], line, "left endpoint");
                double r = detail::is_infinity(c[1]) ? kInfinity : detail::parse_real(c[1], line, "right endpoint");
                try {
                    ds.intervals.emplace_back(l, r);
                } catch (const InputError& e) {
                    detail::fail_line(line, e.what());
                }
            }
            break;
        }
        case DatasetFormat::mixed_long: {
            auto rows = detail::read_rows(text, {"id", "time", "delta"});
            std::map<std::string, std::size_t, std::less<>> index;
            std::vector<int> event_row;  // index of the delta=1 exam, or -1
            for (const auto& [line, c] : rows.rows) {
                if (c[0].empty()) detail::fail_line(line, "empty id");
                double t = detail::parse_real(c[1], line, "time");
                if (!std::isfinite(t) || !(t > 0.0)) detail::fail_line(line, "time must be finite and positive");
                int d = detail::parse_indicator(c[2], line);
                auto it = index.find(c[0]);
                if (it == index.end()) {
                    it = index.emplace(std::string(c[0]), ds.mixed.size()).first;
                    ds.ids.emplace_back(c[0]);
                    ds.mixed.push_back({});
                    event_row.push_back(-1);
                }
                auto& s = ds.mixed[it->second];
                if (!s.times.empty() && !(t > s.times.back())) {
                    detail::fail_line(line, "times for id '" + it->first + "' are not strictly increasing");
                }
                if (d == 1) {
                    if (event_row[it->second] >= 0) detail::fail_line(line, "id '" + it->first + "' has more than one delta=1");
                    event_row[it->second] = static_cast<int>(s.times.size());
                }
                s.times.push_back(t);
            }
            for (std::size_t i = 0; i < ds.mixed.size(); ++i) {
                auto& s = ds.mixed[i];
                s.category = event_row[i] >= 0 ? event_row[i] + 1 : static_cast<int>(s.times.size()) + 1;
            }
            break;
        }
    }
    if (ds.size() == 0) throw InputError("dataset has no rows");
    return ds;
}

// Canonical text: header, one row per record in stored order, LF endings. In
// mixed-long form every exam is written; delta=1 marks the event cell.
inline std::string serialize_dataset(const Dataset& ds) {
    std::ostringstream out;
    switch (ds.format) {
        case DatasetFormat::current_status:
            out << "t,delta\n";
            for (const auto& r : ds.current_status) out << format_number(r.t) << ',' << r.delta << '\n';
            break;
        case DatasetFormat::intervals:
            out << "left,right\n";
            for (const auto& iv : ds.intervals) {
                out << format_number(iv.l) << ',' << (iv.right_censored() ? std::string("inf") : format_number(iv.r))
                    << '\n';
            }
            break;
        case DatasetFormat::mixed_long:
            out << "id,time,delta\n";
            for (std::size_t i = 0; i < ds.mixed.size(); ++i) {
                const auto& s = ds.mixed[i];
                for (std::size_t k = 0; k < s.times.size(); ++k) {
                    out << ds.ids[i] << ',' << format_number(s.times[k]) << ','
                        << (static_cast<int>(k) + 1 == s.category ? 1 : 0) << '\n';
                }
            }
            break;
    }
    return out.str();
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace icboot
