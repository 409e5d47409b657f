#include "storeoffer/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace storeoffer {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::vector<SeriesRow> read_series_csv(std::istream& in, const std::string& value_column,
                                       const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<SeriesRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto comma = text.find(',');
        if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
            throw ParseError(source, lineno, "expected exactly two comma-separated fields");
        }
        const std::string first = trim(std::string_view(text).substr(0, comma));
        const std::string second = trim(std::string_view(text).substr(comma + 1));
        if (!header_seen) {
            if (first != "timestamp" || second != value_column) {
                throw ParseError(source, lineno, "header must be 'timestamp," + value_column + "'");
            }
            header_seen = true;
            continue;
        }
        SeriesRow row{first, 0.0};
        if (row.timestamp.empty()) throw ParseError(source, lineno, "empty timestamp");
        if (!parse_double(second, row.value)) {
            throw ParseError(source, lineno, "'" + second + "' is not a number");
        }
        if (row.value < 0.0) throw ParseError(source, lineno, "negative value " + second);
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError(source, lineno, "missing header");
    return rows;
}

Trace load_trace(std::istream& prices, std::istream& wind, const BoundsMode& mode) {
    const auto price_rows = read_series_csv(prices, "price", "price csv");
    const auto wind_rows = read_series_csv(wind, "wind_mw", "wind csv");
    if (price_rows.size() != wind_rows.size()) {
        throw ValidationError("price and wind series are misaligned: " + std::to_string(price_rows.size()) +
                              " vs " + std::to_string(wind_rows.size()) + " rows");
    }
    if (price_rows.empty()) throw ValidationError("trace files contain no data rows");

    std::vector<TraceSlot> slots;
    slots.reserve(price_rows.size());
    for (std::size_t i = 0; i < price_rows.size(); ++i) {
        if (price_rows[i].timestamp != wind_rows[i].timestamp) {
            throw ValidationError("row " + std::to_string(i + 1) + ": timestamps differ (" +
                                  price_rows[i].timestamp + " vs " + wind_rows[i].timestamp + ")");
        }
        if (!(price_rows[i].value > 0.0)) {
            throw ValidationError("row " + std::to_string(i + 1) + ": price must be > 0");
        }
        slots.push_back({price_rows[i].value, wind_rows[i].value});
    }

    switch (mode.kind) {
        case BoundsMode::Kind::derive: {
            const auto [lo, hi] = std::minmax_element(slots.begin(), slots.end(),
                [](const TraceSlot& a, const TraceSlot& b) { return a.price < b.price; });
            return Trace(std::move(slots), PriceBounds(lo->price, hi->price));
        }
        case BoundsMode::Kind::clip: {
            const PriceBounds bounds(mode.p_min, mode.p_max);
            for (auto& s : slots) s.price = std::clamp(s.price, bounds.p_min(), bounds.p_max());
            return Trace(std::move(slots), bounds);
        }
        case BoundsMode::Kind::explicit_bounds: {
            const PriceBounds bounds(mode.p_min, mode.p_max);
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!bounds.contains(slots[i].price)) {
                    throw ValidationError("row " + std::to_string(i + 1) + " (" + price_rows[i].timestamp +
                                          "): price " + format_number(slots[i].price) + " outside [" +
                                          format_number(bounds.p_min()) + ", " + format_number(bounds.p_max()) +
                                          "]; use clipping to accept it");
                }
            }
            return Trace(std::move(slots), bounds);
        }
    }
    throw ValidationError("unknown bounds mode");
}

Trace load_trace(const std::string& price_path, const std::string& wind_path, const BoundsMode& mode) {
    auto prices = open_input(price_path);
    auto wind = open_input(wind_path);
    return load_trace(prices, wind, mode);
}

std::string hourly_timestamp(std::size_t hours) {
    using namespace std::chrono;
    const sys_days start = year{2015} / January / 1;
    const auto when = start + std::chrono::hours(static_cast<long long>(hours));
    const auto day = floor<days>(when);
    const year_month_day ymd(day);
    const auto hour = duration_cast<std::chrono::hours>(when - day).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:00:00Z", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hour));
    return buf;
}

void write_price_csv(std::ostream& out, const Trace& trace) {
    out << "timestamp,price\n";
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        out << hourly_timestamp(t) << ',' << format_number(trace[t].price) << '\n';
    }
}

void write_wind_csv(std::ostream& out, const Trace& trace) {
    out << "timestamp,wind_mw\n";
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        out << hourly_timestamp(t) << ',' << format_number(trace[t].renewable_output) << '\n';
    }
}

void write_trace_csv(const Trace& trace, const std::string& price_path, const std::string& wind_path) {
    auto prices = open_output(price_path);
    write_price_csv(prices, trace);
    auto wind = open_output(wind_path);
    write_wind_csv(wind, trace);
    if (!prices || !wind) throw IoError("failed writing trace CSVs");
}

}  // namespace storeoffer
