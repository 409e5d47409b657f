#pragma once

// Hourly price / wind CSV ingestion and export.
//
//   price CSV: header `timestamp,price`, one ISO-8601 hourly row per slot
//   wind CSV:  header `timestamp,wind_mw`, same timestamp grid (MW x 1 h = MWh)

#include <iosfwd>
#include <string>
#include <vector>

#include "storeoffer/errors.hpp"
#include "storeoffer/market.hpp"

namespace storeoffer {

/// Malformed CSV content; the message names the offending line.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct BoundsMode {
    enum class Kind { explicit_bounds, derive, clip };
    Kind kind = Kind::derive;
    double p_min = 0.0;
    double p_max = 0.0;

    /// Prices outside [p_min, p_max] are rejected.
    static BoundsMode fixed(double p_min, double p_max) { return {Kind::explicit_bounds, p_min, p_max}; }
    /// Prices outside [p_min, p_max] are clipped onto the bounds.
    static BoundsMode clipped(double p_min, double p_max) { return {Kind::clip, p_min, p_max}; }
    /// Bounds taken from the observed min and max price.
    static BoundsMode derived() { return {Kind::derive, 0.0, 0.0}; }
};

struct SeriesRow {
    std::string timestamp;
    double value = 0.0;
};

/// Reads a two-column CSV whose header must be `timestamp,<value_column>`.
std::vector<SeriesRow> read_series_csv(std::istream& in, const std::string& value_column,
                                       const std::string& source = "<stream>");

Trace load_trace(std::istream& prices, std::istream& wind, const BoundsMode& mode);
/// Throws IoError when a file cannot be opened.
Trace load_trace(const std::string& price_path, const std::string& wind_path, const BoundsMode& mode);

/// ISO-8601 timestamp `hours` after 2015-01-01T00:00:00Z.
std::string hourly_timestamp(std::size_t hours);

void write_price_csv(std::ostream& out, const Trace& trace);
void write_wind_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const Trace& trace, const std::string& price_path, const std::string& wind_path);

}  // namespace storeoffer
