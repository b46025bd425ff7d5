#pragma once

// Text serialisation: fixed field order, "%.17g" numbers, LF line endings,
// so outputs are byte-stable across runs and platforms.

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "grushin/certify.hpp"

namespace grushin {

inline std::string format_real(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += ch;
        }
    }
    return out + "\"";
}

/// Certificate as a single-line JSON object. With timing disabled wall_ms is
/// written as 0, which makes documents comparable byte for byte.
inline std::string to_json(const Certificate& c, bool timing = true) {
    std::string out = "{";
    out += "\"claim\":" + json_string(c.claim_id);
    out += ",\"lambda\":" + format_real(c.params.lambda);
    out += ",\"m\":" + std::to_string(c.params.m);
    out += ",\"n\":" + std::to_string(c.params.n);
    out += ",\"status\":" + json_string(to_string(c.status));
    if (c.witness) {
        out += ",\"witness\":{\"r\":" + format_real(c.witness->r) + ",\"value\":" + format_real(c.witness->value) +
               ",\"bound\":" + format_real(c.witness->bound) + "}";
    } else {
        out += ",\"witness\":null";
    }
    out += ",\"min_lo\":" + format_real(c.min_enclosure.lo());
    out += ",\"min_hi\":" + format_real(c.min_enclosure.hi());
    out += ",\"boxes\":" + std::to_string(c.boxes_processed);
    out += ",\"depth\":" + std::to_string(c.max_depth);
    out += ",\"wall_ms\":" + format_real(timing ? c.wall_ms : 0.0);
    return out + "}";
}

/// Minimal CSV table: header line then one row per record, LF terminated.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { append_row(header); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_real(v));
        append_row(cells);
    }

    void row(const std::vector<std::string>& cells) { append_row(cells); }

    [[nodiscard]] const std::string& str() const { return text_; }

private:
    void append_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: row width differs from header");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::size_t columns_;
    std::string text_;
};

}  // namespace grushin
