#pragma once

// Minimal deterministic SVG 1.1 line plots of sweep-table columns against f.

#include "fluxmix/table_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fluxmix {

struct plot_style
{
    int width = 720;
    int height = 450;
    int margin_left = 80;
    int margin_right = 150;
    int margin_top = 40;
    int margin_bottom = 55;
    std::string title;
    std::string x_label = "f";
    std::string y_label;
};

namespace detail {

inline std::string fixed(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string tick_label(double v)
{
    char buf[48];
    if (v != 0.0 && (std::abs(v) < 1e-3 || std::abs(v) >= 1e5))
        std::snprintf(buf, sizeof buf, "%.2e", v);
    else
        std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline constexpr std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                       "#9467bd", "#ff7f0e", "#17becf"};

} // namespace detail

/// Renders the named columns as one polyline each. Byte-stable for identical
/// input.
inline std::string render_plot(const sweep_table& table, const std::vector<std::string>& columns,
                               const plot_style& style = {})
{
    if (table.rows.empty())
        throw invalid_argument_error("cannot plot an empty table");
    if (columns.empty())
        throw invalid_argument_error("no columns requested for plotting");
    const auto cols = select_columns(table, columns);

    double x_lo = table.rows.front().f;
    double x_hi = table.rows.back().f;
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : table.rows)
        for (const auto& c : cols) {
            const double v = c.value(row);
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    if (x_hi <= x_lo)
        x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    } else {
        const double pad = 0.05 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;
    }

    const double px0 = style.margin_left;
    const double px1 = style.width - style.margin_right;
    const double py0 = style.height - style.margin_bottom;
    const double py1 = style.margin_top;
    auto sx = [&](double x) { return px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0); };
    auto sy = [&](double y) { return py0 + (y - y_lo) / (y_hi - y_lo) * (py1 - py0); };

    using detail::fixed;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
       << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << " "
       << style.height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
       << "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        os << "<text x=\"" << fixed((px0 + px1) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"15\">" << detail::xml_escape(style.title)
           << "</text>\n";

    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
       << "<rect x=\"" << fixed(px0) << "\" y=\"" << fixed(py1) << "\" width=\""
       << fixed(px1 - px0) << "\" height=\"" << fixed(py0 - py1) << "\"/>\n";
    constexpr int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double x = sx(x_lo + (x_hi - x_lo) * k / ticks);
        const double y = sy(y_lo + (y_hi - y_lo) * k / ticks);
        os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(py0) << "\" x2=\"" << fixed(x)
           << "\" y2=\"" << fixed(py0 + 5) << "\"/>\n"
           << "<line x1=\"" << fixed(px0 - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(px0)
           << "\" y2=\"" << fixed(y) << "\"/>\n";
    }
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (int k = 0; k <= ticks; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / ticks;
        const double yv = y_lo + (y_hi - y_lo) * k / ticks;
        os << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(py0 + 18)
           << "\" text-anchor=\"middle\">" << detail::tick_label(xv) << "</text>\n"
           << "<text x=\"" << fixed(px0 - 8) << "\" y=\"" << fixed(sy(yv) + 4)
           << "\" text-anchor=\"end\">" << detail::tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << fixed((px0 + px1) / 2) << "\" y=\"" << fixed(style.height - 12.0)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << detail::xml_escape(style.x_label)
       << "</text>\n";
    if (!style.y_label.empty())
        os << "<text x=\"18\" y=\"" << fixed((py0 + py1) / 2)
           << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
           << fixed((py0 + py1) / 2) << ")\">" << detail::xml_escape(style.y_label)
           << "</text>\n";
    os << "</g>\n";

    for (std::size_t c = 0; c < cols.size(); ++c) {
        const char* color = detail::palette[c % detail::palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            os << (r ? " " : "") << fixed(sx(row.f)) << "," << fixed(sy(cols[c].value(row)));
        }
        os << "\"/>\n";
        const double ly = py1 + 14.0 + 18.0 * static_cast<double>(c);
        os << "<line x1=\"" << fixed(px1 + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
           << fixed(px1 + 36) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << fixed(px1 + 42) << "\" y=\"" << fixed(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << detail::xml_escape(cols[c].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void emit_plot(const sweep_table& table, const std::vector<std::string>& columns,
                      const std::string& path, const plot_style& style = {})
{
    const std::string svg = render_plot(table, columns, style);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw error("io", "cannot open " + path + " for writing");
    out << svg;
}

} // namespace fluxmix
