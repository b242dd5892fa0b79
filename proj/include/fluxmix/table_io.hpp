#pragma once

// CSV (RFC 4180) and JSON serialisation of sweep tables.
// Numbers are written in scientific notation with 17 significant digits.

#include "fluxmix/sweep.hpp"

#include <json.hpp>

#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fluxmix {

struct column_def
{
    std::string name;
    std::function<double(const sweep_row&)> value;
};

/// Numeric columns present in `table`, in output order. The text column
/// "status" is always appended by the writers.
inline std::vector<column_def> table_columns(const sweep_table& table)
{
    std::vector<column_def> cols = {
        {"f", [](const sweep_row& r) { return r.f; }},
        {"E1", [](const sweep_row& r) { return r.energies[0]; }},
        {"E2", [](const sweep_row& r) { return r.energies[1]; }},
        {"E3", [](const sweep_row& r) { return r.energies[2]; }},
        {"nu21", [](const sweep_row& r) { return r.nu21; }},
        {"nu31", [](const sweep_row& r) { return r.nu31; }},
        {"nu32", [](const sweep_row& r) { return r.nu32; }},
        {"abs_i12", [](const sweep_row& r) { return r.abs_i12; }},
        {"abs_i23", [](const sweep_row& r) { return r.abs_i23; }},
        {"abs_i13", [](const sweep_row& r) { return r.abs_i13; }},
        {"R", [](const sweep_row& r) { return r.R; }},
        {"R1", [](const sweep_row& r) { return r.R1; }},
        {"R2", [](const sweep_row& r) { return r.R2; }},
        {"delta", [](const sweep_row& r) { return r.delta; }},
    };
    if (table.columns.detuning) {
        cols.push_back({"detuning21", [](const sweep_row& r) { return r.detuning.value()[0]; }});
        cols.push_back({"detuning31", [](const sweep_row& r) { return r.detuning.value()[1]; }});
        cols.push_back({"detuning32", [](const sweep_row& r) { return r.detuning.value()[2]; }});
    }
    if (table.columns.chi) {
        cols.push_back({"chi_sum", [](const sweep_row& r) { return r.chi.value()[0]; }});
        cols.push_back({"chi_diff", [](const sweep_row& r) { return r.chi.value()[1]; }});
        cols.push_back({"chi_shg", [](const sweep_row& r) { return r.chi.value()[2]; }});
    }
    return cols;
}

/// Picks the named columns; throws when one is missing.
inline std::vector<column_def> select_columns(const sweep_table& table,
                                              const std::vector<std::string>& names)
{
    const auto all = table_columns(table);
    std::vector<column_def> out;
    for (const auto& name : names) {
        auto it = std::find_if(all.begin(), all.end(),
                               [&](const column_def& c) { return c.name == name; });
        if (it == all.end())
            throw invalid_argument_error("unknown column \"" + name + "\"");
        out.push_back(*it);
    }
    return out;
}

inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const sweep_table& table,
                      const std::vector<column_def>& cols, bool with_status = true)
{
    for (std::size_t c = 0; c < cols.size(); ++c)
        os << (c ? "," : "") << csv_field(cols[c].name);
    if (with_status)
        os << ",status";
    os << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            os << (c ? "," : "") << format_number(cols[c].value(row));
        if (with_status)
            os << "," << csv_field(row.status);
        os << "\r\n";
    }
}

inline void write_csv(std::ostream& os, const sweep_table& table)
{
    write_csv(os, table, table_columns(table));
}

inline void write_json(std::ostream& os, const sweep_table& table)
{
    const auto cols = table_columns(table);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (const auto& c : cols)
            obj[c.name] = c.value(row);
        obj["status"] = row.status;
        rows.push_back(std::move(obj));
    }
    os << rows.dump(2) << "\n";
}

/// Parsed CSV document: header plus records of raw fields.
struct csv_document
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> records;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw invalid_argument_error("CSV has no column \"" + name + "\"");
    }
};

/// RFC 4180 reader (CRLF or LF line endings).
inline csv_document read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            if (any || !field.empty()) {
                record.push_back(std::move(field));
                lines.push_back(std::move(record));
            }
            record.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted)
        throw invalid_argument_error("unterminated quoted CSV field");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        lines.push_back(std::move(record));
    }
    csv_document doc;
    if (lines.empty())
        return doc;
    doc.header = std::move(lines.front());
    doc.records.assign(std::make_move_iterator(lines.begin() + 1),
                       std::make_move_iterator(lines.end()));
    return doc;
}

} // namespace fluxmix
