#pragma once

// Run configuration: a JSON document with optional sections
//
//   {
//     "circuit": {"ej_over_h": 192, "alpha": 0.8, "ej_over_ec": 48, "f": 0.5,
//                 "ec_convention": "e2_over_2c"},
//     "basis":   {"n_max": 12, "m_max": 12},
//     "rates":   {"gamma11": 0, "gamma22": 0.02, "gamma33": 0.01,
//                 "gamma12": 0.05, "gamma13": 0.01, "gamma23": 0.01},
//     "sweep":   {"f_min": 0.47, "f_max": 0.53, "steps": 601},
//     "output":  {"format": "csv", "path": "", "dir": "."}
//   }
//
// Energies and rates are in GHz. Omitted keys take the defaults above; unknown
// keys are rejected with their key path. The JSON Schema is `config_schema()`.

#include "fluxmix/circuit.hpp"
#include "fluxmix/errors.hpp"
#include "fluxmix/response.hpp"

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

namespace fluxmix {

struct sweep_grid
{
    double f_min = 0.47;
    double f_max = 0.53;
    int steps = 601;

    bool operator==(const sweep_grid&) const = default;
};

struct output_spec
{
    std::string format = "csv"; // csv | json
    std::string path;           // empty: stdout where applicable
    std::string dir = ".";

    bool operator==(const output_spec&) const = default;
};

struct run_config
{
    circuit_params circuit;
    basis_spec basis;
    decoherence_rates rates;
    sweep_grid sweep;
    output_spec output;

    bool operator==(const run_config&) const = default;
};

struct parsed_config
{
    run_config config;
    /// Defaults applied and advisory warnings, in document order.
    std::vector<std::string> notes;
};

namespace detail {

using json = nlohmann::json;

class section_reader
{
public:
    section_reader(const json& doc, std::string path, std::vector<std::string>& notes)
        : doc_(doc), path_(std::move(path)), notes_(notes)
    {
        if (!doc_.is_object())
            throw config_error(path_, "expected an object");
    }

    void reject_unknown(std::initializer_list<const char*> known) const
    {
        for (const auto& [key, value] : doc_.items()) {
            bool found = false;
            for (const char* k : known)
                found = found || key == k;
            if (!found)
                throw config_error(path_ + "." + key, "unknown key");
        }
    }

    void number(const char* key, double& target)
    {
        const auto it = doc_.find(key);
        if (it == doc_.end()) {
            default_note(key, json(target).dump());
            return;
        }
        if (!it->is_number())
            throw config_error(path_ + "." + key, "expected a number");
        target = it->get<double>();
    }

    void integer(const char* key, int& target)
    {
        const auto it = doc_.find(key);
        if (it == doc_.end()) {
            default_note(key, std::to_string(target));
            return;
        }
        if (!it->is_number_integer())
            throw config_error(path_ + "." + key, "expected an integer");
        target = it->get<int>();
    }

    void string(const char* key, std::string& target)
    {
        const auto it = doc_.find(key);
        if (it == doc_.end()) {
            default_note(key, "\"" + target + "\"");
            return;
        }
        if (!it->is_string())
            throw config_error(path_ + "." + key, "expected a string");
        target = it->get<std::string>();
    }

    const std::string& path() const { return path_; }

private:
    void default_note(const char* key, const std::string& value)
    {
        notes_.push_back("default " + path_ + "." + key + " = " + value);
    }

    const json& doc_;
    std::string path_;
    std::vector<std::string>& notes_;
};

inline const json& section(const json& root, const char* key)
{
    static const json empty = json::object();
    const auto it = root.find(key);
    return it == root.end() ? empty : *it;
}

} // namespace detail

inline parsed_config parse_config(const std::string& text)
{
    using detail::json;
    parsed_config out;
    auto& cfg = out.config;
    auto& notes = out.notes;

    json root;
    bool blank = true;
    for (const char c : text)
        blank = blank && std::isspace(static_cast<unsigned char>(c));
    if (blank) {
        root = json::object();
    } else {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw config_error("$", std::string("syntax error: ") + e.what());
        }
    }
    if (!root.is_object())
        throw config_error("$", "top level must be an object");
    for (const auto& [key, value] : root.items())
        if (key != "circuit" && key != "basis" && key != "rates" && key != "sweep" &&
            key != "output")
            throw config_error("$." + key, "unknown key");

    {
        detail::section_reader r(detail::section(root, "circuit"), "$.circuit", notes);
        r.reject_unknown({"ej_over_h", "alpha", "ej_over_ec", "f", "ec_convention"});
        r.number("ej_over_h", cfg.circuit.ej_over_h);
        r.number("alpha", cfg.circuit.alpha);
        r.number("ej_over_ec", cfg.circuit.ej_over_ec);
        r.number("f", cfg.circuit.f);
        std::string conv = to_string(cfg.circuit.convention);
        r.string("ec_convention", conv);
        if (conv == "e2_over_2c")
            cfg.circuit.convention = charging_convention::e2_over_2c;
        else if (conv == "e2_over_c")
            cfg.circuit.convention = charging_convention::e2_over_c;
        else
            throw config_error("$.circuit.ec_convention",
                               "expected \"e2_over_2c\" or \"e2_over_c\"");
        try {
            validate(cfg.circuit);
        } catch (const error& e) {
            throw config_error("$.circuit", e.what());
        }
        if (auto w = alpha_warning(cfg.circuit); !w.empty())
            notes.push_back("warning $.circuit.alpha: " + w);
    }
    {
        detail::section_reader r(detail::section(root, "basis"), "$.basis", notes);
        r.reject_unknown({"n_max", "m_max"});
        r.integer("n_max", cfg.basis.n_max);
        r.integer("m_max", cfg.basis.m_max);
        if (cfg.basis.n_max < min_truncation || cfg.basis.m_max < min_truncation)
            throw config_error("$.basis", "n_max and m_max must be at least 4");
    }
    {
        detail::section_reader r(detail::section(root, "rates"), "$.rates", notes);
        r.reject_unknown({"gamma11", "gamma22", "gamma33", "gamma12", "gamma13", "gamma23"});
        r.number("gamma11", cfg.rates.gamma11);
        r.number("gamma22", cfg.rates.gamma22);
        r.number("gamma33", cfg.rates.gamma33);
        r.number("gamma12", cfg.rates.gamma12);
        r.number("gamma13", cfg.rates.gamma13);
        r.number("gamma23", cfg.rates.gamma23);
        try {
            validate(cfg.rates);
        } catch (const error& e) {
            throw config_error("$.rates", e.what());
        }
    }
    {
        detail::section_reader r(detail::section(root, "sweep"), "$.sweep", notes);
        r.reject_unknown({"f_min", "f_max", "steps"});
        r.number("f_min", cfg.sweep.f_min);
        r.number("f_max", cfg.sweep.f_max);
        r.integer("steps", cfg.sweep.steps);
        if (!(cfg.sweep.f_min >= 0.0 && cfg.sweep.f_max <= 1.0 &&
              cfg.sweep.f_min < cfg.sweep.f_max))
            throw config_error("$.sweep", "need 0 <= f_min < f_max <= 1");
        if (cfg.sweep.steps < 2)
            throw config_error("$.sweep.steps", "need at least 2 steps");
    }
    {
        detail::section_reader r(detail::section(root, "output"), "$.output", notes);
        r.reject_unknown({"format", "path", "dir"});
        r.string("format", cfg.output.format);
        r.string("path", cfg.output.path);
        r.string("dir", cfg.output.dir);
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw config_error("$.output.format", "expected \"csv\" or \"json\"");
    }
    return out;
}

inline std::string serialize_config(const run_config& cfg)
{
    using detail::json;
    json root;
    root["circuit"] = {{"ej_over_h", cfg.circuit.ej_over_h},
                       {"alpha", cfg.circuit.alpha},
                       {"ej_over_ec", cfg.circuit.ej_over_ec},
                       {"f", cfg.circuit.f},
                       {"ec_convention", to_string(cfg.circuit.convention)}};
    root["basis"] = {{"n_max", cfg.basis.n_max}, {"m_max", cfg.basis.m_max}};
    root["rates"] = {{"gamma11", cfg.rates.gamma11}, {"gamma22", cfg.rates.gamma22},
                     {"gamma33", cfg.rates.gamma33}, {"gamma12", cfg.rates.gamma12},
                     {"gamma13", cfg.rates.gamma13}, {"gamma23", cfg.rates.gamma23}};
    root["sweep"] = {{"f_min", cfg.sweep.f_min},
                     {"f_max", cfg.sweep.f_max},
                     {"steps", cfg.sweep.steps}};
    root["output"] = {{"format", cfg.output.format},
                      {"path", cfg.output.path},
                      {"dir", cfg.output.dir}};
    return root.dump(2) + "\n";
}

/// JSON Schema (draft-07) of the configuration document.
inline std::string config_schema()
{
    using detail::json;
    auto num = [](double def) { return json{{"type", "number"}, {"default", def}}; };
    auto integer = [](int def) { return json{{"type", "integer"}, {"default", def}}; };
    auto object = [](json props) {
        return json{{"type", "object"}, {"additionalProperties", false}, {"properties", props}};
    };
    const run_config d;
    json schema = object({
        {"circuit",
         object({{"ej_over_h", num(d.circuit.ej_over_h)},
                 {"alpha", num(d.circuit.alpha)},
                 {"ej_over_ec", num(d.circuit.ej_over_ec)},
                 {"f", json{{"type", "number"}, {"minimum", 0}, {"maximum", 1}, {"default", 0.5}}},
                 {"ec_convention",
                  json{{"enum", {"e2_over_2c", "e2_over_c"}}, {"default", "e2_over_2c"}}}})},
        {"basis", object({{"n_max", integer(d.basis.n_max)}, {"m_max", integer(d.basis.m_max)}})},
        {"rates", object({{"gamma11", num(d.rates.gamma11)},
                          {"gamma22", num(d.rates.gamma22)},
                          {"gamma33", num(d.rates.gamma33)},
                          {"gamma12", num(d.rates.gamma12)},
                          {"gamma13", num(d.rates.gamma13)},
                          {"gamma23", num(d.rates.gamma23)}})},
        {"sweep", object({{"f_min", num(d.sweep.f_min)},
                          {"f_max", num(d.sweep.f_max)},
                          {"steps", integer(d.sweep.steps)}})},
        {"output", object({{"format", json{{"enum", {"csv", "json"}}, {"default", "csv"}}},
                           {"path", json{{"type", "string"}, {"default", ""}}},
                           {"dir", json{{"type", "string"}, {"default", "."}}}})},
    });
    schema["$schema"] = "http://json-schema.org/draft-07/schema#";
    schema["title"] = "fluxmix run configuration";
    return schema.dump(2) + "\n";
}

} // namespace fluxmix
