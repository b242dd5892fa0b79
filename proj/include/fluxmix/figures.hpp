#pragma once

// Data files and plots for the standard flux-dependence figures.

#include "fluxmix/config.hpp"
#include "fluxmix/svg_plot.hpp"
#include "fluxmix/table_io.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fluxmix {

struct figure_spec
{
    std::string id;
    std::string title;
    std::string y_label;
    std::vector<std::string> columns;
    sweep_columns needs;
};

inline const std::vector<figure_spec>& figure_catalog()
{
    static const std::vector<figure_spec> catalog = {
        {"2a", "Transition elements |i_ij| = |I_ij| / I_0", "|i_ij|",
         {"abs_i12", "abs_i23", "abs_i13"}, {}},
        {"2b", "R(f) = |i12 i23 i31|", "R", {"R"}, {}},
        {"2c", "Transition-frequency detuning from f = 0.5", "GHz",
         {"detuning21", "detuning31", "detuning32"}, {.detuning = true}},
        {"3a", "Transition frequencies nu_ij", "GHz", {"nu21", "nu31", "nu32"}, {}},
        {"3b", "Second-harmonic |chi2(2 w)|", "I0^3 / (rad/ns)^2", {"chi_shg"}, {.chi = true}},
        {"4a", "R1(f) = |i21 i32|", "R1", {"R1"}, {}},
        {"4b", "R2(f) = |i13 i32|", "R2", {"R2"}, {}},
    };
    return catalog;
}

inline const figure_spec& find_figure(const std::string& id)
{
    for (const auto& fig : figure_catalog())
        if (fig.id == id)
            return fig;
    throw invalid_argument_error("unknown figure \"" + id + "\" (expected 2a|2b|2c|3a|3b|4a|4b)");
}

inline sweep_table figure_table(const figure_spec& fig, const run_config& cfg)
{
    sweep_request req;
    req.params = cfg.circuit;
    req.basis = cfg.basis;
    req.rates = cfg.rates;
    req.f_min = cfg.sweep.f_min;
    req.f_max = cfg.sweep.f_max;
    req.steps = cfg.sweep.steps;
    req.columns = fig.needs;
    return sweep(req);
}

/// CSV text of the figure data: f followed by the figure's columns.
inline std::string figure_csv(const figure_spec& fig, const sweep_table& table)
{
    std::vector<std::string> names = {"f"};
    names.insert(names.end(), fig.columns.begin(), fig.columns.end());
    std::ostringstream os;
    write_csv(os, table, select_columns(table, names), false);
    return os.str();
}

inline std::string figure_svg(const figure_spec& fig, const sweep_table& table)
{
    plot_style style;
    style.title = "Fig. " + fig.id + ": " + fig.title;
    style.y_label = fig.y_label;
    return render_plot(table, fig.columns, style);
}

struct figure_files
{
    std::filesystem::path data;
    std::filesystem::path plot;
};

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw error("io", "cannot open " + p.string() + " for writing");
    out << text;
}

inline figure_files write_figure(const figure_spec& fig, const sweep_table& table,
                                 const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    figure_files files{out_dir / ("fig" + fig.id + ".csv"), out_dir / ("fig" + fig.id + ".svg")};
    write_text(files.data, figure_csv(fig, table));
    write_text(files.plot, figure_svg(fig, table));
    return files;
}

} // namespace detail

inline figure_files reproduce_figure(const std::string& id, const run_config& cfg,
                                     const std::filesystem::path& out_dir)
{
    const auto& fig = find_figure(id);
    return detail::write_figure(fig, figure_table(fig, cfg), out_dir);
}

/// Several figures from one sweep carrying every column they need. Rows do not
/// depend on which optional columns are computed, so the files are identical to
/// per-figure runs.
inline std::vector<figure_files> reproduce_figures(const std::vector<std::string>& ids,
                                                   const run_config& cfg,
                                                   const std::filesystem::path& out_dir)
{
    std::vector<const figure_spec*> figs;
    figure_spec merged;
    for (const auto& id : ids) {
        figs.push_back(&find_figure(id));
        merged.needs.chi = merged.needs.chi || figs.back()->needs.chi;
        merged.needs.detuning = merged.needs.detuning || figs.back()->needs.detuning;
    }
    std::vector<figure_files> out;
    if (figs.empty())
        return out;
    const sweep_table table = figure_table(merged, cfg);
    for (const auto* fig : figs)
        out.push_back(detail::write_figure(*fig, table, out_dir));
    return out;
}

} // namespace fluxmix
