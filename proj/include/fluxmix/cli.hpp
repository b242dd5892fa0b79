#pragma once

// Command-line front end. `run_cli` is the whole program; tools/fluxmix.cpp
// only forwards argv.

#include "fluxmix/config.hpp"
#include "fluxmix/figures.hpp"
#include "fluxmix/lindblad.hpp"
#include "fluxmix/sweep.hpp"
#include "fluxmix/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fluxmix {

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("io", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Relative output paths resolve against FLUXMIX_OUT when it is set.
inline std::filesystem::path output_path(const std::string& p)
{
    std::filesystem::path path(p);
    if (path.is_relative())
        if (const char* base = std::getenv("FLUXMIX_OUT"); base && *base)
            return std::filesystem::path(base) / path;
    return path;
}

inline std::string complex_text(complex z)
{
    return format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") +
           format_number(std::abs(z.imag())) + "i";
}

inline void error_record(std::ostream& err, const std::string& kind, const std::string& message)
{
    nlohmann::ordered_json rec;
    rec["error"] = {{"kind", kind}, {"message", message}};
    err << rec.dump() << "\n";
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"fluxmix: spectrum and three-wave mixing of a three-junction flux qutrit"};
    app.require_subcommand(1);

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
    };

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Lowest levels and transition elements");
    std::optional<double> spec_f;
    int levels = 3;
    spectrum_cmd->add_option("--f", spec_f, "Reduced flux");
    spectrum_cmd->add_option("--levels", levels, "Number of levels to print")->check(CLI::Range(3, 50));
    add_config(spectrum_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate a flux sweep");
    std::optional<double> f_min, f_max;
    std::optional<int> steps;
    std::string sweep_out, sweep_format;
    bool with_chi = false, with_detuning = false;
    sweep_cmd->add_option("--f-min", f_min);
    sweep_cmd->add_option("--f-max", f_max);
    sweep_cmd->add_option("--steps", steps);
    sweep_cmd->add_option("--out", sweep_out, "Output file (stdout when omitted)");
    sweep_cmd->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_flag("--chi", with_chi, "Add resonant |chi2| columns");
    sweep_cmd->add_flag("--detuning", with_detuning, "Add nu_ij(f) - nu_ij(0.5) columns");
    add_config(sweep_cmd);

    // chi2
    auto* chi_cmd = app.add_subcommand("chi2", "Closed-form second-order susceptibility");
    std::string chi_kind = "sum";
    std::optional<double> chi_f, nu1, nu2;
    chi_cmd->add_option("--kind", chi_kind)->check(CLI::IsMember({"sum", "diff", "shg"}));
    chi_cmd->add_option("--f", chi_f);
    chi_cmd->add_option("--nu1", nu1, "Drive 1 frequency, GHz (resonant when omitted)");
    chi_cmd->add_option("--nu2", nu2, "Drive 2 frequency, GHz (resonant when omitted)");
    add_config(chi_cmd);

    // shg-point
    auto* shg_cmd = app.add_subcommand("shg-point", "Flux where nu31 = 2 nu21");
    std::vector<double> shg_bracket = {0.48, 0.495};
    double shg_tol = 1e-6;
    shg_cmd->add_option("--bracket", shg_bracket, "f_lo f_hi")->expected(2);
    shg_cmd->add_option("--tol", shg_tol, "Tolerance on |delta|, GHz");
    add_config(shg_cmd);

    // r-max
    auto* rmax_cmd = app.add_subcommand("r-max", "Flux maximising R = |i12 i23 i31|");
    std::vector<double> rmax_bracket = {0.4985, 0.5};
    double rmax_tol = 1e-5;
    rmax_cmd->add_option("--bracket", rmax_bracket, "f_lo f_hi")->expected(2);
    rmax_cmd->add_option("--tol", rmax_tol, "Tolerance on f");
    add_config(rmax_cmd);

    // tunability
    auto* tun_cmd = app.add_subcommand("tunability", "Maximum transition-frequency excursions");
    double tun_lo = 0.5, tun_hi = 0.53;
    int tun_steps = 301;
    tun_cmd->add_option("--f-min", tun_lo);
    tun_cmd->add_option("--f-max", tun_hi);
    tun_cmd->add_option("--steps", tun_steps);
    add_config(tun_cmd);

    // oracle-check
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Master equation vs closed form");
    std::optional<double> oracle_f;
    std::string resonant = "sum";
    double detune = 0.0;
    oracle_cmd->add_option("--f", oracle_f);
    oracle_cmd->add_option("--resonant", resonant)->check(CLI::IsMember({"sum", "diff"}));
    oracle_cmd->add_option("--detune", detune, "Detuning of drive 1, GHz");
    add_config(oracle_cmd);

    // reproduce-figure
    auto* fig_cmd = app.add_subcommand("reproduce-figure", "Write figure data (CSV) and plot (SVG)");
    std::string fig_id;
    std::string fig_dir;
    fig_cmd->add_option("figure", fig_id, "2a|2b|2c|3a|3b|4a|4b|all")
        ->required()
        ->check(CLI::IsMember({"2a", "2b", "2c", "3a", "3b", "4a", "4b", "all"}));
    fig_cmd->add_option("--out-dir", fig_dir);
    add_config(fig_cmd);

    auto* schema_cmd = app.add_subcommand("config-schema", "Print the JSON Schema of --config files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        detail::error_record(err, "usage", e.what());
        return 2;
    }

    try {
        parsed_config parsed =
            parse_config(config_path.empty() ? std::string() : detail::read_file(config_path));
        for (const auto& note : parsed.notes)
            if (note.rfind("warning", 0) == 0)
                err << note << "\n";
        run_config& cfg = parsed.config;
        out << std::setprecision(17);

        if (spectrum_cmd->parsed()) {
            circuit_params p = cfg.circuit;
            if (spec_f)
                p.f = *spec_f;
            const spectrum s = solve_spectrum(p, cfg.basis, levels);
            const transition_data td =
                transition_data_from(s, build_current_operator(p, cfg.basis));
            out << "f: " << format_number(p.f) << "\n";
            for (Eigen::Index k = 0; k < s.levels(); ++k)
                out << "E" << k + 1 << ": " << format_number(s.energies[k]) << " GHz\n";
            out << "nu21: " << format_number(td.omega21) << " GHz\n"
                << "nu31: " << format_number(td.omega31) << " GHz\n"
                << "nu32: " << format_number(td.omega32) << " GHz\n"
                << "i12: " << detail::complex_text(td.i12) << "  |i12| = "
                << format_number(std::abs(td.i12)) << "\n"
                << "i23: " << detail::complex_text(td.i23) << "  |i23| = "
                << format_number(std::abs(td.i23)) << "\n"
                << "i13: " << detail::complex_text(td.i13) << "  |i13| = "
                << format_number(std::abs(td.i13)) << "\n";
            if (s.degenerate)
                out << "status: degenerate\n";
        } else if (sweep_cmd->parsed()) {
            sweep_request req;
            req.params = cfg.circuit;
            req.basis = cfg.basis;
            req.rates = cfg.rates;
            req.f_min = f_min.value_or(cfg.sweep.f_min);
            req.f_max = f_max.value_or(cfg.sweep.f_max);
            req.steps = steps.value_or(cfg.sweep.steps);
            req.columns = {with_detuning, with_chi};
            const sweep_table table = sweep(req);
            const std::string format = sweep_format.empty() ? cfg.output.format : sweep_format;
            const std::string target = sweep_out.empty() ? cfg.output.path : sweep_out;
            std::ostringstream body;
            if (format == "json")
                write_json(body, table);
            else
                write_csv(body, table);
            if (target.empty()) {
                out << body.str();
            } else {
                const auto path = detail::output_path(target);
                std::ofstream file(path, std::ios::binary);
                if (!file)
                    throw error("io", "cannot open " + path.string() + " for writing");
                file << body.str();
                out << "wrote " << table.rows.size() << " rows to " << path.string() << "\n";
            }
        } else if (chi_cmd->parsed()) {
            circuit_params p = cfg.circuit;
            if (chi_f)
                p.f = *chi_f;
            const transition_data td = compute_transition_data(p, cfg.basis);
            susceptibility chi;
            if (chi_kind == "sum") {
                chi = chi2_sum(td, cfg.rates, nu1.value_or(td.omega21), nu2.value_or(td.omega32));
            } else if (chi_kind == "diff") {
                chi = chi2_diff(td, cfg.rates, nu1.value_or(td.omega31), nu2.value_or(td.omega32));
            } else {
                const auto shg = chi2_shg(td, cfg.rates);
                chi = shg.chi;
                out << "delta: " << format_number(shg.delta) << " GHz\n";
            }
            out << "kind: " << to_string(chi.kind) << "\n"
                << "f: " << format_number(p.f) << "\n"
                << "nu1: " << format_number(chi.nu1) << " GHz\n"
                << "nu2: " << format_number(chi.nu2) << " GHz\n"
                << "nu_out: " << format_number(chi.nu_out) << " GHz\n"
                << "chi2: " << detail::complex_text(chi.value) << "\n"
                << "modulus: " << format_number(chi.modulus()) << "\n";
            if (chi.zero_frequency)
                out << "note: zero-frequency limit (formula substitution only)\n";
        } else if (shg_cmd->parsed() || rmax_cmd->parsed()) {
            const bool shg = shg_cmd->parsed();
            const auto& bracket = shg ? shg_bracket : rmax_bracket;
            const search_result r =
                shg ? find_harmonic_flux(cfg.circuit, cfg.basis, bracket[0], bracket[1], shg_tol)
                    : find_r_max(cfg.circuit, cfg.basis, bracket[0], bracket[1], rmax_tol);
            out << "f_star: " << format_number(r.x) << "\n"
                << (shg ? "delta: " : "R: ") << format_number(r.objective)
                << (shg ? " GHz\n" : "\n") << "bracket_width: " << format_number(r.bracket_width)
                << "\n"
                << "iterations: " << r.iterations << "\n";
        } else if (tun_cmd->parsed()) {
            const auto t = tunability_report(cfg.circuit, cfg.basis, tun_lo, tun_hi, tun_steps);
            out << "delta31_max: " << format_number(t.delta31_max) << " GHz\n"
                << "delta21_max: " << format_number(t.delta21_max) << " GHz\n"
                << "delta32_max: " << format_number(t.delta32_max) << " GHz\n";
        } else if (oracle_cmd->parsed()) {
            circuit_params p = cfg.circuit;
            if (oracle_f)
                p.f = *oracle_f;
            const auto kind = resonant == "sum" ? drive_config::sum : drive_config::difference;
            const auto r = oracle_check(p, cfg.basis, cfg.rates, kind, detune);
            out << "kind: " << to_string(r.closed.kind) << "\n"
                << "f: " << format_number(p.f) << "\n"
                << "nu1: " << format_number(r.closed.nu1) << " GHz\n"
                << "nu2: " << format_number(r.closed.nu2) << " GHz\n"
                << "closed_form: " << detail::complex_text(r.closed.value) << "\n"
                << "master_equation: " << detail::complex_text(r.numeric.chi.value) << "\n"
                << "relative_error: " << format_number(r.relative_error) << "\n"
                << "bilinearity_error: " << format_number(r.numeric.bilinearity_error) << "\n"
                << "regime: " << (r.numeric.chi.regime_violation ? "violation" : "weak") << "\n";
        } else if (schema_cmd->parsed()) {
            out << config_schema();
        } else if (fig_cmd->parsed()) {
            std::string dir = fig_dir;
            if (dir.empty()) {
                const char* env = std::getenv("FLUXMIX_OUT");
                dir = env && *env ? env : cfg.output.dir;
            }
            std::vector<std::string> ids = {fig_id};
            if (fig_id == "all") {
                ids.clear();
                for (const auto& fig : figure_catalog())
                    ids.push_back(fig.id);
            }
            for (const auto& files : reproduce_figures(ids, cfg, dir))
                out << "data: " << files.data.string() << "\n"
                    << "plot: " << files.plot.string() << "\n";
        }
    } catch (const error& e) {
        detail::error_record(err, e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        detail::error_record(err, "internal", e.what());
        return 1;
    }
    return 0;
}

/// Convenience overload for tests: `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv = {"fluxmix"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace fluxmix
