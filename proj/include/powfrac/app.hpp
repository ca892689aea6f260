#pragma once

// Command-line front end: solve, converge, check, mlf and bound.
// Exit status: 0 success, 2 configuration or parse error, 3 numerical failure.

#include "powfrac/analysis.hpp"
#include "powfrac/config.hpp"
#include "powfrac/csv.hpp"
#include "powfrac/error.hpp"
#include "powfrac/kernel.hpp"
#include "powfrac/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace powfrac::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

struct CliArgs {
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_file;
    double k = 0.0;
    double l = 0.0;
    double s = 0.0;
};

inline std::string keys_help() {
    std::string s = "Config keys (key = value, # comments, lists comma separated):\n";
    for (const auto& [key, text] : config::kKeyHelp) {
        std::string k(key);
        k.resize(std::max<std::size_t>(k.size(), 15), ' ');
        s += "  " + k + std::string(text) + "\n";
    }
    return s;
}

inline config::RawConfig load(const CliArgs& cli, std::vector<std::string>& errors) {
    config::RawConfig raw;
    if (!cli.config_file.empty()) {
        std::ifstream in(cli.config_file, std::ios::binary);
        if (!in) {
            errors.push_back("cannot read config file '" + cli.config_file + "'");
        } else {
            const std::string text((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
            raw.merge_text(text, cli.config_file, errors);
        }
    }
    for (const auto& s : cli.sets) {
        raw.set(s, errors);
    }
    return raw;
}

inline void print_kv(std::ostream& out, const char* key, double value) {
    out << key << " = " << csv::format(value) << '\n';
}

inline void run_solve(const config::RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Problem& pr = *cfg.problem;
    const SolveResult res = solve(pr.ivp, *cfg.params, cfg.h, cfg.options);
    Trajectory tr = res.trajectory;
    if (!res.initial_rhs_vanishes) {
        err << "warning: |f(a, y0)| = " << csv::format(std::abs(res.initial_rhs))
            << " > 1e-12; the scheme assumes f(a, y(a)) = 0\n";
    }
    if (pr.exact) {
        tr.attach_exact(*pr.exact);
    }
    csv::write(out, csv::trajectory_table(tr));
    err << "solve: " << cfg.problem_label << " h=" << csv::format(cfg.h)
        << " steps=" << tr.grid.n_steps();
    if (pr.exact) {
        err << " max_error=" << csv::format(tr.max_error());
    } else {
        err << " max_abs_y=" << csv::format(tr.max_abs());
    }
    err << '\n';
}

inline void run_converge(const config::RunConfig& cfg, std::ostream& out) {
    const Problem& pr = *cfg.problem;
    const ConvergenceReport report =
        convergence_study(pr.ivp, *cfg.params, pr.exact, cfg.h_list, cfg.options);
    csv::Table table;
    table.header = {"h", "max_error", "observed_order"};
    for (const auto& row : report.rows) {
        table.rows.push_back({row.h, row.max_error, row.observed_order});
    }
    csv::write(out, table);
}

inline void run_check(const config::RunConfig& cfg, std::ostream& out) {
    const IVP& ivp = cfg.problem->ivp;
    double lipschitz = 0.0;
    if (cfg.lipschitz) {
        lipschitz = *cfg.lipschitz;
    } else {
        lipschitz = estimate_lipschitz(ivp.rhs, Range{ivp.a, ivp.b}, cfg.y_range, cfg.samples);
    }
    const UniquenessCertificate cert = uniqueness_certificate(lipschitz, *cfg.params, ivp.a, ivp.b);
    print_kv(out, "lipschitz", cert.lipschitz);
    out << "lipschitz_source = " << (cfg.lipschitz ? "given" : "estimated") << '\n';
    print_kv(out, "contraction_factor", cert.contraction_factor);
    print_kv(out, "condition", cert.condition_value);
    print_kv(out, "margin", cert.margin);
    out << "satisfied = " << (cert.satisfied ? "true" : "false") << '\n';
}

inline void run_bound(const config::RunConfig& cfg, std::ostream& out) {
    if (cfg.kind == config::BoundKind::Gronwall) {
        const auto& g = *cfg.gronwall;
        const double value =
            g.constant_v ? gronwall_bound_constant(g.input) : gronwall_bound_series(g.input);
        out << csv::format(value) << '\n';
    } else {
        const auto& r = *cfg.remainder;
        out << csv::format(remainder_bound(*cfg.params, r.omega, r.h, r.n, r.m2, r.a).bound)
            << '\n';
    }
}

}  // namespace detail

/// Runs one command; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Power fractional calculus toolkit", "powfrac"};
    app.require_subcommand(1);
    app.footer(detail::keys_help());
    detail::CliArgs cli;

    auto add_common = [&cli](CLI::App* sub) {
        sub->add_option("--config", cli.config_file, "config file")->check(CLI::ExistingFile);
        sub->add_option("--set", cli.sets, "override a config key (key=value)");
        sub->add_option("--out", cli.out_file, "output file (default: standard output)");
    };
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve an IVP, write t,y[,exact,error] CSV");
    CLI::App* converge_cmd =
        app.add_subcommand("converge", "max error per step size of h_list as CSV");
    CLI::App* check_cmd = app.add_subcommand("check", "existence/uniqueness certificate");
    CLI::App* mlf_cmd = app.add_subcommand("mlf", "evaluate the power Mittag-Leffler function");
    CLI::App* bound_cmd = app.add_subcommand("bound", "Gronwall or remainder bound");
    for (CLI::App* sub : {solve_cmd, converge_cmd, check_cmd, mlf_cmd, bound_cmd}) {
        add_common(sub);
    }
    mlf_cmd->add_option("--k", cli.k, "first index")->required();
    mlf_cmd->add_option("--l", cli.l, "second index")->required();
    mlf_cmd->add_option("--s", cli.s, "argument")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    config::Command command = config::Command::Solve;
    if (converge_cmd->parsed()) {
        command = config::Command::Converge;
    } else if (check_cmd->parsed()) {
        command = config::Command::Check;
    } else if (mlf_cmd->parsed()) {
        command = config::Command::Mlf;
    } else if (bound_cmd->parsed()) {
        command = config::Command::Bound;
    }

    config::RunConfig cfg;
    std::unique_ptr<std::ofstream> file;
    try {
        std::vector<std::string> errors;
        const config::RawConfig raw = detail::load(cli, errors);
        cfg = config::resolve(raw, command, std::move(errors));
        if (command == config::Command::Mlf) {
            MlfQuery{cli.k, cli.l, cfg.p, cli.s, cfg.tol}.validate();
        }
        if (!cli.out_file.empty()) {
            file = std::make_unique<std::ofstream>(cli.out_file, std::ios::binary);
            if (!*file) {
                throw DomainError("cannot open output file '" + cli.out_file + "'");
            }
        }
    } catch (const config::ConfigError& e) {
        err << "powfrac: invalid configuration:\n";
        for (const auto& p : e.problems()) {
            err << "  " << p << '\n';
        }
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "powfrac: " << e.what() << '\n';
        return kExitConfig;
    }

    std::ostream& sink = file ? static_cast<std::ostream&>(*file) : out;
    try {
        switch (command) {
            case config::Command::Solve: detail::run_solve(cfg, sink, err); break;
            case config::Command::Converge: detail::run_converge(cfg, sink); break;
            case config::Command::Check: detail::run_check(cfg, sink); break;
            case config::Command::Mlf:
                sink << csv::format(power_mlf(cli.k, cli.l, cfg.p, cli.s, cfg.tol)) << '\n';
                break;
            case config::Command::Bound: detail::run_bound(cfg, sink); break;
        }
        sink.flush();
    } catch (const NumericalError& e) {
        err << "powfrac: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        err << "powfrac: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        err << "powfrac: " << e.what() << '\n';
        return kExitConfig;
    }
    if (!sink) {
        err << "powfrac: write failed\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace powfrac::app
