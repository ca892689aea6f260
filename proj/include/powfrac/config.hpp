#pragma once

// Run configuration: flat `key = value` text with `#` comments, overridden by
// `--set key=value`, resolved into typed values in one validation pass that
// reports every problem before any numerical work starts.

#include "powfrac/analysis.hpp"
#include "powfrac/error.hpp"
#include "powfrac/expr.hpp"
#include "powfrac/kernel.hpp"
#include "powfrac/problems.hpp"
#include "powfrac/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace powfrac::config {

class ConfigError : public DomainError {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : DomainError(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;

    static std::string join(const std::vector<std::string>& items) {
        std::string s;
        for (const auto& item : items) {
            s += (s.empty() ? "" : "\n") + item;
        }
        return s;
    }
};

inline constexpr std::array<std::string_view, 26> kKeys{
    "problem", "rhs", "omega", "exact", "y0",     "a",         "b",   "alpha",  "beta",
    "p",       "normalization", "h", "h_list", "L", "y_min", "y_max", "samples", "kind",
    "lambda",  "u",   "v",     "t",  "n",      "M2", "weight-at", "tol"};

/// One-line description per key, for --help.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 26> kKeyHelp{{
    {"problem", "builtin problem: example1 | example2"},
    {"rhs", "f(t, y) as an expression (instead of problem)"},
    {"omega", "weight omega(t) > 0 (default 1)"},
    {"exact", "exact solution y(t), optional"},
    {"y0", "initial value y(a)"},
    {"a", "interval start (bound: lower limit, default 0)"},
    {"b", "interval end"},
    {"alpha", "fractional order in [0, 1)"},
    {"beta", "kernel exponent > 0"},
    {"p", "power base > 0"},
    {"normalization", "one | gamma | expression in alpha with N(0) = 1 (default one)"},
    {"h", "step size"},
    {"h_list", "strictly decreasing step sizes, comma separated"},
    {"L", "Lipschitz constant of f in y (check)"},
    {"y_min", "lower y for the Lipschitz estimate (check, when L is absent)"},
    {"y_max", "upper y for the Lipschitz estimate"},
    {"samples", "lattice points per axis for the Lipschitz estimate (default 50)"},
    {"kind", "bound kind: gronwall | remainder"},
    {"lambda", "constant v for the Gronwall bound"},
    {"u", "u(t) for the Gronwall bound"},
    {"v", "non-decreasing v(t) for the Gronwall bound (instead of lambda)"},
    {"t", "evaluation point of the Gronwall bound"},
    {"n", "step index of the remainder bound"},
    {"M2", "bound on |(omega f)''| for the remainder bound"},
    {"weight-at", "weight placement in the scheme: n | n+1 (default n)"},
    {"tol", "series truncation tolerance (default 1e-14)"},
}};

[[nodiscard]] inline bool is_key(std::string_view key) {
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    /// "file:line" or "--set", for diagnostics.
    std::string origin;
};

/// Unvalidated key/value pairs.
class RawConfig {
public:
    /// Adds the assignments in text; syntax errors and unknown keys are
    /// collected into errors.
    void merge_text(std::string_view text, const std::string& source,
                    std::vector<std::string>& errors) {
        std::map<std::string, std::size_t> seen;
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = std::min(text.find('\n', start), text.size());
            std::string_view line = text.substr(start, end - start);
            start = end + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            const std::string origin = source + ":" + std::to_string(line_no);
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                errors.push_back(origin + ": expected 'key = value'");
                continue;
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!is_key(key)) {
                errors.push_back(origin + ": unknown key '" + key + "'");
                continue;
            }
            if (value.empty()) {
                errors.push_back(origin + ": empty value for '" + key + "'");
                continue;
            }
            if (auto it = seen.find(key); it != seen.end()) {
                errors.push_back(origin + ": duplicate key '" + key + "' (first set on line " +
                                 std::to_string(it->second) + ")");
                continue;
            }
            seen.emplace(key, line_no);
            entries_[key] = Entry{value, origin};
        }
    }

    /// Applies a `key=value` override.
    void set(std::string_view assignment, std::vector<std::string>& errors) {
        const auto eq = assignment.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("--set " + std::string(assignment) + ": expected key=value");
            return;
        }
        const std::string key(trim(assignment.substr(0, eq)));
        const std::string value(trim(assignment.substr(eq + 1)));
        if (!is_key(key)) {
            errors.push_back("--set: unknown key '" + key + "'");
            return;
        }
        if (value.empty()) {
            errors.push_back("--set: empty value for '" + key + "'");
            return;
        }
        entries_[key] = Entry{value, "--set"};
    }

    [[nodiscard]] const Entry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] bool has(const std::string& key) const { return find(key) != nullptr; }

private:
    std::map<std::string, Entry> entries_;
};

enum class Command { Solve, Converge, Check, Mlf, Bound };

enum class BoundKind { Gronwall, Remainder };

struct GronwallSetup {
    GronwallInput input;
    bool constant_v = true;
};

struct RemainderSetup {
    ScalarFn omega;
    double h = 0.0;
    std::size_t n = 0;
    double m2 = 0.0;
    double a = 0.0;
};

/// Fully validated configuration for one command.
struct RunConfig {
    Command command = Command::Solve;
    std::optional<FracParams> params;
    std::optional<Problem> problem;
    std::string problem_label;
    double h = 0.0;
    std::vector<double> h_list;
    std::optional<double> lipschitz;
    Range y_range;
    std::size_t samples = 50;
    BoundKind kind = BoundKind::Gronwall;
    std::optional<GronwallSetup> gronwall;
    std::optional<RemainderSetup> remainder;
    SolveOptions options;
    double p = 1.0;
    double tol = kDefaultSeriesTol;
};

namespace detail {

/// Collects errors while reading typed values from a RawConfig.
class Reader {
public:
    Reader(const RawConfig& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

    void error(const std::string& key, const std::string& what) {
        const Entry* e = raw_.find(key);
        errors_.push_back((e ? e->origin + ": " : std::string()) + key + ": " + what);
    }

    void missing(const std::string& key, const std::string& why) {
        errors_.push_back("missing key '" + key + "' (" + why + ")");
    }

    [[nodiscard]] bool has(const std::string& key) const { return raw_.has(key); }

    [[nodiscard]] std::optional<std::string> text(const std::string& key) const {
        const Entry* e = raw_.find(key);
        return e ? std::optional<std::string>(e->value) : std::nullopt;
    }

    /// Expression over the allowed variables.
    std::optional<expr::Expr> expression(const std::string& key,
                                         std::initializer_list<expr::Var> allowed) {
        const Entry* e = raw_.find(key);
        if (e == nullptr) {
            return std::nullopt;
        }
        try {
            expr::Expr ex = expr::parse(e->value);
            for (expr::Var v : {expr::Var::T, expr::Var::Y, expr::Var::Alpha}) {
                if (ex.uses(v) && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                    static constexpr std::array<const char*, 3> names{"t", "y", "alpha"};
                    error(key, std::string("variable '") + names[static_cast<int>(v)] +
                                   "' is not allowed here");
                    return std::nullopt;
                }
            }
            return ex;
        } catch (const expr::ParseError& pe) {
            error(key, pe.what());
            return std::nullopt;
        }
    }

    /// Finite constant expression.
    std::optional<double> number(const std::string& key) {
        auto ex = expression(key, {});
        if (!ex) {
            return std::nullopt;
        }
        const double v = (*ex)(0.0);
        if (!std::isfinite(v)) {
            error(key, "value is not finite");
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> required_number(const std::string& key, const std::string& why) {
        if (!has(key)) {
            missing(key, why);
            return std::nullopt;
        }
        return number(key);
    }

    std::optional<std::size_t> count(const std::string& key) {
        auto v = number(key);
        if (!v) {
            return std::nullopt;
        }
        if (*v < 0.0 || *v != std::floor(*v) || *v > 1e15) {
            error(key, "expected a non-negative integer");
            return std::nullopt;
        }
        return static_cast<std::size_t>(*v);
    }

    std::optional<std::vector<double>> number_list(const std::string& key) {
        const Entry* e = raw_.find(key);
        if (e == nullptr) {
            return std::nullopt;
        }
        std::vector<double> out;
        std::string_view rest = e->value;
        for (;;) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            try {
                const expr::Expr ex = expr::parse(item);
                const double v = ex(0.0);
                if (ex.uses(expr::Var::T) || ex.uses(expr::Var::Y) || ex.uses(expr::Var::Alpha)) {
                    error(key, "list entries must be constants");
                    return std::nullopt;
                }
                if (!std::isfinite(v)) {
                    error(key, "entry " + std::to_string(out.size() + 1) + " is not finite");
                    return std::nullopt;
                }
                out.push_back(v);
            } catch (const expr::ParseError& pe) {
                error(key, "entry " + std::to_string(out.size() + 1) + ": " + pe.what());
                return std::nullopt;
            }
            if (comma == std::string_view::npos) {
                return out;
            }
            rest = rest.substr(comma + 1);
        }
    }

private:
    const RawConfig& raw_;
    std::vector<std::string>& errors_;
};

inline std::optional<FracParams> read_params(Reader& r, bool needed) {
    const auto alpha = r.has("alpha") || needed ? r.required_number("alpha", "fractional order")
                                                : std::nullopt;
    const auto beta = r.has("beta") || needed ? r.required_number("beta", "kernel exponent")
                                              : std::nullopt;
    const auto p = r.has("p") || needed ? r.required_number("p", "power base") : std::nullopt;
    NormalizationFn norm = NormalizationFn::one();
    bool norm_ok = true;
    if (const auto text = r.text("normalization")) {
        if (*text == "one") {
            norm = NormalizationFn::one();
        } else if (*text == "gamma") {
            norm = NormalizationFn::gamma_blend();
        } else if (auto ex = r.expression("normalization", {expr::Var::Alpha})) {
            try {
                norm = NormalizationFn::custom(
                    [e = *ex](double a) { return e(0.0, 0.0, a); });
            } catch (const DomainError& de) {
                r.error("normalization", de.what());
                norm_ok = false;
            }
        } else {
            norm_ok = false;
        }
    }
    if (!alpha || !beta || !p || !norm_ok) {
        return std::nullopt;
    }
    try {
        return FracParams(*alpha, *beta, *p, norm);
    } catch (const DomainError& de) {
        r.error("alpha/beta/p", de.what());
        return std::nullopt;
    }
}

inline std::optional<Problem> read_problem(Reader& r, const std::optional<FracParams>& params,
                                           std::string& label) {
    if (const auto id = r.text("problem")) {
        for (const char* key : {"rhs", "omega", "exact", "y0", "a", "b"}) {
            if (r.has(key)) {
                r.error(key, "conflicts with problem = " + *id);
            }
        }
        if (*id != "example1" && *id != "example2") {
            r.error("problem", "unknown problem '" + *id + "' (expected example1 or example2)");
            return std::nullopt;
        }
        label = *id;
        if (!params) {
            return std::nullopt;
        }
        return builtin_problem(*id, *params);
    }
    if (!r.has("rhs")) {
        r.missing("problem", "or an inline problem via rhs, y0, a, b");
        return std::nullopt;
    }
    label = "rhs";
    const double alpha = params ? params->alpha() : 0.0;
    auto rhs = r.expression("rhs", {expr::Var::T, expr::Var::Y, expr::Var::Alpha});
    auto omega = r.expression("omega", {expr::Var::T, expr::Var::Alpha});
    auto exact = r.expression("exact", {expr::Var::T, expr::Var::Alpha});
    const auto y0 = r.required_number("y0", "initial value of the inline problem");
    const auto a = r.required_number("a", "interval start of the inline problem");
    const auto b = r.required_number("b", "interval end of the inline problem");
    if (!rhs || !y0 || !a || !b || (r.has("omega") && !omega) || (r.has("exact") && !exact)) {
        return std::nullopt;
    }
    Problem pr{IVP{[e = *rhs, alpha](double t, double y) { return e(t, y, alpha); },
                   omega ? ScalarFn([e = *omega, alpha](double t) { return e(t, 0.0, alpha); })
                         : constant_fn(1.0),
                   *a, *b, *y0},
               std::nullopt};
    if (exact) {
        pr.exact = [e = *exact, alpha](double t) { return e(t, 0.0, alpha); };
    }
    try {
        pr.ivp.validate();
    } catch (const DomainError& de) {
        r.error("a/b/y0", de.what());
        return std::nullopt;
    }
    return pr;
}

/// Grid and weight checks for one step size. omega is probed on at most
/// about 10^5 nodes so validation stays cheap on very fine grids; the solver
/// samples every node before its first step.
inline void check_step(Reader& r, const std::string& key, const Problem& pr, double h) {
    try {
        const Grid grid = Grid::over(pr.ivp.a, pr.ivp.b, h);
        const std::size_t stride = std::max<std::size_t>(1, grid.size() / 100'000);
        for (std::size_t k = 0; k < grid.size(); k += stride) {
            const double t = grid.node(std::min(k, grid.n_steps()));
            const double w = pr.ivp.omega(t);
            if (!(w > 0.0) || !std::isfinite(w)) {
                r.error("omega", "must be finite and > 0 on [a, b]; omega(" + std::to_string(t) +
                                     ") = " + std::to_string(w));
                return;
            }
        }
        const double wb = pr.ivp.omega(grid.b());
        if (!(wb > 0.0) || !std::isfinite(wb)) {
            r.error("omega", "must be finite and > 0 at b");
        }
    } catch (const DomainError& de) {
        r.error(key, de.what());
    }
}

}  // namespace detail

/// Validates everything the command needs; throws ConfigError listing every
/// problem found.
[[nodiscard]] inline RunConfig resolve(const RawConfig& raw, Command command,
                                       std::vector<std::string> errors = {}) {
    detail::Reader r(raw, errors);
    RunConfig cfg;
    cfg.command = command;

    if (r.has("tol")) {
        if (auto tol = r.number("tol")) {
            if (!(*tol > 0.0)) {
                r.error("tol", "must be > 0");
            } else {
                cfg.tol = *tol;
            }
        }
    }
    if (const auto w = r.text("weight-at")) {
        if (*w == "n") {
            cfg.options.weight_at = WeightAt::N;
        } else if (*w == "n+1") {
            cfg.options.weight_at = WeightAt::NPlusOne;
        } else {
            r.error("weight-at", "expected n or n+1");
        }
    }

    switch (command) {
        case Command::Solve:
        case Command::Converge:
        case Command::Check: {
            cfg.params = detail::read_params(r, true);
            cfg.problem = detail::read_problem(r, cfg.params, cfg.problem_label);
            if (command == Command::Solve) {
                if (r.has("h_list")) {
                    r.error("h_list", "solve takes a single step size h");
                }
                if (const auto h = r.required_number("h", "step size")) {
                    cfg.h = *h;
                    if (cfg.problem) {
                        detail::check_step(r, "h", *cfg.problem, *h);
                    }
                }
            } else if (command == Command::Converge) {
                if (r.has("h")) {
                    r.error("h", "converge takes h_list");
                }
                if (!r.has("h_list")) {
                    r.missing("h_list", "step sizes for the convergence study");
                } else if (auto list = r.number_list("h_list")) {
                    cfg.h_list = *list;
                    for (std::size_t i = 1; i < list->size(); ++i) {
                        if (!((*list)[i] < (*list)[i - 1])) {
                            r.error("h_list", "must be strictly decreasing");
                            break;
                        }
                    }
                    if (cfg.problem) {
                        for (double h : *list) {
                            detail::check_step(r, "h_list", *cfg.problem, h);
                        }
                    }
                }
                if (cfg.problem && !cfg.problem->exact) {
                    r.error(cfg.problem_label == "rhs" ? "exact" : "problem",
                            "converge needs an exact solution");
                }
            } else {
                if (r.has("L")) {
                    if (auto L = r.number("L")) {
                        if (!(*L >= 0.0)) {
                            r.error("L", "must be >= 0");
                        } else {
                            cfg.lipschitz = *L;
                        }
                    }
                } else {
                    const auto lo = r.required_number("y_min", "needed to estimate L");
                    const auto hi = r.required_number("y_max", "needed to estimate L");
                    if (lo && hi) {
                        if (!(*hi > *lo)) {
                            r.error("y_max", "must exceed y_min");
                        }
                        cfg.y_range = Range{*lo, *hi};
                    }
                    if (r.has("samples")) {
                        if (auto s = r.count("samples")) {
                            if (*s < 2) {
                                r.error("samples", "must be >= 2");
                            }
                            cfg.samples = *s;
                        }
                    }
                }
            }
            break;
        }
        case Command::Mlf: {
            if (const auto p = r.required_number("p", "power base")) {
                if (!(*p > 0.0)) {
                    r.error("p", "must be > 0");
                }
                cfg.p = *p;
            }
            break;
        }
        case Command::Bound: {
            const auto kind = r.text("kind");
            if (!kind) {
                r.missing("kind", "gronwall or remainder");
            } else if (*kind != "gronwall" && *kind != "remainder") {
                r.error("kind", "expected gronwall or remainder");
            }
            cfg.params = detail::read_params(r, true);
            if (kind == "gronwall") {
                cfg.kind = BoundKind::Gronwall;
                auto u = r.expression("u", {expr::Var::T, expr::Var::Alpha});
                if (!r.has("u")) {
                    r.missing("u", "u(t) of the Gronwall inequality");
                }
                const auto t = r.required_number("t", "evaluation point");
                const double a = r.has("a") ? r.number("a").value_or(0.0) : 0.0;
                std::optional<std::variant<double, ScalarFn>> v;
                const double alpha = cfg.params ? cfg.params->alpha() : 0.0;
                if (r.has("lambda") && r.has("v")) {
                    r.error("v", "give either lambda or v, not both");
                } else if (r.has("lambda")) {
                    if (auto lam = r.number("lambda")) {
                        v = *lam;
                    }
                } else if (r.has("v")) {
                    if (auto ex = r.expression("v", {expr::Var::T, expr::Var::Alpha})) {
                        v = ScalarFn([e = *ex, alpha](double s) { return e(s, 0.0, alpha); });
                    }
                } else {
                    r.missing("lambda", "or v");
                }
                if (t && !(*t >= a)) {
                    r.error("t", "must be >= a");
                }
                if (cfg.params && cfg.params->p() < 1.0) {
                    r.error("p", "Gronwall bound requires p >= 1");
                }
                if (u && t && v && cfg.params) {
                    GronwallSetup g{GronwallInput{[e = *u, alpha](double s) {
                                                      return e(s, 0.0, alpha);
                                                  },
                                                  *v, *cfg.params, a, *t, cfg.tol},
                                    std::holds_alternative<double>(*v)};
                    cfg.gronwall = std::move(g);
                }
            } else if (kind == "remainder") {
                cfg.kind = BoundKind::Remainder;
                RemainderSetup rs;
                if (r.has("problem")) {
                    std::string label;
                    if (auto pr = detail::read_problem(r, cfg.params, label)) {
                        rs.omega = pr->ivp.omega;
                        rs.a = pr->ivp.a;
                    }
                } else {
                    const double alpha = cfg.params ? cfg.params->alpha() : 0.0;
                    if (auto om = r.expression("omega", {expr::Var::T, expr::Var::Alpha})) {
                        rs.omega = [e = *om, alpha](double t) { return e(t, 0.0, alpha); };
                    } else {
                        rs.omega = constant_fn(1.0);
                    }
                    rs.a = r.has("a") ? r.number("a").value_or(0.0) : 0.0;
                }
                const auto h = r.required_number("h", "step size");
                const auto n = r.has("n") ? r.count("n") : std::nullopt;
                if (!r.has("n")) {
                    r.missing("n", "step index");
                }
                const auto m2 = r.required_number("M2", "bound on |(omega f)''|");
                if (h && !(*h > 0.0)) {
                    r.error("h", "must be > 0");
                }
                if (m2 && !(*m2 >= 0.0)) {
                    r.error("M2", "must be >= 0");
                }
                if (h && n && m2) {
                    rs.h = *h;
                    rs.n = *n;
                    rs.m2 = *m2;
                    cfg.remainder = rs;
                }
            }
            break;
        }
    }

    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return cfg;
}

}  // namespace powfrac::config
