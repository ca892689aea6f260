#pragma once

#include "powfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace powfrac {

/// Real function of one real variable. Implementations must be safe to call
/// concurrently from several threads.
using ScalarFn = std::function<double(double)>;

[[nodiscard]] inline ScalarFn constant_fn(double c) {
    return [c](double) { return c; };
}

/// Uniform grid t_k = a + k h, k = 0..n_steps.
class Grid {
public:
    Grid(double a, double h, std::size_t n_steps) : a_(a), h_(h), n_steps_(n_steps) {
        if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(a)) {
            throw DomainError("Grid: step must be finite and > 0");
        }
        if (n_steps < 1) {
            throw DomainError("Grid: at least one step is required");
        }
    }

    /// Grid covering [a, b] with step h; (b - a) / h must be an integer up to
    /// rounding.
    static Grid over(double a, double b, double h) {
        if (!(b > a)) {
            throw DomainError("Grid: interval requires b > a");
        }
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw DomainError("Grid: step must be finite and > 0");
        }
        if (h > (b - a) * (1.0 + 1e-12)) {
            throw DomainError("Grid: step " + std::to_string(h) + " exceeds interval length " +
                              std::to_string(b - a));
        }
        const double ratio = (b - a) / h;
        const double steps = std::round(ratio);
        if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps)) {
            throw DomainError("Grid: (b - a) / h = " + std::to_string(ratio) +
                              " is not an integer");
        }
        return Grid(a, h, static_cast<std::size_t>(steps));
    }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_steps_ + 1; }
    [[nodiscard]] double node(std::size_t k) const noexcept {
        return a_ + static_cast<double>(k) * h_;
    }
    [[nodiscard]] double b() const noexcept { return node(n_steps_); }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> t(size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            t[k] = node(k);
        }
        return t;
    }

    [[nodiscard]] std::vector<double> sample(const ScalarFn& fn) const {
        std::vector<double> v(size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] = fn(node(k));
        }
        return v;
    }

private:
    double a_;
    double h_;
    std::size_t n_steps_;
};

/// Samples a weight on the grid and checks omega > 0 at every node.
[[nodiscard]] inline std::vector<double> sample_weight(const ScalarFn& omega, const Grid& grid) {
    std::vector<double> w = grid.sample(omega);
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] > 0.0) || !std::isfinite(w[k])) {
            throw DomainError("weight omega must be > 0 on the grid; omega(" +
                              std::to_string(grid.node(k)) + ") = " + std::to_string(w[k]));
        }
    }
    return w;
}

/// Piecewise-linear interpolant of node values; constant extrapolation
/// outside [a, b].
[[nodiscard]] inline ScalarFn interpolate_linear(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.size()) {
        throw DomainError("interpolate_linear: one value per grid node is required");
    }
    return [grid, v = std::move(values)](double t) {
        const double x = (t - grid.a()) / grid.h();
        if (x <= 0.0) {
            return v.front();
        }
        if (x >= static_cast<double>(grid.n_steps())) {
            return v.back();
        }
        const auto k = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(k);
        return v[k] + frac * (v[k + 1] - v[k]);
    };
}

/// Grid plus node values, with optional exact values and pointwise errors.
struct Trajectory {
    Grid grid;
    std::vector<double> values;
    std::optional<std::vector<double>> exact;
    std::optional<std::vector<double>> pointwise_error;

    Trajectory(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) {
            throw DomainError("Trajectory: values.size() must equal n_steps + 1");
        }
    }

    void attach_exact(const ScalarFn& exact_fn) {
        std::vector<double> ex = grid.sample(exact_fn);
        std::vector<double> err(ex.size());
        for (std::size_t k = 0; k < ex.size(); ++k) {
            err[k] = std::abs(values[k] - ex[k]);
        }
        exact = std::move(ex);
        pointwise_error = std::move(err);
    }

    [[nodiscard]] double max_error() const {
        if (!pointwise_error) {
            throw DomainError("Trajectory: no exact solution attached");
        }
        return *std::max_element(pointwise_error->begin(), pointwise_error->end());
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }
};

}  // namespace powfrac
