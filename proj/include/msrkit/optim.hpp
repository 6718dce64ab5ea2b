#pragma once

#include <array>
#include <functional>
#include <limits>

namespace msrkit::optim {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct ScalarSolveReport {
    double argmin = 0.0;
    double value = 0.0;
    int iterations = 0;
    Interval bracket;
    // false: f kept decreasing over the whole expansion range (NoBracket).
    bool bracket_found = true;
    bool at_boundary = false;
};

struct ScalarOptions {
    double tol = 1e-9;
    // Hard domain; the hint is clamped into it and expansion stops at it.
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double growth = 2.0;
    int max_expansions = 60;
    int max_iterations = 500;
};

using ScalarFn = std::function<double(double)>;

/// Minimizes a convex (or unimodal) scalar function.
///
/// The hint interval is expanded geometrically until a three-point bracket with
/// an interior minimum is found or a domain bound is reached, then refined with
/// golden-section search with parabolic acceleration. On flat minima the smallest
/// argmin in the bracket is returned. Throws NonFiniteObjective if f returns NaN.
ScalarSolveReport minimize_scalar_convex(const ScalarFn& f, Interval hint, const ScalarOptions& options = {});

struct Solve2dReport {
    std::array<double, 2> argmax{};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

struct Options2d {
    double tol = 1e-7;
    // Typical magnitude of each coordinate, used for start grids and brackets.
    std::array<double, 2> scale{1.0, 1.0};
};

using Fn2d = std::function<double(double, double)>;

/// Maximizes a concave function of two variables by nested scalar solves
/// (outer over the first coordinate, inner over the second) from a 3x3 grid of
/// starts around `start`; the best result is kept. Convergence is judged by the
/// central finite-difference gradient, or failing that by no improvement on a small
/// compass ring around the optimum. Throws Diverged if the iterate norm
/// exceeds 1e8.
Solve2dReport maximize_2d_concave(const Fn2d& f, std::array<double, 2> start, const Options2d& options = {});

/// Central-difference gradient with step max(1e-6, 1e-6 |x|) per coordinate.
std::array<double, 2> fd_gradient(const Fn2d& f, std::array<double, 2> x);

} // namespace msrkit::optim
