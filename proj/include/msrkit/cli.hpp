#pragma once

#include "msrkit/dynamic.hpp"
#include "msrkit/scenario.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace msrkit::cli {

/// Runs one command line (without the program name). Writes the payload to `out` and
/// diagnostics to `err`. Exit codes: 0 success, 2 input error, 3 solver failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// lo:hi:step, inclusive of hi when it lies on the grid.
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> points() const;
};

Grid parse_grid(const std::string& text);

enum class CurveKind { BpoeVsX, CvarVsLevel, FOfB, GOfB };

struct CurveSource {
    // Scenario law for the risk curves.
    const ScenarioDistribution* distribution = nullptr;
    double p = 1.0;
    // Market and goal for the stopping curves; b is in price units.
    GbmParams market;
    double goal = 1.0;
};

/// (abscissa, value) rows of the requested curve.
std::vector<std::pair<double, double>> emit_curve(CurveKind kind, const Grid& grid, const CurveSource& source);

/// %.12g, the fixed output precision of every number the tool prints.
std::string format_number(double v);

} // namespace msrkit::cli
