#include "msrkit/cli.hpp"

#include "msrkit/error.hpp"
#include "msrkit/risk.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace msrkit::cli {

namespace {

double parse_real(const std::string& field, const std::string& whole) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, "bad grid '" + whole + "', expected lo:hi:step");
    }
    return v;
}

} // namespace

std::vector<double> Grid::points() const {
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = lo + static_cast<double>(k) * step;
    }
    return out;
}

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) {
        parts.push_back(part);
    }
    if (parts.size() != 3) {
        throw Error(ErrorKind::InvalidArgument, "bad grid '" + text + "', expected lo:hi:step");
    }
    Grid g{parse_real(parts[0], text), parse_real(parts[1], text), parse_real(parts[2], text)};
    if (!(g.step > 0.0) || !(g.hi >= g.lo)) {
        throw Error(ErrorKind::InvalidArgument, "grid needs lo <= hi and step > 0");
    }
    if ((g.hi - g.lo) / g.step > 1e6) {
        throw Error(ErrorKind::InvalidArgument, "grid has more than a million points");
    }
    return g;
}

std::vector<std::pair<double, double>> emit_curve(CurveKind kind, const Grid& grid, const CurveSource& source) {
    std::vector<std::pair<double, double>> rows;
    const auto xs = grid.points();
    rows.reserve(xs.size());
    switch (kind) {
    case CurveKind::BpoeVsX:
    case CurveKind::CvarVsLevel: {
        if (source.distribution == nullptr) {
            throw Error(ErrorKind::InvalidArgument, "risk curves need a scenario distribution");
        }
        const Exponent p(source.p);
        for (double x : xs) {
            const double v = kind == CurveKind::BpoeVsX ? bpoe(*source.distribution, p, x).value
                                                        : cvar(*source.distribution, p, x).value;
            rows.emplace_back(x, v);
        }
        break;
    }
    case CurveKind::FOfB:
    case CurveKind::GOfB: {
        source.market.validate();
        const double gamma = stopping_gamma(source.market);
        if (!(gamma > 0.0 && gamma < 1.0)) {
            throw Error(ErrorKind::InvalidRegime, "threshold curves need 0 < mu < sigma^2/2");
        }
        const double x = source.goal / source.market.s0;
        if (!(x >= 1.0)) {
            throw Error(ErrorKind::InvalidGoal, "goal must be at least the initial price");
        }
        for (double b : xs) {
            const double bn = b / source.market.s0;
            if (!(bn >= x)) {
                throw Error(ErrorKind::InvalidArgument, "threshold grid must start at the goal or above");
            }
            const double v = kind == CurveKind::FOfB ? problem2_f(bn, x, gamma, source.p)
                                                     : (bn > x ? problem2_g(bn, x, gamma)
                                                              : (x == 1.0 ? 0.0 : -std::numeric_limits<double>::infinity()));
            rows.emplace_back(b, v);
        }
        break;
    }
    }
    return rows;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace msrkit::cli
