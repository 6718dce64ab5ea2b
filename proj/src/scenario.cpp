#include "msrkit/scenario.hpp"

#include "msrkit/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace msrkit {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) {
        return false;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

Exponent::Exponent(double p) : p_(p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::InvalidP, "exponent p must be finite and >= 1");
    }
}

double Exponent::q() const noexcept {
    if (p_ == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return p_ / (p_ - 1.0);
}

ScenarioDistribution::ScenarioDistribution(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty()) {
        throw Error(ErrorKind::EmptyInput, "distribution needs at least one atom");
    }
    if (values_.size() != weights_.size()) {
        throw Error(ErrorKind::WeightError, "values and probabilities differ in length");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFiniteValue, "non-finite scenario value");
        }
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || !(w > 0.0)) {
            throw Error(ErrorKind::WeightError, "probabilities must be finite and positive");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "probabilities sum to " << total << ", expected 1";
        throw Error(ErrorKind::WeightError, msg.str());
    }
    for (double& w : weights_) {
        w /= total;
    }
}

ScenarioDistribution ScenarioDistribution::from_samples(std::span<const double> observations) {
    if (observations.empty()) {
        throw Error(ErrorKind::EmptyInput, "no observations");
    }
    const double w = 1.0 / static_cast<double>(observations.size());
    return ScenarioDistribution(std::vector<double>(observations.begin(), observations.end()),
                                std::vector<double>(observations.size(), w));
}

ScenarioDistribution ScenarioDistribution::point_mass(double value) {
    return ScenarioDistribution({value}, {1.0});
}

double ScenarioDistribution::expectation() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        s += weights_[i] * values_[i];
    }
    return s;
}

double ScenarioDistribution::ess_sup() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

double ScenarioDistribution::ess_inf() const noexcept {
    return *std::min_element(values_.begin(), values_.end());
}

double ScenarioDistribution::mass_at_sup() const noexcept {
    const double top = ess_sup();
    double mass = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == top) {
            mass += weights_[i];
        }
    }
    return mass;
}

double ScenarioDistribution::exceedance(double x) const noexcept {
    double mass = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] > x) {
            mass += weights_[i];
        }
    }
    return mass;
}

bool ScenarioDistribution::is_constant() const noexcept {
    return ess_sup() == ess_inf();
}

ScenarioDistribution ScenarioDistribution::affine(double a, double b) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [&](double x) { return a * x + b; });
    return ScenarioDistribution(std::move(v), weights_);
}

ScenarioDistribution SampleSet::to_distribution() const {
    return ScenarioDistribution::from_samples(observations);
}

ScenarioDistribution from_samples(std::span<const double> observations) {
    return ScenarioDistribution::from_samples(observations);
}

double expectation(const ScenarioDistribution& d) noexcept { return d.expectation(); }
double ess_sup(const ScenarioDistribution& d) noexcept { return d.ess_sup(); }
double mass_at_sup(const ScenarioDistribution& d) noexcept { return d.mass_at_sup(); }

SampleSet parse_csv(const std::string& text) {
    SampleSet out;
    std::istringstream in(text);
    std::string raw;
    long line_no = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        double v = 0.0;
        if (!parse_double(line, v)) {
            if (first_content) {
                first_content = false;
                continue; // header
            }
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'",
                        line_no);
        }
        first_content = false;
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFiniteValue, "line " + std::to_string(line_no) + ": non-finite value",
                        line_no);
        }
        out.observations.push_back(v);
    }
    if (out.observations.empty()) {
        throw Error(ErrorKind::EmptyInput, "no observations in CSV input");
    }
    return out;
}

SampleSet load_csv(const std::filesystem::path& path) {
    return parse_csv(read_file(path));
}

ScenarioDistribution parse_scenario_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("values") || !doc.contains("probs")) {
        throw Error(ErrorKind::ParseError, "scenario JSON needs \"values\" and \"probs\" arrays");
    }
    const auto& jv = doc["values"];
    const auto& jp = doc["probs"];
    if (!jv.is_array() || !jp.is_array()) {
        throw Error(ErrorKind::ParseError, "\"values\" and \"probs\" must be arrays");
    }
    auto numbers = [](const nlohmann::json& arr, const char* name) {
        std::vector<double> out;
        out.reserve(arr.size());
        for (const auto& e : arr) {
            if (!e.is_number()) {
                throw Error(ErrorKind::ParseError, std::string("non-numeric entry in \"") + name + "\"");
            }
            out.push_back(e.get<double>());
        }
        return out;
    };
    return ScenarioDistribution(numbers(jv, "values"), numbers(jp, "probs"));
}

ScenarioDistribution load_scenario_json(const std::filesystem::path& path) {
    return parse_scenario_json(read_file(path));
}

std::string to_scenario_json(const ScenarioDistribution& d) {
    nlohmann::json doc;
    doc["values"] = std::vector<double>(d.values().begin(), d.values().end());
    doc["probs"] = std::vector<double>(d.weights().begin(), d.weights().end());
    return doc.dump();
}

ScenarioDistribution load_distribution(const std::filesystem::path& path) {
    if (path.extension() == ".json") {
        return load_scenario_json(path);
    }
    return load_csv(path).to_distribution();
}

} // namespace msrkit
