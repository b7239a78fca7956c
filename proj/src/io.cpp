#include "fou/io.hpp"

#include "fou/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace fou {

namespace {

double parse_field(std::string_view s, std::size_t line) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError("line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
    out << "t,x\n";
    for (std::size_t i = 0; i < path.values.size(); ++i)
        out << format_double(static_cast<double>(i) * path.delta) << ',' << format_double(path.values[i]) << '\n';
}

SamplePath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input: expected header 't,x'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x") throw InputError("bad header '" + line + "', expected 't,x'");

    std::vector<double> times;
    SamplePath path;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw InputError("line " + std::to_string(lineno) + ": expected two fields");
        std::string_view sv(line);
        times.push_back(parse_field(sv.substr(0, comma), lineno));
        path.values.push_back(parse_field(sv.substr(comma + 1), lineno));
    }
    if (times.size() < 2) throw InputError("need at least two rows to infer the mesh");

    const double delta = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(delta > 0.0)) throw InputError("time column must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (std::abs(step - delta) > 1e-9 * delta + 4.0 * std::abs(times[i]) * 1e-16)
            throw InputError("non-uniform time grid at row " + std::to_string(i + 1) + ": step " +
                             format_double(step) + " vs mesh " + format_double(delta));
    }
    path.delta = delta;
    return path;
}

void write_params_kv(std::ostream& out, const FouParams& p) {
    out << "lambda=" << format_double(p.lambda) << '\n'
        << "sigma=" << format_double(p.sigma) << '\n'
        << "hurst=" << format_double(p.hurst) << '\n'
        << "y0=" << format_double(p.y0) << '\n';
}

void write_estimation_kv(std::ostream& out, const EstimationResult& r) {
    out << "filter=" << r.filter_label << '\n'
        << "hurst_hat=" << format_double(r.hurst_hat) << '\n'
        << "sigma_hat=" << format_double(r.sigma_hat) << '\n'
        << "mu2_hat=" << format_double(r.mu2_hat) << '\n'
        << "lambda_hat=" << format_double(r.lambda_hat) << '\n'
        << "windows_a=" << r.windows_a << '\n'
        << "windows_a2=" << r.windows_a2 << '\n'
        << "warnings=";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) out << (i ? "; " : "") << r.warnings[i];
    out << '\n';
}

}  // namespace fou
