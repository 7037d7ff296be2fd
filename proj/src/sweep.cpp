#include "spinchan/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace spinchan {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

namespace {

double parse_double(const std::string& s) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty grid specification");
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("grid '" + text + "' is not of the form a:b:step");
        const double a = parse_double(parts[0]);
        const double b = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (!(step > 0.0) || b < a)
            throw std::invalid_argument("grid '" + text + "' needs step > 0 and b >= a");
        std::vector<double> grid;
        const long count = static_cast<long>(std::floor((b - a) / step + 0.5 + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) {
            const double x = a + static_cast<double>(i) * step;
            if (x > b + 0.5 * step) break;
            grid.push_back(x);
        }
        return grid;
    }
    std::vector<double> grid;
    for (const auto& item : split(text, ',')) grid.push_back(parse_double(item));
    if (grid.empty()) throw std::invalid_argument("empty grid specification");
    return grid;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void Manifest::write(std::ostream& os) const {
    os << "# " << kToolName << " " << kToolVersion << " manifest\n";
    os << "# command: " << command << "\n";
    os << "# args:";
    for (const auto& a : args) os << ' ' << a;
    os << "\n";
    if (seed) os << "# seed: " << *seed << "\n";
    os << "# timestamp: " << timestamp << "\n";
    os << "# out: " << out << "\n";
    for (const auto& w : warnings) os << "# warning: " << w << "\n";
}

Manifest Manifest::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Manifest m;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') break;
        const std::string body = line.size() > 2 ? line.substr(2) : "";
        if (!saw_header) {
            if (body.find("manifest") == std::string::npos)
                throw std::runtime_error("'" + path + "' does not start with a manifest header");
            saw_header = true;
            continue;
        }
        const auto colon = body.find(": ");
        if (colon == std::string::npos) continue;
        const std::string key = body.substr(0, colon);
        const std::string value = body.substr(colon + 2);
        if (key == "command") {
            m.command = value;
        } else if (key == "args") {
            for (const auto& tok : split(value, ' '))
                if (!tok.empty()) m.args.push_back(tok);
        } else if (key == "seed") {
            m.seed = std::stoull(value);
        } else if (key == "timestamp") {
            m.timestamp = value;
        } else if (key == "out") {
            m.out = value;
        } else if (key == "warning") {
            m.warnings.push_back(value);
        }
    }
    if (!saw_header || m.command.empty())
        throw std::runtime_error("'" + path + "' has no usable manifest (missing command)");
    return m;
}

}  // namespace spinchan
