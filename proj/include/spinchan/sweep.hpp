#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spinchan {

inline constexpr const char* kToolName = "spinchan";
inline constexpr const char* kToolVersion = "0.1.0";

// "a:b:step" (inclusive end, within half a step), "a,b,c" or a single value.
std::vector<double> parse_grid(const std::string& text);

std::vector<std::string> split(const std::string& text, char sep);

// Full round-trip decimal formatting (17 significant digits) so file
// contents can be compared against in-memory doubles exactly.
std::string format_number(double x);

std::string utc_timestamp_now();

// Everything needed to reproduce an output file byte for byte: the command
// and its fully resolved argument list (including --timestamp and --out).
// Written as '#'-prefixed comment lines at the top of every data file.
struct Manifest {
    std::string command;
    std::vector<std::string> args;
    std::string timestamp;
    std::string out;  // logical output path as given on the command line
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings;

    void write(std::ostream& os) const;

    // Reads the header of an emitted data file; throws std::runtime_error
    // if the file does not start with a spinchan manifest.
    static Manifest parse_file(const std::string& path);
};

}  // namespace spinchan
