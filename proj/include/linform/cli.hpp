#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace linform {

struct RunConfig {
    /// derive-pde | atoms | density | cf | simulate | verify | kac | selftest
    std::string command;
    std::string spec_path;
    double t = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::vector<double> alphas;
    std::size_t points = 0;
    double half_width = 1.25;
    /// json | csv, plus bin for simulate.
    std::string format = "json";
    std::string out_path;
    std::optional<std::size_t> cap;
    bool advisory = false;
    std::vector<double> rhos;
    std::vector<double> scales;
};

/// Throws a domain error when a command's required inputs are missing or invalid.
void validate(const RunConfig& config);

/// Executes one command. Exit status: 0 success, 1 invalid input or failed
/// verification, 2 numerical failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it; usage errors exit with 1.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linform
