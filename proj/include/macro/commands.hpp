#pragma once

#include "macro/exclusion.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace macro {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInput = 2, kExitNumerical = 3 };

struct CommandOptions {
    std::string input;   // experiment JSON file
    std::string id;      // builtin catalog id
    std::string bounds;  // "default", "squid" or empty for the class preset
    std::optional<double> sigma_s;
    // curve: the plotting grid; mu: grid_max caps the search and grid_points sets nodes per decade
    std::optional<double> grid_min, grid_max;
    std::optional<int> grid_points;
    std::string out;  // empty: standard output
    std::string format;  // empty: json for mu, csv for curve and timeline
    std::uint64_t seed = 42;
    std::string filter;  // timeline: "" (dated entries), "all", a class name or an id substring
};

GridSpec curve_grid(const CommandOptions& opt);

/// Resolves --id / --input to a record; throws ParseError or ValidationError.
ExperimentRecord resolve_record(const CommandOptions& opt, std::string* id = nullptr);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

std::string mu_report_json(const std::string& id, const ExperimentRecord& rec, const MacroscopicityReport& r);
std::string curve_csv(const ExclusionCurve& c);

int cmd_mu(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_curve(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_timeline(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace macro
