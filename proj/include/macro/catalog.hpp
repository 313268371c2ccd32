#pragma once

#include "macro/experiments.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace macro {

struct CatalogEntry {
    std::string id;
    std::string label;
    std::optional<int> year;  // publication year; empty for proposals
    ExperimentRecord record;
    std::optional<double> published_mu;
    double tolerance = 0.2;
    bool assumed = false;  // timing or parameters not stated in the source and filled in here
    std::string note;
    std::optional<double> alternate_mu;  // a second printed value for the same experiment
};

const std::vector<CatalogEntry>& builtin_catalog();

/// nullptr when the id is unknown.
const CatalogEntry* find_entry(const std::string& id);

/// Parses an experiment document (SI units, no conversion). Throws ParseError naming the offending
/// field, or ValidationError when the record violates a physical bound.
ExperimentRecord load_experiment(const std::string& json_text);

/// Inverse of load_experiment.
std::string serialize_experiment(const ExperimentRecord& rec);

}  // namespace macro
