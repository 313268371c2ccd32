#pragma once

#include "macro/classicalize.hpp"
#include "macro/experiments.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace macro {

struct GridSpec {
    double min = 1e-15;
    double max = 1e-6;
    int points = 61;
    std::vector<double> values() const;
};

std::vector<double> log_grid(double lo, double hi, int points);

struct CurvePoint {
    double hbar_over_sigma_q;
    std::optional<double> tau_excluded;  // empty on a failed evaluation
    std::string error;
};

struct ExclusionCurve {
    double sigma_s = 0.0;
    std::vector<CurvePoint> points;
    std::string experiment_id;
    std::map<std::string, std::string> metadata;
    bool has_gaps() const;
};

ExclusionCurve exclusion_curve(const ExperimentRecord& rec, double sigma_s, const std::vector<double>& grid,
                               const std::string& id = "");

/// Controls the maximization; independent of the plotting grid.
struct SearchSpec {
    double upper = 10.0;      // m, largest hbar/sigma_q probed
    int per_decade = 10;
    double decade_tol = 1e-3;  // golden-section bracket width in log10 units
};

struct MacroscopicityReport {
    double mu = 0.0;
    double tau_max = 0.0;
    double argmax_sigma_s = 0.0;
    double argmax_hbar_over_sigma_q = 0.0;
    std::string bounds_id;
    bool saturated = false;
    bool sigma_s_monotone = true;
    std::string method;
    std::vector<std::string> notes;
};

MacroscopicityReport macroscopicity(const ExperimentRecord& rec, const ParameterBounds& bounds,
                                    const SearchSpec& search = {});

/// Preset the record class calls for: SQUIDs use the tighter bounds.
ParameterBounds bounds_for(const ExperimentRecord& rec);

std::map<std::string, std::string> model_metadata(const ExperimentRecord& rec);

}  // namespace macro
