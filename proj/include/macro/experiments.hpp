#pragma once

#include "macro/classicalize.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace macro {

/// Two-path interference with a known coherence time; dx enables curve shapes.
struct PointInterference {
    double mass;
    double t;
    double f;
    std::optional<double> dx;
    bool operator==(const PointInterference&) const = default;
};

struct GratingDiffraction {
    MassGeometry geometry;
    double L1, L2;
    int slits;
    double period;
    double open_fraction;
    double source_width;
    double detector_width;
    double velocity;
    double velocity_fwhm;
    double f;
    double mean_T1() const { return L1 / velocity; }
    double mean_T2() const { return L2 / velocity; }
    bool operator==(const GratingDiffraction&) const = default;
};

struct TalbotLau {
    MassGeometry geometry;
    double T;
    double period;
    double f;
    bool operator==(const TalbotLau&) const = default;
};

struct Micromirror {
    double edge;
    double density;
    double omega;
    double x0;
    double kappa;
    double f;
    bool operator==(const Micromirror&) const = default;
};

struct Membrane {
    double radius;
    double thickness;
    double density;
    double omega;
    double cycles;
    double f;
    bool operator==(const Membrane&) const = default;
    double mass() const;
    double x0() const;
};

struct SuperconductorMaterial {
    double k_F;        // 1/m
    double gap;        // J
    double debye;      // J (hbar omega_D)
    bool operator==(const SuperconductorMaterial&) const = default;
    static SuperconductorMaterial niobium();
    static SuperconductorMaterial aluminium();
};

inline constexpr double kDefaultCurrentDifference = 3e-6;  // A

struct Squid {
    SuperconductorMaterial material;
    double length;
    double cross_section;
    double T2;
    double current_difference = kDefaultCurrentDifference;
    bool operator==(const Squid&) const = default;
    double volume() const { return length * cross_section; }
    double electron_count() const;
};

struct GasHeating {
    double mass;
    double dEdt;
    bool operator==(const GasHeating&) const = default;
};

struct CatSuperposition {
    double mass;
    double density = 1000.0;
    double dx;
    double t;
    bool operator==(const CatSuperposition&) const = default;
};

using ExperimentRecord = std::variant<PointInterference, GratingDiffraction, TalbotLau, Micromirror, Membrane,
                                      Squid, GasHeating, CatSuperposition>;

std::string class_name(const ExperimentRecord& r);
void validate_record(const ExperimentRecord& r);

/// Occupation of the pair state at wavenumber k (the squared BCS amplitude).
struct BcsAmplitudes {
    SuperconductorMaterial material;
    double gap_k2() const;    // 2 m_e Delta / hbar^2
    double shell_k2() const;  // 2 m_e hbar omega_D / hbar^2
    double k_low() const;
    double k_high() const;
    double v2(double k) const;
    double u2(double k) const { return 1.0 - v2(k); }
};

double mu_point(double M, double t, double f);
double excluded_tau_point(double M, double t, double f);

/// Decoherence exponent at tau_e = 1 s for the interference classes.
double interference_exponent(const ExperimentRecord& rec, double sigma_s, double sigma_q);
double interference_excluded_tau(const ExperimentRecord& rec, double sigma_s, double sigma_q);

double micromirror_mass(const Micromirror& m);
double micromirror_excluded_tau(const Micromirror& rec, double sigma_s, double sigma_q);
double membrane_excluded_tau(const Membrane& rec, double sigma_s, double sigma_q);

struct SquidRates {
    double diffusion;  // Gamma_diff * tau_e
    double dephasing;  // Gamma_deph * tau_e
    double total() const { return diffusion + dephasing; }
};
SquidRates squid_gamma_hat(const Squid& rec, double sigma_s, double sigma_q);
double squid_excluded_tau(const Squid& rec, double sigma_s, double sigma_q);

double gas_heating_excluded_tau(const GasHeating& rec, double sigma_q);
double cat_excluded_tau(const CatSuperposition& rec, double sigma_q);

/// Dispatches on the record class.
double excluded_tau(const ExperimentRecord& rec, double sigma_s, double sigma_q);

/// Mass of the superposed object (electron count times m_e for SQUIDs).
double record_mass(const ExperimentRecord& rec);

/// Resolved-path supremum |1/ln f|(M/m_e)^2 t where defined.
std::optional<double> saturation_tau(const ExperimentRecord& rec);

struct ScreenPattern {
    std::vector<double> x;
    std::vector<double> intensity;
};

/// Far-field signal of an N-slit grating including the blur, source, detector and velocity averages.
ScreenPattern diffraction_pattern(const GratingDiffraction& rec, const KickParams& kick,
                                  const std::vector<double>& screen);

}  // namespace macro
