#pragma once

#include <array>
#include <string>
#include <variant>

namespace macro {

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double h = 2.0 * pi * hbar;          // J s
inline constexpr double m_e = 9.1093837015e-31;       // kg
inline constexpr double amu = 1.66053906660e-27;      // kg
inline constexpr double k_B = 1.380649e-23;           // J/K
inline constexpr double e_charge = 1.602176634e-19;   // C
inline constexpr double meV = 1e-3 * e_charge;        // J
}  // namespace constants

/// Parameters of the modification for the reference (electron) mass.
struct KickParams {
    double sigma_s = 0.0;  // m
    double sigma_q = 0.0;  // kg m/s
    double tau_e = 1.0;    // s
    double reference_mass = constants::m_e;  // kg

    static KickParams from_length(double sigma_s, double hbar_over_sigma_q, double tau_e = 1.0);
    /// Same modification expressed for another reference mass.
    KickParams rebased(double new_reference_mass) const;
};

struct ParameterBounds {
    double sigma_s_max = 2.0e-11;
    double hbar_over_sigma_q_min = 1.0e-14;
    std::string id = "default";

    static ParameterBounds default_preset() { return {2.0e-11, 1.0e-14, "default"}; }
    static ParameterBounds squid_preset() { return {1.0e-10, 1.0e-10, "squid"}; }
};

struct PointMass {
    double mass;
    bool operator==(const PointMass&) const = default;
};
struct Sphere {
    double mass, radius;
    bool operator==(const Sphere&) const = default;
};
/// The 1D reductions act along edge `a`.
struct Cuboid {
    double mass, a, b, c;
    bool operator==(const Cuboid&) const = default;
};
/// The 1D reductions act along the symmetry axis (thickness direction).
struct Disc {
    double mass, radius, thickness;
    bool operator==(const Disc&) const = default;
};

using MassGeometry = std::variant<PointMass, Sphere, Cuboid, Disc>;

double mass_of(const MassGeometry& g);
void validate(const MassGeometry& g);
Sphere sphere_from_density(double mass, double density);
Cuboid cube_from_density(double edge, double density);

struct EffectivePointParams {
    double tau;
    double sigma_s_eff;
    double sigma_q;
    double mass;
};

EffectivePointParams rescale_to_mass(const KickParams& kick, double M);

/// Normalized mass form factor for a momentum transfer q (kg m/s).
double structure_factor(const MassGeometry& g, const std::array<double, 3>& q);

/// <|F(q)|^2> under the isotropic Gaussian momentum kick of width sigma_q.
double mean_form_factor_sq(const MassGeometry& g, double sigma_q);

double effective_tau(const MassGeometry& g, const KickParams& kick);

/// 2/a^2 [exp(-a^2/2) + sqrt(pi/2) a erf(a/sqrt 2) - 1]; the average of sinc^2 along one edge.
double gamma_cube(double a);

/// Radial disc average 2(1 - i0e(z) - i1e(z))/z with z = (sigma_q R / hbar)^2.
double disc_radial_factor(double z);

double disc_rate(const Disc& d, const KickParams& kick);

/// <|F|^2> - <|F|^2 cos(q_x x/hbar)> for displacement x along the reduction axis.
double coherence_deficit(const MassGeometry& g, double sigma_q, double x);

double gtilde_1d(const MassGeometry& g, const KickParams& kick, double x, double p);

/// 1 - gtilde_1d, evaluated without cancellation.
double one_minus_gtilde_1d(const MassGeometry& g, const KickParams& kick, double x, double p);

/// tau_e-independent loss density: (tau_e/tau)(1 - gtilde_1d(x,p)).
double loss_density(const MassGeometry& g, const KickParams& kick, double x, double p);

/// -ln R(x) for the two free-flight segments.
double free_flight_exponent(double x, double T1, double T2, const MassGeometry& g, const KickParams& kick);

double free_flight_blur(double x, double T1, double T2, const MassGeometry& g, const KickParams& kick);

double position_decoherence_rate(const MassGeometry& g, const KickParams& kick, double dx);

double energy_gain_rate(double M, double omega, const KickParams& kick);

}  // namespace macro
