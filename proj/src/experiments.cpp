#include "macro/experiments.hpp"

#include "macro/errors.hpp"
#include "macro/numerics.hpp"

#include <cmath>

namespace macro {

using constants::hbar;
using constants::m_e;
using constants::pi;

namespace {

void require_fraction(double f)
{
    if (!(f > 0.0 && f < 1.0)) throw DomainError("coherence fraction must lie in (0,1)");
}

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

double mass_ratio_sq(double M)
{
    double r = M / m_e;
    return r * r;
}

KickParams unit_kick(double sigma_s, double sigma_q)
{
    if (sigma_s < 0.0 || sigma_q < 0.0) throw DomainError("kick widths must be non-negative");
    return {sigma_s, sigma_q, 1.0};
}

}  // namespace

double Membrane::mass() const { return density * pi * radius * radius * thickness; }

double Membrane::x0() const { return std::sqrt(2.0 * hbar / (mass() * omega)); }

SuperconductorMaterial SuperconductorMaterial::niobium() { return {1.18e10, 1.44 * constants::meV, 23.7 * constants::meV}; }

SuperconductorMaterial SuperconductorMaterial::aluminium() { return {1.74e10, 0.17 * constants::meV, 36.9 * constants::meV}; }

double Squid::electron_count() const
{
    double kf = material.k_F;
    return kf * kf * kf / (3.0 * pi * pi) * volume();
}

std::string class_name(const ExperimentRecord& r)
{
    static const char* names[] = {"PointInterference", "GratingDiffraction", "TalbotLau", "Micromirror",
                                  "Membrane",          "Squid",              "GasHeating", "CatSuperposition"};
    return names[r.index()];
}

void validate_record(const ExperimentRecord& r)
{
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointInterference>) {
                require_positive(v.mass, "mass");
                require_positive(v.t, "t");
                require_fraction(v.f);
                if (v.dx) require_positive(*v.dx, "dx");
            } else if constexpr (std::is_same_v<T, GratingDiffraction>) {
                validate(v.geometry);
                require_positive(v.L1, "L1");
                require_positive(v.L2, "L2");
                if (v.slits < 2) throw DomainError("slit count must be at least 2");
                require_positive(v.period, "period");
                if (!(v.open_fraction > 0.0 && v.open_fraction <= 1.0)) throw DomainError("open fraction must lie in (0,1]");
                if (v.source_width < 0.0 || v.detector_width < 0.0) throw DomainError("widths must be non-negative");
                require_positive(v.velocity, "velocity");
                if (v.velocity_fwhm < 0.0) throw DomainError("velocity spread must be non-negative");
                require_fraction(v.f);
            } else if constexpr (std::is_same_v<T, TalbotLau>) {
                validate(v.geometry);
                require_positive(v.T, "T");
                require_positive(v.period, "period");
                require_fraction(v.f);
            } else if constexpr (std::is_same_v<T, Micromirror>) {
                require_positive(v.edge, "edge");
                require_positive(v.density, "density");
                require_positive(v.omega, "omega");
                require_positive(v.x0, "x0");
                if (v.kappa < 0.0) throw DomainError("kappa must be non-negative");
                require_fraction(v.f);
            } else if constexpr (std::is_same_v<T, Membrane>) {
                require_positive(v.radius, "radius");
                require_positive(v.thickness, "thickness");
                require_positive(v.density, "density");
                require_positive(v.omega, "omega");
                require_positive(v.cycles, "cycles");
                require_fraction(v.f);
            } else if constexpr (std::is_same_v<T, Squid>) {
                require_positive(v.material.k_F, "k_F");
                if (v.material.gap < 0.0) throw DomainError("gap must be non-negative");
                require_positive(v.material.debye, "debye energy");
                if (!(v.material.gap < v.material.debye)) throw DomainError("gap must be below the Debye energy");
                require_positive(v.length, "length");
                require_positive(v.cross_section, "cross section");
                require_positive(v.T2, "T2");
                if (v.current_difference < 0.0) throw DomainError("current difference must be non-negative");
            } else if constexpr (std::is_same_v<T, GasHeating>) {
                require_positive(v.mass, "mass");
                require_positive(v.dEdt, "dEdt");
            } else {
                require_positive(v.mass, "mass");
                require_positive(v.density, "density");
                require_positive(v.dx, "dx");
                require_positive(v.t, "t");
            }
        },
        r);
}

double excluded_tau_point(double M, double t, double f)
{
    require_positive(M, "mass");
    require_positive(t, "t");
    require_fraction(f);
    return mass_ratio_sq(M) * t / std::abs(std::log(f));
}

double mu_point(double M, double t, double f) { return std::log10(excluded_tau_point(M, t, f)); }

double interference_exponent(const ExperimentRecord& rec, double sigma_s, double sigma_q)
{
    KickParams kick = unit_kick(sigma_s, sigma_q);
    if (auto* p = std::get_if<PointInterference>(&rec)) {
        if (!p->dx) throw ConfigurationError("point interference curve needs the path separation dx");
        // symmetric diamond: separation opens linearly to dx and closes again
        return free_flight_exponent(*p->dx, 0.5 * p->t, 0.5 * p->t, PointMass{p->mass}, kick);
    }
    if (auto* g = std::get_if<GratingDiffraction>(&rec)) {
        return free_flight_exponent(g->period, g->mean_T1(), g->mean_T2(), g->geometry, kick);
    }
    if (auto* tl = std::get_if<TalbotLau>(&rec)) {
        double x = constants::h * tl->T / (mass_of(tl->geometry) * tl->period);
        return free_flight_exponent(x, tl->T, tl->T, tl->geometry, kick);
    }
    throw ConfigurationError("record is not an interference experiment");
}

double interference_excluded_tau(const ExperimentRecord& rec, double sigma_s, double sigma_q)
{
    double f = std::visit(
        [](const auto& v) -> double {
            if constexpr (requires { v.f; }) return v.f;
            return 0.5;
        },
        rec);
    require_fraction(f);
    return interference_exponent(rec, sigma_s, sigma_q) / std::abs(std::log(f));
}

double micromirror_mass(const Micromirror& m) { return m.density * m.edge * m.edge * m.edge; }

double micromirror_excluded_tau(const Micromirror& rec, double sigma_s, double sigma_q)
{
    require_fraction(rec.f);
    KickParams kick = unit_kick(sigma_s, sigma_q);
    MassGeometry cube = cube_from_density(rec.edge, rec.density);
    double amp = 2.0 * rec.kappa * rec.x0;
    if (amp == 0.0 || (sigma_q == 0.0 && sigma_s == 0.0)) return 0.0;
    auto f = [&](double xi) {
        double sh = std::sin(0.5 * xi);
        double x = amp * sh * sh;
        double p = 2.0 * hbar * rec.kappa / rec.x0 * std::sin(xi);
        return loss_density(cube, kick, x, p);
    };
    QuadOptions o;
    o.rel_tol = 1e-7;
    if (sigma_q > 0.0) {
        double s = hbar / sigma_q;
        for (double k : {0.3, 1.0, 3.0, 10.0}) {
            double r = k * s / amp;
            if (r < 1.0) o.breakpoints.push_back(2.0 * std::asin(std::sqrt(r)));
        }
    }
    // the path is symmetric about half a period
    double integral = 2.0 * integrate_1d(f, 0.0, pi, o).value;
    return integral / rec.omega / std::abs(std::log(rec.f));
}

double membrane_excluded_tau(const Membrane& rec, double sigma_s, double sigma_q)
{
    (void)sigma_s;  // position spread negligible at this mass and amplitude
    require_fraction(rec.f);
    if (sigma_q <= 0.0) return 0.0;
    double M = rec.mass();
    double a = sigma_q * rec.thickness / hbar;
    double gamma = gamma_cube(a);
    double radial = disc_radial_factor(std::pow(sigma_q * rec.radius / hbar, 2));
    double x0 = rec.x0();
    double rate = mass_ratio_sq(M) * gamma * radial;  // tau_e / tau
    double t = 2.0 * pi * rec.cycles / rec.omega;
    double bracket = -std::expm1(-0.5 * a * a);
    return rate * t * x0 * x0 / (gamma * rec.thickness * rec.thickness) * bracket / (1.0 / std::sqrt(rec.f) - 1.0);
}

double squid_excluded_tau(const Squid& rec, double sigma_s, double sigma_q)
{
    return squid_gamma_hat(rec, sigma_s, sigma_q).total() * rec.T2;
}

double gas_heating_excluded_tau(const GasHeating& rec, double sigma_q)
{
    require_positive(rec.dEdt, "dEdt");
    return mass_ratio_sq(rec.mass) * sigma_q * sigma_q / (2.0 * rec.mass * rec.dEdt);
}

double cat_excluded_tau(const CatSuperposition& rec, double sigma_q)
{
    require_positive(rec.dx, "dx");
    MassGeometry g = sphere_from_density(rec.mass, rec.density);
    return rec.t * mass_ratio_sq(rec.mass) * coherence_deficit(g, sigma_q, rec.dx);
}

double excluded_tau(const ExperimentRecord& rec, double sigma_s, double sigma_q)
{
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointInterference> || std::is_same_v<T, GratingDiffraction> ||
                          std::is_same_v<T, TalbotLau>)
                return interference_excluded_tau(rec, sigma_s, sigma_q);
            else if constexpr (std::is_same_v<T, Micromirror>)
                return micromirror_excluded_tau(v, sigma_s, sigma_q);
            else if constexpr (std::is_same_v<T, Membrane>)
                return membrane_excluded_tau(v, sigma_s, sigma_q);
            else if constexpr (std::is_same_v<T, Squid>)
                return squid_excluded_tau(v, sigma_s, sigma_q);
            else if constexpr (std::is_same_v<T, GasHeating>)
                return gas_heating_excluded_tau(v, sigma_q);
            else
                return cat_excluded_tau(v, sigma_q);
        },
        rec);
}

double record_mass(const ExperimentRecord& rec)
{
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointInterference> || std::is_same_v<T, GasHeating> ||
                          std::is_same_v<T, CatSuperposition>)
                return v.mass;
            else if constexpr (std::is_same_v<T, GratingDiffraction> || std::is_same_v<T, TalbotLau>)
                return mass_of(v.geometry);
            else if constexpr (std::is_same_v<T, Micromirror>)
                return micromirror_mass(v);
            else if constexpr (std::is_same_v<T, Membrane>)
                return v.mass();
            else
                return v.electron_count() * m_e;
        },
        rec);
}

std::optional<double> saturation_tau(const ExperimentRecord& rec)
{
    return std::visit(
        [&](const auto& v) -> std::optional<double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointInterference>)
                return excluded_tau_point(v.mass, v.t, v.f);
            else if constexpr (std::is_same_v<T, GratingDiffraction>)
                return excluded_tau_point(mass_of(v.geometry), v.mean_T1() + v.mean_T2(), v.f);
            else if constexpr (std::is_same_v<T, TalbotLau>)
                return excluded_tau_point(mass_of(v.geometry), 2.0 * v.T, v.f);
            else if constexpr (std::is_same_v<T, Micromirror>)
                return excluded_tau_point(micromirror_mass(v), 2.0 * pi / v.omega, v.f);
            else if constexpr (std::is_same_v<T, Squid>)
                return v.electron_count() * v.T2;
            else if constexpr (std::is_same_v<T, CatSuperposition>)
                return mass_ratio_sq(v.mass) * v.t;
            else
                return std::nullopt;
        },
        rec);
}

}  // namespace macro
