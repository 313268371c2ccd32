#include "macro/classicalize.hpp"

#include "macro/errors.hpp"
#include "macro/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace macro {

using constants::hbar;
using constants::pi;

KickParams KickParams::from_length(double sigma_s, double hbar_over_sigma_q, double tau_e)
{
    if (!(hbar_over_sigma_q > 0.0)) throw DomainError("hbar/sigma_q must be positive");
    return {sigma_s, hbar / hbar_over_sigma_q, tau_e};
}

KickParams KickParams::rebased(double m) const
{
    if (!(m > 0.0)) throw DomainError("reference mass must be positive");
    double r = reference_mass / m;
    return {r * sigma_s, sigma_q, tau_e * r * r, m};
}

double mass_of(const MassGeometry& g)
{
    return std::visit([](const auto& v) { return v.mass; }, g);
}

void validate(const MassGeometry& g)
{
    auto pos = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
    };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            pos(v.mass, "mass");
            if constexpr (std::is_same_v<T, Sphere>) pos(v.radius, "radius");
            if constexpr (std::is_same_v<T, Cuboid>) {
                pos(v.a, "edge a");
                pos(v.b, "edge b");
                pos(v.c, "edge c");
            }
            if constexpr (std::is_same_v<T, Disc>) {
                pos(v.radius, "radius");
                pos(v.thickness, "thickness");
            }
        },
        g);
}

Sphere sphere_from_density(double mass, double density)
{
    return {mass, std::cbrt(3.0 * mass / (4.0 * pi * density))};
}

Cuboid cube_from_density(double edge, double density)
{
    return {density * edge * edge * edge, edge, edge, edge};
}

EffectivePointParams rescale_to_mass(const KickParams& kick, double M)
{
    if (!(M > 0.0)) throw DomainError("rescale_to_mass: mass must be positive");
    double r = kick.reference_mass / M;
    return {kick.tau_e * r * r, r * kick.sigma_s, kick.sigma_q, M};
}

namespace {

double sphere_amplitude(double u)
{
    if (u < 1e-2) {
        double u2 = u * u;
        return 1.0 - u2 / 10.0 + u2 * u2 / 280.0;
    }
    return 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

double log_sinhc(double w)
{
    w = std::abs(w);
    if (w < 0.5) {
        double w2 = w * w;
        return w2 * (1.0 / 6.0 + w2 * (-1.0 / 180.0 + w2 * (1.0 / 2835.0 - w2 / 37800.0)));
    }
    if (w < 20.0) return std::log(std::sinh(w) / w);
    return w - std::log(2.0 * w) + std::log1p(-std::exp(-2.0 * w));
}

double log_cosh(double w)
{
    w = std::abs(w);
    if (w < 20.0) {
        double sh = std::sinh(0.5 * w);
        return std::log1p(2.0 * sh * sh);
    }
    return w - std::log(2.0) + std::log1p(std::exp(-2.0 * w));
}

// e^{e1} (1 - e^{l}) without cancellation or overflow
double damped_difference(double e1, double l)
{
    if (l < 0.5) return std::exp(e1) * -std::expm1(l);
    return std::exp(e1) - std::exp(e1 + l);
}

QuadOptions feature_opts(double lo, double hi, std::initializer_list<double> pts, double rel)
{
    QuadOptions o;
    o.rel_tol = rel;
    for (double p : pts)
        if (p > lo && p < hi && std::isfinite(p)) o.breakpoints.push_back(p);
    return o;
}

// Small-separation series of the box deficit (x < s, A = a/s >= 1), cancellation free.
double box_deficit_series(double A, double r)
{
    double g = std::exp(-0.5 * A * A);
    double he_prev = 1.0, he = A;  // He_0, He_1
    double he_even = 1.0;          // He_{2m}(A)
    double dfact = 1.0;            // (2m-1)!!
    double pow_r = r * r, fact = 2.0;
    double sum = 0.0;
    for (int n = 1; n <= 40; ++n) {
        int m = n - 1;
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        double bracket = m == 0 ? -std::expm1(-0.5 * A * A) : sign * dfact - he_even * g;
        double term = pow_r / fact * bracket;
        sum += term;
        if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
        // advance He to order 2m+2
        for (int k = 2 * m + 1; k <= 2 * m + 2; ++k) {
            double next = A * he - k * he_prev;
            he_prev = he;
            he = next;
        }
        he_even = he_prev;
        dfact *= (2.0 * m + 1.0);
        pow_r *= r * r;
        fact *= (2.0 * n + 1.0) * (2.0 * n + 2.0);
    }
    return 2.0 / (A * A) * sum;
}

// Gaussian-smeared autocorrelation of a 1D box of length a (s = hbar/sigma_q): T(0) - T(x).
double box_deficit(double a, double s, double x)
{
    double A = a / s;
    double xh = std::abs(x) / a;
    if (xh == 0.0) return 0.0;
    if (A >= 1.0 && std::abs(x) < s) return box_deficit_series(A, std::abs(x) / s);
    if (A >= 1.0) {
        // triangle * Gaussian via ramp integrals; linear parts cancel analytically
        auto E = [&](double c) {
            double t = std::abs(c) / s;
            return s * s * (std::exp(-0.5 * t * t) - t * std::sqrt(0.5 * pi) * std::erfc(t / std::sqrt(2.0)));
        };
        double ax = std::abs(x);
        double lin = s * std::sqrt(2.0 * pi) * std::min(ax, a);
        double sum = lin + 2.0 * E(a) - 2.0 * s * s - E(ax - a) + 2.0 * E(ax) - E(ax + a);
        return sum / (a * a);
    }
    double A2 = A * A;
    double shift = 0.5 * xh * xh * A2;
    auto f = [&](double v) {
        double e1 = -0.5 * v * v * A2;
        double l = log_cosh(xh * v * A2) - shift;
        return 2.0 * (1.0 - v) * damped_difference(e1, l);
    };
    double w = 12.0 / A;
    double hi = std::min(1.0, xh + w);
    if (hi <= 0.0) return 0.0;
    auto o = feature_opts(0.0, hi, {w, 2.0 * w, xh - w, xh, xh - 0.5 * w, xh + 0.5 * w}, 1e-9);
    return integrate_1d(f, 0.0, hi, o).value;
}

// Polynomials P_m(rho) with lap^m exp(-r^2/2) = P_m(r^2) exp(-r^2/2) in three dimensions.
const std::vector<std::vector<double>>& radial_laplacian_polys()
{
    static const std::vector<std::vector<double>> polys = [] {
        std::vector<std::vector<double>> out{{1.0}};
        for (int m = 1; m <= 30; ++m) {
            const auto& p = out.back();
            std::size_t deg = p.size() - 1;
            std::vector<double> q(deg + 2, 0.0);
            for (std::size_t j = 0; j <= deg; ++j) {
                double c = p[j];
                // 4 rho p'' + (6 - 4 rho) p' + (rho - 3) p
                if (j >= 2) q[j - 1] += 4.0 * j * (j - 1.0) * c;
                if (j >= 1) {
                    q[j - 1] += 6.0 * j * c;
                    q[j] -= 4.0 * j * c;
                }
                q[j + 1] += c;
                q[j] -= 3.0 * c;
            }
            out.push_back(std::move(q));
        }
        return out;
    }();
    return polys;
}

// Small-separation series for the sphere, with one Laplacian moved onto the autocorrelation.
double sphere_deficit_series(double A, double r)
{
    const auto& polys = radial_laplacian_polys();
    double hi = std::min(2.0, 24.0 / A);
    double sum = 0.0, pow_r = r * r, fact = 6.0;
    for (int n = 1; n < static_cast<int>(polys.size()); ++n) {
        const auto& p = polys[n - 1];
        auto f = [&](double u) {
            double rho = u * u * A * A, poly = 0.0;
            for (std::size_t j = p.size(); j-- > 0;) poly = poly * rho + p[j];
            return (-1.5 * u + 0.75 * u * u * u) * poly * std::exp(-0.5 * rho);
        };
        QuadOptions o;
        o.rel_tol = 1e-11;
        double I = integrate_1d(f, 0.0, hi, o).value;
        double term = -3.0 / (A * A) * pow_r / fact * I;
        sum += term;
        if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
        pow_r *= r * r;
        fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return sum;
}

double sphere_norm(double R, double s)
{
    double A = R / s;
    double hi = std::min(2.0, 12.0 / A);
    auto f = [&](double u) { return 3.0 * u * u * (1.0 - 0.75 * u + u * u * u / 16.0) * std::exp(-0.5 * u * u * A * A); };
    QuadOptions o;
    o.rel_tol = 1e-10;
    return integrate_1d(f, 0.0, hi, o).value;
}

// Sphere deficit away from the overlap edge (t = x/s >= 1, 2R - x >= 15 s). The autocorrelation is the
// polynomial 1 - 3r/4R + r^3/16R^3 there, so the Gaussian average reduces to noncentral chi moments.
double sphere_deficit_bulk(double A, double t)
{
    const double rt2pi = std::sqrt(2.0 * pi), phi = std::exp(-0.5 * t * t) / rt2pi;
    const double Q = 0.5 * std::erfc(t / std::sqrt(2.0));
    // E|Y| and E|Y|^3 in units of s for Y ~ N(t e_x, I_3)
    double m1 = std::sqrt(2.0 / pi) * std::exp(-0.5 * t * t) + (t + 1.0 / t) * std::erf(t / std::sqrt(2.0));
    double tail = 0.0;  // int_t^inf (u - t)^4 phi(u) du
    if (t < 8.0) {
        double I0 = Q, I1 = phi, I2 = t * phi + Q, I3 = (t * t + 2.0) * phi, I4 = (t * t * t + 3.0 * t) * phi + 3.0 * Q;
        tail = I4 - 4.0 * t * I3 + 6.0 * t * t * I2 - 4.0 * t * t * t * I1 + t * t * t * t * I0;
    }
    double m3 = (t * t * t * t + 6.0 * t * t + 3.0 - 2.0 * tail) / t;
    double m1_0 = 2.0 * std::sqrt(2.0 / pi), m3_0 = 8.0 * std::sqrt(2.0 / pi);
    double pref = rt2pi * rt2pi * rt2pi / (4.0 * pi / 3.0 * A * A * A);
    return pref * (0.75 / A * (m1 - m1_0) - (m3 - m3_0) / (16.0 * A * A * A));
}

// Same for the homogeneous sphere (radius R): N(0) - N(x).
double sphere_deficit(double R, double s, double x)
{
    double A = R / s;
    double xh = std::abs(x) / R;
    if (xh == 0.0) return 0.0;
    if (A >= 1.0 && std::abs(x) < s) return sphere_deficit_series(A, std::abs(x) / s);
    if (A >= 1.0 && 2.0 * R - std::abs(x) >= 15.0 * s) return sphere_deficit_bulk(A, std::abs(x) / s);
    double A2 = A * A;
    double shift = 0.5 * xh * xh * A2;
    if (A >= 1.0) {
        // near or past the overlap edge N(x) is a narrow peak at u = x/R, far below N(0)
        double w = 12.0 / A;
        double lo = std::max(0.0, xh - w), hi = std::min(2.0, xh + w);
        double n0 = sphere_norm(R, s);
        if (lo >= hi) return n0;
        auto peak = [&](double u) {
            double c = 1.0 - 0.75 * u + u * u * u / 16.0;
            return 3.0 * u * u * c * std::exp(-0.5 * u * u * A2 + log_sinhc(xh * u * A2) - shift);
        };
        QuadOptions o;
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-14 * n0;
        if (xh > lo && xh < hi) o.breakpoints.push_back(xh);
        return n0 - integrate_1d(peak, lo, hi, o).value;
    }
    auto f = [&](double u) {
        double c = 1.0 - 0.75 * u + u * u * u / 16.0;
        double e1 = -0.5 * u * u * A2;
        double l = log_sinhc(xh * u * A2) - shift;
        return 3.0 * u * u * c * damped_difference(e1, l);
    };
    double w = 12.0 / A;
    double hi = std::min(2.0, xh + w);
    auto o = feature_opts(0.0, hi, {w, 2.0 * w, xh - w, xh, xh - 0.5 * w, xh + 0.5 * w}, 1e-9);
    return integrate_1d(f, 0.0, hi, o).value;
}


// int_0^1 (1 - exp(-c^2 z^2 / 2)) dz
double point_mean_deficit(double c)
{
    if (c < 0.1) {
        double c2 = c * c;
        return c2 / 6.0 - c2 * c2 / 40.0 + c2 * c2 * c2 / 336.0;
    }
    return 1.0 - std::sqrt(pi / 2.0) * std::erf(c / std::sqrt(2.0)) / c;
}

double momentum_damping(const MassGeometry& g, const KickParams& kick, double p)
{
    double se = kick.reference_mass * kick.sigma_s / mass_of(g);
    double t = se * p / hbar;
    return 0.5 * t * t;
}

}  // namespace

double structure_factor(const MassGeometry& g, const std::array<double, 3>& q)
{
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Sphere>) {
                double qq = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
                return sphere_amplitude(qq * v.radius / hbar);
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                return sinc(q[0] * v.a / (2 * hbar)) * sinc(q[1] * v.b / (2 * hbar)) *
                       sinc(q[2] * v.c / (2 * hbar));
            } else {
                // symmetry axis along x
                double ur = std::hypot(q[1], q[2]) * v.radius / hbar;
                double radial = ur < 1e-4 ? 1.0 - ur * ur / 8.0 : 2.0 * bessel_j1(ur) / ur;
                return sinc(q[0] * v.thickness / (2 * hbar)) * radial;
            }
        },
        g);
}

double gamma_cube(double a)
{
    if (a < 0.0) throw DomainError("gamma_cube: negative argument");
    if (a < 1.0) {
        double h = -0.5 * a * a, term = 1.0, sum = 0.0;
        for (int n = 0; n < 30; ++n) {
            if (n > 0) term *= h / n;
            double add = term * 2.0 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return 2.0 / (a * a) * (std::exp(-0.5 * a * a) + std::sqrt(pi / 2.0) * a * std::erf(a / std::sqrt(2.0)) - 1.0);
}

double disc_radial_factor(double z)
{
    if (z < 0.0) throw DomainError("disc_radial_factor: negative argument");
    if (z < 0.1) {
        return 1.0 + z * (-0.5 + z * (5.0 / 24 + z * (-7.0 / 96 + z * (7.0 / 320 + z * (-11.0 / 1920 + z * 143.0 / 107520)))));
    }
    return 2.0 * (1.0 - bessel_i0e(z) - bessel_i1e(z)) / z;
}

double mean_form_factor_sq(const MassGeometry& g, double sigma_q)
{
    if (sigma_q <= 0.0) return 1.0;
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Sphere>) {
                return sphere_norm(v.radius, hbar / sigma_q);
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                return gamma_cube(sigma_q * v.a / hbar) * gamma_cube(sigma_q * v.b / hbar) *
                       gamma_cube(sigma_q * v.c / hbar);
            } else {
                double z = std::pow(sigma_q * v.radius / hbar, 2);
                return gamma_cube(sigma_q * v.thickness / hbar) * disc_radial_factor(z);
            }
        },
        g);
}

double effective_tau(const MassGeometry& g, const KickParams& kick)
{
    validate(g);
    double r = mass_of(g) / kick.reference_mass;
    return kick.tau_e / (r * r * mean_form_factor_sq(g, kick.sigma_q));
}

double disc_rate(const Disc& d, const KickParams& kick)
{
    return effective_tau(MassGeometry{d}, kick);
}

double coherence_deficit(const MassGeometry& g, double sigma_q, double x)
{
    if (sigma_q <= 0.0 || x == 0.0) return 0.0;
    double s = hbar / sigma_q;
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return -std::expm1(-0.5 * (x / s) * (x / s));
            } else if constexpr (std::is_same_v<T, Sphere>) {
                return sphere_deficit(v.radius, s, x);
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                return gamma_cube(v.b / s) * gamma_cube(v.c / s) * box_deficit(v.a, s, x);
            } else {
                double z = std::pow(v.radius / s, 2);
                return disc_radial_factor(z) * box_deficit(v.thickness, s, x);
            }
        },
        g);
}

double one_minus_gtilde_1d(const MassGeometry& g, const KickParams& kick, double x, double p)
{
    double A = momentum_damping(g, kick, p);
    double n0 = mean_form_factor_sq(g, kick.sigma_q);
    return -std::expm1(-A) + std::exp(-A) * coherence_deficit(g, kick.sigma_q, x) / n0;
}

double gtilde_1d(const MassGeometry& g, const KickParams& kick, double x, double p)
{
    return 1.0 - one_minus_gtilde_1d(g, kick, x, p);
}

double loss_density(const MassGeometry& g, const KickParams& kick, double x, double p)
{
    double r = mass_of(g) / kick.reference_mass;
    double A = momentum_damping(g, kick, p);
    double n0 = mean_form_factor_sq(g, kick.sigma_q);
    return r * r * (n0 * -std::expm1(-A) + std::exp(-A) * coherence_deficit(g, kick.sigma_q, x));
}

namespace {

// int_0^1 deficit(x z) dz
double mean_deficit(const MassGeometry& g, double sigma_q, double x)
{
    if (sigma_q <= 0.0 || x == 0.0) return 0.0;
    if (std::holds_alternative<PointMass>(g)) return point_mean_deficit(std::abs(x) * sigma_q / hbar);
    double s = hbar / sigma_q;
    double zc = s / std::abs(x);
    auto f = [&](double z) { return coherence_deficit(g, sigma_q, x * z); };
    auto o = feature_opts(0.0, 1.0, {zc, 3.0 * zc, 10.0 * zc}, 1e-7);
    return integrate_1d(f, 0.0, 1.0, o).value;
}

}  // namespace

double free_flight_exponent(double x, double T1, double T2, const MassGeometry& g, const KickParams& kick)
{
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw DomainError("free flight times must be positive");
    validate(g);
    if (x == 0.0) return 0.0;
    double M = mass_of(g);
    double r = M / kick.reference_mass;
    double n0 = mean_form_factor_sq(g, kick.sigma_q);
    double dbar = mean_deficit(g, kick.sigma_q, x);
    auto segment = [&](double T) {
        double A = momentum_damping(g, kick, M * x / T);
        return T * (n0 * -std::expm1(-A) + std::exp(-A) * dbar);
    };
    return r * r * (segment(T1) + segment(T2)) / kick.tau_e;
}

double free_flight_blur(double x, double T1, double T2, const MassGeometry& g, const KickParams& kick)
{
    return std::exp(-free_flight_exponent(x, T1, T2, g, kick));
}

double position_decoherence_rate(const MassGeometry& g, const KickParams& kick, double dx)
{
    if (dx < 0.0) throw DomainError("position_decoherence_rate: negative separation");
    validate(g);
    double r = mass_of(g) / kick.reference_mass;
    return r * r * coherence_deficit(g, kick.sigma_q, dx) / kick.tau_e;
}

double energy_gain_rate(double M, double omega, const KickParams& kick)
{
    if (omega < 0.0) throw DomainError("energy_gain_rate: negative frequency");
    auto eff = rescale_to_mass(kick, M);
    return (kick.sigma_q * kick.sigma_q / (2.0 * M) + 0.5 * M * omega * omega * eff.sigma_s_eff * eff.sigma_s_eff) / eff.tau;
}

}  // namespace macro
