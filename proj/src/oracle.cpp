#include "macro/oracle.hpp"

#include "macro/errors.hpp"

#include <algorithm>
#include <cmath>

namespace macro {

using constants::hbar;
using constants::pi;

double JumpProcessSpec::duration() const
{
    switch (path) {
    case PathKind::Static: return t;
    case PathKind::FreeFlight: return T1 + T2;
    case PathKind::Harmonic: return 2.0 * pi / omega;
    }
    return 0.0;
}

std::array<double, 2> JumpProcessSpec::path_at(double u) const
{
    switch (path) {
    case PathKind::Static: return {dx, 0.0};
    case PathKind::FreeFlight: {
        double M = mass_of(geometry);
        if (u < T1) return {dx * u / T1, M * dx / T1};
        return {dx * (1.0 - (u - T1) / T2), -M * dx / T2};
    }
    case PathKind::Harmonic: {
        double sh = std::sin(0.5 * omega * u);
        return {dx * sh * sh, p_amplitude * std::sin(omega * u)};
    }
    }
    return {0.0, 0.0};
}

namespace {

double sphere_amp(double u)
{
    if (u < 1e-3) return 1.0 - u * u / 10.0;
    return 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

double airy_amp(double u)
{
    if (u < 1e-4) return 1.0 - u * u / 8.0;
    return 2.0 * bessel_j1(u) / u;
}

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double gauss(double x, double sd) { return std::exp(-0.5 * x * x / (sd * sd)) / (std::sqrt(2.0 * pi) * sd); }

double normal(Rng& rng, double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0; }

std::array<double, 3> random_direction(Rng& rng)
{
    double c = 2.0 * uniform(rng) - 1.0, phi = 2.0 * pi * uniform(rng);
    double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {c, sn * std::cos(phi), sn * std::sin(phi)};
}

// u = q L / (2 hbar) from N(0, su^2) * sinc^2(u)
double draw_sinc_axis(Rng& rng, double su)
{
    if (su < 1.0) {
        for (;;) {
            double u = normal(rng, su);
            double s = sinc(u);
            if (uniform(rng) < s * s) return u;
        }
    }
    for (;;) {
        // envelope min(1, 1/u^2): half the mass inside |u| < 1
        double u;
        if (uniform(rng) < 0.5)
            u = 2.0 * uniform(rng) - 1.0;
        else
            u = (uniform(rng) < 0.5 ? 1.0 : -1.0) / (1.0 - uniform(rng));
        double env = std::abs(u) < 1.0 ? 1.0 : 1.0 / (u * u);
        double s = sinc(u);
        double acc = std::exp(-0.5 * u * u / (su * su)) * s * s / env;
        if (uniform(rng) < acc) return u;
    }
}

constexpr double kSphereEnv = 18.0;  // |F|^2 <= min(1, 18/u^4)
constexpr double kDiscEnv = 1.83;    // (2 J1(u)/u)^2 <= min(1, 1.83 u^(-8/3))

// Radial u with density propto u^2 min(1, 18/u^4); returns the density normalizer too.
double draw_sphere_envelope(Rng& rng)
{
    double u0 = std::pow(kSphereEnv, 0.25);
    double m1 = u0 * u0 * u0 / 3.0, m2 = kSphereEnv / u0;
    if (uniform(rng) * (m1 + m2) < m1) return u0 * std::cbrt(uniform(rng));
    return u0 / (1.0 - uniform(rng));
}

double sphere_envelope_pdf(double u)
{
    double u0 = std::pow(kSphereEnv, 0.25);
    double norm = u0 * u0 * u0 / 3.0 + kSphereEnv / u0;
    return u * u * std::min(1.0, kSphereEnv / std::pow(u, 4)) / norm;
}

// Radial u in the plane with density propto u min(1, c u^(-8/3)).
double draw_disc_envelope(Rng& rng)
{
    double u1 = std::pow(kDiscEnv, 3.0 / 8.0);
    double m1 = 0.5 * u1 * u1, m2 = 1.5 * kDiscEnv * std::pow(u1, -2.0 / 3.0);
    if (uniform(rng) * (m1 + m2) < m1) return u1 * std::sqrt(uniform(rng));
    return u1 * std::pow(1.0 - uniform(rng), -1.5);
}

double disc_envelope_pdf(double u)
{
    double u1 = std::pow(kDiscEnv, 3.0 / 8.0);
    double norm = 0.5 * u1 * u1 + 1.5 * kDiscEnv * std::pow(u1, -2.0 / 3.0);
    return u * std::min(1.0, kDiscEnv * std::pow(u, -8.0 / 3.0)) / norm;
}

}  // namespace

WeightedKickSampler::WeightedKickSampler(const MassGeometry& g, double sigma_q) : g_(g), sigma_q_(sigma_q)
{
    validate(g);
    if (sigma_q < 0.0) throw DomainError("sigma_q must be non-negative");
}

std::array<double, 3> WeightedKickSampler::operator()(Rng& rng) const
{
    const double sq = sigma_q_;
    if (sq == 0.0) return {0.0, 0.0, 0.0};
    return std::visit(
        [&](const auto& v) -> std::array<double, 3> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return {normal(rng, sq), normal(rng, sq), normal(rng, sq)};
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                std::array<double, 3> q;
                double L[3] = {v.a, v.b, v.c};
                for (int i = 0; i < 3; ++i) {
                    double su = sq * L[i] / (2.0 * hbar);
                    q[i] = draw_sinc_axis(rng, su) * 2.0 * hbar / L[i];
                }
                return q;
            } else if constexpr (std::is_same_v<T, Sphere>) {
                double A = sq * v.radius / hbar;
                for (;;) {
                    if (A < 2.0) {
                        std::array<double, 3> q{normal(rng, sq), normal(rng, sq), normal(rng, sq)};
                        double F = sphere_amp(std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) * v.radius / hbar);
                        if (uniform(rng) < F * F) return q;
                    } else {
                        double u = draw_sphere_envelope(rng);
                        double F = sphere_amp(u);
                        double env = std::min(1.0, kSphereEnv / std::pow(u, 4));
                        if (uniform(rng) < std::exp(-0.5 * u * u / (A * A)) * F * F / env) {
                            auto d = random_direction(rng);
                            double qq = u * hbar / v.radius;
                            return {qq * d[0], qq * d[1], qq * d[2]};
                        }
                    }
                }
            } else {
                double su = sq * v.thickness / (2.0 * hbar);
                double qx = draw_sinc_axis(rng, su) * 2.0 * hbar / v.thickness;
                double A = sq * v.radius / hbar;
                for (;;) {
                    if (A < 2.0) {
                        double qy = normal(rng, sq), qz = normal(rng, sq);
                        double F = airy_amp(std::hypot(qy, qz) * v.radius / hbar);
                        if (uniform(rng) < F * F) return {qx, qy, qz};
                    } else {
                        double u = draw_disc_envelope(rng);
                        double F = airy_amp(u);
                        double env = std::min(1.0, kDiscEnv * std::pow(u, -8.0 / 3.0));
                        if (uniform(rng) < std::exp(-0.5 * u * u / (A * A)) * F * F / env) {
                            double phi = 2.0 * pi * uniform(rng), qq = u * hbar / v.radius;
                            return {qx, qq * std::cos(phi), qq * std::sin(phi)};
                        }
                    }
                }
            }
        },
        g_);
}

McEstimate mc_visibility_decay(const JumpProcessSpec& spec)
{
    validate(spec.geometry);
    double T = spec.duration();
    if (!(T > 0.0)) throw DomainError("jump process needs a positive duration");
    if (spec.kick.sigma_q == 0.0 && spec.kick.sigma_s == 0.0) return {1.0, 0.0, spec.n, spec.seed};
    double M = mass_of(spec.geometry);
    double rate = 1.0 / effective_tau(spec.geometry, spec.kick);
    double se = spec.kick.reference_mass * spec.kick.sigma_s / M;
    WeightedKickSampler draw_q(spec.geometry, spec.kick.sigma_q);
    auto sample = [&](Rng& rng) {
        std::poisson_distribution<long> jumps(rate * T);
        long k = jumps(rng);
        double phase = 0.0;
        for (long j = 0; j < k; ++j) {
            double u = T * uniform(rng);
            auto xp = spec.path_at(u);
            double qx = draw_q(rng)[0];
            double s = normal(rng, se);
            phase += (qx * xp[0] - xp[1] * s) / hbar;
        }
        return std::cos(phase);
    };
    return mc_integrate(sample, spec.n, spec.seed);
}

McEstimate mc_energy_gain(const JumpProcessSpec& spec)
{
    double M = mass_of(spec.geometry);
    double T = spec.t;
    if (!(T > 0.0) || spec.omega < 0.0) throw DomainError("energy gain needs t > 0 and omega >= 0");
    if (spec.kick.sigma_q == 0.0 && spec.kick.sigma_s == 0.0) return {0.0, 0.0, spec.n, spec.seed};
    auto eff = rescale_to_mass(spec.kick, M);
    double rate = 1.0 / eff.tau, w = spec.omega;
    auto sample = [&](Rng& rng) {
        double x = 0.0, p = 0.0, now = 0.0;
        std::exponential_distribution<double> wait(rate);
        for (;;) {
            double dt = wait(rng);
            if (now + dt > T) break;
            now += dt;
            if (w > 0.0) {
                double c = std::cos(w * dt), s = std::sin(w * dt);
                double xn = x * c + p / (M * w) * s;
                p = p * c - M * w * x * s;
                x = xn;
            } else {
                x += p * dt / M;
            }
            x += normal(rng, eff.sigma_s_eff);
            p += normal(rng, eff.sigma_q);
        }
        return (p * p / (2.0 * M) + 0.5 * M * w * w * x * x) / T;
    };
    return mc_integrate(sample, spec.n, spec.seed);
}

namespace {

// Unnormalized 1D kick marginal along x (Gaussian times the transverse-integrated |F|^2).
double marginal_unnorm(const MassGeometry& g, double sq, double q)
{
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return gauss(q, sq);
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                double s = sinc(q * v.a / (2.0 * hbar));
                return gauss(q, sq) * s * s;
            } else if constexpr (std::is_same_v<T, Disc>) {
                double s = sinc(q * v.thickness / (2.0 * hbar));
                return gauss(q, sq) * s * s;
            } else {
                auto f = [&](double qp) {
                    double F = sphere_amp(std::hypot(q, qp) * v.radius / hbar);
                    return qp / (sq * sq) * std::exp(-0.5 * qp * qp / (sq * sq)) * F * F;
                };
                return gauss(q, sq) * integrate_1d(f, 0.0, 9.0 * sq, 1e-12).value;
            }
        },
        g);
}

}  // namespace

double gtilde_direct(const MassGeometry& g, const KickParams& kick, double x, double p, double rel_tol)
{
    validate(g);
    double sq = kick.sigma_q;
    double se = kick.reference_mass * kick.sigma_s / mass_of(g);
    if (sq == 0.0 && se == 0.0) return 1.0;

    double Z = 1.0;
    if (sq > 0.0 && !std::holds_alternative<PointMass>(g)) {
        Z = 2.0 * integrate_1d([&](double q) { return marginal_unnorm(g, sq, q); }, 0.0, 9.0 * sq, rel_tol).value;
    }
    auto qpart = [&](double q) { return marginal_unnorm(g, sq, q) / Z * std::cos(q * x / hbar); };
    auto spart = [&](double s) { return gauss(s, se) * std::cos(p * s / hbar); };

    if (sq == 0.0) return integrate_1d(spart, -9.0 * se, 9.0 * se, rel_tol).value;
    if (se == 0.0) return integrate_1d(qpart, -9.0 * sq, 9.0 * sq, rel_tol).value;
    auto f = [&](std::span<const double> v) { return spart(v[0]) * qpart(v[1]); };
    return integrate_nd(f, {{-9.0 * se, 9.0 * se}, {-9.0 * sq, 9.0 * sq}}, rel_tol).value;
}

double numeric_gtilde_check(const MassGeometry& g, const KickParams& kick, const std::vector<GtildePoint>& points)
{
    double worst = 0.0;
    for (const auto& pt : points)
        worst = std::max(worst, std::abs(gtilde_direct(g, kick, pt.x, pt.p) - gtilde_1d(g, kick, pt.x, pt.p)));
    return worst;
}

McEstimate mc_mean_form_factor_sq(const MassGeometry& g, double sigma_q, std::size_t n, std::uint64_t seed)
{
    validate(g);
    if (sigma_q <= 0.0 || std::holds_alternative<PointMass>(g)) return {1.0, 0.0, n, seed};
    const double sq = sigma_q;

    // weight of one sinc^2 axis, u = q L / 2 hbar
    auto axis = [&](Rng& rng, double L) {
        double su = sq * L / (2.0 * hbar);
        if (su < 1.0) {
            double s = sinc(normal(rng, su));
            return s * s;
        }
        double u = uniform(rng) < 0.5 ? 2.0 * uniform(rng) - 1.0
                                      : (uniform(rng) < 0.5 ? 1.0 : -1.0) / (1.0 - uniform(rng));
        double pdf = (std::abs(u) < 1.0 ? 1.0 : 1.0 / (u * u)) / 4.0;
        double s = sinc(u);
        return gauss(u, su) * s * s / pdf;
    };
    auto sample = [&](Rng& rng) -> double {
        return std::visit(
            [&](const auto& v) -> double {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cuboid>) {
                    return axis(rng, v.a) * axis(rng, v.b) * axis(rng, v.c);
                } else if constexpr (std::is_same_v<T, Sphere>) {
                    double A = sq * v.radius / hbar;
                    if (A < 2.0) {
                        double qq = std::sqrt(std::pow(normal(rng, A), 2) + std::pow(normal(rng, A), 2) +
                                              std::pow(normal(rng, A), 2));
                        double F = sphere_amp(qq);
                        return F * F;
                    }
                    double u = draw_sphere_envelope(rng);
                    double maxwell = std::sqrt(2.0 / pi) * u * u / (A * A * A) * std::exp(-0.5 * u * u / (A * A));
                    double F = sphere_amp(u);
                    return maxwell * F * F / sphere_envelope_pdf(u);
                } else if constexpr (std::is_same_v<T, Disc>) {
                    double w = axis(rng, v.thickness);
                    double A = sq * v.radius / hbar;
                    if (A < 2.0) {
                        double F = airy_amp(std::hypot(normal(rng, A), normal(rng, A)));
                        return w * F * F;
                    }
                    double u = draw_disc_envelope(rng);
                    double rayleigh = u / (A * A) * std::exp(-0.5 * u * u / (A * A));
                    double F = airy_amp(u);
                    return w * rayleigh * F * F / disc_envelope_pdf(u);
                } else {
                    return 1.0;
                }
            },
            g);
    };
    return mc_integrate(sample, n, seed);
}

McEstimate mc_micromirror_excluded_tau(const Micromirror& rec, double sigma_s, double sigma_q, std::size_t n,
                                       std::uint64_t seed)
{
    validate_record(rec);
    if (!(sigma_q > 0.0)) throw DomainError("mc_micromirror_excluded_tau: sigma_q must be positive");
    MassGeometry cube = cube_from_density(rec.edge, rec.density);
    double M = mass_of(cube);
    double r = M / constants::m_e;
    double rate = r * r * mean_form_factor_sq(cube, sigma_q);  // tau_e / tau
    double amp = 2.0 * rec.kappa * rec.x0, pamp = 2.0 * hbar * rec.kappa / rec.x0;
    double se = constants::m_e * sigma_s / M;

    // |u| = |q_x| a / 2 hbar has density 2 N(u; su) sinc^2(u) / Z
    double su = sigma_q * rec.edge / (2.0 * hbar);
    auto target = [&](double u) {
        double s = sinc(u);
        return 2.0 * gauss(u, su) * s * s;
    };
    double c = std::min(1.0, 10.0 * su), top = std::max(c, 40.0 * su);
    // the transform of sinc^2 is a triangle, so Z is a smooth integral over its support
    double vmax = std::min(1.0, 12.0 / su);
    double Z = 2.0 * integrate_1d([&](double v) { return (1.0 - v) * std::exp(-2.0 * su * su * v * v); }, 0.0, vmax,
                                  1e-12)
                         .value;
    double logspan = std::log(top / c);
    double pu = top > c ? 0.5 : 1.0;  // probability of the uniform part

    auto sample = [&](Rng& rng) {
        double xi = 2.0 * pi * uniform(rng);
        double sh = std::sin(0.5 * xi);
        double x = amp * sh * sh, p = pamp * std::sin(xi);
        double u, pdf;
        if (uniform(rng) < pu) {
            u = c * uniform(rng);
        } else {
            u = c * std::exp(logspan * uniform(rng));
        }
        pdf = u < c ? pu / c : (1.0 - pu) / (u * logspan);
        double w = target(u) / (Z * pdf);
        double cs = std::cos(p * normal(rng, se) / hbar);
        double loss = (1.0 - cs) + cs * w * (1.0 - std::cos(2.0 * u * x / rec.edge));
        return 2.0 * pi * loss;
    };
    McEstimate e = mc_integrate(sample, n, seed);
    double scale = rate / rec.omega / std::abs(std::log(rec.f));
    return {e.mean * scale, e.std_error * scale, e.samples, e.seed};
}

namespace {

struct PairOccupation {
    BcsAmplitudes bcs;
    double n(double k) const { return bcs.v2(k); }
    double w(double k) const
    {
        double v = bcs.v2(k);
        return std::sqrt(std::max(0.0, v * (1.0 - v)));
    }
};

double norm3(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

}  // namespace

McEstimate mc_squid_gamma(const Squid& rec, double sigma_s, double sigma_q, std::size_t n, std::uint64_t seed)
{
    validate_record(rec);
    PairOccupation occ{BcsAmplitudes{rec.material}};
    double V = rec.volume();
    double qc = pi / std::cbrt(V);
    double kappa = sigma_q / hbar;
    double khi = occ.bcs.k_high(), klo = occ.bcs.k_low();
    double vball = 4.0 * pi / 3.0 * khi * khi * khi;
    double vshell = 4.0 * pi / 3.0 * (khi * khi * khi - klo * klo * klo);
    double pre = V / (4.0 * pi * pi * pi);
    bool paired = rec.material.gap > 0.0;
    double s2 = sigma_s * sigma_s;

    auto sample = [&](Rng& rng) -> double {
        std::array<double, 3> q{normal(rng, kappa), normal(rng, kappa), normal(rng, kappa)};
        double qn = norm3(q);
        if (qn < qc) return 0.0;
        // redistribution: k' = k + q uniform in the ball |k'| <= k_high
        auto d = random_direction(rng);
        double r = khi * std::cbrt(uniform(rng));
        std::array<double, 3> kp{r * d[0], r * d[1], r * d[2]};
        std::array<double, 3> k{kp[0] - q[0], kp[1] - q[1], kp[2] - q[2]};
        double a = (1.0 - occ.n(norm3(k))) * occ.n(r);
        double b = 0.0;
        if (paired) {
            auto e = random_direction(rng);
            double rs = std::cbrt(klo * klo * klo + uniform(rng) * (khi * khi * khi - klo * klo * klo));
            std::array<double, 3> ks{rs * e[0], rs * e[1], rs * e[2]};
            std::array<double, 3> kq{ks[0] + q[0], ks[1] + q[1], ks[2] + q[2]};
            std::array<double, 3> sum{2 * ks[0] + q[0], 2 * ks[1] + q[1], 2 * ks[2] + q[2]};
            double sn = norm3(sum);
            b = occ.w(rs) * occ.w(norm3(kq)) * std::exp(-0.5 * s2 * sn * sn);
        }
        return pre * (vball * a + vshell * b);
    };
    return mc_integrate(sample, n, seed);
}

QuadratureResult squid_diffusion_nd(const Squid& rec, double sigma_s, double sigma_q, double rel_tol,
                                    std::size_t max_evals)
{
    validate_record(rec);
    PairOccupation occ{BcsAmplitudes{rec.material}};
    double V = rec.volume();
    double qc = pi / std::cbrt(V);
    double kappa = sigma_q / hbar;
    double kF = rec.material.k_F, khi = occ.bcs.k_high(), klo = occ.bcs.k_low();
    double s2 = sigma_s * sigma_s;
    double tlo = qc / kappa;
    if (tlo >= 9.0) return {0.0, 0.0, 1};
    bool paired = rec.material.gap > 0.0;
    std::size_t evals = 0;
    bool exhausted = false;

    // |k|, |k+q| and |q| are the integration variables; cos(theta) is eliminated through |k+q|.
    auto over_kq = [&](double q, double k) {
        double lo = std::abs(k - q), hi = std::min(k + q, khi);
        if (!(hi > lo)) return 0.0;
        double nk = occ.n(k), wk = occ.w(k);
        Fn1 f = [&](double kq) {
            if (evals >= max_evals) {
                exhausted = true;
                return 0.0;
            }
            ++evals;
            double v = (1.0 - nk) * occ.n(kq);
            if (paired) v += wk * occ.w(kq) * std::exp(-0.5 * s2 * (2.0 * k * k + 2.0 * kq * kq - q * q));
            return v * kq;
        };
        QuadOptions opt;
        opt.rel_tol = std::max(rel_tol * 0.01, 1e-12);
        opt.breakpoints = {klo, kF};
        return integrate_1d(f, lo, hi, opt).value * 2.0 * pi * k / q;
    };
    auto over_k = [&](double t) {
        double q = t * kappa;
        Fn1 f = [&](double k) { return k == 0.0 ? 0.0 : over_kq(q, k); };
        QuadOptions opt;
        opt.rel_tol = std::max(rel_tol * 0.1, 1e-12);
        for (double b : {klo, kF, khi, q - khi, q - kF, q - klo, std::abs(kF - q), klo + q, kF + q})
            if (b > 0.0 && b < khi + q) opt.breakpoints.push_back(b);
        std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
        double inner = integrate_1d(f, 0.0, khi + q, opt).value;
        return std::sqrt(2.0 / pi) * t * t * std::exp(-0.5 * t * t) * inner;
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    auto r = integrate_1d(over_k, tlo, 9.0, opt);
    double pre = V / (4.0 * pi * pi * pi);
    if (exhausted) throw ConvergenceError("squid_diffusion_nd: evaluation budget exhausted", pre * r.value, 0.0);
    return {pre * r.value, pre * r.abs_error_estimate, evals};
}

namespace {

OracleCheck mc_row(std::string name, double analytic, const McEstimate& e)
{
    OracleCheck c{std::move(name), analytic, e.mean, e.std_error, 0.0, false};
    c.pass = std::abs(e.mean - analytic) <= 3.0 * e.std_error && e.std_error < 0.01 * std::abs(analytic);
    return c;
}

OracleCheck quad_row(std::string name, double analytic, double estimate, double tol)
{
    OracleCheck c{std::move(name), analytic, estimate, 0.0, tol, false};
    c.pass = std::abs(estimate - analytic) <= tol;
    return c;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed)
{
    using constants::amu;
    using constants::m_e;
    using constants::meV;
    std::vector<OracleCheck> rows;
    std::uint64_t stream = 0;
    auto next_seed = [&] { return seed * 1000003ULL + ++stream; };

    // coherence of a static superposition
    {
        JumpProcessSpec s;
        s.geometry = PointMass{m_e};
        s.kick = KickParams::from_length(0.0, 1e-12);
        s.dx = 1e-9;
        s.t = effective_tau(s.geometry, s.kick);
        s.n = 200000;
        s.seed = next_seed();
        rows.push_back(mc_row("visibility static resolved", std::exp(-1.0), mc_visibility_decay(s)));

        s.kick = KickParams::from_length(0.0, 1e-9);
        s.t = 0.5 / position_decoherence_rate(s.geometry, s.kick, s.dx);
        s.seed = next_seed();
        rows.push_back(mc_row("visibility static interior", std::exp(-0.5), mc_visibility_decay(s)));
    }

    // free-flight blur of a compound sphere, tau_e scaled to an exponent of 0.5
    for (double h : {3e-9, 1e-11}) {
        JumpProcessSpec s;
        s.geometry = sphere_from_density(1e5 * amu, 19300.0);
        s.kick = KickParams::from_length(1e-11, h);
        s.path = PathKind::FreeFlight;
        s.dx = 5e-9;
        s.T1 = s.T2 = 1e-3;
        s.kick.tau_e = 2.0 * free_flight_exponent(s.dx, s.T1, s.T2, s.geometry, s.kick);
        s.n = 200000;
        s.seed = next_seed();
        double R = free_flight_blur(s.dx, s.T1, s.T2, s.geometry, s.kick);
        rows.push_back(mc_row(h > 1e-10 ? "free_flight_blur interior" : "free_flight_blur resolved", R,
                              mc_visibility_decay(s)));
    }

    // micromirror visibility after one period
    for (double h : {5e-13, 1e-14, 1e-7}) {
        Micromirror mm{10e-6, 2300.0, 2 * pi * 500.0, 170e-15, 1.63, 0.5};
        double sq = hbar / h, ss = 2e-11;
        std::string tag = h < 1e-13 ? "resolved" : (h < 1e-9 ? "interior" : "unresolved");
        rows.push_back(mc_row("micromirror R " + tag, micromirror_excluded_tau(mm, ss, sq),
                              mc_micromirror_excluded_tau(mm, ss, sq, 400000, next_seed())));
    }

    // energy gain of a kicked particle and oscillator
    {
        double M = 1e-20;
        JumpProcessSpec s;
        s.geometry = PointMass{M};
        s.kick = KickParams::from_length(1e-11, 1e-10);
        auto eff = rescale_to_mass(s.kick, M);
        s.t = 200.0 * eff.tau;
        s.n = 40000;
        s.seed = next_seed();
        rows.push_back(mc_row("energy gain free", energy_gain_rate(M, 0.0, s.kick), mc_energy_gain(s)));
        s.omega = eff.sigma_q / (M * eff.sigma_s_eff);
        s.seed = next_seed();
        rows.push_back(mc_row("energy gain equal terms", energy_gain_rate(M, s.omega, s.kick), mc_energy_gain(s)));
    }

    // reduced transform against direct quadrature
    {
        auto k = KickParams::from_length(2e-11, 1e-9);
        std::vector<GtildePoint> pts{{0.0, 0.0}, {1e-9, 1e-24}, {4e-9, 3e-23}};
        const std::pair<const char*, MassGeometry> gs[] = {{"point", PointMass{1e-25}},
                                                           {"sphere", sphere_from_density(1e-22, 2000.0)},
                                                           {"cuboid", Cuboid{1e-22, 2e-9, 1e-9, 3e-9}},
                                                           {"disc", Disc{1e-22, 3e-9, 1e-9}}};
        for (const auto& [name, g] : gs)
            rows.push_back(quad_row(std::string("gtilde_1d ") + name, 0.0, numeric_gtilde_check(g, k, pts), 1e-6));
    }

    // effective rates of compound objects
    for (double h : {1e-8, 1e-9}) {
        KickParams k = KickParams::from_length(0.0, h);
        std::string tag = h > 5e-9 ? " small object" : " large object";
        Disc d{1e-22, 3e-9, 1e-9};
        double r = d.mass / m_e;
        rows.push_back(mc_row("disc rate" + tag, k.tau_e / (r * r * disc_rate(d, k)),
                              mc_mean_form_factor_sq(d, k.sigma_q, 100000, next_seed())));
        MassGeometry sp = sphere_from_density(1e-22, 2000.0);
        rows.push_back(mc_row("sphere <F^2>" + tag, mean_form_factor_sq(sp, k.sigma_q),
                              mc_mean_form_factor_sq(sp, k.sigma_q, 100000, next_seed())));
        MassGeometry cu = Cuboid{1e-22, 2e-9, 1e-9, 3e-9};
        rows.push_back(mc_row("cuboid <F^2>" + tag, mean_form_factor_sq(cu, k.sigma_q),
                              mc_mean_form_factor_sq(cu, k.sigma_q, 100000, next_seed())));
    }

    // SQUID momentum diffusion
    {
        Squid step{SuperconductorMaterial{1e9, 0.0, 3 * meV}, 1e-6, 1e-12, 1e-9};
        double sq = hbar / 1e-9;
        rows.push_back(mc_row("Gamma_diff sharp Fermi step", squid_gamma_hat(step, 1e-10, sq).diffusion,
                              mc_squid_gamma(step, 1e-10, sq, 200000, next_seed())));
        Squid toy{SuperconductorMaterial{1e9, 1 * meV, 3 * meV}, 1e-6, 1e-12, 1e-9};
        rows.push_back(mc_row("Gamma_diff strong kick", toy.electron_count(),
                              mc_squid_gamma(toy, 0.0, hbar / 1e-11, 200000, next_seed())));
        Squid nb{SuperconductorMaterial::niobium(), 560e-6, 5e-12, 1e-9};
        double an = squid_gamma_hat(nb, 1e-10, hbar / 1e-10).diffusion;
        rows.push_back(mc_row("Gamma_diff Nb 1 A", an, mc_squid_gamma(nb, 1e-10, hbar / 1e-10, 200000, next_seed())));
        rows.push_back(quad_row("Gamma_diff Nb 1 A nested quadrature", an,
                                squid_diffusion_nd(nb, 1e-10, hbar / 1e-10).value, 1e-4 * an));
    }
    return rows;
}

}  // namespace macro
