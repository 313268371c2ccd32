#pragma once

#include "macro/classicalize.hpp"
#include "macro/experiments.hpp"
#include "macro/numerics.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace macro {

enum class PathKind {
    Static,      // separation dx held for time t
    FreeFlight,  // opens linearly over T1, closes over T2
    Harmonic,    // dx sin^2(omega t / 2) over one period
};

struct JumpProcessSpec {
    MassGeometry geometry = PointMass{constants::m_e};
    KickParams kick;
    PathKind path = PathKind::Static;
    double dx = 0.0;
    double t = 0.0;
    double T1 = 0.0, T2 = 0.0;
    double omega = 0.0;
    double p_amplitude = 0.0;  // harmonic: relative momentum p_amplitude sin(omega t)
    std::size_t n = 10000;
    std::uint64_t seed = 1;

    double duration() const;
    /// Separation and relative momentum along x at time u.
    std::array<double, 2> path_at(double u) const;
};

/// Mean of cos(total jump phase) over trajectories: the surviving coherence fraction.
McEstimate mc_visibility_decay(const JumpProcessSpec& spec);

/// Mean energy slope E(t)/t of a kicked 1D oscillator started at rest (omega = 0: free particle).
McEstimate mc_energy_gain(const JumpProcessSpec& spec);

/// Direct quadrature of the reduced transform from the 1D kick distribution.
double gtilde_direct(const MassGeometry& g, const KickParams& kick, double x, double p, double rel_tol = 1e-10);

struct GtildePoint {
    double x, p;
};
/// Largest |gtilde_direct - gtilde_1d| over the points.
double numeric_gtilde_check(const MassGeometry& g, const KickParams& kick, const std::vector<GtildePoint>& points);

/// Draws q from the kick Gaussian weighted by |F(q)|^2.
class WeightedKickSampler {
public:
    WeightedKickSampler(const MassGeometry& g, double sigma_q);
    std::array<double, 3> operator()(Rng& rng) const;

private:
    MassGeometry g_;
    double sigma_q_;
};

/// Importance-sampled <|F(q)|^2> under the isotropic kick Gaussian.
McEstimate mc_mean_form_factor_sq(const MassGeometry& g, double sigma_q, std::size_t n, std::uint64_t seed);

/// Gamma_diff * tau_e by Monte Carlo over (q, k) using the pair occupations directly.
McEstimate mc_squid_gamma(const Squid& rec, double sigma_s, double sigma_q, std::size_t n, std::uint64_t seed);

/// Gamma_diff * tau_e by nested quadrature over (|q|, |k|, |k+q|), Fermi-shell edges as breakpoints.
QuadratureResult squid_diffusion_nd(const Squid& rec, double sigma_s, double sigma_q, double rel_tol = 1e-5,
                                    std::size_t max_evals = 20'000'000);

/// Excluded tau of a micromirror from a Monte Carlo over the oscillation phase and the kick along the
/// cube edge; the sinc^2 tail is importance-sampled with a log-uniform proposal.
McEstimate mc_micromirror_excluded_tau(const Micromirror& rec, double sigma_s, double sigma_q, std::size_t n,
                                       std::uint64_t seed);

struct OracleCheck {
    std::string name;
    double analytic = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;  // zero for quadrature oracles
    double tolerance = 0.0;  // absolute, quadrature oracles only
    bool pass = false;
};

/// Every analytic factor against its oracle at an interior and a limit point. Monte Carlo rows pass
/// when within 3 standard errors and the standard error is below 1% of the analytic value.
std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed);

}  // namespace macro
