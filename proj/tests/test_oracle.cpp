#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "macro/oracle.hpp"

#include <cmath>
#include <set>

using namespace macro;
using namespace macro::constants;

namespace {

bool within_3se(const McEstimate& e, double expected) { return std::abs(e.mean - expected) <= 3.0 * e.std_error; }

}  // namespace

TEST_CASE("no kicks leave coherence and energy untouched")
{
    JumpProcessSpec s;
    s.geometry = PointMass{1e-24};
    s.kick = KickParams{0.0, 0.0, 1e-9};
    s.dx = 1e-6;
    s.t = 1.0;
    auto v = mc_visibility_decay(s);
    CHECK(v.mean == 1.0);
    CHECK(v.std_error == 0.0);

    s.n = 2000;
    auto e = mc_energy_gain(s);
    CHECK(e.mean == 0.0);
    s.omega = 100.0;
    CHECK(mc_energy_gain(s).mean == 0.0);
}

TEST_CASE("static resolved superposition decays to 1/e after one tau")
{
    JumpProcessSpec s;
    s.geometry = PointMass{m_e};
    s.kick = KickParams::from_length(0.0, 1e-12);
    s.dx = 1e-9;
    s.t = effective_tau(s.geometry, s.kick);
    s.n = 100000;
    s.seed = 5;
    auto e = mc_visibility_decay(s);
    CHECK(within_3se(e, std::exp(-1.0)));
    CHECK(e.std_error < 0.01 * std::exp(-1.0));
}

TEST_CASE("harmonic path against the integrated loss density")
{
    JumpProcessSpec s;
    double M = 1e-22;
    s.geometry = PointMass{M};
    s.kick = KickParams::from_length(1e-11, 1e-9);
    s.path = PathKind::Harmonic;
    s.omega = 2 * pi * 1000.0;
    s.dx = 2e-9;
    s.p_amplitude = hbar / 3e-11;
    auto integrand = [&](double u) {
        auto xp = s.path_at(u);
        return loss_density(s.geometry, s.kick, xp[0], xp[1]);
    };
    double per_tau_e = integrate_1d(integrand, 0.0, s.duration(), 1e-10).value;
    REQUIRE(per_tau_e > 0.0);
    s.kick.tau_e = 2.0 * per_tau_e;  // exponent 0.5
    s.n = 100000;
    s.seed = 11;
    auto e = mc_visibility_decay(s);
    CHECK(within_3se(e, std::exp(-0.5)));
    CHECK(e.std_error < 0.01 * std::exp(-0.5));
}

TEST_CASE("oracles are deterministic per seed")
{
    JumpProcessSpec s;
    s.geometry = sphere_from_density(1e5 * amu, 19300.0);
    s.kick = KickParams::from_length(1e-11, 3e-9, 1e14);  // a few jumps per path
    s.dx = 5e-9;
    s.t = 1e-3;
    s.n = 5000;
    s.seed = 3;
    auto a = mc_visibility_decay(s), b = mc_visibility_decay(s);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    s.seed = 4;
    CHECK(mc_visibility_decay(s).mean != a.mean);

    Squid toy{SuperconductorMaterial{1e9, 1 * meV, 3 * meV}, 1e-6, 1e-12, 1e-9};
    CHECK(mc_squid_gamma(toy, 1e-10, hbar / 1e-9, 2000, 9).mean ==
          mc_squid_gamma(toy, 1e-10, hbar / 1e-9, 2000, 9).mean);
}

TEST_CASE("energy gain with kicks of both kinds")
{
    double M = 1e-20;
    JumpProcessSpec s;
    s.geometry = PointMass{M};
    s.kick = KickParams::from_length(1e-11, 1e-10);
    auto eff = rescale_to_mass(s.kick, M);
    s.t = 200.0 * eff.tau;
    s.n = 40000;
    s.seed = 21;
    double single = energy_gain_rate(M, 0.0, s.kick);
    CHECK(single == doctest::Approx(eff.sigma_q * eff.sigma_q / (2.0 * M * eff.tau)).epsilon(1e-12));
    CHECK(within_3se(mc_energy_gain(s), single));
    s.omega = eff.sigma_q / (M * eff.sigma_s_eff);
    CHECK(energy_gain_rate(M, s.omega, s.kick) == doctest::Approx(2.0 * single).epsilon(1e-12));
    CHECK(within_3se(mc_energy_gain(s), 2.0 * single));
}

TEST_CASE("gtilde direct quadrature")
{
    auto k = KickParams::from_length(2e-11, 1e-9);
    std::vector<GtildePoint> pts{{0.0, 0.0}, {1e-9, 1e-24}, {4e-9, 3e-23}};
    CHECK(gtilde_direct(PointMass{1e-25}, k, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(numeric_gtilde_check(Disc{1e-22, 3e-9, 1e-9}, k, pts) < 1e-6);
}

TEST_CASE("oracle suite at the acceptance seed")
{
    auto rows = run_oracle_suite(20240501);
    std::set<std::string> names;
    for (const auto& r : rows) {
        INFO(r.name << " analytic " << r.analytic << " estimate " << r.estimate << " se " << r.std_error);
        CHECK(r.pass);
        names.insert(r.name);
    }
    CHECK(names.size() == rows.size());
    // every analytic factor appears with an interior and a limit point
    for (const char* stem : {"visibility static", "free_flight_blur", "micromirror R", "energy gain", "gtilde_1d",
                             "disc rate", "Gamma_diff"}) {
        int n = 0;
        for (const auto& nm : names) n += nm.rfind(stem, 0) == 0;
        CHECK_MESSAGE(n >= 2, stem);
    }
}
