// Acceptance run: one PASS/FAIL line per criterion, details indented beneath it.
// Exit status is nonzero when any criterion fails.

#include "generators.hpp"
#include "macro/catalog.hpp"
#include "macro/commands.hpp"
#include "macro/exclusion.hpp"
#include "macro/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace macro;
using namespace macro::constants;

namespace {

class Criterion {
public:
    explicit Criterion(std::string title) : title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)))
    {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        lines_.push_back(std::string(ok ? "    ok    " : "    FAIL  ") + buf);
        ok_ = ok_ && ok;
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool finish(int number)
    {
        std::printf("%s criterion %d: %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", number, title_.c_str(), elapsed());
        for (const auto& l : lines_) std::printf("%s\n", l.c_str());
        std::fflush(stdout);
        return ok_;
    }

private:
    std::string title_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> lines_;
    bool ok_ = true;
};

const ExperimentRecord& entry(const char* id) { return find_entry(id)->record; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double size_of(const MassGeometry& g)
{
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Sphere>) return 2.0 * v.radius;
            else if constexpr (std::is_same_v<T, Cuboid>) return std::max({v.a, v.b, v.c});
            else if constexpr (std::is_same_v<T, Disc>) return std::max(2.0 * v.radius, v.thickness);
            else return 1e-9;
        },
        g);
}

// <|F(q)|^2> under the isotropic kick Gaussian, from the textbook form factors.
double direct_form_factor_sq(const MassGeometry& g, double sq)
{
    QuadOptions o;
    o.rel_tol = 1e-10;
    o.max_intervals = 20000;
    auto axis = [&](double L) {
        double su = sq * L / (2.0 * hbar);
        auto f = [&](double u) {
            double s = u == 0.0 ? 1.0 : std::sin(u) / u;
            return 2.0 * std::exp(-0.5 * u * u / (su * su)) / (std::sqrt(2.0 * pi) * su) * s * s;
        };
        return integrate_1d(f, 0.0, 9.0 * su, o).value;
    };
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Cuboid>) {
                return axis(v.a) * axis(v.b) * axis(v.c);
            } else if constexpr (std::is_same_v<T, Sphere>) {
                double A = sq * v.radius / hbar;
                auto f = [&](double u) {
                    double F = u < 1e-3 ? 1.0 - u * u / 10.0 : 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
                    return std::sqrt(2.0 / pi) * u * u / (A * A * A) * std::exp(-0.5 * u * u / (A * A)) * F * F;
                };
                return integrate_1d(f, 0.0, 9.0 * A, o).value;
            } else {
                double A = sq * v.radius / hbar;
                auto f = [&](double u) {
                    double F = u < 1e-6 ? 1.0 : 2.0 * std::cyl_bessel_j(1.0, u) / u;
                    return u / (A * A) * std::exp(-0.5 * u * u / (A * A)) * F * F;
                };
                return axis(v.thickness) * integrate_1d(f, 0.0, 9.0 * A, o).value;
            }
        },
        g);
}

bool timeline_regression()
{
    Criterion c("timeline regression, point-interference entries within 0.2");
    const std::pair<const char*, double> rows[] = {
        {"maier-leibnitz1962", 4.8}, {"zeilinger1982", 6.2}, {"keith1988", 6.8}, {"shimizu1992", 9.1},
        {"grisenti1999", 8.3},       {"arndt1999", 10.6},    {"borde1994", 7.3}, {"chapman1995", 7.2},
        {"andrews1997", 8.4},        {"jo2007", 8.3}};
    for (const auto& [id, printed] : rows) {
        double mu = macroscopicity(entry(id), ParameterBounds::default_preset()).mu;
        c.check(std::abs(mu - printed) <= 0.2, "%-20s mu %.3f  printed %.1f", id, mu, printed);
    }
    c.check(c.elapsed() < 1.0, "runtime %.3f s < 1 s", c.elapsed());
    return c.finish(1);
}

bool proposals()
{
    Criterion c("proposed experiments");
    const struct {
        const char* id;
        double printed, tol;
    } rows[] = {{"satellite", 14.5, 0.1}, {"micromirror", 19.0, 0.3}, {"membrane", 11.5, 0.3},
                {"nanosphere", 20.5, 0.5}, {"squid-large", 14.5, 0.5}, {"cat", 57.0, 1.0}};
    for (const auto& r : rows) {
        const auto& rec = entry(r.id);
        double mu = macroscopicity(rec, bounds_for(rec)).mu;
        c.check(std::abs(mu - r.printed) <= r.tol, "%-12s mu %.3f  target %.1f +- %.1f", r.id, mu, r.printed, r.tol);
    }
    c.check(c.elapsed() < 300.0, "runtime %.1f s < 300 s", c.elapsed());
    return c.finish(2);
}

bool squid_values()
{
    Criterion c("SQUID values with quadrature and Monte Carlo cross-checks");
    const std::pair<const char*, double> rows[] = {{"friedman2000", 5.2}, {"wal2000", 3.3}};
    std::uint64_t seed = 301;
    for (const auto& [id, printed] : rows) {
        const auto& rec = entry(id);
        const auto& s = std::get<Squid>(rec);
        auto r = macroscopicity(rec, bounds_for(rec));
        c.check(std::abs(r.mu - printed) <= 0.5, "%-12s mu %.3f  printed %.1f +- 0.5", id, r.mu, printed);

        // N from the free-electron density, independent of the squid module
        double kf = s.material.k_F;
        double N = kf * kf * kf / (3.0 * pi * pi) * s.length * s.cross_section;
        double sat = std::log10(N * s.T2);
        c.check(std::abs(sat - printed) <= 0.3, "%-12s log10(N T2) %.3f vs printed %.1f", id, sat, printed);
        c.check(std::abs(sat - r.mu) <= 0.3, "%-12s log10(N T2) %.3f vs computed %.3f", id, sat, r.mu);

        double sq = hbar / r.argmax_hbar_over_sigma_q;
        double an = squid_gamma_hat(s, r.argmax_sigma_s, sq).diffusion;
        auto nd = squid_diffusion_nd(s, r.argmax_sigma_s, sq);
        c.check(rel(nd.value, an) < 1e-4, "%-12s nested quadrature %.6g vs %.6g", id, nd.value, an);
        auto mc = mc_squid_gamma(s, r.argmax_sigma_s, sq, 200000, seed++);
        c.check(std::abs(mc.mean - an) <= 3.0 * mc.std_error && mc.std_error < 0.01 * an,
                "%-12s Monte Carlo %.6g +- %.2g vs %.6g", id, mc.mean, mc.std_error, an);
    }
    c.check(c.elapsed() < 300.0, "runtime %.1f s < 300 s", c.elapsed());
    return c.finish(3);
}

bool curve_shapes()
{
    Criterion c("exclusion curve shapes");

    // (a) flat at the resolved level once hbar/sigma_q is two decades below the separation
    for (const char* id : {"keith1988", "arndt1999", "satellite"}) {
        for (double dx : {1e-7, 1e-5}) {
            auto p = std::get<PointInterference>(entry(id));
            p.dx = dx;
            double sat = *saturation_tau(p);
            auto curve = exclusion_curve(p, 2e-11, log_grid(1e-15, dx / 100.0, 25));
            double worst = 0.0;
            for (const auto& pt : curve.points) worst = std::max(worst, std::abs(*pt.tau_excluded / sat - 1.0));
            c.check(worst <= 0.02, "(a) %-10s dx %.0e  max deviation %.4f <= 0.02", id, dx, worst);
        }
    }

    // (b) compound objects: kicks finer than the object lose weight
    for (const char* id : {"nanosphere", "brezger2002", "talbot-lau-1e5", "talbot-lau-1e8"}) {
        const auto& rec = entry(id);
        MassGeometry g = std::visit(
            [](const auto& v) -> MassGeometry {
                if constexpr (requires { v.geometry; }) return v.geometry;
                else return PointMass{1.0};
            },
            rec);
        double size = std::get<Sphere>(g).radius;
        auto curve = exclusion_curve(rec, 2e-11, {size / 10.0});
        double ratio = *curve.points[0].tau_excluded / *saturation_tau(rec);
        c.check(ratio < 0.5, "(b) %-15s R %.2e  ratio at R/10 %.3g < 0.5", id, size, ratio);
    }

    // (c) gas heating slope
    {
        auto curve = exclusion_curve(entry("gas-rb"), 2e-11, GridSpec{}.values());
        double lo = -2.0, hi = -2.0;
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            const auto &a = curve.points[i - 1], &b = curve.points[i];
            double s = std::log(*b.tau_excluded / *a.tau_excluded) / std::log(b.hbar_over_sigma_q / a.hbar_over_sigma_q);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        c.check(lo >= -2.01 && hi <= -1.99, "(c) gas-rb  slope range [%.6f, %.6f]", lo, hi);
    }

    // (d) SQUID interior maximum inside the SQUID bounds
    for (const char* id : {"friedman2000", "wal2000"}) {
        auto b = ParameterBounds::squid_preset();
        for (double ss : {0.0, b.sigma_s_max}) {
            auto curve = exclusion_curve(entry(id), ss, log_grid(b.hbar_over_sigma_q_min, 1e-3, 43));
            std::size_t best = 0;
            for (std::size_t i = 1; i < curve.points.size(); ++i)
                if (*curve.points[i].tau_excluded > *curve.points[best].tau_excluded) best = i;
            bool interior = best > 0 && best + 1 < curve.points.size();
            c.check(interior, "(d) %-12s sigma_s %.0e  maximum at hbar/sigma_q %.2e (grid %.0e..%.0e)", id, ss,
                    curve.points[best].hbar_over_sigma_q, curve.points.front().hbar_over_sigma_q,
                    curve.points.back().hbar_over_sigma_q);
        }
    }
    return c.finish(4);
}

bool oracle_suite()
{
    Criterion c("oracle suite");
    auto rows = run_oracle_suite(20240501);
    for (const auto& r : rows) {
        if (r.std_error > 0.0)
            c.check(r.pass, "%-36s analytic %.6g  MC %.6g +- %.2g", r.name.c_str(), r.analytic, r.estimate,
                    r.std_error);
        else
            c.check(r.pass, "%-36s analytic %.6g  quadrature %.6g  tol %.2g", r.name.c_str(), r.analytic,
                    r.estimate, r.tolerance);
    }
    for (const char* stem : {"free_flight_blur", "micromirror R", "disc rate", "gtilde_1d", "Gamma_diff",
                             "energy gain"}) {
        int n = 0;
        for (const auto& r : rows) n += r.name.rfind(stem, 0) == 0;
        c.check(n >= 2, "%-36s %d rows", stem, n);
    }
    c.check(c.elapsed() < 300.0, "runtime %.1f s < 300 s", c.elapsed());
    return c.finish(5);
}

bool invariants()
{
    Criterion c("invariants");
    Rng r = make_rng(606, 0);

    double worst_rebase = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto g = gen::geometry(r);
        auto k = gen::kick(r);
        auto k2 = k.rebased(gen::log_uniform(r, -31, -24));
        double dx = gen::log_uniform(r, -10, -5);
        worst_rebase = std::max(worst_rebase, rel(effective_tau(g, k2), effective_tau(g, k)));
        worst_rebase = std::max(worst_rebase, rel(position_decoherence_rate(g, k2, dx), position_decoherence_rate(g, k, dx)));
    }
    c.check(worst_rebase <= 1e-10, "reference-mass invariance  worst relative change %.2e", worst_rebase);

    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        auto g = gen::geometry(r);
        auto k = gen::kick(r);
        double M = mass_of(g);
        double floor = k.tau_e * (m_e / M) * (m_e / M);
        if (!(effective_tau(g, k) >= floor * (1 - 1e-12))) ++violations;
    }
    c.check(violations == 0, "saturation bound tau >= tau_e (m_e/M)^2  %d of 1000 violated", violations);

    double worst_norm = 0.0;
    for (int i = 0; i < 1000; ++i) {
        auto g = gen::geometry(r);
        auto k = gen::kick(r);
        worst_norm = std::max(worst_norm, std::abs(gtilde_1d(g, k, 0.0, 0.0) - 1.0));
    }
    c.check(worst_norm <= 1e-6, "reduced transform at the origin  worst |gtilde_1d(0,0) - 1| %.2e", worst_norm);

    // <|F|^2> normalizes the effective kick distribution |F(q)|^2 g(q); compare with a direct quadrature
    double worst_ff = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto g = gen::geometry(r);
        double L = size_of(g);
        double sq = hbar / (L * gen::log_uniform(r, -2, 2));
        worst_ff = std::max(worst_ff, rel(mean_form_factor_sq(g, sq), direct_form_factor_sq(g, sq)));
    }
    c.check(worst_ff <= 1e-6, "form-factor weight against direct quadrature  worst relative %.2e", worst_ff);

    SearchSpec fine;
    fine.per_decade = 40;
    for (const char* id : {"zeilinger1982", "satellite", "micromirror", "membrane", "nanosphere", "brezger2002",
                           "talbot-lau-1e5", "friedman2000", "cat", "gas-rb"}) {
        const auto& rec = entry(id);
        auto b = bounds_for(rec);
        double a = macroscopicity(rec, b).mu, f = macroscopicity(rec, b, fine).mu;
        c.check(std::abs(a - f) < 0.02, "grid refinement %-15s mu %.4f -> %.4f", id, a, f);
    }

    auto twice = [&](const char* what, const std::function<int(std::ostream&)>& run) {
        std::ostringstream a, b;
        int ra = run(a), rb = run(b);
        c.check(ra == rb && a.str() == b.str() && !a.str().empty(), "rerun byte-identical: %s (%zu bytes)", what,
                a.str().size());
    };
    std::ostringstream sink;
    CommandOptions mu_opt;
    mu_opt.id = "micromirror";
    twice("mu micromirror", [&](std::ostream& o) { return cmd_mu(mu_opt, o, sink); });
    CommandOptions curve_opt;
    curve_opt.id = "gas-rb";
    twice("curve gas-rb", [&](std::ostream& o) { return cmd_curve(curve_opt, o, sink); });
    CommandOptions tl_opt;
    twice("timeline", [&](std::ostream& o) { return cmd_timeline(tl_opt, o, sink); });
    CommandOptions val_opt;
    val_opt.seed = 42;
    twice("validate seed 42", [&](std::ostream& o) { return cmd_validate(val_opt, o, sink); });
    return c.finish(6);
}

}  // namespace

int main(int argc, char** argv)
{
    // optional arguments select criteria by number
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    bool ok = true;
    const std::function<bool()> criteria[] = {timeline_regression, proposals, squid_values,
                                              curve_shapes,        oracle_suite, invariants};
    for (int n = 1; n <= 6; ++n) {
        if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
        try {
            ok = criteria[n - 1]() && ok;
        } catch (const std::exception& e) {
            std::printf("FAIL criterion %d: aborted: %s\n", n, e.what());
            ok = false;
        }
    }
    return ok ? 0 : 1;
}
