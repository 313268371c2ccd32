#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "macro/catalog.hpp"
#include "macro/errors.hpp"
#include "macro/exclusion.hpp"

#include <algorithm>
#include <cmath>

using namespace macro;
using namespace macro::constants;

namespace {

const ExperimentRecord& catalog_record(const std::string& id)
{
    const CatalogEntry* e = find_entry(id);
    REQUIRE(e != nullptr);
    return e->record;
}

}  // namespace

TEST_CASE("log grid")
{
    auto g = GridSpec{}.values();
    REQUIRE(g.size() == 61);
    CHECK(g.front() == 1e-15);
    CHECK(g.back() == doctest::Approx(1e-6).epsilon(1e-14));
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i] > g[i - 1]);
        CHECK(std::log10(g[i] / g[i - 1]) == doctest::Approx(9.0 / 60.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 10), DomainError);
}

TEST_CASE("exclusion_curve shapes")
{
    auto grid = GridSpec{}.values();

    // paths separated far beyond every kick length: flat at the resolved value, up to the
    // h/dx share of the flight where the diamond profile is still opening
    PointInterference p{23 * amu, 0.01, 0.6, 1e-4};
    auto flat = exclusion_curve(p, 2e-11, log_grid(1e-15, 1e-10, 21), "flat");
    double sat = excluded_tau_point(p.mass, p.t, p.f);
    for (const auto& pt : flat.points) {
        REQUIRE(pt.tau_excluded);
        CHECK(*pt.tau_excluded == doctest::Approx(sat).epsilon(1e-5));
    }
    CHECK(flat.experiment_id == "flat");
    CHECK(flat.sigma_s == 2e-11);
    CHECK(flat.metadata.at("class") == "PointInterference");

    // gas heating: slope -2 in log-log
    auto gas = exclusion_curve(GasHeating{86.9 * amu, 1e-30}, 2e-11, grid);
    for (std::size_t i = 1; i < gas.points.size(); ++i) {
        double s = std::log(*gas.points[i].tau_excluded / *gas.points[i - 1].tau_excluded) /
                   std::log(gas.points[i].hbar_over_sigma_q / gas.points[i - 1].hbar_over_sigma_q);
        CHECK(s == doctest::Approx(-2.0).epsilon(1e-9));
    }

    // micromirror: interior maximum near the mirror size, past the default plotting range
    auto mm = exclusion_curve(catalog_record("micromirror"), 2e-11, log_grid(1e-15, 1e-2, 53));
    CHECK_FALSE(mm.has_gaps());
    auto best = std::max_element(mm.points.begin(), mm.points.end(), [](const auto& a, const auto& b) {
        return *a.tau_excluded < *b.tau_excluded;
    });
    CHECK(best != mm.points.begin());
    CHECK(best != mm.points.end() - 1);
    // the grid maximum sits just below the refined optimum
    auto rep = macroscopicity(catalog_record("micromirror"), ParameterBounds::default_preset());
    CHECK(std::log10(*best->tau_excluded) <= rep.mu + 1e-9);
    CHECK(std::log10(*best->tau_excluded) > rep.mu - 0.2);

    for (const auto& pt : mm.points) CHECK(*pt.tau_excluded >= 0.0);
}

TEST_CASE("failed evaluations become gaps")
{
    PointInterference nodx{23 * amu, 0.01, 0.6, std::nullopt};
    auto c = exclusion_curve(nodx, 2e-11, log_grid(1e-12, 1e-9, 4));
    CHECK(c.has_gaps());
    for (const auto& pt : c.points) {
        CHECK_FALSE(pt.tau_excluded);
        CHECK_FALSE(pt.error.empty());
    }
    CHECK_THROWS_AS(exclusion_curve(nodx, 2e-11, {}), DomainError);
    CHECK_THROWS_AS(exclusion_curve(nodx, 2e-11, {1e-9, 1e-10}), DomainError);
}

TEST_CASE("macroscopicity")
{
    auto sat = macroscopicity(catalog_record("satellite"), ParameterBounds::default_preset());
    CHECK(sat.mu == doctest::Approx(14.5).epsilon(0.1 / 14.5));
    CHECK(sat.bounds_id == "default");
    CHECK(sat.mu == doctest::Approx(std::log10(sat.tau_max)).epsilon(1e-14));
    CHECK(sat.tau_max > 0.0);

    // a record that excludes nothing
    Micromirror still = std::get<Micromirror>(catalog_record("micromirror"));
    still.kappa = 0.0;
    CHECK_THROWS_AS(macroscopicity(still, ParameterBounds::default_preset()), DomainError);
    CHECK_THROWS_AS(macroscopicity(catalog_record("satellite"), ParameterBounds{0.0, 1e-14, "bad"}), DomainError);

    // gas heating grows without limit toward small hbar/sigma_q, so the optimum is on the bound
    auto gas = macroscopicity(GasHeating{86.9 * amu, 1e-30}, ParameterBounds::default_preset());
    CHECK(gas.saturated);
    CHECK(gas.argmax_hbar_over_sigma_q == doctest::Approx(1e-14).epsilon(1e-9));

    auto mm = macroscopicity(catalog_record("micromirror"), ParameterBounds::default_preset());
    CHECK_FALSE(mm.saturated);
    CHECK(mm.sigma_s_monotone);
    CHECK(mm.argmax_hbar_over_sigma_q > 1e-14);

    CHECK(bounds_for(catalog_record("friedman2000")).id == "squid");
    CHECK(bounds_for(catalog_record("satellite")).id == "default");
}

TEST_CASE("property: grid refinement changes mu by less than 0.02")
{
    SearchSpec fine;
    fine.per_decade = 40;
    for (const char* id : {"micromirror", "zeilinger1982", "nanosphere", "friedman2000"}) {
        const auto& rec = catalog_record(id);
        auto b = bounds_for(rec);
        double coarse = macroscopicity(rec, b).mu, refined = macroscopicity(rec, b, fine).mu;
        CHECK(std::abs(coarse - refined) < 0.02);
    }
}

TEST_CASE("property: larger contrast never lowers mu")
{
    Rng r = make_rng(61, 0);
    for (int i = 0; i < 15; ++i) {
        double f1 = gen::uniform(r, 0.05, 0.95), f2 = gen::uniform(r, 0.05, 0.95);
        if (f1 > f2) std::swap(f1, f2);
        PointInterference a{gen::log_uniform(r, -26, -23), gen::log_uniform(r, -3, 0), f1, gen::log_uniform(r, -9, -5)};
        PointInterference b = a;
        b.f = f2;
        auto bounds = ParameterBounds::default_preset();
        CHECK(macroscopicity(a, bounds).mu <= macroscopicity(b, bounds).mu + 1e-12);

        Micromirror m = std::get<Micromirror>(catalog_record("micromirror"));
        Micromirror m2 = m;
        m.f = f1;
        m2.f = f2;
        if (i < 3) CHECK(macroscopicity(m, bounds).mu <= macroscopicity(m2, bounds).mu + 1e-12);
    }
}

TEST_CASE("property: enlarging the bounds never lowers mu")
{
    Rng r = make_rng(62, 0);
    const char* ids[] = {"zeilinger1982", "brezger2002", "micromirror", "wal2000", "cat"};
    for (int i = 0; i < 10; ++i) {
        const auto& rec = catalog_record(ids[gen::pick(r, 5)]);
        ParameterBounds small{gen::log_uniform(r, -12, -10.7), gen::log_uniform(r, -13, -10), "small"};
        ParameterBounds large{small.sigma_s_max * gen::uniform(r, 1.0, 5.0),
                              small.hbar_over_sigma_q_min / gen::uniform(r, 1.0, 100.0), "large"};
        double a = macroscopicity(rec, small).mu, b = macroscopicity(rec, large).mu;
        // golden-section refinement is only accurate to its bracket tolerance
        CHECK(b >= a - 1e-3);
    }
}

TEST_CASE("curves are deterministic")
{
    auto grid = log_grid(1e-12, 1e-7, 11);
    auto a = exclusion_curve(catalog_record("friedman2000"), 1e-10, grid);
    auto b = exclusion_curve(catalog_record("friedman2000"), 1e-10, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.points[i].tau_excluded == b.points[i].tau_excluded);
}
