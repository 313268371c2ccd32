#include "macro/exclusion.hpp"

#include "macro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace macro {

using constants::hbar;

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw DomainError("invalid grid");
    std::vector<double> g(points);
    double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : std::pow(10.0, a + (b - a) * i / (points - 1));
    return g;
}

std::vector<double> GridSpec::values() const { return log_grid(min, max, points); }

bool ExclusionCurve::has_gaps() const
{
    return std::any_of(points.begin(), points.end(), [](const CurvePoint& p) { return !p.tau_excluded; });
}

std::map<std::string, std::string> model_metadata(const ExperimentRecord& rec)
{
    std::map<std::string, std::string> m;
    m["class"] = class_name(rec);
    if (std::holds_alternative<PointInterference>(rec)) m["separation_profile"] = "diamond";
    if (std::holds_alternative<GratingDiffraction>(rec)) m["path_separation"] = "slit_period";
    if (std::holds_alternative<TalbotLau>(rec)) m["path_separation"] = "h*T/(M*d)";
    if (std::holds_alternative<Squid>(rec)) m["infrared_cutoff"] = "sharp_sphere";
    if (std::holds_alternative<Membrane>(rec)) m["sigma_s"] = "neglected";
    return m;
}

ExclusionCurve exclusion_curve(const ExperimentRecord& rec, double sigma_s, const std::vector<double>& grid,
                               const std::string& id)
{
    if (grid.empty()) throw DomainError("exclusion_curve: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("exclusion_curve: grid must be strictly increasing");
    ExclusionCurve c;
    c.sigma_s = sigma_s;
    c.experiment_id = id;
    c.metadata = model_metadata(rec);
    for (double h : grid) {
        CurvePoint p{h, std::nullopt, {}};
        try {
            double v = excluded_tau(rec, sigma_s, hbar / h);
            if (std::isfinite(v) && v >= 0.0)
                p.tau_excluded = v;
            else
                p.error = "non-finite value";
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        c.points.push_back(std::move(p));
    }
    return c;
}

ParameterBounds bounds_for(const ExperimentRecord& rec)
{
    return std::holds_alternative<Squid>(rec) ? ParameterBounds::squid_preset() : ParameterBounds::default_preset();
}

namespace {

struct Best {
    double tau = -1.0;
    double sigma_s = 0.0;
    double h = 0.0;
};

double eval_or_nan(const ExperimentRecord& rec, double sigma_s, double h)
{
    try {
        double v = excluded_tau(rec, sigma_s, hbar / h);
        return std::isfinite(v) ? v : std::nan("");
    } catch (const std::exception&) {
        return std::nan("");
    }
}

// Coarse scan in log(hbar/sigma_q) followed by golden-section refinement around the best node.
Best maximize_over_h(const ExperimentRecord& rec, double sigma_s, const std::vector<double>& grid, double decade_tol)
{
    Best best;
    std::size_t ib = 0;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = eval_or_nan(rec, sigma_s, grid[i]);
        if (std::isfinite(vals[i]) && vals[i] > best.tau) {
            best = {vals[i], sigma_s, grid[i]};
            ib = i;
        }
    }
    if (best.tau <= 0.0) return best;

    double a = std::log10(grid[ib > 0 ? ib - 1 : 0]);
    double b = std::log10(grid[std::min(ib + 1, grid.size() - 1)]);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    auto value = [&](double lx) {
        double v = eval_or_nan(rec, sigma_s, std::pow(10.0, lx));
        return std::isfinite(v) ? v : -1.0;
    };
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 60 && (b - a) > decade_tol; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = value(x2);
        }
    }
    if (f1 > best.tau) best = {f1, sigma_s, std::pow(10.0, x1)};
    if (f2 > best.tau) best = {f2, sigma_s, std::pow(10.0, x2)};
    return best;
}

}  // namespace

MacroscopicityReport macroscopicity(const ExperimentRecord& rec, const ParameterBounds& bounds,
                                    const SearchSpec& search)
{
    if (!(bounds.sigma_s_max > 0.0) || !(bounds.hbar_over_sigma_q_min > 0.0))
        throw DomainError("parameter bounds must be positive");
    validate_record(rec);
    MacroscopicityReport rep;
    rep.bounds_id = bounds.id;

    if (auto* p = std::get_if<PointInterference>(&rec); p && !p->dx) {
        rep.tau_max = excluded_tau_point(p->mass, p->t, p->f);
        rep.mu = std::log10(rep.tau_max);
        rep.argmax_sigma_s = bounds.sigma_s_max;
        rep.argmax_hbar_over_sigma_q = bounds.hbar_over_sigma_q_min;
        rep.saturated = true;
        rep.method = "closed_form";
        rep.notes.push_back("no path separation: resolved-path limit used");
        return rep;
    }

    double lo = bounds.hbar_over_sigma_q_min;
    double hi = std::max(search.upper, lo * 10.0);
    int n = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * search.per_decade)) + 1);
    std::vector<double> grid = log_grid(lo, hi, n);

    Best best = maximize_over_h(rec, bounds.sigma_s_max, grid, search.decade_tol);
    if (best.tau <= 0.0) throw DomainError("no excluded region inside the bounds");

    // sigma_s probe at the coarse optimum
    std::vector<double> probe;
    for (int i = 0; i < 5; ++i) probe.push_back(bounds.sigma_s_max * i / 4.0);
    std::vector<double> pv;
    for (double s : probe) pv.push_back(eval_or_nan(rec, s, best.h));
    bool monotone = true;
    for (std::size_t i = 1; i < pv.size(); ++i)
        if (!(pv[i] >= pv[i - 1] * (1.0 - 1e-9))) monotone = false;
    rep.sigma_s_monotone = monotone;

    std::vector<double> extra;
    if (!monotone)
        extra.assign(probe.begin(), probe.end() - 1);
    else if (std::holds_alternative<Squid>(rec))
        extra.push_back(0.0);
    for (double s : extra) {
        Best b = maximize_over_h(rec, s, grid, search.decade_tol);
        if (b.tau > best.tau) best = b;
    }
    rep.method = monotone ? "sigma_s_at_bound" : "sigma_s_sweep";
    if (!monotone) rep.notes.push_back("excluded tau not monotone in sigma_s: swept 5 values");

    rep.tau_max = best.tau;
    rep.mu = std::log10(best.tau);
    rep.argmax_sigma_s = best.sigma_s;
    rep.argmax_hbar_over_sigma_q = best.h;
    double edge = eval_or_nan(rec, best.sigma_s, lo);
    rep.saturated = std::isfinite(edge) && edge >= best.tau * (1.0 - 1e-4);
    return rep;
}

}  // namespace macro
