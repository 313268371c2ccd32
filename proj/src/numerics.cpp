#include "macro/numerics.hpp"

#include "macro/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>

namespace macro {

namespace {

// GSL aborts by default; every call site here checks status codes instead.
const bool gsl_handler_off = [] {
    gsl_set_error_handler_off();
    return true;
}();

struct Ctx {
    const Fn1* f;
    std::size_t count = 0;
    std::exception_ptr err;
};

double trampoline(double x, void* p)
{
    auto* c = static_cast<Ctx*>(p);
    ++c->count;
    if (c->err) return 0.0;
    try {
        return (*c->f)(x);
    } catch (...) {
        // never unwind through the C library
        c->err = std::current_exception();
        return 0.0;
    }
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

double erf(double x) { return std::erf(x); }

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double bessel_i0e(double x)
{
    if (!(x >= 0.0)) throw DomainError("bessel_i0e: negative argument");
    return gsl_sf_bessel_I0_scaled(x);
}

double bessel_i1e(double x)
{
    if (!(x >= 0.0)) throw DomainError("bessel_i1e: negative argument");
    return gsl_sf_bessel_I1_scaled(x);
}

double bessel_j1(double x) { return gsl_sf_bessel_J1(x); }

QuadratureResult integrate_1d(const Fn1& f, double a, double b, double rel_tol)
{
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    return integrate_1d(f, a, b, opt);
}

QuadratureResult integrate_1d(const Fn1& f, double a, double b, const QuadOptions& opt)
{
    (void)gsl_handler_off;
    if (!(opt.rel_tol > 0.0)) throw DomainError("integrate_1d: rel_tol must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_1d: infinite limit");
    if (a == b) return {0.0, 0.0, 1};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    // slivers between nearly coincident points upset the extrapolation
    const double gap = 1e-10 * (b - a);
    std::vector<double> inner;
    for (double p : opt.breakpoints)
        if (p > a + gap && p < b - gap) inner.push_back(p);
    std::sort(inner.begin(), inner.end());
    std::vector<double> pts{a};
    for (double p : inner)
        if (p - pts.back() > gap) pts.push_back(p);
    pts.push_back(b);

    std::size_t limit = std::max<std::size_t>(opt.max_intervals, pts.size() + 1);
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(limit));

    Ctx ctx{&f, 0, nullptr};
    gsl_function gf{&trampoline, &ctx};
    double result = 0.0, abserr = 0.0;
    double rel = std::max(opt.rel_tol, 1e-13);
    int status;
    if (pts.size() > 2)
        status = gsl_integration_qagp(&gf, pts.data(), pts.size(), opt.abs_tol, rel, limit, ws.get(),
                                      &result, &abserr);
    else
        status = gsl_integration_qag(&gf, a, b, opt.abs_tol, rel, limit, GSL_INTEG_GAUSS15, ws.get(),
                                     &result, &abserr);
    if (ctx.err) std::rethrow_exception(ctx.err);

    QuadratureResult r{sign * result, abserr, std::max<std::size_t>(ctx.count, 1)};
    if (!std::isfinite(result)) throw ConvergenceError("integrate_1d: non-finite result", r.value, abserr);
    if (status != GSL_SUCCESS) {
        // roundoff flags are benign when the error is still within a small multiple of the request
        double slack = std::max(opt.abs_tol, 10.0 * rel * std::abs(result));
        if (abserr > slack)
            throw ConvergenceError(std::string("integrate_1d: ") + gsl_strerror(status), r.value, abserr);
    }
    return r;
}

QuadratureResult integrate_nd(const FnN& f, const std::vector<std::array<double, 2>>& box,
                              double rel_tol, std::size_t max_evals)
{
    const std::size_t n = box.size();
    if (n < 2 || n > 3) throw DomainError("integrate_nd: dimension must be 2 or 3");
    for (const auto& iv : box)
        if (!std::isfinite(iv[0]) || !std::isfinite(iv[1])) throw DomainError("integrate_nd: box not finite");

    std::array<double, 3> x{};
    std::size_t evals = 0;
    bool exhausted = false;
    double err_sum = 0.0;

    std::function<double(std::size_t)> level = [&](std::size_t d) -> double {
        // inner levels are tightened so their noise does not stall the outer rule
        double tol = rel_tol * std::pow(0.1, static_cast<double>(d));
        Fn1 g = [&, d](double t) {
            x[d] = t;
            if (d + 1 == n) {
                if (evals >= max_evals) {
                    exhausted = true;
                    return 0.0;
                }
                ++evals;
                return f(std::span<const double>(x.data(), n));
            }
            return level(d + 1);
        };
        QuadOptions opt;
        opt.rel_tol = std::max(tol, 1e-12);
        try {
            auto r = integrate_1d(g, box[d][0], box[d][1], opt);
            if (d == 0) err_sum = r.abs_error_estimate;
            return r.value;
        } catch (const ConvergenceError& e) {
            if (d == 0) err_sum = e.error_estimate;
            exhausted = true;
            return e.best_estimate;
        }
    };

    double v = level(0);
    if (exhausted) throw ConvergenceError("integrate_nd: evaluation budget exhausted", v, err_sum);
    return {v, err_sum, std::max<std::size_t>(evals, 1)};
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t s = splitmix64(seed ^ splitmix64(stream + 0xA5A5A5A5ULL));
    return Rng(s);
}

McEstimate mc_integrate(const std::function<double(Rng&)>& sample, std::size_t n, std::uint64_t seed)
{
    if (n < 100) throw DomainError("mc_integrate: need at least 100 samples");
    double mean = 0.0, m2 = 0.0;
    std::size_t done = 0;
    for (std::size_t chunk = 0; done < n; ++chunk) {
        Rng rng = make_rng(seed, chunk);
        std::size_t m = std::min(kMcChunk, n - done);
        double cm = 0.0, cm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double v = sample(rng);
            double d = v - cm;
            cm += d / static_cast<double>(i + 1);
            cm2 += d * (v - cm);
        }
        // Chan merge, always in chunk order
        double na = static_cast<double>(done), nb = static_cast<double>(m);
        double delta = cm - mean;
        mean += delta * nb / (na + nb);
        m2 += cm2 + delta * delta * na * nb / (na + nb);
        done += m;
    }
    double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n)), n, seed};
}

}  // namespace macro
