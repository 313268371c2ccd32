#include "macro/errors.hpp"
#include "macro/experiments.hpp"
#include "macro/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace macro {

using constants::hbar;
using constants::m_e;
using constants::pi;

double BcsAmplitudes::gap_k2() const { return 2.0 * m_e * material.gap / (hbar * hbar); }

double BcsAmplitudes::shell_k2() const { return 2.0 * m_e * material.debye / (hbar * hbar); }

double BcsAmplitudes::k_low() const
{
    double kf2 = material.k_F * material.k_F;
    return std::sqrt(std::max(kf2 - shell_k2(), 0.0));
}

double BcsAmplitudes::k_high() const { return std::sqrt(material.k_F * material.k_F + shell_k2()); }

double BcsAmplitudes::v2(double k) const
{
    double xi = k * k - material.k_F * material.k_F;
    double xd = shell_k2();
    if (xi <= -xd) return 1.0;
    if (xi >= xd) return 0.0;
    double d = gap_k2();
    if (d == 0.0) return xi < 0.0 ? 1.0 : (xi > 0.0 ? 0.0 : 0.5);
    return 0.5 * (1.0 - xi / std::hypot(xi, d));
}

namespace {

// Reduced BCS occupation model in wavenumber units; xi = k^2 - k_F^2.
struct Shell {
    double kf, kf2, dp, xd, klo, khi, tlo, thi;

    explicit Shell(const SuperconductorMaterial& m)
    {
        BcsAmplitudes b{m};
        kf = m.k_F;
        kf2 = kf * kf;
        dp = b.gap_k2();
        xd = b.shell_k2();
        if (xd >= kf2) throw DomainError("Debye shell exceeds the Fermi sphere");
        klo = b.k_low();
        khi = b.k_high();
        tlo = dp > 0.0 ? std::asinh(-xd / dp) : 0.0;
        thi = -tlo;
    }

    double k_of_t(double t) const { return std::sqrt(kf2 + dp * std::sinh(t)); }

    double t_of_k(double k) const
    {
        if (k <= klo) return tlo;
        if (k >= khi) return thi;
        return std::asinh((k - kf) * (k + kf) / dp);
    }

    // int_a^b k n(k) dk, 0 <= a <= b
    double hn_diff(double a, double b) const
    {
        if (b <= a) return 0.0;
        double sum = 0.0;
        double a1 = std::min(a, klo), b1 = std::min(b, klo);
        if (b1 > a1) sum += 0.5 * (b1 - a1) * (b1 + a1);
        double a2 = std::clamp(a, klo, khi), b2 = std::clamp(b, klo, khi);
        if (b2 > a2) {
            double xa = (a2 - kf) * (a2 + kf), xb = (b2 - kf) * (b2 + kf);
            double ra = std::hypot(xa, dp), rb = std::hypot(xb, dp);
            double den = ra + rb;
            double bracket = den > 0.0 ? 1.0 - (xa + xb) / den : 0.0;
            sum += 0.25 * (b2 - a2) * (b2 + a2) * bracket;
        }
        return sum;
    }
};

// Cumulative int_{tlo}^{t} exp(-c sinh t') dt' on a Hermite table.
class CumulativeTable {
public:
    CumulativeTable(double tlo, double thi, double c) : tlo_(tlo), c_(c)
    {
        h_ = (thi - tlo) / kCells;
        val_.resize(kCells + 1);
        val_[0] = 0.0;
        static const double gx[4] = {-0.861136311594052575, -0.339981043584856265, 0.339981043584856265,
                                     0.861136311594052575};
        static const double gw[4] = {0.347854845137453857, 0.652145154862546143, 0.652145154862546143,
                                     0.347854845137453857};
        for (int i = 0; i < kCells; ++i) {
            double mid = tlo + (i + 0.5) * h_, acc = 0.0;
            for (int j = 0; j < 4; ++j) acc += gw[j] * deriv(mid + 0.5 * h_ * gx[j]);
            val_[i + 1] = val_[i] + 0.5 * h_ * acc;
        }
    }

    double operator()(double t) const
    {
        if (c_ == 0.0) return t - tlo_;
        double u = (t - tlo_) / h_;
        int i = std::clamp(static_cast<int>(u), 0, kCells - 1);
        double s = u - i;
        double t0 = tlo_ + i * h_;
        double y0 = val_[i], y1 = val_[i + 1];
        double d0 = deriv(t0) * h_, d1 = deriv(t0 + h_) * h_;
        double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1;
    }

private:
    static constexpr int kCells = 2048;
    double deriv(double t) const { return std::exp(-c_ * std::sinh(t)); }
    double tlo_, c_, h_;
    std::vector<double> val_;
};

void push_if(std::vector<double>& v, double x, double lo, double hi)
{
    if (x > lo && x < hi && std::isfinite(x)) v.push_back(x);
}

// A(q) = int d^3k (1 - n_k) n_{k+q}, angular part done analytically.
double redistribution(const Shell& sh, double q)
{
    double total = 0.0;
    std::vector<double> kinks;
    for (double K : {sh.klo, sh.kf, sh.khi}) {
        kinks.push_back(K - q);
        kinks.push_back(q - K);
        kinks.push_back(q + K);
    }
    kinks.push_back(q);

    if (sh.dp > 0.0) {
        auto f = [&](double t) {
            double k = sh.k_of_t(t);
            return 0.25 * sh.dp * std::exp(t) * sh.hn_diff(std::abs(k - q), k + q);
        };
        QuadOptions o;
        o.rel_tol = 1e-9;
        for (double k : kinks)
            if (k > sh.klo && k < sh.khi) push_if(o.breakpoints, sh.t_of_k(k), sh.tlo, sh.thi);
        total += integrate_1d(f, sh.tlo, sh.thi, o).value;
    } else {
        auto f = [&](double k) { return k * sh.hn_diff(std::abs(k - q), k + q); };
        QuadOptions o;
        o.rel_tol = 1e-9;
        for (double k : kinks) push_if(o.breakpoints, k, sh.kf, sh.khi);
        total += integrate_1d(f, sh.kf, sh.khi, o).value;
    }

    double lo = std::max(sh.khi, q - sh.khi), hi = q + sh.khi;
    if (hi > lo) {
        auto f = [&](double k) { return k * sh.hn_diff(std::abs(k - q), k + q); };
        QuadOptions o;
        o.rel_tol = 1e-9;
        for (double k : kinks) push_if(o.breakpoints, k, lo, hi);
        total += integrate_1d(f, lo, hi, o).value;
    }
    return 2.0 * pi / q * total;
}

// B(q) = int d^3k w_k w_{k+q} exp(-sigma_s^2 |2k+q|^2 / 2), w = sqrt(n(1-n)).
double pair_term(const Shell& sh, const CumulativeTable& cum, double sigma_s, double q)
{
    if (sh.dp == 0.0 || q >= 2.0 * sh.khi) return 0.0;
    double s2 = sigma_s * sigma_s;
    double wpre = 0.25 * sh.dp;
    auto f = [&](double t) {
        double k = sh.k_of_t(t);
        double tp = sh.t_of_k(k + q), tm = sh.t_of_k(std::abs(k - q));
        double diff = cum(tp) - cum(tm);
        return std::exp(s2 * (0.5 * q * q - k * k - sh.kf2)) * wpre * diff;
    };
    QuadOptions o;
    o.rel_tol = 1e-9;
    for (double K : {sh.klo, sh.khi}) {
        for (double k : {K - q, q - K, q + K})
            if (k > sh.klo && k < sh.khi) push_if(o.breakpoints, sh.t_of_k(k), sh.tlo, sh.thi);
    }
    if (q > sh.klo && q < sh.khi) push_if(o.breakpoints, sh.t_of_k(q), sh.tlo, sh.thi);
    return 2.0 * pi / q * wpre * integrate_1d(f, sh.tlo, sh.thi, o).value;
}

// P(|q| <= c kappa) for the 3D Gaussian kick.
double inner_ball_probability(double c)
{
    if (c < 0.5) {
        double sum = 0.0, term = 1.0;
        for (int n = 0; n < 20; ++n) {
            if (n > 0) term *= -0.5 * c * c / n;
            sum += term * std::pow(c, 3) / (2.0 * n + 3.0);
        }
        return std::sqrt(2.0 / pi) * sum;
    }
    return std::erf(c / std::sqrt(2.0)) - std::sqrt(2.0 / pi) * c * std::exp(-0.5 * c * c);
}

double diffusion_rate(const Squid& rec, const Shell& sh, double sigma_s, double sigma_q)
{
    if (sigma_q <= 0.0) return 0.0;
    double V = rec.volume();
    double qc = pi / std::cbrt(V);
    double kappa = sigma_q / hbar;
    double tlo = qc / kappa, thi = 9.0;
    if (tlo >= thi) return 0.0;
    CumulativeTable cum(sh.tlo, sh.thi, sigma_s * sigma_s * sh.dp);
    auto f = [&](double t) {
        double q = t * kappa;
        double w = std::sqrt(2.0 / pi) * t * t * std::exp(-0.5 * t * t);
        return w * (redistribution(sh, q) + pair_term(sh, cum, sigma_s, q));
    };
    QuadOptions o;
    o.rel_tol = 1e-6;
    for (double scale : {sh.dp / (2 * sh.kf), sh.xd / (2 * sh.kf), sh.khi - sh.klo, 2 * sh.klo, 2 * sh.kf, 2 * sh.khi})
        push_if(o.breakpoints, scale / kappa, tlo, thi);
    return V / (4.0 * pi * pi * pi) * integrate_1d(f, tlo, thi, o).value;
}

// Fourier transform of the occupation, int d^3k n(k) exp(i k.s).
double occupation_transform(const Shell& sh, double s)
{
    double u = sh.kf * s;
    double step = u < 1e-2 ? 1.0 - u * u / 10.0 : 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
    double value = 4.0 * pi / 3.0 * sh.kf2 * sh.kf * step;
    if (sh.dp > 0.0) {
        auto f = [&](double k) {
            double xi = (k - sh.kf) * (k + sh.kf);
            double n = 0.5 * (1.0 - xi / std::hypot(xi, sh.dp));
            double theta = k < sh.kf ? 1.0 : 0.0;
            return 4.0 * pi * k * k * (n - theta) * sinc(k * s);
        };
        QuadOptions o;
        o.rel_tol = 1e-8;
        // the correction is nearly odd about k_F, so bound it against the envelope of the step term
        o.abs_tol = 1e-10 * 4.0 * pi / 3.0 * sh.kf2 * sh.kf * std::min(1.0, 3.0 / (u * u));
        o.breakpoints = {sh.kf};
        value += integrate_1d(f, sh.klo, sh.khi, o).value;
    }
    return value;
}

double dephasing_rate(const Squid& rec, const Shell& sh, double sigma_s, double sigma_q)
{
    if (sigma_s <= 0.0 || rec.current_difference == 0.0) return 0.0;
    double V = rec.volume();
    double qc = pi / std::cbrt(V);
    double pc = sigma_q > 0.0 ? inner_ball_probability(qc * hbar / sigma_q) : 1.0;
    double ne = sh.kf2 * sh.kf / (3.0 * pi * pi);
    double dk = m_e * (rec.current_difference / rec.cross_section) / (hbar * ne * constants::e_charge);
    auto f = [&](double s) {
        double g = 4.0 * pi * s * s * std::pow(2.0 * pi * sigma_s * sigma_s, -1.5) * std::exp(-0.5 * s * s / (sigma_s * sigma_s));
        double nt = occupation_transform(sh, s);
        return g * s * s * nt * nt;
    };
    QuadOptions o;
    o.rel_tol = 1e-6;
    // split at the zeros of the step transform, tan u = u, so each panel is a single lobe
    double smax = 9.0 * sigma_s;
    int lobes = static_cast<int>(sh.kf * smax / pi);
    if (lobes < 4000) {
        for (int n = 1; n <= lobes; ++n) {
            double u0 = (n + 0.5) * pi;
            push_if(o.breakpoints, (u0 - 1.0 / u0) / sh.kf, 0.0, smax);
        }
        o.max_intervals = std::max<std::size_t>(o.max_intervals, 4 * o.breakpoints.size() + 100);
    }
    double moment = integrate_1d(f, 0.0, smax, o).value;
    double pre = 4.0 * V * V / std::pow(2.0 * pi, 6);
    return pre * pc * dk * dk / 6.0 * moment;
}

}  // namespace

SquidRates squid_gamma_hat(const Squid& rec, double sigma_s, double sigma_q)
{
    validate_record(rec);
    if (sigma_s < 0.0 || sigma_q < 0.0) throw DomainError("kick widths must be non-negative");
    Shell sh(rec.material);
    return {diffusion_rate(rec, sh, sigma_s, sigma_q), dephasing_rate(rec, sh, sigma_s, sigma_q)};
}

}  // namespace macro
