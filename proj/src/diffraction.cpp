#include "macro/errors.hpp"
#include "macro/experiments.hpp"
#include "macro/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace macro {

using constants::hbar;
using constants::pi;

namespace {

const double kGlX[8] = {-0.960289856497536232, -0.796666477413626740, -0.525532409916328986, -0.183434642495649805,
                        0.183434642495649805,  0.525532409916328986,  0.796666477413626740,  0.960289856497536232};
const double kGlW[8] = {0.101228536290376259, 0.222381034453374471, 0.313706645877887287, 0.362683783378361983,
                        0.362683783378361983, 0.313706645877887287, 0.222381034453374471, 0.101228536290376259};

// Slit-pair overlap integral A(u) for the grating transmission function.
double slit_overlap(int N, double d, double w, double alpha, double u)
{
    double sum = 0.0;
    int mlo = static_cast<int>(std::ceil((u - w) / d)), mhi = static_cast<int>(std::floor((u + w) / d));
    for (int m = std::max(mlo, -(N - 1)); m <= std::min(mhi, N - 1); ++m) {
        double ov = w - std::abs(m * d - u);
        if (ov <= 0.0) continue;
        int am = std::abs(m);
        double pairs = 0.0;
        for (int i = 0; i <= N - 1 - am; ++i) {
            double c = (i - 0.5 * (N - 1)) * d + 0.5 * am * d;
            pairs += std::cos(2.0 * alpha * u * c);
        }
        sum += ov * sinc(alpha * u * ov) * pairs;
    }
    return sum;
}

}  // namespace

ScreenPattern diffraction_pattern(const GratingDiffraction& rec, const KickParams& kick,
                                  const std::vector<double>& screen)
{
    validate_record(rec);
    const double M = mass_of(rec.geometry);
    const int N = rec.slits;
    const double d = rec.period, w = rec.open_fraction * rec.period;

    // velocity nodes: Gauss-Legendre over +-3 sigma with Gaussian weights
    std::vector<double> vs, vw;
    if (rec.velocity_fwhm <= 0.0) {
        vs = {rec.velocity};
        vw = {1.0};
    } else {
        double sv = rec.velocity_fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
        double lo = std::max(rec.velocity - 3.0 * sv, 0.05 * rec.velocity), hi = rec.velocity + 3.0 * sv;
        double norm = 0.0;
        for (int panel = 0; panel < 3; ++panel) {
            double a = lo + (hi - lo) * panel / 3.0, b = lo + (hi - lo) * (panel + 1) / 3.0;
            for (int j = 0; j < 8; ++j) {
                double v = 0.5 * (a + b) + 0.5 * (b - a) * kGlX[j];
                double wt = 0.5 * (b - a) * kGlW[j] * std::exp(-0.5 * std::pow((v - rec.velocity) / sv, 2));
                vs.push_back(v);
                vw.push_back(wt);
                norm += wt;
            }
        }
        for (double& x : vw) x /= norm;
    }

    ScreenPattern out{screen, std::vector<double>(screen.size(), 0.0)};
    double umax = (N - 1) * d + w;
    double xmax = 0.0;
    for (double x : screen) xmax = std::max(xmax, std::abs(x));

    for (std::size_t iv = 0; iv < vs.size(); ++iv) {
        double T1 = rec.L1 / vs[iv], T2 = rec.L2 / vs[iv];
        double T = T1 * T2 / (T1 + T2);
        double alpha = M / (2.0 * hbar * T), beta = M / (hbar * T2);

        // panel count follows the largest phase swing inside one band
        double swing = 2.0 * alpha * umax * 0.5 * (N - 1) * d + beta * xmax * 2.0 * w + alpha * umax * w;
        int panels = std::clamp(static_cast<int>(swing / 0.5) + 8, 8, 4000);

        std::vector<double> cuts{0.0, umax};
        for (int m = 0; m <= N - 1; ++m)
            for (double c : {m * d - w, m * d, m * d + w})
                if (c > 0.0 && c < umax) cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        std::vector<double> nodes, weights;
        for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
            double a = cuts[seg], b = cuts[seg + 1];
            int np = std::max(2, static_cast<int>(std::ceil(panels * (b - a) / (2.0 * w))));
            for (int p = 0; p < np; ++p) {
                double pa = a + (b - a) * p / np, pb = a + (b - a) * (p + 1) / np;
                for (int j = 0; j < 8; ++j) {
                    double u = 0.5 * (pa + pb) + 0.5 * (pb - pa) * kGlX[j];
                    double r = free_flight_blur(u, T1, T2, rec.geometry, kick);
                    double src = sinc(M * rec.source_width * u / (2.0 * hbar * T1));
                    double det = sinc(0.5 * beta * u * rec.detector_width);
                    nodes.push_back(u);
                    weights.push_back(0.5 * (pb - pa) * kGlW[j] * r * slit_overlap(N, d, w, alpha, u) * src * det);
                }
            }
        }
        for (std::size_t ix = 0; ix < screen.size(); ++ix) {
            double acc = 0.0;
            for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * std::cos(beta * screen[ix] * nodes[k]);
            // even integrand: twice the half line
            out.intensity[ix] += vw[iv] * 2.0 * acc;
        }
    }
    double peak = *std::max_element(out.intensity.begin(), out.intensity.end());
    for (double& v : out.intensity) {
        // quadrature noise around exact zeros of the signal
        if (v < 0.0 && v > -1e-9 * peak) v = 0.0;
    }
    return out;
}

}  // namespace macro
