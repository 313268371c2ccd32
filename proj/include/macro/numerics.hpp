#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace macro {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr double kDefaultRelTol = 1e-6;
inline constexpr double kAbsFloor = 1e-300;

double erf(double x);
double sinc(double x);
double bessel_i0e(double x);
double bessel_i1e(double x);
double bessel_j1(double x);

struct QuadOptions {
    double rel_tol = kDefaultRelTol;
    double abs_tol = kAbsFloor;
    std::size_t max_intervals = 2000;
    /// Interior points where the integrand has kinks or narrow features.
    std::vector<double> breakpoints;
};

using Fn1 = std::function<double(double)>;

QuadratureResult integrate_1d(const Fn1& f, double a, double b, double rel_tol = kDefaultRelTol);
QuadratureResult integrate_1d(const Fn1& f, double a, double b, const QuadOptions& opt);

/// Nested adaptive quadrature over a 2- or 3-dimensional box.
using FnN = std::function<double(std::span<const double>)>;
QuadratureResult integrate_nd(const FnN& f, const std::vector<std::array<double, 2>>& box,
                              double rel_tol = kDefaultRelTol, std::size_t max_evals = 20'000'000);

using Rng = std::mt19937_64;

/// Deterministic per-stream generator derived from (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

/// Samples are drawn in fixed-size chunks, each with its own generator, and merged in order.
inline constexpr std::size_t kMcChunk = 1024;

/// `sample` draws from its own sampler using the supplied generator and returns the weighted integrand.
McEstimate mc_integrate(const std::function<double(Rng&)>& sample, std::size_t n, std::uint64_t seed);

}  // namespace macro
