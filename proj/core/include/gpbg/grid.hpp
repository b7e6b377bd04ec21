#pragma once

#include <complex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gpbg/errors.hpp"

namespace gpbg {

using cdouble = std::complex<double>;

// Uniform periodic grid on [0, L): N points (power of two, at least 8).
struct Grid {
    int size = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int n_points, double box_length);

    double dx() const { return length / size; }
    double x(int i) const { return dx() * i; }
    // Discrete wavenumber 2*pi*m/L for FFT bin i, m signed.
    double frequency(int i) const;
    std::vector<double> frequencies() const;

    bool operator==(const Grid&) const = default;
};

struct GridFunction {
    Grid grid;
    std::vector<cdouble> values;

    static GridFunction zero(const Grid& g) {
        return GridFunction{g, std::vector<cdouble>(static_cast<std::size_t>(g.size))};
    }
};

// In-place radix-2 FFT; `inverse` divides by N. Forward convention
// fhat_m = sum_x f_x exp(-i 2 pi m x / N).
void fft_in_place(std::vector<cdouble>& a, bool inverse);

GridFunction fft(const GridFunction& f);
GridFunction ifft(const GridFunction& f);

// Exact free-Schroedinger flow over time dt: Fourier multiplier
// exp(-i xi^2 dt) per mode, so that i d/dt phi = -Laplacian phi is solved
// forward by positive dt. Unitary on the discrete L^2 norm.
GridFunction propagate(const GridFunction& f, double dt);

GridFunction conjugate(const GridFunction& f);
GridFunction multiply(const GridFunction& f, const GridFunction& g);
// |f|^2 f, the cubic nonlinearity.
GridFunction cubic_term(const GridFunction& f);
GridFunction scale(const GridFunction& f, cdouble c);
GridFunction add(const GridFunction& f, const GridFunction& g);
GridFunction sub(const GridFunction& f, const GridFunction& g);

// Riemann norms with dx weights; r = infinity is the plain max.
double norm_l2(const GridFunction& f);
double norm_lr(const GridFunction& f, double r);
double norm_linf(const GridFunction& f);
cdouble inner(const GridFunction& f, const GridFunction& g);  // integral of f conj(g)

// Deterministic summation independent of chunking; also more accurate
// than running sums.
double pairwise_sum(std::span<const double> xs);
cdouble pairwise_sum(std::span<const cdouble> xs);

// Random function with Fourier modes |m| <= max_mode (iid complex normal
// coefficients), normalized to unit discrete L^2 norm.
GridFunction random_band_limited(const Grid& g, int max_mode, std::mt19937_64& rng);

// exp(-(x-center)^2 / (4 s)), a single image (no periodization).
GridFunction gaussian(const Grid& g, double center, double s);

// Fixture format: 16-byte header (magic "GPGF", u32 version, u64 N), then
// N interleaved little-endian (re, im) doubles.
void save_gpgf(const GridFunction& f, const std::string& path);
GridFunction load_gpgf(const std::string& path, double box_length);

}  // namespace gpbg
