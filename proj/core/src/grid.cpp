#include "gpbg/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

namespace gpbg {

Grid::Grid(int n_points, double box_length) : size(n_points), length(box_length) {
    if (n_points < 8 || !std::has_single_bit(static_cast<unsigned>(n_points))) {
        throw Error("Grid: N must be a power of two, at least 8");
    }
    if (!(box_length > 0.0)) throw Error("Grid: L must be positive");
}

double Grid::frequency(int i) const {
    const int m = i < size / 2 ? i : i - size;
    return 2.0 * std::numbers::pi * m / length;
}

std::vector<double> Grid::frequencies() const {
    std::vector<double> out(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) out[static_cast<std::size_t>(i)] = frequency(i);
    return out;
}

void fft_in_place(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cdouble w = std::polar(1.0, ang * static_cast<double>(j));
                const cdouble u = a[i + j];
                const cdouble v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

GridFunction fft(const GridFunction& f) {
    GridFunction out = f;
    fft_in_place(out.values, false);
    return out;
}

GridFunction ifft(const GridFunction& f) {
    GridFunction out = f;
    fft_in_place(out.values, true);
    return out;
}

GridFunction propagate(const GridFunction& f, double dt) {
    if (dt == 0.0) return f;
    GridFunction out = fft(f);
    for (int i = 0; i < out.grid.size; ++i) {
        const double xi = out.grid.frequency(i);
        out.values[static_cast<std::size_t>(i)] *= std::polar(1.0, -xi * xi * dt);
    }
    fft_in_place(out.values, true);
    return out;
}

GridFunction conjugate(const GridFunction& f) {
    GridFunction out = f;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
    GridFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= g.values[i];
    return out;
}

GridFunction cubic_term(const GridFunction& f) {
    GridFunction out = f;
    for (auto& v : out.values) v *= std::norm(v);
    return out;
}

GridFunction scale(const GridFunction& f, cdouble c) {
    GridFunction out = f;
    for (auto& v : out.values) v *= c;
    return out;
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
    GridFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += g.values[i];
    return out;
}

GridFunction sub(const GridFunction& f, const GridFunction& g) {
    GridFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= g.values[i];
    return out;
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

cdouble pairwise_sum(std::span<const cdouble> xs) {
    if (xs.size() <= 8) {
        cdouble s = 0.0;
        for (const cdouble& x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double norm_l2(const GridFunction& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(f.values[i]);
    return std::sqrt(pairwise_sum(sq) * f.grid.dx());
}

double norm_lr(const GridFunction& f, double r) {
    if (std::isinf(r)) return norm_linf(f);
    if (!(r >= 1.0)) throw Error("norm_lr: r must be >= 1");
    std::vector<double> p(f.values.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(std::abs(f.values[i]), r);
    return std::pow(pairwise_sum(p) * f.grid.dx(), 1.0 / r);
}

double norm_linf(const GridFunction& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

cdouble inner(const GridFunction& f, const GridFunction& g) {
    std::vector<cdouble> p(f.values.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = f.values[i] * std::conj(g.values[i]);
    return pairwise_sum(std::span<const cdouble>(p)) * f.grid.dx();
}

GridFunction random_band_limited(const Grid& g, int max_mode, std::mt19937_64& rng) {
    if (max_mode < 1 || max_mode >= g.size / 2) {
        throw Error("random_band_limited: max_mode must lie in [1, N/2)");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    GridFunction spec = GridFunction::zero(g);
    for (int m = -max_mode; m <= max_mode; ++m) {
        const double re = normal(rng), im = normal(rng);
        const int i = m >= 0 ? m : g.size + m;
        spec.values[static_cast<std::size_t>(i)] = cdouble(re, im);
    }
    GridFunction out = ifft(spec);
    const double nrm = norm_l2(out);
    return scale(out, 1.0 / nrm);
}

GridFunction gaussian(const Grid& g, double center, double s) {
    GridFunction out = GridFunction::zero(g);
    for (int i = 0; i < g.size; ++i) {
        const double d = g.x(i) - center;
        out.values[static_cast<std::size_t>(i)] = std::exp(-d * d / (4.0 * s));
    }
    return out;
}

void save_gpgf(const GridFunction& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("save_gpgf: cannot open " + path);
    const char magic[4] = {'G', 'P', 'G', 'F'};
    const std::uint32_t version = 1;
    const std::uint64_t n = f.values.size();
    os.write(magic, 4);
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const auto& v : f.values) {
        const double re = v.real(), im = v.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof re);
        os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    if (!os) throw Error("save_gpgf: write failed for " + path);
}

GridFunction load_gpgf(const std::string& path, double box_length) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("load_gpgf: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!is || std::memcmp(magic, "GPGF", 4) != 0 || version != 1) {
        throw Error("load_gpgf: bad header in " + path);
    }
    GridFunction out{Grid(static_cast<int>(n), box_length), {}};
    out.values.resize(n);
    for (auto& v : out.values) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), sizeof re);
        is.read(reinterpret_cast<char*>(&im), sizeof im);
        v = cdouble(re, im);
    }
    if (!is) throw Error("load_gpgf: truncated file " + path);
    return out;
}

}  // namespace gpbg
