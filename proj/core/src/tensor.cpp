#include "gpbg/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace gpbg {

namespace {

constexpr std::uint64_t kEntryGuard = std::uint64_t{1} << 24;

std::uint64_t entry_count(int n_points, int particles) {
    std::uint64_t c = 1;
    for (int a = 0; a < 2 * particles; ++a) {
        if (c > kEntryGuard) return c;
        c *= static_cast<std::uint64_t>(n_points);
    }
    return c;
}

void check_guard(const Grid& g, int particles, const char* who) {
    const std::uint64_t c = entry_count(g.size, particles);
    if (c > kEntryGuard) {
        throw MemoryGuardExceeded(std::string(who) + ": N^(2k) = " + std::to_string(c) +
                                  " entries exceeds the guard of 2^24");
    }
}

}  // namespace

DensityTensor make_density_tensor(const Grid& g, int particles) {
    if (particles < 1) throw Error("make_density_tensor: particles must be >= 1");
    check_guard(g, particles, "make_density_tensor");
    DensityTensor t{g, particles, {}};
    t.values.assign(static_cast<std::size_t>(entry_count(g.size, particles)), cdouble{});
    return t;
}

DensityTensor factorized_density(const GridFunction& phi, int k) {
    DensityTensor t = make_density_tensor(phi.grid, k);
    const int n = phi.grid.size;
    const std::size_t total = t.values.size();
    std::vector<int> idx(t.axis_count(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        cdouble v = 1.0;
        for (int a = 0; a < k; ++a) v *= phi.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        for (int a = k; a < 2 * k; ++a) {
            v *= std::conj(phi.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])]);
        }
        t.values[flat] = v;
        for (int a = 2 * k - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < n) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return t;
}

DensityTensor propagate_tensor(const DensityTensor& t, double dt) {
    if (dt == 0.0) return t;
    DensityTensor out = t;
    const int n = t.grid.size;
    const int axes = 2 * t.particles;
    std::vector<cdouble> line(static_cast<std::size_t>(n));
    std::vector<cdouble> phase(static_cast<std::size_t>(n));

    for (int a = 0; a < axes; ++a) {
        // Unprimed axes evolve forward, primed axes with the conjugate phase.
        const double s = a < t.particles ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            const double xi = t.grid.frequency(i);
            phase[static_cast<std::size_t>(i)] = std::polar(1.0, -s * xi * xi * dt);
        }
        std::size_t stride = 1;
        for (int b = axes - 1; b > a; --b) stride *= static_cast<std::size_t>(n);
        const std::size_t block = stride * static_cast<std::size_t>(n);
        for (std::size_t base = 0; base < out.values.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int i = 0; i < n; ++i) {
                    line[static_cast<std::size_t>(i)] = out.values[base + off + stride * static_cast<std::size_t>(i)];
                }
                fft_in_place(line, false);
                for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] *= phase[static_cast<std::size_t>(i)];
                fft_in_place(line, true);
                for (int i = 0; i < n; ++i) {
                    out.values[base + off + stride * static_cast<std::size_t>(i)] = line[static_cast<std::size_t>(i)];
                }
            }
        }
    }
    return out;
}

DensityTensor contract_B(const DensityTensor& t, int j, int sign) {
    const int kp1 = t.particles;
    const int k = kp1 - 1;
    if (k < 1 || j < 1 || j > k) throw Error("contract_B: bad particle index");
    if (sign != 1 && sign != -1) throw Error("contract_B: sign must be +1 or -1");
    DensityTensor out = make_density_tensor(t.grid, k);
    const int n = t.grid.size;

    std::vector<std::size_t> in_stride(t.axis_count());
    {
        std::size_t s = 1;
        for (int a = 2 * kp1 - 1; a >= 0; --a) {
            in_stride[static_cast<std::size_t>(a)] = s;
            s *= static_cast<std::size_t>(n);
        }
    }

    std::vector<int> idx(out.axis_count(), 0);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        // Diagonal value: x_j for the plus contraction, x'_j for the minus.
        const int diag = sign > 0 ? idx[static_cast<std::size_t>(j - 1)]
                                  : idx[static_cast<std::size_t>(k + j - 1)];
        std::size_t src = 0;
        for (int a = 0; a < k; ++a) {
            src += in_stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
        }
        src += in_stride[static_cast<std::size_t>(k)] * static_cast<std::size_t>(diag);
        for (int a = 0; a < k; ++a) {
            src += in_stride[static_cast<std::size_t>(kp1 + a)] *
                   static_cast<std::size_t>(idx[static_cast<std::size_t>(k + a)]);
        }
        src += in_stride[static_cast<std::size_t>(2 * kp1 - 1)] * static_cast<std::size_t>(diag);
        out.values[flat] = t.values[src];
        for (int a = 2 * k - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < n) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return out;
}

DensityTensor contract_B_pm(const DensityTensor& t, int j) {
    DensityTensor plus = contract_B(t, j, +1);
    const DensityTensor minus = contract_B(t, j, -1);
    for (std::size_t i = 0; i < plus.values.size(); ++i) plus.values[i] -= minus.values[i];
    return plus;
}

DensityTensor evaluate_J_full(const CollisionMap& m, std::span<const double> times,
                              const GridFunction& phi) {
    if (m.k < 1 || m.n < 0 || static_cast<int>(m.mu.size()) != m.n) {
        throw Error("evaluate_J_full: invalid map");
    }
    if (static_cast<int>(times.size()) != m.n + 1) {
        throw Error("evaluate_J_full: need n+1 time values");
    }
    check_guard(phi.grid, m.k + m.n, "evaluate_J_full");
    DensityTensor t = factorized_density(phi, m.k + m.n);
    for (int i = m.n; i >= 1; --i) {
        t = contract_B_pm(t, m.at(i));
        t = propagate_tensor(t, times[static_cast<std::size_t>(i) - 1] - times[static_cast<std::size_t>(i)]);
    }
    return t;
}

cdouble tensor_trace(const DensityTensor& t) {
    const int n = t.grid.size;
    const int k = t.particles;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<cdouble> parts;
    std::vector<std::size_t> stride(t.axis_count());
    {
        std::size_t s = 1;
        for (int a = 2 * k - 1; a >= 0; --a) {
            stride[static_cast<std::size_t>(a)] = s;
            s *= static_cast<std::size_t>(n);
        }
    }
    while (true) {
        std::size_t flat = 0;
        for (int a = 0; a < k; ++a) {
            const auto x = static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
            flat += (stride[static_cast<std::size_t>(a)] + stride[static_cast<std::size_t>(k + a)]) * x;
        }
        parts.push_back(t.values[flat]);
        int a = k - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == n) {
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return pairwise_sum(std::span<const cdouble>(parts)) * std::pow(t.grid.dx(), k);
}

cdouble tensor_entry(const DensityTensor& t, std::span<const int> xs, std::span<const int> xps) {
    const int n = t.grid.size;
    std::size_t flat = 0;
    for (int x : xs) flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(x);
    for (int x : xps) flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(x);
    return t.values[flat];
}

DensityTensor tensor_product(const std::vector<DensityTensor>& factors) {
    if (factors.empty()) throw Error("tensor_product: no factors");
    const int k = static_cast<int>(factors.size());
    const Grid& g = factors.front().grid;
    for (const auto& f : factors) {
        if (f.particles != 1 || !(f.grid == g)) {
            throw Error("tensor_product: expected one-particle factors on one grid");
        }
    }
    DensityTensor out = make_density_tensor(g, k);
    const int n = g.size;
    std::vector<int> idx(out.axis_count(), 0);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        cdouble v = 1.0;
        for (int j = 0; j < k; ++j) {
            const auto x = static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]);
            const auto xp = static_cast<std::size_t>(idx[static_cast<std::size_t>(k + j)]);
            v *= factors[static_cast<std::size_t>(j)].values[x * static_cast<std::size_t>(n) + xp];
        }
        out.values[flat] = v;
        for (int a = 2 * k - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < n) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return out;
}

double max_abs(const DensityTensor& t) {
    double m = 0.0;
    for (const auto& v : t.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const DensityTensor& a, const DensityTensor& b) {
    if (a.values.size() != b.values.size()) throw Error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace gpbg
