#pragma once
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace ctinfo::ensemble {

enum class policy { serial, parallel };

// Evaluate fn(i) for i in [0,n). Each slot gets its own RNG stream inside fn, so
// serial and parallel runs produce identical vectors; the serial path is the
// reference the parallel one is tested and benchmarked against.
template <class Fn>
auto map(std::size_t n, policy p, Fn&& fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using T = decltype(fn(std::size_t{0}));
    std::vector<T> out(n);
    if (p == policy::serial) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    }
    return out;
}

struct mean_se {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline mean_se summarize(const std::vector<double>& xs) {
    mean_se r;
    r.n = xs.size();
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    if (r.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / (static_cast<double>(r.n) * static_cast<double>(r.n - 1)));
    }
    return r;
}

}  // namespace ctinfo::ensemble
