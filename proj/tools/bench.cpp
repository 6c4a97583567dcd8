// Benchmark: OpenMP ensemble kernels against the serial reference, and the
// optimized filter against the plain-ops reference.
#include <chrono>
#include <cstdio>

#include "ctinfo/ensemble.hpp"
#include "ctinfo/filter.hpp"
#include "ctinfo/oudyn.hpp"
#include "ctinfo/simulate.hpp"

using namespace ctinfo;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double girsanov_ensemble(std::size_t n_paths, ensemble::policy pol) {
    oudyn::OUParams p;
    const auto rates = ensemble::map(n_paths, pol, [&](std::size_t i) {
        const auto path = oudyn::simulate_coupled_ou(p, 1e-3, 20.0, 7, i);
        return oudyn::girsanov_accumulator(path, p).trace.final_m() / 20.0;
    });
    return ensemble::summarize(rates).mean;
}

double filter_run(bool optimized) {
    simulate::CoupledSpikingParams p;
    const paths::TimeWindow w(-1.0, 0.0, 200.0);
    const auto real = simulate::simulate_coupled_spiking(p, w, 11);
    const auto tr = optimized ? filter::marginal_intensity_trace(real.x, p, 2e-3)
                              : filter::filter_run_reference(real.x, p, 2e-3);
    return tr.right.back();
}

}  // namespace

int main() {
    std::printf("ensemble kernel: 64 Girsanov paths, horizon 20, dt 1e-3\n");
    double t0 = now();
    const double serial = girsanov_ensemble(64, ensemble::policy::serial);
    const double t_serial = now() - t0;
    t0 = now();
    const double parallel = girsanov_ensemble(64, ensemble::policy::parallel);
    const double t_parallel = now() - t0;
    std::printf("  serial   %.3f s (mean rate %.6f)\n", t_serial, serial);
    std::printf("  parallel %.3f s (mean rate %.6f)\n", t_parallel, parallel);
    std::printf("  speedup  %.2fx, results identical: %s\n", t_serial / t_parallel,
                serial == parallel ? "yes" : "NO");

    std::printf("filter: horizon 200, grid step 2e-3\n");
    t0 = now();
    const double ref = filter_run(false);
    const double t_ref = now() - t0;
    t0 = now();
    const double opt = filter_run(true);
    const double t_opt = now() - t0;
    std::printf("  reference %.3f s (last value %.9f)\n", t_ref, ref);
    std::printf("  optimized %.3f s (last value %.9f)\n", t_opt, opt);
    std::printf("  speedup   %.1fx, |diff| %.2e\n", t_ref / t_opt, ref > opt ? ref - opt : opt - ref);
    return 0;
}
