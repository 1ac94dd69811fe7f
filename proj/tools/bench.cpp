// Timing harness pitting the OpenMP kernels against the serial lane and the
// fast transform against the direct-summation reference. Run with a thread
// count to compare, e.g. OMP_NUM_THREADS=4 ./kolflow_bench.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "kolflow/dynamics.hpp"
#include "kolflow/parallel.hpp"
#include "kolflow/spectral.hpp"

using namespace kolflow;

namespace {

PhysicalField dense_field(const GridSpec& g, const PrecisionConfig& p) {
    PhysicalField f = PhysicalField::zeros(g, p);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            long v = (131L * i + 37L * j + 11) % 1009 - 504;
            BigReal x = BigReal::of_long(v, p);
            div_long(f.at(i, j), x, 1009);
        }
    }
    return f;
}

SpectralField dense_state(const GridSpec& g, const PrecisionConfig& p) {
    SpectralField w = fft_forward(dense_field(g, p));
    cset_zero(w.mode(0, 0));
    return dealias_truncate(w);
}

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm the twiddle caches
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, int threads, int reps, double ms) {
    std::printf("%-28s %7d %6d %12.3f\n", name, threads, reps, ms);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = parallel::max_threads();
    if (argc == 3 && std::string_view(argv[1]) == "--threads") threads = std::atoi(argv[2]);

    const PrecisionConfig p40 = make_precision(40);
    std::printf("%-28s %7s %6s %12s\n", "kernel", "threads", "reps", "ms/op");

    for (int n : {16, 32}) {
        GridSpec g(n);
        PhysicalField f = dense_field(g, p40);
        char name[64];
        std::snprintf(name, sizeof name, "dft_reference %d^2", n);
        row(name, 1, 2, time_ms(2, [&] { dft_reference(f); }));
        std::snprintf(name, sizeof name, "fft_forward %d^2", n);
        row(name, 1, 16, time_ms(16, [&] { fft_forward(f); }));
    }

    {
        GridSpec g(64);
        PhysicalField f = dense_field(g, p40);
        for (int t : {1, threads}) {
            parallel::ThreadGuard guard(t);
            row("fft_forward 64^2 @40d", t, 16, time_ms(16, [&] { fft_forward(f); }));
            if (t == threads && threads == 1) break;
        }
    }

    {
        GridSpec g(64);
        SpectralField w = dense_state(g, p40);
        FlowParams params = make_flow_params("100", 4, p40);
        StepConfig step = make_step("1e-3", 10, p40);
        Stepper stepper(g, p40, params);
        for (int t : {1, threads}) {
            parallel::ThreadGuard guard(t);
            row("taylor step M=10 64^2", t, 2, time_ms(2, [&] {
                    stepper.compute(w, step.order);
                    stepper.advance(step.dt);
                }));
            if (t == threads && threads == 1) break;
        }
    }
    return 0;
}
