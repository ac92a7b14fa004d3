#include <cstdio>
#include <cstring>
#include <omp.h>

#include "flute/patchwork.hpp"

// Compares the serial reference patchwork scan against the OpenMP kernel on
// a surface with free twists (worst case: 8 choices per pair of pants).

int main(int argc, char** argv) {
    int depth = 8;
    int repeats = 3;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--depth") && i + 1 < argc) depth = std::atoi(argv[++i]);
        if (!std::strcmp(argv[i], "--repeats") && i + 1 < argc) repeats = std::atoi(argv[++i]);
    }
    flute::FluteSurface surface(flute::SequenceSpec::logarithmic(3.0, 1.0),
                                flute::SequenceSpec::constant(0.25));

    std::printf("patchwork scan, %d terms, %d repeats, %d threads\n", depth, repeats,
                omp_get_max_threads());
    double t_serial = 1e300, t_parallel = 1e300;
    size_t count = 0;
    for (int r = 0; r < repeats; ++r) {
        double t0 = omp_get_wtime();
        auto a = flute::scan_patchworks_serial(surface, depth);
        double t1 = omp_get_wtime();
        auto b = flute::scan_patchworks_parallel(surface, depth);
        double t2 = omp_get_wtime();
        t_serial = std::min(t_serial, t1 - t0);
        t_parallel = std::min(t_parallel, t2 - t1);
        count = a.size();
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].log_partial_sum != b[i].log_partial_sum) {
                std::printf("MISMATCH at %zu\n", i);
                return 1;
            }
        }
    }
    std::printf("%zu patchworks  serial %.3fs  parallel %.3fs  speedup %.2fx\n", count,
                t_serial, t_parallel, t_serial / t_parallel);
    return 0;
}
