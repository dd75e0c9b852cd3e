// Times the OpenMP Monte Carlo kernels against their serial reference
// implementations and cross-checks that both produce identical counts.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "xedrel/mcoracle.hpp"

using namespace xedrel;

namespace {

template <typename F>
double time_s(F f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* kernel, long long n, double serial_s, double parallel_s,
            bool identical) {
    std::printf("%-22s n=%-10lld serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n", kernel,
                n, serial_s, parallel_s, serial_s / parallel_s,
                identical ? "counts identical" : "COUNTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel kernels run serially\n");
#endif

    const long long n = 20'000'000;
    const QosThreshold theta(1.5);

    DeviceModel uniform_dev(UniformModel(Bounds(55, 152)), UniformModel(Bounds(55, 278)), "u");
    McEstimate us, up;
    const double u_ser = time_s([&] { us = mc_single_reliability_serial(uniform_dev, theta, n, 1); });
    const double u_par = time_s([&] { up = mc_single_reliability(uniform_dev, theta, n, 1); });
    report("single/uniform", n, u_ser, u_par, us.estimate == up.estimate);

    DeviceModel tn_dev(ScalarModel{TruncNormModel(100, 20, Bounds(55, 152))},
                       ScalarModel{TruncNormModel(150, 60, Bounds(55, 278))}, "t");
    McEstimate ts, tp;
    const double t_ser = time_s([&] { ts = mc_single_reliability_serial(tn_dev, theta, n, 2); });
    const double t_par = time_s([&] { tp = mc_single_reliability(tn_dev, theta, n, 2); });
    report("single/truncnorm", n, t_ser, t_par, ts.estimate == tp.estimate);

    DevicePool pool({DeviceModel(UniformModel(Bounds(100, 200)), UniformModel(Bounds(90, 160)), "a"),
                     DeviceModel(UniformModel(Bounds(80, 140)), UniformModel(Bounds(60, 120)), "b"),
                     DeviceModel(UniformModel(Bounds(120, 260)), UniformModel(Bounds(100, 200)), "c"),
                     DeviceModel(UniformModel(Bounds(70, 190)), UniformModel(Bounds(80, 150)), "d")});
    const long long n_sys = 5'000'000;
    McEstimate ss, sp;
    const double s_ser = time_s(
        [&] { ss = mc_system_reliability_serial(pool, SeriesConfig{}, theta, n_sys, 3); });
    const double s_par =
        time_s([&] { sp = mc_system_reliability(pool, SeriesConfig{}, theta, n_sys, 3); });
    report("system/series x4", n_sys, s_ser, s_par, ss.estimate == sp.estimate);

    return 0;
}
