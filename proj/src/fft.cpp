#include "stochns/fft.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace stochns {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

const FourierTransform& FourierTransform::for_size(int n) {
    // mutex constructed first so it outlives the cache at exit
    std::mutex& m = planner_mutex();
    static std::map<int, std::unique_ptr<FourierTransform>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[n];
    if (!slot) slot.reset(new FourierTransform(n));
    return *slot;
}

FourierTransform::FourierTransform(int n) : n_(n) {
    // planner calls are not thread-safe; caller holds planner_mutex
    const std::size_t nr = static_cast<std::size_t>(n) * n;
    const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_ = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
    c2r_ = fftw_plan_dft_c2r_2d(n, n, c, r, flags | FFTW_DESTROY_INPUT);
    fftw_free(r);
    fftw_free(c);
}

FourierTransform::~FourierTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
}

void FourierTransform::forward(std::span<const double> in, std::span<cplx> out) const {
    const std::size_t nr = static_cast<std::size_t>(n_) * n_;
    if (in.size() != nr || out.size() != static_cast<std::size_t>(n_) * (n_ / 2 + 1)) {
        throw ConfigError("forward transform size mismatch");
    }
    // r2c leaves its input untouched
    fftw_execute_dft_r2c(r2c_, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(nr);
    for (auto& z : out) z *= scale;
}

void FourierTransform::inverse(std::span<const cplx> in, std::span<double> out) const {
    if (in.size() != static_cast<std::size_t>(n_) * (n_ / 2 + 1) ||
        out.size() != static_cast<std::size_t>(n_) * n_) {
        throw ConfigError("inverse transform size mismatch");
    }
    std::vector<cplx> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace stochns
