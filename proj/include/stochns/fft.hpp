#pragma once

#include <fftw3.h>

#include <memory>
#include <span>

#include "stochns/fields.hpp"

namespace stochns {

/// 2D real-to-complex transform pair for one grid size.
///
/// forward() divides by n^2 so its output is the Fourier-series coefficient set;
/// inverse() is the plain synthesis sum. Plans are created once per size and
/// shared; execution uses the new-array interface and is safe from any thread.
class FourierTransform {
public:
    static const FourierTransform& for_size(int n);

    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;
    ~FourierTransform();

    void forward(std::span<const double> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<double> out) const;

private:
    explicit FourierTransform(int n);

    int n_;
    fftw_plan r2c_ = nullptr;
    fftw_plan c2r_ = nullptr;
};

}  // namespace stochns
