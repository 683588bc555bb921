#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>

namespace choquard::detail {

/// Real-to-complex 3-D transform of an m^3 cube with owned FFTW buffers.
/// Not shareable across threads; use RealFft3d::local(m) for a per-thread instance.
class RealFft3d {
public:
    explicit RealFft3d(int m);
    ~RealFft3d();
    RealFft3d(const RealFft3d&) = delete;
    RealFft3d& operator=(const RealFft3d&) = delete;

    int size() const { return m_; }
    std::size_t real_size() const { return static_cast<std::size_t>(m_) * m_ * m_; }
    std::size_t spectrum_size() const { return static_cast<std::size_t>(m_) * m_ * (m_ / 2 + 1); }

    std::span<double> real() { return {real_, real_size()}; }
    std::span<std::complex<double>> spectrum() {
        return {reinterpret_cast<std::complex<double>*>(spec_), spectrum_size()};
    }

    /// real() -> spectrum(), unnormalized.
    void forward();
    /// spectrum() -> real(), unnormalized (scales by m^3); destroys spectrum().
    void inverse();

    static RealFft3d& local(int m);

private:
    int m_;
    double* real_ = nullptr;
    fftw_complex* spec_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

/// Signed integer frequency of FFT bin j for length m.
inline int signed_frequency(int j, int m) { return j <= m / 2 ? j : j - m; }

}  // namespace choquard::detail
