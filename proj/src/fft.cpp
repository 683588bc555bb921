#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace choquard::detail {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft3d::RealFft3d(int m) : m_(m) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_ = fftw_alloc_real(real_size());
    spec_ = fftw_alloc_complex(spectrum_size());
    if (real_ == nullptr || spec_ == nullptr) throw std::bad_alloc();
    // ESTIMATE keeps plans (and hence results) reproducible run to run.
    fwd_ = fftw_plan_dft_r2c_3d(m, m, m, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_3d(m, m, m, spec_, real_, FFTW_ESTIMATE);
}

RealFft3d::~RealFft3d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
}

void RealFft3d::forward() { fftw_execute(fwd_); }
void RealFft3d::inverse() { fftw_execute(inv_); }

RealFft3d& RealFft3d::local(int m) {
    thread_local std::map<int, std::unique_ptr<RealFft3d>> cache;
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<RealFft3d>(m);
    return *slot;
}

}  // namespace choquard::detail
