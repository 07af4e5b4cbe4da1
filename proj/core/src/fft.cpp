#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace pumpshape::detail {

namespace {

struct PlanHolder {
    fftw_plan plan = nullptr;
    ~PlanHolder() {
        if (plan) fftw_destroy_plan(plan);
    }
};

std::mutex plan_mutex;
std::map<std::pair<int, int>, PlanHolder>& plan_cache() {
    static std::map<std::pair<int, int>, PlanHolder> cache;
    return cache;
}

fftw_plan get_plan(int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& holder = plan_cache()[{n, sign}];
    if (!holder.plan) {
        // Plan on scratch buffers; execution uses the new-array interface on
        // fftw_malloc'd buffers with matching alignment. FFTW_ESTIMATE keeps
        // the plan choice independent of runtime timing.
        fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
        holder.plan = fftw_plan_dft_2d(n, n, scratch, scratch, sign, FFTW_ESTIMATE);
        fftw_free(scratch);
    }
    return holder.plan;
}

}  // namespace

void dft2d(std::vector<std::complex<double>>& data, int n, int sign) {
    fftw_plan plan = get_plan(n, sign);
    const std::size_t count = static_cast<std::size_t>(n) * n;
    fftw_complex* buf = fftw_alloc_complex(count);
    std::memcpy(buf, data.data(), count * sizeof(fftw_complex));
    fftw_execute_dft(plan, buf, buf);
    std::memcpy(data.data(), buf, count * sizeof(fftw_complex));
    fftw_free(buf);
}

}  // namespace pumpshape::detail
