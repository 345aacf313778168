#include "paralog/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace paralog {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct CachedPlan {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t size = 0;

    ~CachedPlan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

// Plans are cached per thread and per (shape, direction); FFTW planning is
// not thread safe, execution on the plan's own buffer is.
CachedPlan& plan_for(std::span<const int> shape, int sign) {
    thread_local std::map<std::pair<std::vector<int>, int>, CachedPlan> cache;
    std::vector<int> key_shape(shape.begin(), shape.end());
    auto key = std::make_pair(key_shape, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    CachedPlan& entry = cache[key];
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    entry.size = total;

    std::lock_guard<std::mutex> lock(planner_mutex());
    entry.buf = fftw_alloc_complex(total);
    if (!entry.buf) throw std::bad_alloc();
    // FFTW wants the slowest-varying dimension first; grid order is fastest first.
    std::vector<int> dims(shape.rbegin(), shape.rend());
    entry.plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), entry.buf,
                               entry.buf, sign, FFTW_ESTIMATE);
    if (!entry.plan) throw std::runtime_error("fft: plan creation failed");
    return entry;
}

void run(std::vector<std::complex<double>>& data, std::span<const int> shape, int sign) {
    CachedPlan& p = plan_for(shape, sign);
    if (data.size() != p.size) throw std::invalid_argument("fft: data/shape mismatch");
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    for (std::size_t i = 0; i < p.size; ++i) {
        p.buf[i][0] = raw[i][0];
        p.buf[i][1] = raw[i][1];
    }
    fftw_execute(p.plan);
    for (std::size_t i = 0; i < p.size; ++i) {
        raw[i][0] = p.buf[i][0];
        raw[i][1] = p.buf[i][1];
    }
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data, std::span<const int> shape) {
    run(data, shape, FFTW_FORWARD);
}

void fft_inverse(std::vector<std::complex<double>>& data, std::span<const int> shape) {
    run(data, shape, FFTW_BACKWARD);
    const double norm = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= norm;
}

std::vector<std::complex<double>> fft_of(const GridFunction& f) {
    std::vector<std::complex<double>> data(f.size());
    auto vals = f.values();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = vals[i];
    return data;
}

GridFunction real_part(const GridSpec& spec,
                       const std::vector<std::complex<double>>& data,
                       std::string label, double scale) {
    const double budget = 1e-10 * std::max(1.0, scale);
    std::vector<double> out(data.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        worst = std::max(worst, std::fabs(data[i].imag()));
        out[i] = data[i].real();
    }
    if (worst > budget)
        throw std::runtime_error("real_part: imaginary residue " + std::to_string(worst) +
                                 " exceeds budget in '" + label + "'");
    return GridFunction(spec, std::move(out), std::move(label));
}

}  // namespace paralog
