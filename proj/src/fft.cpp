#include "spnls/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "spnls/error.hpp"

namespace spnls::fft {
namespace {

struct Key {
    std::vector<int> dims;
    int axis;
    int sign;
    bool operator<(const Key& o) const {
        if (dims != o.dims) return dims < o.dims;
        if (axis != o.axis) return axis < o.axis;
        return sign < o.sign;
    }
};

struct PlanCache {
    std::mutex mu;
    std::map<Key, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [k, p] : plans) fftw_destroy_plan(p);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

std::size_t total(std::span<const int> dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

fftw_plan get_plan(std::span<const int> dims, int axis, int sign) {
    Key key{std::vector<int>(dims.begin(), dims.end()), axis, sign};
    PlanCache& c = cache();
    std::lock_guard<std::mutex> lk(c.mu);
    auto it = c.plans.find(key);
    if (it != c.plans.end()) return it->second;

    std::size_t n = total(dims);
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!scratch) throw std::bad_alloc();
    fftw_plan p = nullptr;
    if (axis < 0) {
        p = fftw_plan_dft(static_cast<int>(dims.size()), key.dims.data(), scratch, scratch, sign, FFTW_ESTIMATE);
    } else {
        std::ptrdiff_t outer = 1, inner = 1;
        for (int a = 0; a < axis; ++a) outer *= dims[a];
        for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
        fftw_iodim64 d{dims[axis], inner, inner};
        fftw_iodim64 how[2] = {{outer, dims[axis] * inner, dims[axis] * inner}, {inner, 1, 1}};
        p = fftw_plan_guru64_dft(1, &d, 2, how, scratch, scratch, sign, FFTW_ESTIMATE);
    }
    fftw_free(scratch);
    require(p != nullptr, ErrorKind::InvariantViolation, "FFT planning failed");
    c.plans.emplace(std::move(key), p);
    return p;
}

void run(fftw_plan p, cplx* data, std::size_t n) {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    if (fftw_alignment_of(reinterpret_cast<double*>(data)) == 0) {
        fftw_execute_dft(p, d, d);
        return;
    }
    cvec tmp(data, data + n);
    auto* t = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_execute_dft(p, t, t);
    std::memcpy(data, tmp.data(), n * sizeof(cplx));
}

}  // namespace

void transform(cplx* data, std::span<const int> dims, Direction dir) {
    run(get_plan(dims, -1, dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD), data, total(dims));
}

void transform_axis(cplx* data, std::span<const int> dims, int axis, Direction dir) {
    require(axis >= 0 && axis < static_cast<int>(dims.size()), ErrorKind::OutOfRange, "axis");
    run(get_plan(dims, axis, dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD), data, total(dims));
}

}  // namespace spnls::fft
