#pragma once

#include <cmath>
#include <random>

#include "spnls/grid.hpp"
#include "spnls/norms.hpp"

namespace testing_support {

using namespace spnls;

inline cvec random_values(std::size_t n, unsigned seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, scale);
    cvec v(n);
    for (auto& z : v) z = cplx(nd(rng), nd(rng));
    return v;
}

inline Field random_field(const GridSpec& spec, unsigned seed) { return Field(spec, random_values(spec.size(), seed)); }

inline Field sub(const Field& a, const Field& b) {
    cvec d = a.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return Field(a.spec(), std::move(d));
}

inline Field scaled(const Field& a, cplx c) {
    cvec d = a.values();
    for (auto& z : d) z *= c;
    return Field(a.spec(), std::move(d));
}

inline double max_abs_diff(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const cvec& a) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

inline double rel_l2(const Field& a, const Field& b) { return norms::l2_norm(sub(a, b)) / norms::l2_norm(b); }

}  // namespace testing_support
