#include "spnls/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "spnls/error.hpp"
#include "spnls/grid.hpp"

namespace spnls::nt {

long long checked_add(long long a, long long b) {
    long long r;
    require(!__builtin_add_overflow(a, b, &r), ErrorKind::OutOfRange, "integer overflow in addition");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    require(!__builtin_mul_overflow(a, b, &r), ErrorKind::OutOfRange, "integer overflow in multiplication");
    return r;
}

long long divisor_count(long long m, long long Q) {
    require(Q >= 1, ErrorKind::OutOfRange, "Q must be positive");
    if (m == 0) return Q;
    unsigned long long a = m < 0 ? 0ULL - static_cast<unsigned long long>(m) : static_cast<unsigned long long>(m);
    long long c = 0;
    for (unsigned long long d = 1; d <= static_cast<unsigned long long>(Q) && d <= a; ++d)
        if (a % d == 0) ++c;
    return c;
}

long long euler_phi(long long n) {
    require(n >= 1, ErrorKind::OutOfRange, "phi needs n >= 1");
    long long r = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

int mobius(long long n) {
    require(n >= 1, ErrorKind::OutOfRange, "mobius needs n >= 1");
    int s = 1;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        s = -s;
    }
    if (n > 1) s = -s;
    return s;
}

long long ramanujan_sum(long long q, long long m) {
    require(q >= 1, ErrorKind::OutOfRange, "ramanujan sum needs q >= 1");
    long long g = m == 0 ? q : std::gcd(q, m);
    long long s = 0;
    for (long long d = 1; d <= g; ++d)
        if (g % d == 0) s = checked_add(s, checked_mul(mobius(q / d), d));
    return s;
}

std::vector<long long> divisor_counts(long long P, long long Q) {
    require(P >= 0 && Q >= 1, ErrorKind::OutOfRange, "divisor_counts needs P >= 0, Q >= 1");
    std::vector<long long> c(static_cast<std::size_t>(P) + 1, 0);
    c[0] = Q;
    for (long long d = 1; d <= Q && d <= P; ++d)
        for (long long m = d; m <= P; m += d) ++c[static_cast<std::size_t>(m)];
    return c;
}

bool dirichlet_valid(const RationalApprox& r, double t, long long N, double slack) {
    if (r.q < 1 || r.q > N || std::gcd(r.a, r.q) != 1) return false;
    double alpha = t / kTwoPi;
    double beta = alpha - static_cast<double>(r.a) / static_cast<double>(r.q);
    double bound = 1.0 / (static_cast<double>(N) * static_cast<double>(r.q));
    return std::fabs(beta) <= bound * (1.0 + slack) + 1e-15 * std::max(1.0, std::fabs(alpha));
}

RationalApprox dirichlet_approx(double t, long long N) {
    require(N >= 1, ErrorKind::OutOfRange, "dirichlet_approx needs N >= 1");
    require(std::isfinite(t), ErrorKind::OutOfRange, "t must be finite");
    long double alpha = static_cast<long double>(t) / static_cast<long double>(kTwoPi);
    long double fl = std::floor(alpha);
    require(std::fabs(fl) < 9e18L, ErrorKind::OutOfRange, "t/2π too large");
    long long p0 = 1, q0 = 0;
    long long p1 = static_cast<long long>(fl), q1 = 1;
    long double x = alpha - fl;
    for (int it = 0; it < 64 && x > 1e-18L; ++it) {
        long double y = 1.0L / x;
        long double ai = std::floor(y);
        if (ai > static_cast<long double>(N)) break;
        long long a = static_cast<long long>(ai);
        long long q2 = checked_add(checked_mul(a, q1), q0);
        if (q2 > N) break;
        long long p2 = checked_add(checked_mul(a, p1), p0);
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        x = y - ai;
    }
    RationalApprox r{p1, q1, static_cast<double>(alpha - static_cast<long double>(p1) / static_cast<long double>(q1))};
    if (dirichlet_valid(r, t, N)) return r;
    for (long long q = 1; q <= N; ++q) {
        long long a = std::llround(static_cast<double>(alpha * q));
        RationalApprox c{a, q, static_cast<double>(alpha - static_cast<long double>(a) / q)};
        if (dirichlet_valid(c, t, N)) return c;
    }
    fail(ErrorKind::NumericalAbort, "no rational approximation found for t=" + std::to_string(t));
}

}  // namespace spnls::nt
