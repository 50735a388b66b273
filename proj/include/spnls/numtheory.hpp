#pragma once

#include <cstdint>
#include <vector>

// Exact 64-bit integer arithmetic for the circle-method checks.
namespace spnls::nt {

// Overflow-checked operations; throw Error(OutOfRange) on overflow.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

// #{d ≤ Q : d | m}; d(0, Q) = Q.
long long divisor_count(long long m, long long Q);

long long euler_phi(long long n);
int mobius(long long n);

// c_q(m) = Σ_{a ∈ Z_q, (a,q)=1} e^{−2πima/q}, an integer.
long long ramanujan_sum(long long q, long long m);

// Divisor counts d(m, Q) for m = 0..P by sieving.
std::vector<long long> divisor_counts(long long P, long long Q);

struct RationalApprox {
    long long a = 0;
    long long q = 1;
    double beta = 0.0;  // t/2π − a/q
};

// Coprime a/q with q ≤ N and |t/2π − a/q| ≤ 1/(Nq), from continued-fraction convergents
// (brute force over q ≤ N if rounding spoils the convergent bound).
RationalApprox dirichlet_approx(double t, long long N);

// True when r satisfies the three invariants for (t, N).
bool dirichlet_valid(const RationalApprox& r, double t, long long N, double slack = 1e-12);

}  // namespace spnls::nt
