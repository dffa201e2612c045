#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rblab/linalg.hpp"

namespace rblab {

struct PoleSet {
  std::vector<cplx> poles;
  std::vector<cplx> coefficients;  // optional, same length as poles when present
};

// Sorts poles by (-|z|, -Re z, -Im z) and permutes coefficients alongside.
void sort_poles(PoleSet& set);

// y_m = sum_i a_i z_i^m for m = 0..M (real part).
RVec synthesize_signal(const PoleSet& set, int M);

// (L+1) x (M-L+1) matrix H(j, k) = y(j + k); requires 1 <= L < M where M = y.size() - 1.
RMat hankel(const RVec& y, int L);

// ESPRIT in double precision: signal subspace from the SVD of hankel(y, L),
// Psi = argmin ||U_up Psi - U_down||, poles = eig(Psi). Throws DomainError when
// the numerical rank (relative 1e-13) of the Hankel matrix is below n.
PoleSet esprit(const RVec& y, int L, int n);
// ESPRIT on exact data: the signal of `truth` is synthesized and processed at
// roughly 50 significant digits, then poles are rounded back to double.
PoleSet esprit_exact(const PoleSet& truth, int M, int L, int n);
// Least-squares amplitudes a with y_m ~ sum_i a_i z_i^m, m = 0..y.size()-1.
std::vector<cplx> fit_coefficients(const RVec& y, const std::vector<cplx>& z);

// R^-1(z) = ||W_L(z)|| / ||P_noise W_L(z)|| with W_L(z) = (1, z, ..., z^L); capped at 1e12.
std::vector<double> music_spectrum(const RVec& y, int L, int n, const std::vector<cplx>& grid);

// n x M matrix with rows (1, z_i, ..., z_i^(M-1)).
CMat vandermonde(const std::vector<cplx>& z, int M);
double cond2(const std::vector<cplx>& z, int M);
// sqrt(kappa_2(C)) with C_ij = 1 / (1 - z_i conj(z_j)); requires |z_i| < 1.
double asymptotic_cond(const std::vector<cplx>& z);

// Symmetric Hausdorff distance between two finite point sets.
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

// ceil(4 max{M var / eps^2, 2 / (3 eps)} log(M / delta)).
long long bernstein_samples(int M, double var_bound, double eps, double delta);
// max of 8 kappa^4 zhat^-2 M var / eps^2 log(M/delta) and
// (16/3) kappa^2 zhat^-1 / eps log(M/delta), kappa = cond2(z, M/2), ceil-ed.
long long sampling_complexity(const std::vector<cplx>& z, int M, double var_bound, double eps, double delta);

// "lin<alpha>": z_k = alpha + (1 - alpha) k / n;  "F<a>": z_k = 1 - 10^(-(a + k)/a),  k = 0..n-1.
PoleSet pole_family(const std::string& name, int n);

// Binomial shot noise: y_hat(m) = Binomial(N, y(m)) / N.
RVec binomial_sample(const RVec& y, long long shots, std::uint64_t seed);

// Square L x L Hankel (L = M/2) of y_1..y_{2L-1}; fraction of trials with
// ||Hankel(y_hat) - Hankel(y)||_2 <= eps under binomial noise with N shots.
double empirical_hankel_deviation(const RVec& y, long long shots, double eps, int trials, std::uint64_t seed);

// Greedy clustering of poles within `radius`; returns cluster centres with
// multiplicities as coefficients (heuristic for degenerate poles).
PoleSet group_degenerate(const PoleSet& set, double radius);

}  // namespace rblab
