#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rblab {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an input violates a documented precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when an iterative numerical routine fails to reach its target.
class NumericError : public Error {
 public:
  using Error::Error;
};

CMat kron(const CMat& a, const CMat& b);
RMat kron(const RMat& a, const RMat& b);

// Column-stacking vectorization: vec(A)[i + j*rows] = A(i, j).
CVec vec(const CMat& a);
CMat unvec(const CVec& v, Eigen::Index rows);

// Trace over the first factor of a (da*db)x(da*db) matrix.
CMat partial_trace_first(const CMat& m, Eigen::Index da, Eigen::Index db);
// Trace over the second factor of a (da*db)x(da*db) matrix.
CMat partial_trace_second(const CMat& m, Eigen::Index da, Eigen::Index db);

double spectral_norm(const CMat& m);
double trace_norm(const CMat& m);
double min_singular_value(const CMat& m);
double condition_number(const CMat& m);
double min_hermitian_eigenvalue(const CMat& m);

// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
CMat haar_unitary(int d, std::mt19937_64& rng);
// Haar-random unit vector.
CVec haar_state(int d, std::mt19937_64& rng);
// Random d x d complex Gaussian matrix with unit-variance entries.
CMat ginibre(int rows, int cols, std::mt19937_64& rng);

// Projective phase normalization: the first entry (column-major) with modulus
// above 1e-6 is rotated onto the positive real axis.
CMat canonical_phase(const CMat& u);

}  // namespace rblab
