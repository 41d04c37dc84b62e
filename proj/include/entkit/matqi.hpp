#pragma once

// Dense complex-matrix core: states on multipartite systems, tensor algebra,
// partial trace/transpose, Hermitian functional calculus and the canonical
// state families used throughout the toolkit.
//
// Subsystems are always addressed by explicit index lists into `dims`; no
// operation infers a bipartition.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entkit/errors.hpp"

namespace entkit {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Dims = std::vector<int>;
using Rng = std::mt19937_64;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double eig = 1e-10;
}  // namespace tol

// Largest matrix side any constructor will produce.
inline constexpr std::size_t kDimensionCap = 4096;

std::size_t total_dim(const Dims& dims);

// Independent, reproducible child seed for stream `index` of `base`
// (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Names of the state invariants (Hermitian, PSD, unit trace, shape) that
// `mat` violates; empty when it is a valid density matrix on `dims`.
std::vector<std::string> state_invariant_failures(const Dims& dims, const CMatrix& mat);

class DensityMatrix {
 public:
  // Validates every invariant; throws InvariantError naming the failures.
  DensityMatrix(Dims dims, CMatrix mat);

  // For results of operations already known to preserve validity.
  static DensityMatrix unchecked(Dims dims, CMatrix mat);

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  int parties() const { return static_cast<int>(dims_.size()); }

 private:
  DensityMatrix() = default;

  Dims dims_;
  CMatrix mat_;
};

struct PureState {
  Dims dims;
  CVector amplitudes;

  DensityMatrix density() const;
};

struct HermEig {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // columns are eigenvectors, unitary
};

bool is_hermitian(const CMatrix& m, double tolerance = tol::herm);

// Throws SymmetryError for non-Hermitian input.
HermEig herm_eig(const CMatrix& m);

// f applied to the spectrum of a Hermitian matrix.
template <typename F>
CMatrix apply_spectral(const CMatrix& m, F&& f) {
  const HermEig e = herm_eig(m);
  Eigen::VectorXd fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

// Square root of a PSD matrix; slightly negative eigenvalues are zeroed.
CMatrix sqrt_psd(const CMatrix& m);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const CMatrix& hermitian);

CMatrix kron(const CMatrix& a, const CMatrix& b);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor_power(const DensityMatrix& rho, int n);

// Partial trace keeping the subsystems listed in `keep` (any order, no
// duplicates). The result's subsystems appear in ascending index order.
CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

// Reorders subsystems: subsystem j of the result is subsystem order[j] of m.
CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, const std::vector<int>& order);

CMatrix partial_transpose(const CMatrix& m, const Dims& dims, int party);
CMatrix partial_transpose(const DensityMatrix& rho, int party);

// Smallest eigenvalue of the partial transpose on `party`.
double min_pt_eigenvalue(const CMatrix& m, const Dims& dims, int party);

DensityMatrix maximally_mixed(const Dims& dims);
DensityMatrix max_entangled(int d);
DensityMatrix isotropic(int d, double p);

// |i1 i2 ...><i1 i2 ...| in the computational basis.
DensityMatrix product_basis_state(const Dims& dims, const std::vector<int>& digits);

DensityMatrix from_pure(const Dims& dims, const CVector& psi);

// Convex combination w*a + (1-w)*b; dims must agree.
DensityMatrix mix(double w, const DensityMatrix& a, const DensityMatrix& b);

CMatrix gaussian_matrix(int rows, int cols, Rng& rng);
CVector random_unit_vector(int d, Rng& rng);

// Induced-measure sample: G G^dag / tr(G G^dag) with G a d x rank complex
// Gaussian.
DensityMatrix random_density(const Dims& dims, int rank, Rng& rng);
DensityMatrix random_density(const Dims& dims, int rank, std::uint64_t seed);

PureState random_pure(const Dims& dims, Rng& rng);

// Haar-distributed unitary via QR of a Gaussian matrix with phase fixing.
CMatrix random_unitary(int d, Rng& rng);

// Purification on dims + [r], r = rank of rho (at least 1).
PureState purify(const DensityMatrix& rho);

}  // namespace entkit
