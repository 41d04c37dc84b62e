#include "entkit/matqi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace entkit {
namespace {

void check_cap(std::size_t side) {
  if (side > kDimensionCap) {
    std::ostringstream msg;
    msg << "matrix side " << side << " exceeds dimension cap " << kDimensionCap;
    throw DimensionCapError(msg.str());
  }
}

void check_dims(const Dims& dims) {
  if (dims.empty()) throw ShapeError("empty subsystem list");
  for (int d : dims) {
    if (d < 1) throw ShapeError("subsystem dimension must be positive");
  }
}

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = s;
    s *= static_cast<std::size_t>(dims[k]);
  }
  return strides;
}

// Offsets of every multi-index over the subsystems in `parties`.
std::vector<std::size_t> offsets_over(const Dims& dims, const std::vector<std::size_t>& strides,
                                      const std::vector<int>& parties) {
  std::vector<std::size_t> offsets{0};
  for (int p : parties) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[p]);
    for (std::size_t base : offsets) {
      for (int i = 0; i < dims[p]; ++i) next.push_back(base + i * strides[p]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

std::size_t total_dim(const Dims& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::string> state_invariant_failures(const Dims& dims, const CMatrix& mat) {
  std::vector<std::string> failed;
  if (mat.rows() != mat.cols()) {
    failed.push_back("square");
    return failed;
  }
  if (dims.empty() || static_cast<std::size_t>(mat.rows()) != total_dim(dims)) {
    failed.push_back("dims");
    return failed;
  }
  if (!mat.allFinite()) {
    failed.push_back("finite");
    return failed;
  }
  if (!is_hermitian(mat, tol::herm)) {
    failed.push_back("hermitian");
    return failed;
  }
  if (std::abs(mat.trace().real() - 1.0) > tol::trace) failed.push_back("trace");
  const CMatrix h = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd) failed.push_back("psd");
  return failed;
}

DensityMatrix::DensityMatrix(Dims dims, CMatrix mat) {
  auto failed = state_invariant_failures(dims, mat);
  if (!failed.empty()) throw InvariantError(std::move(failed));
  dims_ = std::move(dims);
  mat_ = std::move(mat);
}

DensityMatrix DensityMatrix::unchecked(Dims dims, CMatrix mat) {
  DensityMatrix out;
  out.dims_ = std::move(dims);
  out.mat_ = std::move(mat);
  return out;
}

DensityMatrix PureState::density() const { return from_pure(dims, amplitudes); }

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

HermEig herm_eig(const CMatrix& m) {
  if (!is_hermitian(m, tol::herm)) throw SymmetryError("herm_eig: input is not Hermitian");
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
  const Eigen::Index n = h.rows();
  HermEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  if (n == 0) out.vectors.resize(0, 0);
  return out;
}

CMatrix sqrt_psd(const CMatrix& m) {
  return apply_spectral(m, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

double trace_norm(const CMatrix& hermitian) {
  return herm_eig(hermitian).values.cwiseAbs().sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  check_cap(static_cast<std::size_t>(a.rows() * b.rows()));
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::unchecked(std::move(dims), kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n) {
  if (n < 1) throw DomainError("tensor_power: n must be >= 1");
  DensityMatrix out = rho;
  for (int i = 1; i < n; ++i) out = tensor(out, rho);
  return out;
}

CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::vector<int> keep) {
  check_dims(dims);
  if (static_cast<std::size_t>(m.rows()) != total_dim(dims) || m.rows() != m.cols()) {
    throw ShapeError("partial_trace: matrix side does not match dims");
  }
  if (keep.empty()) throw ShapeError("partial_trace: empty keep set would leave a scalar trace");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw ShapeError("partial_trace: duplicate subsystem index");
  }
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  if (keep.front() < 0 || keep.back() >= static_cast<int>(dims.size())) {
    throw ShapeError("partial_trace: subsystem index out of range");
  }
  const auto strides = strides_of(dims);
  const auto keep_off = offsets_over(dims, strides, keep);
  const auto trace_off = offsets_over(dims, strides, traced);
  const auto n = static_cast<Eigen::Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      std::complex<double> acc = 0.0;
      for (std::size_t t : trace_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  CMatrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::sort(keep.begin(), keep.end());
  Dims dims;
  for (int k : keep) dims.push_back(rho.dims()[k]);
  return DensityMatrix::unchecked(std::move(dims), std::move(reduced));
}

CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, const std::vector<int>& order) {
  check_dims(dims);
  if (static_cast<std::size_t>(m.rows()) != total_dim(dims) || m.rows() != m.cols()) {
    throw ShapeError("permute_subsystems: matrix side does not match dims");
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(dims.size());
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) throw ShapeError("permute_subsystems: order is not a permutation");
  const auto off = offsets_over(dims, strides_of(dims), order);
  const auto n = static_cast<Eigen::Index>(off.size());
  CMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(off[r], off[c]);
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& m, const Dims& dims, int party) {
  check_dims(dims);
  if (party < 0 || party >= static_cast<int>(dims.size())) {
    throw ShapeError("partial_transpose: party index out of range");
  }
  if (static_cast<std::size_t>(m.rows()) != total_dim(dims) || m.rows() != m.cols()) {
    throw ShapeError("partial_transpose: matrix side does not match dims");
  }
  const auto strides = strides_of(dims);
  const auto stride = static_cast<Eigen::Index>(strides[party]);
  const Eigen::Index dp = dims[party];
  const Eigen::Index n = m.rows();
  CMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index rd = (r / stride) % dp;
    for (Eigen::Index c = 0; c < n; ++c) {
      const Eigen::Index cd = (c / stride) % dp;
      out(r, c) = m(r + (cd - rd) * stride, c + (rd - cd) * stride);
    }
  }
  return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, int party) {
  return partial_transpose(rho.matrix(), rho.dims(), party);
}

double min_pt_eigenvalue(const CMatrix& m, const Dims& dims, int party) {
  return herm_eig(partial_transpose(m, dims, party)).values.minCoeff();
}

DensityMatrix maximally_mixed(const Dims& dims) {
  check_dims(dims);
  const std::size_t n = total_dim(dims);
  check_cap(n);
  const auto side = static_cast<Eigen::Index>(n);
  return DensityMatrix::unchecked(dims, CMatrix::Identity(side, side) / static_cast<double>(n));
}

DensityMatrix max_entangled(int d) {
  if (d < 2) throw DomainError("max_entangled: d must be >= 2");
  CVector psi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return from_pure({d, d}, psi);
}

DensityMatrix isotropic(int d, double p) {
  if (d < 2) throw DomainError("isotropic: d must be >= 2");
  const double lo = -1.0 / (d * d - 1.0);
  if (!(p >= lo - 1e-15 && p <= 1.0 + 1e-15)) {
    throw DomainError("isotropic: p outside [-1/(d^2-1), 1]");
  }
  const int n = d * d;
  CMatrix m = p * max_entangled(d).matrix();
  m.diagonal().array() += (1.0 - p) / n;
  return DensityMatrix::unchecked({d, d}, std::move(m));
}

DensityMatrix product_basis_state(const Dims& dims, const std::vector<int>& digits) {
  check_dims(dims);
  if (digits.size() != dims.size()) throw ShapeError("product_basis_state: digit count mismatch");
  const auto strides = strides_of(dims);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= dims[k]) throw DomainError("basis digit out of range");
    idx += digits[k] * strides[k];
  }
  const auto n = static_cast<Eigen::Index>(total_dim(dims));
  CMatrix m = CMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
  return DensityMatrix::unchecked(dims, std::move(m));
}

DensityMatrix from_pure(const Dims& dims, const CVector& psi) {
  check_dims(dims);
  if (static_cast<std::size_t>(psi.size()) != total_dim(dims)) {
    throw ShapeError("from_pure: amplitude count does not match dims");
  }
  const CVector v = psi / psi.norm();
  return DensityMatrix::unchecked(dims, v * v.adjoint());
}

DensityMatrix mix(double w, const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims()) throw ShapeError("mix: dims differ");
  if (w < 0.0 || w > 1.0) throw DomainError("mix: weight outside [0,1]");
  return DensityMatrix::unchecked(a.dims(), w * a.matrix() + (1.0 - w) * b.matrix());
}

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = {re, im};
    }
  }
  return g;
}

CVector random_unit_vector(int d, Rng& rng) {
  CVector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density(const Dims& dims, int rank, Rng& rng) {
  check_dims(dims);
  const std::size_t n = total_dim(dims);
  check_cap(n);
  if (rank < 1 || static_cast<std::size_t>(rank) > n) {
    throw DomainError("random_density: rank must lie in [1, total dimension]");
  }
  const CMatrix g = gaussian_matrix(static_cast<int>(n), rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix::unchecked(dims, std::move(m));
}

DensityMatrix random_density(const Dims& dims, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dims, rank, rng);
}

PureState random_pure(const Dims& dims, Rng& rng) {
  check_dims(dims);
  return PureState{dims, random_unit_vector(static_cast<int>(total_dim(dims)), rng)};
}

CMatrix random_unitary(int d, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

PureState purify(const DensityMatrix& rho) {
  const HermEig e = herm_eig(rho.matrix());
  const double cutoff = 1e-12 * std::max(e.values(0), 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cutoff) ++rank;
  }
  rank = std::max(rank, 1);
  const Eigen::Index n = rho.dim();
  CVector psi = CVector::Zero(n * rank);
  for (int i = 0; i < rank; ++i) {
    const double w = std::sqrt(std::max(e.values(i), 0.0));
    for (Eigen::Index s = 0; s < n; ++s) psi(s * rank + i) = w * e.vectors(s, i);
  }
  psi /= psi.norm();
  Dims dims = rho.dims();
  dims.push_back(rank);
  return PureState{std::move(dims), std::move(psi)};
}

}  // namespace entkit
