#pragma once

// Frank-Wolfe minimization of convex functionals over the bipartite
// separable set. Iterates are stored as explicit convex combinations of pure
// product states, so separability of every iterate holds by construction.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entkit/matqi.hpp"
#include "entkit/povm.hpp"

namespace entkit {

struct ProductVertex {
  CVector a;
  CVector b;

  CMatrix projector() const;
};

class SepPoint {
 public:
  SepPoint(int dim_a, int dim_b) : dim_a_(dim_a), dim_b_(dim_b) {}

  // Uniform mixture of computational product basis states, i.e. 1/(dA dB).
  static SepPoint maximally_mixed(int dim_a, int dim_b);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<ProductVertex>& factors() const { return factors_; }

  void add(double weight, ProductVertex v);
  std::vector<double>& mutable_weights() { return weights_; }
  void drop_zero_weights(double threshold = 0.0);

  CMatrix assemble() const;
  DensityMatrix state() const;

 private:
  int dim_a_;
  int dim_b_;
  std::vector<double> weights_;
  std::vector<ProductVertex> factors_;
};

// A convex objective on operators of the joint space.
class SepObjective {
 public:
  virtual ~SepObjective() = default;
  virtual double value(const CMatrix& sigma) const = 0;
  virtual CMatrix gradient(const CMatrix& sigma) const = 0;
  // Flags the objective raised while evaluating (e.g. "q_floor").
  virtual std::vector<std::string> flags() const { return {}; }
};

struct LmoResult {
  CVector a;
  CVector b;
  double value = 0.0;
};

// Approximate min over unit a, b of <a⊗b| g |a⊗b> by alternating smallest
// eigenvector updates, best of `restarts` seeded random starts (ties go to
// the lowest restart index). Each vertex in `warm` adds one extra
// deterministic start.
LmoResult lmo_product(const CMatrix& g, int dim_a, int dim_b, int restarts, std::uint64_t seed,
                      std::span<const ProductVertex> warm = {});

struct FwOptions {
  double tol_gap = 1e-4;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  int lmo_restarts = 20;
  int line_search_iters = 40;
  // Pairwise steps shift weight from the worst active vertex to the oracle
  // vertex instead of shrinking every weight.
  bool pairwise_steps = true;
};

struct FwTraceEntry {
  int iteration;
  double value;
  double gap;
};

struct FwResult {
  double value = 0.0;
  SepPoint sigma{1, 1};
  // value − (best certified lower bound); the minimum lies in
  // [value − duality_gap, value] whenever every LMO call was exact.
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> flags;
  std::vector<FwTraceEntry> trace;

  double lower_bound() const { return value - duality_gap; }
};

FwResult frank_wolfe(const SepObjective& objective, int dim_a, int dim_b, const FwOptions& opts,
                     SepPoint start);

// Fréchet derivative of the matrix natural log at full-rank σ applied to X,
// via the divided-difference kernel in σ's eigenbasis.
CMatrix log_derivative(const CMatrix& sigma, const CMatrix& x);

// Gradient of σ ↦ D(ρ‖σ) (bits) at full-rank σ.
CMatrix ree_gradient(const CMatrix& rho, const CMatrix& sigma);

// min over separable σ of D(ρ‖σ).
FwResult fw_ree(const DensityMatrix& rho, const FwOptions& opts = {});

// min over separable σ of D(M(ρ)‖M(σ)) for a fixed POVM.
FwResult fw_measured_ree(const Povm& m, const DensityMatrix& rho, const FwOptions& opts = {});

struct OneLoccBound {
  double bound = 0.0;            // max over the family of FW values
  double slack = 0.0;            // sum of FW duality gaps
  double certified_lower = 0.0;  // max over the family of (value − gap)
  std::size_t best_m = 0;
  std::vector<FwResult> per_measurement;
};

// Family-based lower bound on the one-way-LOCC measured relative entropy of
// entanglement. Every member must be tagged LO or ONE_LOCC.
OneLoccBound onelocc_ree_lower_bound(const DensityMatrix& rho, const std::vector<Povm>& family,
                                     const FwOptions& opts = {});

// min over σ in x·SEP + (1−x)·τ of D(ρ‖σ). The returned sigma is the mixed
// point itself.
FwResult mixed_set_ree(const DensityMatrix& rho, double x, const FwOptions& opts = {});

}  // namespace entkit
