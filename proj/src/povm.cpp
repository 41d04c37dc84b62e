#include "entkit/povm.hpp"

#include <algorithm>
#include <cmath>

namespace entkit {
namespace {

constexpr double kCompleteness = 1e-10;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_local_povm(const std::vector<CMatrix>& elems, int d, const std::string& who,
                      std::vector<std::string>& failed) {
  if (elems.empty()) {
    failed.push_back(who + " nonempty");
    return;
  }
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : elems) {
    if (e.rows() != d || e.cols() != d) {
      failed.push_back(who + " shape");
      return;
    }
    if (!is_hermitian(e, tol::herm)) {
      failed.push_back(who + " hermitian");
      return;
    }
    if (herm_eig(e).values.minCoeff() < -tol::psd) {
      failed.push_back(who + " psd");
      return;
    }
    sum += e;
  }
  if (max_abs(sum - CMatrix::Identity(d, d)) > kCompleteness) failed.push_back(who + " completeness");
}

// {X_i†X_i} renormalized to sum to the identity.
std::vector<CMatrix> random_local_povm(int d, int outcomes, Rng& rng) {
  std::vector<CMatrix> raw;
  CMatrix sum = CMatrix::Zero(d, d);
  for (int i = 0; i < outcomes; ++i) {
    const CMatrix x = gaussian_matrix(d, d, rng);
    raw.push_back(x.adjoint() * x);
    sum += raw.back();
  }
  const CMatrix inv_sqrt = apply_spectral(sum, [](double v) { return 1.0 / std::sqrt(v); });
  for (auto& m : raw) {
    m = inv_sqrt * m * inv_sqrt;
    m = 0.5 * (m + m.adjoint());
  }
  // Absorb residual rounding into the last element so completeness is exact
  // to working precision.
  CMatrix total = CMatrix::Zero(d, d);
  for (const auto& m : raw) total += m;
  raw.back() += CMatrix::Identity(d, d) - total;
  return raw;
}

}  // namespace

std::string to_string(MeasurementClass c) {
  switch (c) {
    case MeasurementClass::LO: return "LO";
    case MeasurementClass::OneWayLocc: return "ONE_LOCC";
    case MeasurementClass::Generic: return "GENERIC";
    case MeasurementClass::PPT: return "PPT";
  }
  return "GENERIC";
}

MeasurementClass measurement_class_from_string(const std::string& s) {
  if (s == "LO") return MeasurementClass::LO;
  if (s == "ONE_LOCC") return MeasurementClass::OneWayLocc;
  if (s == "GENERIC") return MeasurementClass::Generic;
  if (s == "PPT") return MeasurementClass::PPT;
  throw ParseError("unknown measurement class '" + s + "'");
}

Povm::Povm(Dims dims, std::vector<CMatrix> elements, MeasurementClass tag,
           std::vector<std::string> labels)
    : dims_(std::move(dims)), elements_(std::move(elements)), tag_(tag),
      labels_(std::move(labels)) {
  std::vector<std::string> failed;
  if (!labels_.empty() && labels_.size() != elements_.size()) failed.push_back("labels");
  check_local_povm(elements_, static_cast<int>(total_dim(dims_)), "povm", failed);
  if (!failed.empty()) throw InvariantError(std::move(failed));
}

OneWayLoccPovm::OneWayLoccPovm(int dim_a, int dim_b, std::vector<CMatrix> alice,
                               std::vector<std::vector<CMatrix>> bob)
    : dim_a_(dim_a), dim_b_(dim_b), alice_(std::move(alice)), bob_(std::move(bob)) {
  std::vector<std::string> failed;
  if (dim_a_ < 1 || dim_b_ < 1) failed.push_back("dims");
  check_local_povm(alice_, dim_a_, "alice", failed);
  if (bob_.size() != alice_.size()) {
    failed.push_back("bob count");
  } else {
    for (const auto& sk : bob_) check_local_povm(sk, dim_b_, "bob", failed);
  }
  if (!failed.empty()) throw InvariantError(std::move(failed));
}

std::size_t OneWayLoccPovm::alphabet_size() const {
  std::size_t n = 0;
  for (const auto& sk : bob_) n += sk.size();
  return n;
}

Povm onelocc_to_povm(const OneWayLoccPovm& m) {
  std::vector<CMatrix> elems;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m.alice().size(); ++k) {
    for (std::size_t l = 0; l < m.bob()[k].size(); ++l) {
      elems.push_back(kron(m.alice()[k], m.bob()[k][l]));
      labels.push_back(std::to_string(k) + "," + std::to_string(l));
    }
  }
  return Povm({m.dim_a(), m.dim_b()}, std::move(elems), MeasurementClass::OneWayLocc,
              std::move(labels));
}

OneWayLoccPovm random_onelocc_povm(int dim_a, int dim_b, int k_outcomes, int l_outcomes,
                                   std::uint64_t seed) {
  if (k_outcomes < 1 || l_outcomes < 1) throw DomainError("random_onelocc_povm: counts must be >= 1");
  Rng rng(seed);
  auto alice = random_local_povm(dim_a, k_outcomes, rng);
  std::vector<std::vector<CMatrix>> bob;
  for (int k = 0; k < k_outcomes; ++k) bob.push_back(random_local_povm(dim_b, l_outcomes, rng));
  return OneWayLoccPovm(dim_a, dim_b, std::move(alice), std::move(bob));
}

namespace {

std::vector<CMatrix> basis_projectors(int d) {
  std::vector<CMatrix> out;
  for (int i = 0; i < d; ++i) {
    CMatrix p = CMatrix::Zero(d, d);
    p(i, i) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

Povm computational_basis_povm(const Dims& dims) {
  const int n = static_cast<int>(total_dim(dims));
  return Povm(dims, basis_projectors(n),
              dims.size() >= 2 ? MeasurementClass::LO : MeasurementClass::Generic);
}

OneWayLoccPovm product_basis_onelocc(int dim_a, int dim_b) {
  std::vector<std::vector<CMatrix>> bob(dim_a, basis_projectors(dim_b));
  return OneWayLoccPovm(dim_a, dim_b, basis_projectors(dim_a), std::move(bob));
}

std::vector<double> outcome_probabilities(const Povm& m, const CMatrix& rho) {
  if (rho.rows() != m.dim() || rho.cols() != m.dim()) {
    throw ShapeError("apply_povm: state and POVM dimensions differ");
  }
  std::vector<double> probs;
  probs.reserve(m.size());
  for (const auto& e : m.elements()) {
    // tr(ρ M) without forming the product.
    const double p = (rho.transpose().cwiseProduct(e)).sum().real();
    probs.push_back(p < 0.0 && p >= -tol::psd ? 0.0 : p);
  }
  return probs;
}

ProbDist apply_povm(const Povm& m, const DensityMatrix& rho) {
  return ProbDist(outcome_probabilities(m, rho.matrix()), m.labels());
}

ExtendedReal measured_rel_entropy(const Povm& m, const DensityMatrix& rho,
                                  const DensityMatrix& sigma) {
  return classical_rel_entropy(apply_povm(m, rho), apply_povm(m, sigma));
}

double measured_distance(const std::vector<Povm>& family, const DensityMatrix& rho,
                         const DensityMatrix& sigma) {
  if (family.empty()) throw DomainError("measured_distance: empty measurement family");
  double best = 0.0;
  for (const auto& m : family) {
    const auto p = outcome_probabilities(m, rho.matrix());
    const auto q = outcome_probabilities(m, sigma.matrix());
    best = std::max(best, l1_distance(p, q));
  }
  return best;
}

CMatrix uu_bar_twirl(const CMatrix& x, int d) {
  if (d < 2 || x.rows() != d * d || x.cols() != d * d) {
    throw ShapeError("uu_bar_twirl: expected a square operator on a d x d bipartite system");
  }
  const CMatrix phi = max_entangled(d).matrix();
  const CMatrix rest = CMatrix::Identity(d * d, d * d) - phi;
  const std::complex<double> f = (x.transpose().cwiseProduct(phi)).sum();
  const std::complex<double> g = x.trace() - f;
  return f * phi + g * rest / (d * d - 1.0);
}

CMatrix isotropic_operator(int d, double alpha, double beta) {
  const CMatrix phi = max_entangled(d).matrix();
  return alpha * phi + beta * (CMatrix::Identity(d * d, d * d) - phi);
}

Povm isotropic_two_outcome(int d, double alpha, double beta) {
  return Povm({d, d}, {isotropic_operator(d, alpha, beta), isotropic_operator(d, 1 - alpha, 1 - beta)},
              MeasurementClass::Generic);
}

Povm iso_two_outcome_povm(int d) {
  if (d < 2) throw DomainError("iso_two_outcome_povm: d must be >= 2");
  const double b = 1.0 / (d + 1.0);
  const CMatrix phi = max_entangled(d).matrix();
  const CMatrix rest = CMatrix::Identity(d * d, d * d) - phi;
  // M₁ is taken as the complement so the pair sums to 1 exactly.
  CMatrix m0 = phi + b * rest;
  CMatrix m1 = CMatrix::Identity(d * d, d * d) - m0;
  return Povm({d, d}, {std::move(m0), std::move(m1)}, MeasurementClass::PPT);
}

Povm twirl_basis_povm(int d) {
  if (d < 2) throw DomainError("twirl_basis_povm: d must be >= 2");
  std::vector<CMatrix> elems;
  std::vector<std::string> labels;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      elems.push_back(uu_bar_twirl(product_basis_state({d, d}, {x, y}).matrix(), d));
      labels.push_back(std::to_string(x) + std::to_string(y));
    }
  }
  return Povm({d, d}, std::move(elems), MeasurementClass::OneWayLocc, std::move(labels));
}

bool is_ppt_povm(const Povm& m) {
  if (m.dims().size() < 2) return true;
  for (const auto& e : m.elements()) {
    if (min_pt_eigenvalue(e, m.dims(), static_cast<int>(m.dims().size()) - 1) < -tol::psd) {
      return false;
    }
  }
  return true;
}

}  // namespace entkit
