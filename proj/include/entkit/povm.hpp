#pragma once

// Measurements: validated POVMs with class tags, one-way LOCC structure,
// measurement channels and the measured quantities built on them, plus the
// U⊗Ū twirl and the isotropic two-outcome measurements.

#include <cstdint>
#include <string>
#include <vector>

#include "entkit/entropy.hpp"
#include "entkit/matqi.hpp"

namespace entkit {

enum class MeasurementClass { LO, OneWayLocc, Generic, PPT };

std::string to_string(MeasurementClass c);
MeasurementClass measurement_class_from_string(const std::string& s);

// LO measurements are one-way LOCC measurements with no communication used.
inline bool is_one_way_locc(MeasurementClass c) {
  return c == MeasurementClass::LO || c == MeasurementClass::OneWayLocc;
}

class Povm {
 public:
  // Throws InvariantError unless every element is PSD within tol::psd and
  // the elements sum to the identity within 1e-10.
  Povm(Dims dims, std::vector<CMatrix> elements, MeasurementClass tag,
       std::vector<std::string> labels = {});

  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(total_dim(dims_)); }
  const std::vector<CMatrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  MeasurementClass tag() const { return tag_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  Dims dims_;
  std::vector<CMatrix> elements_;
  MeasurementClass tag_;
  std::vector<std::string> labels_;
};

// Alice measures {R_k}; on outcome k Bob measures {S_{k,l}}_l.
class OneWayLoccPovm {
 public:
  OneWayLoccPovm(int dim_a, int dim_b, std::vector<CMatrix> alice,
                 std::vector<std::vector<CMatrix>> bob);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<CMatrix>& alice() const { return alice_; }
  const std::vector<std::vector<CMatrix>>& bob() const { return bob_; }

  // Number of (k, l) outcome pairs.
  std::size_t alphabet_size() const;

 private:
  int dim_a_;
  int dim_b_;
  std::vector<CMatrix> alice_;
  std::vector<std::vector<CMatrix>> bob_;
};

// Elements {R_k ⊗ S_{k,l}} in (k, l) lexicographic order, tagged ONE_LOCC.
Povm onelocc_to_povm(const OneWayLoccPovm& m);

// Random instance: each local POVM is X_i†X_i renormalized by the inverse
// square root of the sum, with X_i complex Gaussian.
OneWayLoccPovm random_onelocc_povm(int dim_a, int dim_b, int k_outcomes, int l_outcomes,
                                   std::uint64_t seed);

// Rank-one projective measurement in the computational basis of `dims`.
Povm computational_basis_povm(const Dims& dims);

// Alice and Bob both measure in their computational basis.
OneWayLoccPovm product_basis_onelocc(int dim_a, int dim_b);

ProbDist apply_povm(const Povm& m, const DensityMatrix& rho);
std::vector<double> outcome_probabilities(const Povm& m, const CMatrix& rho);

ExtendedReal measured_rel_entropy(const Povm& m, const DensityMatrix& rho,
                                  const DensityMatrix& sigma);

// Largest ℓ₁ distance between induced outcome distributions over a finite
// family: a lower bound on the class-restricted distance.
double measured_distance(const std::vector<Povm>& family, const DensityMatrix& rho,
                         const DensityMatrix& sigma);

// Exact projection onto span{Φ_d, 1 − Φ_d}.
CMatrix uu_bar_twirl(const CMatrix& x, int d);

// αΦ_d + β(1 − Φ_d).
CMatrix isotropic_operator(int d, double alpha, double beta);

// {αΦ + β(1−Φ), (1−α)Φ + (1−β)(1−Φ)} as a two-outcome POVM.
Povm isotropic_two_outcome(int d, double alpha, double beta);

// The PPT-optimal measurement for Φ_d against separable isotropic states:
// M₀ = Φ + (1−Φ)/(d+1), M₁ = d(1−Φ)/(d+1).
Povm iso_two_outcome_povm(int d);

// Computational product-basis measurement preceded by the U⊗Ū twirl,
// written as the single POVM of twirled basis projectors. Realizable with
// one-way communication: Alice samples U, measures in the rotated basis and
// sends U with her outcome to Bob.
Povm twirl_basis_povm(int d);

// True when every element has a partial transpose that is PSD within tol::psd.
bool is_ppt_povm(const Povm& m);

}  // namespace entkit
