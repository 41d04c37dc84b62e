#pragma once

// Entropic functionals. Every logarithm is base 2 and every returned
// quantity is in bits; natural logs only appear inside the explicit
// Pinsker-type constants below.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "entkit/matqi.hpp"

namespace entkit {

inline constexpr double kTolNeg = 1e-9;

// Eigenvalues below this fraction of the largest are outside the support.
inline constexpr double kSupportCutoff = 1e-12;

// Pinsker constant for ‖p−q‖₁² in bits, 1/(2 ln 2).
inline constexpr double kPinskerBits = 1.0 / (2.0 * std::numbers::ln2);

// Constant of the squared one-way-LOCC distance bound, 1/(4 ln 2).
inline constexpr double kQuarterPinskerBits = 1.0 / (4.0 * std::numbers::ln2);

// A real number of bits or +infinity. Finite values slightly below zero
// (within kTolNeg) are kept as computed and flagged, never clipped.
class ExtendedReal {
 public:
  explicit ExtendedReal(double bits) : bits_(bits) {}
  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(bits_); }
  double value() const { return bits_; }
  bool flagged_negative() const { return bits_ < 0.0 && bits_ > -kTolNeg; }

 private:
  double bits_;
};

class ProbDist {
 public:
  // Validates nonnegativity (down to -1e-12) and unit sum within tol::trace.
  explicit ProbDist(std::vector<double> probs, std::vector<std::string> labels = {});

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

// Shannon entropy of a nonnegative vector treated as a spectrum.
double spectrum_entropy(std::span<const double> values);

double vn_entropy(const DensityMatrix& rho);
double vn_entropy(const CMatrix& rho);

ExtendedReal qrel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
ExtendedReal qrel_entropy(const CMatrix& rho, const CMatrix& sigma);

// I(A;B|E) with A = {0}, B = {1} and E = every remaining subsystem.
double cond_mutual_info(const DensityMatrix& rho);
double cond_mutual_info(const DensityMatrix& rho, const std::vector<int>& a,
                        const std::vector<int>& b, const std::vector<int>& e);

// I(A;B) of a bipartite state.
double mutual_info(const DensityMatrix& rho);

ExtendedReal classical_rel_entropy(const ProbDist& p, const ProbDist& q);
ExtendedReal classical_rel_entropy(std::span<const double> p, std::span<const double> q);

double l1_distance(std::span<const double> p, std::span<const double> q);

// η(x) = −x log₂ x on [0, 1].
double eta(double x);

}  // namespace entkit
