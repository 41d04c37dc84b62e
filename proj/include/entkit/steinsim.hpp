#pragma once

// n-copy hypothesis testing on one-way LOCC outcome strings: the
// Neyman-Pearson partition of outcome strings, the two-outcome instrument it
// induces on Bob's copies, and the disturbance that instrument causes on BE.
//
// Outcome strings are indexed in base `alphabet` with the first copy as the
// most significant digit, so index order is lexicographic order. The symbol
// of a single-copy outcome (k, l) is its position in onelocc_to_povm order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entkit/entropy.hpp"
#include "entkit/matqi.hpp"
#include "entkit/povm.hpp"

namespace entkit {

inline constexpr std::uint64_t kStringCap = 10'000'000;
inline constexpr std::size_t kDisturbanceSideCap = 256;

struct OutcomeDists {
  ProbDist p;
  ProbDist q;
};

// Single-copy outcome distributions of m on the AB marginals of rho and
// sigma. Both states must be on [dA, dB] or [dA, dB, dE].
OutcomeDists product_outcome_dists(const OneWayLoccPovm& m, const DensityMatrix& rho,
                                   const DensityMatrix& sigma);

enum class Decision { Null, Alt };

class SteinPartition {
 public:
  SteinPartition(int n, int alphabet, double threshold, bool boundary_inclusive,
                 std::vector<std::uint64_t> exceptions, std::vector<double> symbol_llr);

  int n() const { return n_; }
  int alphabet() const { return alphabet_; }
  std::uint64_t string_count() const;

  // Strings whose log-likelihood ratio lies strictly above the threshold are
  // Null. On the threshold, all strings are Null when boundary_inclusive,
  // otherwise only the listed exceptions. Everything else is Alt.
  double threshold() const { return threshold_; }
  bool boundary_inclusive() const { return boundary_inclusive_; }
  const std::vector<std::uint64_t>& exceptions() const { return exceptions_; }

  Decision decide(std::uint64_t string) const;
  double llr(std::uint64_t string) const;
  std::vector<int> symbols(std::uint64_t string) const;

 private:
  int n_;
  int alphabet_;
  double threshold_;
  bool boundary_inclusive_;
  std::vector<std::uint64_t> exceptions_;  // sorted
  std::vector<double> symbol_llr_;
};

// Log-likelihood ratio log₂(p/q) per symbol; +inf where q = 0 < p, -inf
// where p = 0 (including p = q = 0).
std::vector<double> symbol_llrs(const ProbDist& p, const ProbDist& q);

// Strings with equal ratio (within 1e-12 relative) form one tie group.
bool llr_tied(double x, double y);

// Greedy Neyman-Pearson construction: strings in descending ratio, ties in
// lexicographic order, enter Null until the Null p-mass reaches
// 1 − alpha_target. Throws DimensionCapError past kStringCap strings.
SteinPartition build_partition(const ProbDist& p, const ProbDist& q, int n, double alpha_target);

struct ErrorPair {
  double alpha = 0.0;  // p-mass of Alt
  double beta = 0.0;   // q-mass of Null
};

// Direct summation over every string.
ErrorPair partition_errors(const SteinPartition& part, const ProbDist& p, const ProbDist& q);

// Kraus pair on Bob's n copies for one Alice string.
struct KrausPair {
  CMatrix null_op;
  CMatrix alt_op;
};

struct Instrument {
  int n = 0;
  int dim_a = 0;
  int dim_b = 0;
  // Indexed by Alice string in base #k, first copy most significant.
  std::vector<KrausPair> kraus;
};

// Q_{k,x} = sqrt(Σ_{l: (k,l) in x} S_{k,l}) for every Alice string k. Throws
// InvariantError if Q_Null² + Q_Alt² misses the identity by more than 1e-9.
Instrument build_instrument(const OneWayLoccPovm& m, const SteinPartition& part);

// R_{k^n} on A^n.
CMatrix alice_string_operator(const OneWayLoccPovm& m, int n, std::uint64_t k_string);

struct OutcomeMasses {
  double null_mass = 0.0;
  double alt_mass = 0.0;
};

// Weights of the Null and Alt flags after applying the instrument to
// rho_ab^{⊗n}; built from n-copy matrices, so only for small n.
OutcomeMasses instrument_outcome_masses(const OneWayLoccPovm& m, const Instrument& inst,
                                        const DensityMatrix& rho_ab);

struct SteinReport {
  int n = 0;
  double alpha_n = 0.0;
  double beta_n = 0.0;
  double exponent = 0.0;      // −(1/n) log₂ β_n, +inf when β_n = 0
  double norm_rel_ent = 0.0;  // (1/n) D({1−α_n, α_n} ‖ {β_n, 1−β_n})
  std::optional<double> disturbance;
  double gentle_bound = 0.0;  // α_n + 2√α_n
  std::vector<std::string> flags;
};

struct SteinOptions {
  std::size_t disturbance_side_cap = kDisturbanceSideCap;
};

// rho_abe and sigma_abe on [dA, dB, dE] with dE ≥ 1. Throws InvariantError
// if a computed disturbance exceeds gentle_bound + 1e-9.
SteinReport run_stein(const OneWayLoccPovm& m, const DensityMatrix& rho_abe,
                      const DensityMatrix& sigma_abe, int n, double alpha_target,
                      const SteinOptions& opts = {});

std::vector<SteinReport> run_stein_sweep(const OneWayLoccPovm& m, const DensityMatrix& rho_abe,
                                         const DensityMatrix& sigma_abe, const std::vector<int>& ns,
                                         double alpha_target, int jobs = 0,
                                         const SteinOptions& opts = {});

std::string stein_csv(const std::vector<SteinReport>& reports);

struct GentleCheck {
  double lhs = 0.0;  // ‖√Λ τ √Λ − τ‖₁
  double rhs = 0.0;  // 2√(1 − tr τΛ)
};

// Throws DomainError if the spectrum of lambda leaves [−tol::psd, 1 + tol::psd].
GentleCheck gentle_check(const CMatrix& lambda, const DensityMatrix& tau);

}  // namespace entkit
