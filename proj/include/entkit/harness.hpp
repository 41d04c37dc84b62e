#pragma once

// Randomized verification batteries. Each battery draws its samples from
// derive_seed(seed, index), evaluates them in parallel and aggregates by
// sample index, so a report is a pure function of (check, params, seed).
//
// Margins are LHS − RHS of the checked inequality, with solver slack added
// to the side where solver bias could hide a violation. A sample is a
// violation when its margin falls below −tol_check.

#include <cstdint>
#include <string>
#include <vector>

#include "entkit/io.hpp"
#include "entkit/matqi.hpp"
#include "entkit/povm.hpp"
#include "entkit/sepopt.hpp"

namespace entkit {

inline constexpr double kTolCheck = 1e-6;

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double margin = 0.0;
  bool violation = false;
  bool skipped = false;
  Json values = Json::object();
  std::vector<std::string> flags;
};

struct CheckReport {
  std::string check;
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double worst_margin = 0.0;  // +inf when every sample was skipped
  std::vector<SampleRecord> records;

  bool passed() const { return violations == 0; }
  Json to_json() const;
};

// One summary line per report.
std::string reports_csv(const std::vector<CheckReport>& reports);

struct HarnessOptions {
  double tol_check = kTolCheck;
  FwOptions fw{1e-3, 2000, 0, 20, 40, true};
  int jobs = 0;
};

// Computational product basis (LO), the twirl-then-basis and two-outcome
// isotropic measurements when dA = dB, and 8 seeded random one-way LOCC
// measurements.
std::vector<Povm> default_family(int dim_a, int dim_b, std::uint64_t seed);

// Members tagged LO or ONE_LOCC.
std::vector<Povm> one_way_members(const std::vector<Povm>& family);

// Twirl-basis measured relative entropy of Φ_d against isotropic(d, p).
double twirl_basis_value(int d, double p);

CheckReport check_phi_table(int d_max, const HarnessOptions& opts = {});

CheckReport check_classical_extension_bound(std::size_t samples, const Dims& dims,
                                            int ensemble_size, std::uint64_t seed,
                                            const HarnessOptions& opts = {});

CheckReport check_ssa_strengthening(std::size_t samples, const Dims& dims,
                                    const std::vector<Povm>& family, std::uint64_t seed,
                                    const HarnessOptions& opts = {});

CheckReport check_pinsker_chain(std::size_t samples, const Dims& dims,
                                const std::vector<Povm>& family, std::uint64_t seed,
                                const HarnessOptions& opts = {});

// 2ε log₂(6k/ε).
double continuity_bound(double eps, double k);

CheckReport check_asymptotic_continuity(std::size_t samples, const Dims& dims,
                                        const std::vector<Povm>& family,
                                        const std::vector<double>& eps_grid, std::uint64_t seed,
                                        const HarnessOptions& opts = {});

// 2(2 + log₂dA + log₂dB)·t + 2η(t) for trace-norm distance t.
double donald_horodecki_bound(double t, int dim_a, int dim_b);

CheckReport check_donald_horodecki(std::size_t samples, const Dims& dims,
                                   const std::vector<double>& dist_grid, std::uint64_t seed,
                                   const HarnessOptions& opts = {});

CheckReport check_pure_state_entropy(std::size_t samples, const Dims& dims,
                                     const std::vector<Povm>& family, std::uint64_t seed,
                                     const HarnessOptions& opts = {});

}  // namespace entkit
