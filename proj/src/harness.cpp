#include "entkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "entkit/entropy.hpp"
#include "entkit/parallel.hpp"

namespace entkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPhiTol = 1e-9;
constexpr double kSweepTol = 1e-6;
constexpr double kPureStateTol = 1e-3;
constexpr int kSweepSteps = 60;
constexpr int kIsotropicSteps = 100;
constexpr int kRandomFamilySize = 8;

template <typename F>
CheckReport run_battery(std::string name, Json params, std::uint64_t seed, std::size_t samples,
                        const HarnessOptions& opts, F&& sample) {
  CheckReport rep;
  rep.check = std::move(name);
  rep.params = std::move(params);
  rep.seed = seed;
  rep.samples = samples;
  rep.records.resize(samples);
  parallel_for(samples, opts.jobs, [&](std::size_t i) {
    SampleRecord r;
    r.index = i;
    r.seed = derive_seed(seed, i);
    sample(r);
    if (!r.skipped && r.margin < -opts.tol_check) r.violation = true;
    rep.records[i] = std::move(r);
  });
  rep.worst_margin = kInf;
  for (const auto& r : rep.records) {
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    rep.worst_margin = std::min(rep.worst_margin, r.margin);
    if (r.violation) ++rep.violations;
  }
  return rep;
}

FwOptions fw_with_seed(const HarnessOptions& opts, std::uint64_t seed) {
  FwOptions o = opts.fw;
  o.seed = seed;
  return o;
}

void note_flags(SampleRecord& r, const std::vector<std::string>& flags) {
  for (const auto& f : flags) {
    if (std::find(r.flags.begin(), r.flags.end(), f) == r.flags.end()) r.flags.push_back(f);
  }
}

int random_rank(int n, Rng& rng) { return std::uniform_int_distribution<int>(1, n)(rng); }

void require_dims(const Dims& dims, std::size_t parties, const char* who) {
  if (dims.size() != parties) {
    throw ShapeError(std::string(who) + ": expected " + std::to_string(parties) + " subsystem dims");
  }
  for (int d : dims) {
    if (d < 1) throw ShapeError(std::string(who) + ": dims must be positive");
  }
}

// ρ' = (1 − t)ρ + tω at distance target under `distance`, which must be
// homogeneous in t. Returns false when the target needs t > 1.
template <typename Dist>
bool perturb_to(const DensityMatrix& rho, const DensityMatrix& omega, double target, Dist&& distance,
                DensityMatrix& out, double& t) {
  const double full = distance(rho, omega);
  if (!(full > 0.0) || target > full) return false;
  t = target / full;
  out = mix(1.0 - t, rho, omega);
  return true;
}

struct FamilyEstimate {
  double upper = -kInf;  // max over the family of FW values
  double lower = -kInf;  // max over the family of FW lower edges
  std::vector<std::string> flags;
};

FamilyEstimate family_measured_ree(const DensityMatrix& rho, const std::vector<Povm>& family,
                                   std::uint64_t seed, const HarnessOptions& opts) {
  FamilyEstimate e;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const FwResult r = fw_measured_ree(family[i], rho, fw_with_seed(opts, derive_seed(seed, i)));
    e.upper = std::max(e.upper, r.value);
    e.lower = std::max(e.lower, r.lower_bound());
    for (const auto& f : r.flags) {
      if (std::find(e.flags.begin(), e.flags.end(), f) == e.flags.end()) e.flags.push_back(f);
    }
  }
  return e;
}

}  // namespace

Json CheckReport::to_json() const {
  Json recs = Json::array();
  for (const auto& r : records) {
    recs.push_back(Json{{"index", r.index},
                        {"seed", r.seed},
                        {"margin", json_number(r.margin)},
                        {"violation", r.violation},
                        {"skipped", r.skipped},
                        {"values", r.values},
                        {"flags", r.flags}});
  }
  return Json{{"check", check},         {"params", params},
              {"seed", seed},           {"samples", samples},
              {"violations", violations}, {"skipped", skipped},
              {"worst_margin", json_number(worst_margin)}, {"records", std::move(recs)}};
}

std::string reports_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "check,seed,samples,violations,skipped,worst_margin,pass\n";
  for (const auto& r : reports) {
    os << r.check << ',' << r.seed << ',' << r.samples << ',' << r.violations << ',' << r.skipped
       << ',' << format_number(r.worst_margin) << ',' << (r.passed() ? "true" : "false") << '\n';
  }
  return os.str();
}

std::vector<Povm> default_family(int dim_a, int dim_b, std::uint64_t seed) {
  std::vector<Povm> family;
  family.push_back(computational_basis_povm({dim_a, dim_b}));
  if (dim_a == dim_b && dim_a >= 2) {
    family.push_back(twirl_basis_povm(dim_a));
    family.push_back(iso_two_outcome_povm(dim_a));
  }
  for (int i = 0; i < kRandomFamilySize; ++i) {
    const int k = 2 + i % 2;
    const int l = 2 + (i / 2) % 2;
    family.push_back(onelocc_to_povm(random_onelocc_povm(dim_a, dim_b, k, l, derive_seed(seed, i))));
  }
  return family;
}

std::vector<Povm> one_way_members(const std::vector<Povm>& family) {
  std::vector<Povm> out;
  for (const auto& m : family) {
    if (is_one_way_locc(m.tag())) out.push_back(m);
  }
  return out;
}

double twirl_basis_value(int d, double p) {
  return measured_rel_entropy(twirl_basis_povm(d), max_entangled(d), isotropic(d, p)).value();
}

CheckReport check_phi_table(int d_max, const HarnessOptions& opts) {
  if (d_max < 2 || d_max > 6) throw DomainError("check_phi_table: d_max must lie in [2, 6]");
  return run_battery("phi-table", Json{{"d_max", d_max}}, 0, static_cast<std::size_t>(d_max - 1), opts,
                     [&](SampleRecord& r) {
    const int d = static_cast<int>(r.index) + 2;
    const double p_star = 1.0 / (d + 1.0);
    const DensityMatrix phi = max_entangled(d);
    const DensityMatrix sigma = isotropic(d, p_star);
    const double closed = std::log2(d + 1.0) - 1.0;
    const double lo = measured_rel_entropy(twirl_basis_povm(d), phi, sigma).value();
    const double two = measured_rel_entropy(iso_two_outcome_povm(d), phi, sigma).value();

    // Two-outcome isotropic POVMs αΦ + β(1 − Φ); both elements satisfy the
    // PPT condition β ≥ α/(d+1).
    double sweep = -kInf;
    for (int i = 0; i <= kSweepSteps; ++i) {
      const double alpha = static_cast<double>(i) / kSweepSteps;
      const double beta_lo = alpha / (d + 1.0);
      const double beta_hi = 1.0 - (1.0 - alpha) / (d + 1.0);
      for (int j = 0; j <= kSweepSteps; ++j) {
        const double beta = beta_lo + (beta_hi - beta_lo) * j / kSweepSteps;
        const ExtendedReal v = measured_rel_entropy(isotropic_two_outcome(d, alpha, beta), phi, sigma);
        if (!v.is_infinite()) sweep = std::max(sweep, v.value());
      }
    }

    // Twirl-basis value over separable isotropic σ.
    const double p_lo = -1.0 / (d * d - 1.0);
    const double at_star = twirl_basis_value(d, p_star);
    double iso_margin = kInf;
    for (int i = 0; i <= kIsotropicSteps; ++i) {
      const double p = p_lo + (p_star - p_lo) * i / kIsotropicSteps;
      iso_margin = std::min(iso_margin, twirl_basis_value(d, p) - at_star);
    }

    const double lo_err = std::abs(lo - closed);
    const double two_err = std::abs(two - closed);
    r.values = Json{{"d", d},
                    {"closed_form", closed},
                    {"lo_value", lo},
                    {"two_outcome_value", two},
                    {"sweep_max", sweep},
                    {"isotropic_min_margin", iso_margin}};
    r.margin = std::min({closed - sweep, iso_margin, -lo_err, -two_err});
    r.violation = lo_err > kPhiTol || two_err > kPhiTol || sweep > closed + kSweepTol ||
                  iso_margin < -kPhiTol;
    if (r.violation) r.flags.push_back("phi_table_mismatch");
  });
}

CheckReport check_classical_extension_bound(std::size_t samples, const Dims& dims,
                                            int ensemble_size, std::uint64_t seed,
                                            const HarnessOptions& opts) {
  require_dims(dims, 2, "check_classical_extension_bound");
  if (ensemble_size < 1) throw DomainError("check_classical_extension_bound: ensemble_size must be >= 1");
  const Json params{{"dims", dims}, {"ensemble_size", ensemble_size}};
  return run_battery("classical-ext", params, seed, samples, opts, [&](SampleRecord& r) {
    Rng rng(r.seed);
    const int n = static_cast<int>(total_dim(dims));
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(ensemble_size);
    for (double& x : w) x = expo(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;

    const Dims ext{dims[0], dims[1], ensemble_size};
    CMatrix rho = CMatrix::Zero(n, n);
    CMatrix extension = CMatrix::Zero(n * ensemble_size, n * ensemble_size);
    for (int i = 0; i < ensemble_size; ++i) {
      const DensityMatrix rho_i = random_density(dims, random_rank(n, rng), rng);
      rho += w[i] * rho_i.matrix();
      extension += w[i] * kron(rho_i.matrix(), product_basis_state({ensemble_size}, {i}).matrix());
    }
    const DensityMatrix rho_ab = DensityMatrix::unchecked(dims, rho);
    const double cmi = cond_mutual_info(DensityMatrix::unchecked(ext, extension));
    const FwResult ree = fw_ree(rho_ab, fw_with_seed(opts, derive_seed(r.seed, 1)));
    note_flags(r, ree.flags);
    r.margin = cmi - ree.lower_bound();
    r.values = Json{{"cmi", cmi},
                    {"ree_value", ree.value},
                    {"ree_gap", ree.duality_gap},
                    {"weights", w}};
  });
}

CheckReport check_ssa_strengthening(std::size_t samples, const Dims& dims,
                                    const std::vector<Povm>& family, std::uint64_t seed,
                                    const HarnessOptions& opts) {
  require_dims(dims, 3, "check_ssa_strengthening");
  if (family.empty()) throw DomainError("check_ssa_strengthening: empty measurement family");
  const Json params{{"dims", dims}, {"family_size", family.size()}};
  return run_battery("ssa", params, seed, samples, opts, [&](SampleRecord& r) {
    Rng rng(r.seed);
    const int n = static_cast<int>(total_dim(dims));
    const DensityMatrix rho = random_density(dims, random_rank(n, rng), rng);
    const double cmi = cond_mutual_info(rho);
    const OneLoccBound b = onelocc_ree_lower_bound(partial_trace(rho, {0, 1}), family,
                                                   fw_with_seed(opts, derive_seed(r.seed, 1)));
    for (const auto& m : b.per_measurement) note_flags(r, m.flags);
    r.margin = cmi - b.certified_lower;
    r.values = Json{{"cmi", cmi},
                    {"bound", b.bound},
                    {"slack", b.slack},
                    {"certified_lower", b.certified_lower},
                    {"best_m", b.best_m}};
  });
}

CheckReport check_pinsker_chain(std::size_t samples, const Dims& dims,
                                const std::vector<Povm>& family, std::uint64_t seed,
                                const HarnessOptions& opts) {
  require_dims(dims, 3, "check_pinsker_chain");
  if (family.empty()) throw DomainError("check_pinsker_chain: empty measurement family");
  const Json params{{"dims", dims}, {"family_size", family.size()}};
  return run_battery("pinsker", params, seed, samples, opts, [&](SampleRecord& r) {
    Rng rng(r.seed);
    const int n = static_cast<int>(total_dim(dims));
    const DensityMatrix rho = random_density(dims, random_rank(n, rng), rng);
    const DensityMatrix rho_ab = partial_trace(rho, {0, 1});
    const double cmi = cond_mutual_info(rho);

    // Candidate separable σ: the REE optimizer and each per-measurement one.
    std::vector<DensityMatrix> candidates;
    const FwResult ree = fw_ree(rho_ab, fw_with_seed(opts, derive_seed(r.seed, 1)));
    note_flags(r, ree.flags);
    candidates.push_back(ree.sigma.state());
    for (std::size_t i = 0; i < family.size(); ++i) {
      const FwResult m = fw_measured_ree(family[i], rho_ab, fw_with_seed(opts, derive_seed(r.seed, 2 + i)));
      note_flags(r, m.flags);
      candidates.push_back(m.sigma.state());
    }
    double dist = kInf;
    double pinsker_margin = kInf;
    for (const auto& s : candidates) {
      dist = std::min(dist, measured_distance(family, rho_ab, s));
      for (const auto& m : family) {
        const auto p = outcome_probabilities(m, rho_ab.matrix());
        const auto q = outcome_probabilities(m, s.matrix());
        const ExtendedReal d = classical_rel_entropy(p, q);
        const double l1 = l1_distance(p, q);
        if (!d.is_infinite()) pinsker_margin = std::min(pinsker_margin, d.value() - kPinskerBits * l1 * l1);
      }
    }
    const double rhs = kQuarterPinskerBits * dist * dist;
    r.margin = std::min(0.5 * cmi - rhs, pinsker_margin);
    r.values = Json{{"half_cmi", 0.5 * cmi},
                    {"min_measured_distance", dist},
                    {"rhs", rhs},
                    {"classical_pinsker_margin", json_number(pinsker_margin)}};
  });
}

double continuity_bound(double eps, double k) { return 2.0 * eps * std::log2(6.0 * k / eps); }

CheckReport check_asymptotic_continuity(std::size_t samples, const Dims& dims,
                                        const std::vector<Povm>& family,
                                        const std::vector<double>& eps_grid, std::uint64_t seed,
                                        const HarnessOptions& opts) {
  require_dims(dims, 2, "check_asymptotic_continuity");
  if (family.empty()) throw DomainError("check_asymptotic_continuity: empty measurement family");
  for (double e : eps_grid) {
    if (!(e > 0.0 && e <= 1.0 / std::numbers::e)) {
      throw DomainError("check_asymptotic_continuity: each eps must lie in (0, 1/e]");
    }
  }
  const Json params{{"dims", dims}, {"pairs", samples}, {"family_size", family.size()}, {"eps_grid", eps_grid}};
  const std::size_t records = samples * eps_grid.size();
  const double k = static_cast<double>(total_dim(dims));
  return run_battery("continuity", params, seed, records, opts, [&](SampleRecord& r) {
    // Pair index and ε index share the sample seed stream.
    const std::size_t pair = r.index / eps_grid.size();
    const double eps = eps_grid[r.index % eps_grid.size()];
    r.seed = derive_seed(seed, pair);
    Rng rng(r.seed);
    const int n = static_cast<int>(total_dim(dims));
    const DensityMatrix rho = random_density(dims, random_rank(n, rng), rng);
    const DensityMatrix omega = random_density(dims, random_rank(n, rng), rng);
    DensityMatrix rho2 = rho;
    double t = 0.0;
    const auto dist = [&](const DensityMatrix& a, const DensityMatrix& b) {
      return measured_distance(family, a, b);
    };
    r.values = Json{{"pair", pair}, {"eps", eps}};
    if (!perturb_to(rho, omega, eps, dist, rho2, t)) {
      r.skipped = true;
      r.flags.push_back("eps_unreachable");
      return;
    }
    const FamilyEstimate e1 = family_measured_ree(rho, family, derive_seed(r.seed, 1), opts);
    const FamilyEstimate e2 = family_measured_ree(rho2, family, derive_seed(r.seed, 2), opts);
    note_flags(r, e1.flags);
    note_flags(r, e2.flags);
    const double diff = std::abs(e1.upper - e2.upper);
    const double slack = (e1.upper - e1.lower) + (e2.upper - e2.lower);
    const double bound = continuity_bound(eps, k);
    r.margin = bound + slack - diff;
    r.values["mix_weight"] = t;
    r.values["value_1"] = e1.upper;
    r.values["value_2"] = e2.upper;
    r.values["slack"] = slack;
    r.values["bound"] = bound;
  });
}

double donald_horodecki_bound(double t, int dim_a, int dim_b) {
  return 2.0 * (2.0 + std::log2(dim_a) + std::log2(dim_b)) * t + 2.0 * eta(t);
}

CheckReport check_donald_horodecki(std::size_t samples, const Dims& dims,
                                   const std::vector<double>& dist_grid, std::uint64_t seed,
                                   const HarnessOptions& opts) {
  require_dims(dims, 2, "check_donald_horodecki");
  for (double e : dist_grid) {
    if (!(e > 0.0 && e <= 1.0 / std::numbers::e)) {
      throw DomainError("check_donald_horodecki: each distance must lie in (0, 1/e]");
    }
  }
  const Json params{{"dims", dims}, {"pairs", samples}, {"dist_grid", dist_grid}};
  const std::size_t records = samples * dist_grid.size();
  return run_battery("donald-horodecki", params, seed, records, opts, [&](SampleRecord& r) {
    const std::size_t pair = r.index / dist_grid.size();
    const double target = dist_grid[r.index % dist_grid.size()];
    r.seed = derive_seed(seed, pair);
    Rng rng(r.seed);
    const int n = static_cast<int>(total_dim(dims));
    const DensityMatrix rho = random_density(dims, random_rank(n, rng), rng);
    const DensityMatrix omega = random_density(dims, random_rank(n, rng), rng);
    DensityMatrix rho2 = rho;
    double t = 0.0;
    const auto dist = [](const DensityMatrix& a, const DensityMatrix& b) {
      return trace_norm(a.matrix() - b.matrix());
    };
    r.values = Json{{"pair", pair}, {"distance", target}};
    if (!perturb_to(rho, omega, target, dist, rho2, t)) {
      r.skipped = true;
      r.flags.push_back("distance_unreachable");
      return;
    }
    const FwResult a = fw_ree(rho, fw_with_seed(opts, derive_seed(r.seed, 1)));
    const FwResult b = fw_ree(rho2, fw_with_seed(opts, derive_seed(r.seed, 2)));
    note_flags(r, a.flags);
    note_flags(r, b.flags);
    const double bound = donald_horodecki_bound(target, dims[0], dims[1]);
    const double diff = std::abs(a.value - b.value);
    const double slack = a.duality_gap + b.duality_gap;
    r.margin = bound + slack - diff;
    r.values["mix_weight"] = t;
    r.values["ree_1"] = a.value;
    r.values["ree_2"] = b.value;
    r.values["slack"] = slack;
    r.values["bound"] = bound;
  });
}

CheckReport check_pure_state_entropy(std::size_t samples, const Dims& dims,
                                     const std::vector<Povm>& family, std::uint64_t seed,
                                     const HarnessOptions& opts) {
  require_dims(dims, 2, "check_pure_state_entropy");
  const Json params{{"dims", dims}, {"family_size", family.size()}};
  return run_battery("pure-state", params, seed, samples, opts, [&](SampleRecord& r) {
    Rng rng(r.seed);
    const DensityMatrix psi = random_pure(dims, rng).density();
    const double entropy = vn_entropy(partial_trace(psi, {0}));
    const FwResult ree = fw_ree(psi, fw_with_seed(opts, derive_seed(r.seed, 1)));
    note_flags(r, ree.flags);
    double margin = ree.duality_gap + kPureStateTol - std::abs(ree.value - entropy);
    double measured_lower = -kInf;
    if (!family.empty()) {
      const FamilyEstimate e = family_measured_ree(psi, family, derive_seed(r.seed, 2), opts);
      note_flags(r, e.flags);
      measured_lower = e.lower;
      margin = std::min(margin, entropy - e.lower);
    }
    r.margin = margin;
    r.values = Json{{"entropy", entropy},
                    {"ree_value", ree.value},
                    {"ree_gap", ree.duality_gap},
                    {"measured_lower", json_number(measured_lower)}};
  });
}

}  // namespace entkit
