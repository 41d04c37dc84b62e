// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "entkit/entropy.hpp"
#include "entkit/harness.hpp"
#include "entkit/povm.hpp"
#include "entkit/sepopt.hpp"
#include "entkit/steinsim.hpp"

using namespace entkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HarnessOptions harness_options() {
  HarnessOptions o;
  o.tol_check = kTolCheck;
  o.fw.tol_gap = 1e-3;
  o.fw.max_iters = 2000;
  return o;
}

Outcome phi_table() {
  const auto t0 = Clock::now();
  const CheckReport rep = check_phi_table(6);
  const double secs = seconds_since(t0);
  double worst_lo = 0.0, worst_two = 0.0, worst_sweep = -std::numeric_limits<double>::infinity();
  for (const auto& r : rep.records) {
    const double closed = r.values["closed_form"].get<double>();
    worst_lo = std::max(worst_lo, std::abs(r.values["lo_value"].get<double>() - closed));
    worst_two = std::max(worst_two, std::abs(r.values["two_outcome_value"].get<double>() - closed));
    worst_sweep = std::max(worst_sweep, r.values["sweep_max"].get<double>() - closed);
  }
  const bool ok = rep.records.size() == 5 && worst_lo <= 1e-9 && worst_two <= 1e-9 && worst_sweep <= 1e-6 &&
                  rep.passed() && secs < 10.0;
  return {ok, "lo_err=" + fmt("%.2e", worst_lo) + " ppt_err=" + fmt("%.2e", worst_two) +
                  " sweep_excess=" + fmt("%.2e", worst_sweep) + " time=" + fmt("%.1fs", secs)};
}

SepPoint sampled_sep_point(std::uint64_t seed) {
  Rng rng(seed);
  const int vertices = 4 + static_cast<int>(seed % 5);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(vertices);
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  SepPoint sp(2, 2);
  for (int i = 0; i < vertices; ++i) sp.add(w[i] / total, {random_unit_vector(2, rng), random_unit_vector(2, rng)});
  return sp;
}

Outcome known_values() {
  const auto t0 = Clock::now();
  FwOptions o;
  o.tol_gap = 1e-4;
  o.max_iters = 5000;
  o.seed = 2024;
  const FwResult phi = fw_ree(max_entangled(2), o);
  bool ok = phi.value >= 1.0 - 2e-4 && phi.value <= 1.0 + 1e-4 && phi.duality_gap <= 1e-4 &&
            phi.iterations <= 5000;
  double worst_sep = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::uint64_t seed = derive_seed(77, i);
    o.seed = seed;
    const FwResult r = fw_ree(sampled_sep_point(i).state(), o);
    worst_sep = std::max(worst_sep, r.value);
  }
  const double secs = seconds_since(t0);
  ok = ok && worst_sep <= 1e-4 && secs < 60.0;
  return {ok, "phi2=" + fmt("%.8f", phi.value) + " gap=" + fmt("%.2e", phi.duality_gap) +
                  " iters=" + std::to_string(phi.iterations) + " worst_separable=" + fmt("%.2e", worst_sep) +
                  " time=" + fmt("%.1fs", secs)};
}

CMatrix random_traceless_hermitian(int n, Rng& rng) {
  const CMatrix g = gaussian_matrix(n, n, rng);
  CMatrix h = 0.5 * (g + g.adjoint());
  h -= (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return h / h.norm();
}

Outcome gradient() {
  Rng rng(3);
  const double h = 1e-5;
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const DensityMatrix rho = random_density({2, 2}, 1 + s % 4, rng);
    // Full rank with spectrum bounded below by 1/8, so the h^2 truncation
    // term of the finite difference stays below the tolerance.
    const CMatrix sigma = mix(0.5, random_density({2, 2}, 4, rng), maximally_mixed({2, 2})).matrix();
    const CMatrix g = ree_gradient(rho.matrix(), sigma);
    for (int k = 0; k < 20; ++k) {
      const CMatrix x = random_traceless_hermitian(4, rng);
      const double analytic = (g * x).trace().real();
      const double fd = (qrel_entropy(rho.matrix(), sigma + h * x).value() -
                         qrel_entropy(rho.matrix(), sigma - h * x).value()) /
                        (2.0 * h);
      worst = std::max(worst, std::abs(analytic - fd) / std::max(std::abs(fd), 1e-3));
    }
  }
  return {worst < 1e-5, "worst_rel_err=" + fmt("%.2e", worst)};
}

Outcome battery(const std::function<CheckReport()>& run, std::size_t expected_records, double limit) {
  const auto t0 = Clock::now();
  const CheckReport rep = run();
  const double secs = seconds_since(t0);
  const bool ok = rep.passed() && rep.skipped == 0 && rep.records.size() == expected_records && secs < limit;
  return {ok, "violations=" + std::to_string(rep.violations) + " skipped=" + std::to_string(rep.skipped) +
                  " worst_margin=" + fmt("%.4g", rep.worst_margin) + " time=" + fmt("%.1fs", secs)};
}

Outcome ssa() {
  const auto family = one_way_members(default_family(2, 2, 7));
  return battery([&] { return check_ssa_strengthening(100, {2, 2, 2}, family, 42, harness_options()); }, 100, 600.0);
}

Outcome classical_extension() {
  return battery([] { return check_classical_extension_bound(100, {2, 2}, 3, 43, harness_options()); }, 100, 600.0);
}

// Null set of the best likelihood-ratio threshold test: Null = {llr ≥ t},
// minimizing β subject to α ≤ alpha_target, over every threshold t.
std::set<std::uint64_t> brute_force_threshold(const ProbDist& p, const ProbDist& q, int n, double alpha_target) {
  const std::size_t a = p.size();
  std::uint64_t strings = 1;
  for (int i = 0; i < n; ++i) strings *= a;
  std::vector<double> ps(strings), qs(strings), llr(strings);
  for (std::uint64_t s = 0; s < strings; ++s) {
    double pm = 1.0, qm = 1.0;
    std::uint64_t rest = s;
    for (int c = 0; c < n; ++c) {
      const std::size_t sym = rest % a;
      rest /= a;
      pm *= p[sym];
      qm *= q[sym];
    }
    ps[s] = pm;
    qs[s] = qm;
    llr[s] = pm == 0.0 ? -std::numeric_limits<double>::infinity()
             : qm == 0.0 ? std::numeric_limits<double>::infinity()
                         : std::log2(pm / qm);
  }
  std::vector<double> thresholds = llr;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  double best_beta = std::numeric_limits<double>::infinity();
  std::set<std::uint64_t> best;
  for (double t : thresholds) {
    std::set<std::uint64_t> null_set;
    double alpha = 0.0, beta = 0.0;
    for (std::uint64_t s = 0; s < strings; ++s) {
      if (llr[s] >= t || llr_tied(llr[s], t)) {
        null_set.insert(s);
        beta += qs[s];
      } else {
        alpha += ps[s];
      }
    }
    if (alpha <= alpha_target + 1e-12 && beta < best_beta - 1e-15) {
      best_beta = beta;
      best = std::move(null_set);
    }
  }
  return best;
}

Outcome stein() {
  const auto t0 = Clock::now();
  const OneWayLoccPovm m = product_basis_onelocc(2, 2);
  const DensityMatrix rho_ab = max_entangled(2);
  const DensityMatrix sigma_ab = isotropic(2, 1.0 / 3.0);
  const DensityMatrix rho = tensor(rho_ab, maximally_mixed({1}));
  const DensityMatrix sigma = tensor(sigma_ab, maximally_mixed({1}));
  const double alpha_target = 0.05;
  const double single = measured_rel_entropy(twirl_basis_povm(2), rho_ab, sigma_ab).value();
  const auto reports = run_stein_sweep(m, rho, sigma, {1, 2, 3, 4, 5, 6}, alpha_target);

  bool disturbance_ok = reports.size() == 6;
  bool trend_ok = reports.size() == 6;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SteinReport& r = reports[i];
    if (!r.disturbance || *r.disturbance > r.gentle_bound + 1e-9) disturbance_ok = false;
    if (r.disturbance) worst_slack = std::min(worst_slack, r.gentle_bound - *r.disturbance);
    if (r.norm_rel_ent > single + 0.05) trend_ok = false;
    if (i > 0 && r.norm_rel_ent < reports[i - 1].norm_rel_ent - 0.05) trend_ok = false;
  }

  const OutcomeDists d = product_outcome_dists(m, rho, sigma);
  bool partitions_ok = true;
  for (int n = 1; n <= 4; ++n) {
    const SteinPartition part = build_partition(d.p, d.q, n, alpha_target);
    const std::set<std::uint64_t> oracle = brute_force_threshold(d.p, d.q, n, alpha_target);
    for (std::uint64_t s = 0; s < part.string_count(); ++s) {
      if ((part.decide(s) == Decision::Null) != (oracle.count(s) == 1)) partitions_ok = false;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = disturbance_ok && trend_ok && partitions_ok && secs < 120.0;
  std::string rates;
  for (const auto& r : reports) rates += (rates.empty() ? "" : ",") + fmt("%.4f", r.norm_rel_ent);
  return {ok, std::string("disturbance=") + (disturbance_ok ? "ok" : "FAIL") + " min_slack=" +
                  fmt("%.3g", worst_slack) + " trend=" + (trend_ok ? "ok" : "FAIL") + " [" + rates +
                  "] vs " + fmt("%.4f", single) + " partitions=" + (partitions_ok ? "ok" : "FAIL") +
                  " time=" + fmt("%.1fs", secs)};
}

Outcome continuity() {
  const auto t0 = Clock::now();
  const std::vector<double> grid{0.01, 0.05, 0.1};
  const auto family = default_family(2, 2, 7);
  const HarnessOptions opts = harness_options();
  const CheckReport prop = check_asymptotic_continuity(50, {2, 2}, family, grid, 44, opts);
  const CheckReport dh = check_donald_horodecki(50, {2, 2}, grid, 45, opts);
  const double secs = seconds_since(t0);
  const bool ok = prop.passed() && dh.passed() && prop.skipped == 0 && dh.skipped == 0 && secs < 600.0;
  return {ok, "continuity: violations=" + std::to_string(prop.violations) + " skipped=" +
                  std::to_string(prop.skipped) + " worst_margin=" + fmt("%.4g", prop.worst_margin) +
                  "; donald-horodecki: violations=" + std::to_string(dh.violations) + " skipped=" +
                  std::to_string(dh.skipped) + " worst_margin=" + fmt("%.4g", dh.worst_margin) +
                  " time=" + fmt("%.1fs", secs)};
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) s += (x = ex(rng));
  for (double& x : p) x /= s;
  return p;
}

Outcome properties() {
  const auto t0 = Clock::now();
  Rng rng(46);
  int failures = 0;

  const auto family = default_family(2, 2, 7);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = random_density({2, 2}, 1 + i % 4, rng);
    const DensityMatrix sigma = random_density({2, 2}, 4, rng);
    const double d = qrel_entropy(rho, sigma).value();
    for (const auto& m : family) {
      if (measured_rel_entropy(m, rho, sigma).value() > d + 1e-9) ++failures;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const Dims dims = i % 2 == 0 ? Dims{2, 2, 2} : Dims{2, 2, 4};
    const int n = static_cast<int>(total_dim(dims));
    if (cond_mutual_info(random_density(dims, 1 + i % n, rng)) < -1e-9) ++failures;
  }
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> p = random_simplex(2 + i % 5, rng);
    const std::vector<double> q = random_simplex(2 + i % 5, rng);
    const double l1 = l1_distance(p, q);
    if (classical_rel_entropy(p, q).value() < kPinskerBits * l1 * l1 - 1e-9) ++failures;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng);
    const double t = u(rng) * (1.0 - s);
    if (eta(s + t) > eta(s) + eta(t) + 1e-12) ++failures;
  }
  for (int i = 0; i < 100; ++i) {
    const int d = 2 + i % 3;
    const CMatrix x = random_density({d, d}, 1 + i % (d * d), rng).matrix();
    const CMatrix once = uu_bar_twirl(x, d);
    if ((uu_bar_twirl(once, d) - once).cwiseAbs().maxCoeff() > 1e-12) ++failures;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 120.0, "failures=" + std::to_string(failures) + " time=" + fmt("%.1fs", secs)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1 phi table d=2..6", phi_table},
      {"2 known-value solver check", known_values},
      {"3 gradient vs finite differences", gradient},
      {"4 strengthened SSA battery", ssa},
      {"5 classical-extension battery", classical_extension},
      {"6 stein simulation", stein},
      {"7 continuity batteries", continuity},
      {"8 property suites", properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
