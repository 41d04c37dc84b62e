#include "entkit/steinsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "entkit/io.hpp"
#include "entkit/parallel.hpp"

namespace entkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKrausTol = 1e-9;
constexpr double kGentleSlack = 1e-9;
// Cumulative Null mass counts as reaching 1 − alpha_target within this slack.
constexpr double kMassSlack = 1e-12;

std::uint64_t checked_power(std::uint64_t base, int n, std::uint64_t cap, const char* what) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (base != 0 && v > cap / base) {
      throw DimensionCapError(std::string(what) + ": " + std::to_string(base) + "^" +
                              std::to_string(n) + " exceeds the enumeration cap");
    }
    v *= base;
  }
  return v;
}

std::vector<int> digits_of(std::uint64_t index, int base, int n) {
  std::vector<int> d(n);
  for (int i = n - 1; i >= 0; --i) {
    d[i] = static_cast<int>(index % base);
    index /= base;
  }
  return d;
}

double string_mass(const ProbDist& dist, const std::vector<int>& digits) {
  double v = 1.0;
  for (int c : digits) v *= dist[c];
  return v;
}

DensityMatrix ab_marginal(const DensityMatrix& rho) {
  if (rho.parties() == 2) return rho;
  if (rho.parties() == 3) return partial_trace(rho, {0, 1});
  throw ShapeError("expected a state on [dA, dB] or [dA, dB, dE]");
}

CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

}  // namespace

OutcomeDists product_outcome_dists(const OneWayLoccPovm& m, const DensityMatrix& rho,
                                   const DensityMatrix& sigma) {
  const DensityMatrix rho_ab = ab_marginal(rho);
  const DensityMatrix sigma_ab = ab_marginal(sigma);
  const Dims expected{m.dim_a(), m.dim_b()};
  if (rho_ab.dims() != expected || sigma_ab.dims() != expected) {
    throw ShapeError("product_outcome_dists: state dims do not match the measurement");
  }
  const Povm pm = onelocc_to_povm(m);
  return {apply_povm(pm, rho_ab), apply_povm(pm, sigma_ab)};
}

std::vector<double> symbol_llrs(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw ShapeError("symbol_llrs: alphabet sizes differ");
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) {
      out[i] = -kInf;
    } else if (q[i] <= 0.0) {
      out[i] = kInf;
    } else {
      out[i] = std::log2(p[i] / q[i]);
    }
  }
  return out;
}

bool llr_tied(double x, double y) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

SteinPartition::SteinPartition(int n, int alphabet, double threshold, bool boundary_inclusive,
                               std::vector<std::uint64_t> exceptions, std::vector<double> symbol_llr)
    : n_(n), alphabet_(alphabet), threshold_(threshold), boundary_inclusive_(boundary_inclusive),
      exceptions_(std::move(exceptions)), symbol_llr_(std::move(symbol_llr)) {
  if (n_ < 1 || alphabet_ < 1 || static_cast<int>(symbol_llr_.size()) != alphabet_) {
    throw ShapeError("SteinPartition: inconsistent shape");
  }
  std::sort(exceptions_.begin(), exceptions_.end());
}

std::uint64_t SteinPartition::string_count() const {
  return checked_power(static_cast<std::uint64_t>(alphabet_), n_, kStringCap, "SteinPartition");
}

std::vector<int> SteinPartition::symbols(std::uint64_t string) const {
  return digits_of(string, alphabet_, n_);
}

double SteinPartition::llr(std::uint64_t string) const {
  // Summed per type in symbol order so equal types give identical doubles.
  std::vector<int> counts(alphabet_, 0);
  for (int c : symbols(string)) ++counts[c];
  bool has_inf = false;
  double total = 0.0;
  for (int c = 0; c < alphabet_; ++c) {
    if (counts[c] == 0) continue;
    if (symbol_llr_[c] == -kInf) return -kInf;
    if (symbol_llr_[c] == kInf) {
      has_inf = true;
      continue;
    }
    total += counts[c] * symbol_llr_[c];
  }
  return has_inf ? kInf : total;
}

Decision SteinPartition::decide(std::uint64_t string) const {
  const double l = llr(string);
  if (llr_tied(l, threshold_)) {
    if (boundary_inclusive_ || std::binary_search(exceptions_.begin(), exceptions_.end(), string)) {
      return Decision::Null;
    }
    return Decision::Alt;
  }
  return l > threshold_ ? Decision::Null : Decision::Alt;
}

SteinPartition build_partition(const ProbDist& p, const ProbDist& q, int n, double alpha_target) {
  if (p.size() != q.size() || p.size() == 0) throw ShapeError("build_partition: alphabet mismatch");
  if (n < 1) throw DomainError("build_partition: n must be >= 1");
  if (!(alpha_target >= 0.0 && alpha_target < 1.0)) {
    throw DomainError("build_partition: alpha_target outside [0, 1)");
  }
  const int alphabet = static_cast<int>(p.size());
  const std::uint64_t count =
      checked_power(static_cast<std::uint64_t>(alphabet), n, kStringCap, "build_partition");
  SteinPartition probe(n, alphabet, 0.0, false, {}, symbol_llrs(p, q));

  struct Entry {
    double llr;
    std::uint32_t index;
  };
  std::vector<Entry> entries(count);
  for (std::uint64_t s = 0; s < count; ++s) entries[s] = {probe.llr(s), static_cast<std::uint32_t>(s)};
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.llr > b.llr; });

  const double target = 1.0 - alpha_target;
  double cum = 0.0;
  std::size_t start = 0;
  while (start < entries.size()) {
    std::size_t end = start + 1;
    while (end < entries.size() && llr_tied(entries[end].llr, entries[start].llr)) ++end;
    std::sort(entries.begin() + start, entries.begin() + end,
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    std::vector<std::uint64_t> taken;
    for (std::size_t i = start; i < end; ++i) {
      cum += string_mass(p, probe.symbols(entries[i].index));
      taken.push_back(entries[i].index);
      if (cum >= target - kMassSlack) {
        const bool whole = i + 1 == end;
        if (whole) taken.clear();
        return SteinPartition(n, alphabet, entries[start].llr, whole, std::move(taken),
                              symbol_llrs(p, q));
      }
    }
    start = end;
  }
  // Unreachable for normalized p; keep everything in Null.
  return SteinPartition(n, alphabet, -kInf, true, {}, symbol_llrs(p, q));
}

ErrorPair partition_errors(const SteinPartition& part, const ProbDist& p, const ProbDist& q) {
  if (static_cast<int>(p.size()) != part.alphabet() || static_cast<int>(q.size()) != part.alphabet()) {
    throw ShapeError("partition_errors: alphabet mismatch");
  }
  ErrorPair e;
  const std::uint64_t count = part.string_count();
  for (std::uint64_t s = 0; s < count; ++s) {
    const auto digits = part.symbols(s);
    if (part.decide(s) == Decision::Null) {
      e.beta += string_mass(q, digits);
    } else {
      e.alpha += string_mass(p, digits);
    }
  }
  return e;
}

namespace {

struct SymbolTable {
  std::vector<int> offset;  // first symbol of Alice outcome k
  int alphabet = 0;
};

SymbolTable symbol_table(const OneWayLoccPovm& m) {
  SymbolTable t;
  for (const auto& sk : m.bob()) {
    t.offset.push_back(t.alphabet);
    t.alphabet += static_cast<int>(sk.size());
  }
  return t;
}

// Adds ⊗_i S_{k_i, l_i} into null_sum or alt_sum for every l-string.
void accumulate_bob(const OneWayLoccPovm& m, const SteinPartition& part, const SymbolTable& table,
                    const std::vector<int>& k, std::size_t depth, const CMatrix& prefix,
                    std::uint64_t string, CMatrix& null_sum, CMatrix& alt_sum) {
  if (depth == k.size()) {
    (part.decide(string) == Decision::Null ? null_sum : alt_sum) += prefix;
    return;
  }
  const auto& bob = m.bob()[k[depth]];
  for (std::size_t l = 0; l < bob.size(); ++l) {
    const std::uint64_t next = string * part.alphabet() + table.offset[k[depth]] + l;
    accumulate_bob(m, part, table, k, depth + 1, kron(prefix, bob[l]), next, null_sum, alt_sum);
  }
}

}  // namespace

Instrument build_instrument(const OneWayLoccPovm& m, const SteinPartition& part) {
  const SymbolTable table = symbol_table(m);
  if (table.alphabet != part.alphabet()) {
    throw ShapeError("build_instrument: partition alphabet does not match the measurement");
  }
  const int n = part.n();
  const auto k_count = static_cast<int>(m.alice().size());
  const std::uint64_t k_strings =
      checked_power(static_cast<std::uint64_t>(k_count), n, kStringCap, "build_instrument");
  const std::uint64_t side =
      checked_power(static_cast<std::uint64_t>(m.dim_b()), n, kDimensionCap, "build_instrument");

  Instrument inst{n, m.dim_a(), m.dim_b(), {}};
  inst.kraus.reserve(k_strings);
  const CMatrix one = CMatrix::Identity(1, 1);
  for (std::uint64_t ks = 0; ks < k_strings; ++ks) {
    const auto k = digits_of(ks, k_count, n);
    CMatrix null_sum = CMatrix::Zero(side, side);
    CMatrix alt_sum = CMatrix::Zero(side, side);
    accumulate_bob(m, part, table, k, 0, one, 0, null_sum, alt_sum);
    KrausPair kp{sqrt_psd(null_sum), sqrt_psd(alt_sum)};
    const CMatrix completeness = kp.null_op.adjoint() * kp.null_op + kp.alt_op.adjoint() * kp.alt_op;
    if ((completeness - identity(side)).cwiseAbs().maxCoeff() > kKrausTol) {
      throw InvariantError({"kraus completeness"});
    }
    inst.kraus.push_back(std::move(kp));
  }
  return inst;
}

CMatrix alice_string_operator(const OneWayLoccPovm& m, int n, std::uint64_t k_string) {
  const auto k = digits_of(k_string, static_cast<int>(m.alice().size()), n);
  CMatrix out = CMatrix::Identity(1, 1);
  for (int ki : k) out = kron(out, m.alice()[ki]);
  return out;
}

OutcomeMasses instrument_outcome_masses(const OneWayLoccPovm& m, const Instrument& inst,
                                    const DensityMatrix& rho_ab) {
  if (rho_ab.dims() != Dims{m.dim_a(), m.dim_b()}) {
    throw ShapeError("instrument_outcome_masses: state dims do not match the measurement");
  }
  const int n = inst.n;
  // ρ^{⊗n} reordered from (A1 B1)(A2 B2)... to A1..An B1..Bn.
  const DensityMatrix copies = tensor_power(rho_ab, n);
  Dims dims;
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    dims.push_back(m.dim_a());
    dims.push_back(m.dim_b());
  }
  for (int i = 0; i < n; ++i) order.push_back(2 * i);
  for (int i = 0; i < n; ++i) order.push_back(2 * i + 1);
  const CMatrix state = permute_subsystems(copies.matrix(), dims, order);

  OutcomeMasses masses;
  for (std::uint64_t ks = 0; ks < inst.kraus.size(); ++ks) {
    const CMatrix r = alice_string_operator(m, n, ks);
    const auto& kp = inst.kraus[ks];
    const CMatrix e_null = kron(r, kp.null_op.adjoint() * kp.null_op);
    const CMatrix e_alt = kron(r, kp.alt_op.adjoint() * kp.alt_op);
    masses.null_mass += (state.transpose().cwiseProduct(e_null)).sum().real();
    masses.alt_mass += (state.transpose().cwiseProduct(e_alt)).sum().real();
  }
  return masses;
}

namespace {

// ⊗_i blocks[digits_i] in (B1 E1)(B2 E2)... order, reordered to B^n E^n.
CMatrix interleaved_product(const std::vector<CMatrix>& blocks, const std::vector<int>& digits,
                            int dim_b, int dim_e) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int d : digits) out = kron(out, blocks[d]);
  if (dim_e == 1) return out;
  const int n = static_cast<int>(digits.size());
  Dims dims;
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    dims.push_back(dim_b);
    dims.push_back(dim_e);
  }
  for (int i = 0; i < n; ++i) order.push_back(2 * i);
  for (int i = 0; i < n; ++i) order.push_back(2 * i + 1);
  return permute_subsystems(out, dims, order);
}

double compute_disturbance(const OneWayLoccPovm& m, const Instrument& inst,
                           const DensityMatrix& rho_abe) {
  const int da = m.dim_a();
  const int db = m.dim_b();
  const int de = rho_abe.parties() == 3 ? rho_abe.dims()[2] : 1;
  const int n = inst.n;
  const Dims abe{da, db, de};
  const CMatrix rho = rho_abe.matrix();

  // ω_k = tr_A[(√R_k ⊗ 1) ρ (√R_k ⊗ 1)] on BE.
  std::vector<CMatrix> omega;
  CMatrix rho_be = CMatrix::Zero(db * de, db * de);
  for (const auto& r : m.alice()) {
    const CMatrix lift = kron(sqrt_psd(r), identity(db * de));
    omega.push_back(partial_trace(lift * rho * lift.adjoint(), abe, {1, 2}));
    rho_be += omega.back();
  }

  const auto side = static_cast<Eigen::Index>(total_dim(Dims(n, db * de)));
  const CMatrix id_e = identity(static_cast<Eigen::Index>(total_dim(Dims(n, de))));
  CMatrix out = CMatrix::Zero(side, side);
  const auto k_count = static_cast<int>(m.alice().size());
  for (std::uint64_t ks = 0; ks < inst.kraus.size(); ++ks) {
    const CMatrix w = interleaved_product(omega, digits_of(ks, k_count, n), db, de);
    const CMatrix qn = kron(inst.kraus[ks].null_op, id_e);
    const CMatrix qa = kron(inst.kraus[ks].alt_op, id_e);
    out += qn * w * qn.adjoint() + qa * w * qa.adjoint();
  }
  const CMatrix target = interleaved_product({rho_be}, std::vector<int>(n, 0), db, de);
  const CMatrix diff = out - target;
  return trace_norm(0.5 * (diff + diff.adjoint()));
}

}  // namespace

SteinReport run_stein(const OneWayLoccPovm& m, const DensityMatrix& rho_abe,
                      const DensityMatrix& sigma_abe, int n, double alpha_target,
                      const SteinOptions& opts) {
  if (rho_abe.dims() != sigma_abe.dims()) throw ShapeError("run_stein: rho and sigma dims differ");
  const OutcomeDists d = product_outcome_dists(m, rho_abe, sigma_abe);
  const SteinPartition part = build_partition(d.p, d.q, n, alpha_target);
  const ErrorPair err = partition_errors(part, d.p, d.q);

  SteinReport rep;
  rep.n = n;
  rep.alpha_n = std::clamp(err.alpha, 0.0, 1.0);
  rep.beta_n = std::clamp(err.beta, 0.0, 1.0);
  if (rep.beta_n > 0.0) {
    rep.exponent = -std::log2(rep.beta_n) / n + 0.0;
  } else {
    rep.exponent = kInf;
    rep.flags.push_back("infinite_exponent");
  }
  const std::vector<double> tp{1.0 - rep.alpha_n, rep.alpha_n};
  const std::vector<double> tq{rep.beta_n, 1.0 - rep.beta_n};
  const ExtendedReal dn = classical_rel_entropy(tp, tq);
  rep.norm_rel_ent = dn.is_infinite() ? kInf : dn.value() / n;
  rep.gentle_bound = rep.alpha_n + 2.0 * std::sqrt(rep.alpha_n);

  const int de = rho_abe.parties() == 3 ? rho_abe.dims()[2] : 1;
  std::size_t side = 1;
  bool too_big = false;
  for (int i = 0; i < n && !too_big; ++i) {
    side *= static_cast<std::size_t>(m.dim_b() * de);
    too_big = side > opts.disturbance_side_cap;
  }
  if (too_big) {
    rep.flags.push_back("disturbance_skipped");
    return rep;
  }
  const Instrument inst = build_instrument(m, part);
  rep.disturbance = compute_disturbance(m, inst, rho_abe);
  if (*rep.disturbance > rep.gentle_bound + kGentleSlack) {
    throw InvariantError({"disturbance exceeds gentle bound"});
  }
  return rep;
}

std::vector<SteinReport> run_stein_sweep(const OneWayLoccPovm& m, const DensityMatrix& rho_abe,
                                         const DensityMatrix& sigma_abe, const std::vector<int>& ns,
                                         double alpha_target, int jobs, const SteinOptions& opts) {
  std::vector<SteinReport> out(ns.size());
  parallel_for(ns.size(), jobs, [&](std::size_t i) {
    out[i] = run_stein(m, rho_abe, sigma_abe, ns[i], alpha_target, opts);
  });
  return out;
}

std::string stein_csv(const std::vector<SteinReport>& reports) {
  std::ostringstream os;
  os << "n,alpha_n,beta_n,exponent,norm_rel_ent,disturbance,gentle_bound,skipped_flags\n";
  for (const auto& r : reports) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    os << r.n << ',' << format_number(r.alpha_n) << ',' << format_number(r.beta_n) << ','
       << format_number(r.exponent) << ',' << format_number(r.norm_rel_ent) << ','
       << (r.disturbance ? format_number(*r.disturbance) : std::string()) << ','
       << format_number(r.gentle_bound) << ',' << flags << '\n';
  }
  return os.str();
}

GentleCheck gentle_check(const CMatrix& lambda, const DensityMatrix& tau) {
  if (lambda.rows() != tau.dim() || lambda.cols() != tau.dim()) {
    throw ShapeError("gentle_check: operator and state dimensions differ");
  }
  const HermEig e = herm_eig(lambda);
  if (e.values(e.values.size() - 1) < -tol::psd || e.values(0) > 1.0 + tol::psd) {
    throw DomainError("gentle_check: spectrum outside [0, 1]");
  }
  const CMatrix root = sqrt_psd(lambda);
  const CMatrix diff = root * tau.matrix() * root - tau.matrix();
  GentleCheck g;
  g.lhs = trace_norm(0.5 * (diff + diff.adjoint()));
  const double overlap = (tau.matrix().transpose().cwiseProduct(lambda)).sum().real();
  g.rhs = 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap));
  return g;
}

}  // namespace entkit
