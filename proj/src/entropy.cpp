#include "entkit/entropy.hpp"

#include <algorithm>
#include <numeric>

namespace entkit {

ProbDist::ProbDist(std::vector<double> probs, std::vector<std::string> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
  std::vector<std::string> failed;
  if (probs_.empty()) failed.push_back("nonempty");
  if (!labels_.empty() && labels_.size() != probs_.size()) failed.push_back("labels");
  double sum = 0.0;
  for (double v : probs_) {
    if (!std::isfinite(v) || v < -1e-12) {
      failed.push_back("nonnegative");
      break;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol::trace) failed.push_back("normalized");
  if (!failed.empty()) throw InvariantError(std::move(failed));
}

double spectrum_entropy(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double top = *std::max_element(values.begin(), values.end());
  const double cutoff = kSupportCutoff * std::max(top, 0.0);
  double s = 0.0;
  for (double v : values) {
    if (v > cutoff) s -= v * std::log2(v);
  }
  return s;
}

double vn_entropy(const CMatrix& rho) {
  const HermEig e = herm_eig(rho);
  return spectrum_entropy({e.values.data(), static_cast<std::size_t>(e.values.size())});
}

double vn_entropy(const DensityMatrix& rho) { return vn_entropy(rho.matrix()); }

ExtendedReal qrel_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ShapeError("qrel_entropy: dimension mismatch");
  }
  const HermEig er = herm_eig(rho);
  const HermEig es = herm_eig(sigma);
  const Eigen::Index n = rho.rows();
  const double cut_r = kSupportCutoff * std::max(er.values(0), 0.0);
  const double cut_s = kSupportCutoff * std::max(es.values(0), 0.0);

  // tr ρ log ρ in ρ's own eigenbasis.
  double rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = er.values(i);
    if (r > cut_r) rho_log_rho += r * std::log2(r);
  }

  // Diagonal of ρ in σ's eigenbasis.
  const CMatrix rho_in_sigma = es.vectors.adjoint() * rho * es.vectors;
  double cross = 0.0;
  double outside_support = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = rho_in_sigma(i, i).real();
    const double s = es.values(i);
    if (s > cut_s) {
      cross += w * std::log2(s);
    } else {
      outside_support += w;
    }
  }
  if (outside_support > tol::trace) return ExtendedReal::infinity();
  return ExtendedReal(rho_log_rho - cross);
}

ExtendedReal qrel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return qrel_entropy(rho.matrix(), sigma.matrix());
}

namespace {

std::vector<int> merged(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

}  // namespace

double cond_mutual_info(const DensityMatrix& rho, const std::vector<int>& a,
                        const std::vector<int>& b, const std::vector<int>& e) {
  if (a.empty() || b.empty()) throw ShapeError("cond_mutual_info: A and B must be nonempty");
  const auto s = [&](const std::vector<int>& keep) {
    return vn_entropy(partial_trace(rho.matrix(), rho.dims(), keep));
  };
  const double s_abe = s(merged(merged(a, b), e));
  if (e.empty()) return s(a) + s(b) - s_abe;
  return s(merged(a, e)) + s(merged(b, e)) - s_abe - s(e);
}

double cond_mutual_info(const DensityMatrix& rho) {
  if (rho.parties() < 3) throw ShapeError("cond_mutual_info: need at least 3 subsystems");
  std::vector<int> e(rho.parties() - 2);
  std::iota(e.begin(), e.end(), 2);
  return cond_mutual_info(rho, {0}, {1}, e);
}

double mutual_info(const DensityMatrix& rho) {
  if (rho.parties() != 2) throw ShapeError("mutual_info: bipartite state expected");
  return cond_mutual_info(rho, {0}, {1}, {});
}

ExtendedReal classical_rel_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("classical_rel_entropy: length mismatch");
  const double p_cut = kSupportCutoff * std::max(1e-300, *std::max_element(p.begin(), p.end()));
  const double q_cut = kSupportCutoff * std::max(1e-300, *std::max_element(q.begin(), q.end()));
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= p_cut) continue;
    if (q[i] <= q_cut) return ExtendedReal::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return ExtendedReal(d);
}

ExtendedReal classical_rel_entropy(const ProbDist& p, const ProbDist& q) {
  return classical_rel_entropy(p.probs(), q.probs());
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("l1_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

double eta(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eta: argument outside [0,1]");
  if (x == 0.0) return 0.0;
  return -x * std::log2(x);
}

}  // namespace entkit
