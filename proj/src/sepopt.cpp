#include "entkit/sepopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "entkit/entropy.hpp"

namespace entkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQFloor = 1e-15;
constexpr double kDegenerateGap = 1e-8;

CVector product_vector(const CVector& a, const CVector& b) {
  CVector v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

double expectation(const CMatrix& g, const CVector& v) { return (v.adjoint() * g * v)(0, 0).real(); }

// tr(A B) for Hermitian A, B.
double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

// (a† ⊗ 1) g (a ⊗ 1) on B.
CMatrix contract_a(const CMatrix& g, const CVector& a, int dim_a, int dim_b) {
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_a; ++i) {
    for (int ip = 0; ip < dim_a; ++ip) {
      const std::complex<double> w = std::conj(a(i)) * a(ip);
      if (w == 0.0) continue;
      out += w * g.block(i * dim_b, ip * dim_b, dim_b, dim_b);
    }
  }
  return out;
}

// (1 ⊗ b†) g (1 ⊗ b) on A.
CMatrix contract_b(const CMatrix& g, const CVector& b, int dim_a, int dim_b) {
  CMatrix out(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i) {
    for (int ip = 0; ip < dim_a; ++ip) {
      const auto blk = g.block(i * dim_b, ip * dim_b, dim_b, dim_b);
      out(i, ip) = (b.adjoint() * blk * b)(0, 0);
    }
  }
  return out;
}

struct MinEig {
  double value;
  CVector vector;
};

MinEig min_eig(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

// Alternating exact minimization over one factor with the other fixed.
// Each half-step cannot increase the value.
LmoResult alternate(const CMatrix& g, CVector a, int dim_a, int dim_b, int max_iters) {
  LmoResult best{a, CVector(), kInf};
  for (int it = 0; it < max_iters; ++it) {
    const MinEig eb = min_eig(contract_a(g, a, dim_a, dim_b));
    const MinEig ea = min_eig(contract_b(g, eb.vector, dim_a, dim_b));
    a = ea.vector;
    const double prev = best.value;
    best = {ea.vector, eb.vector, ea.value};
    if (prev - ea.value <= 1e-15 * (1.0 + std::abs(ea.value))) break;
  }
  return best;
}

// Orthonormal complement of the unit vector v, as columns.
CMatrix complement_basis(const CVector& v) {
  const Eigen::Index d = v.size();
  const CMatrix vm = v;
  Eigen::HouseholderQR<CMatrix> qr(vm);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  return q.rightCols(d - 1);
}

// Local chart around a product point (a0, b0): a = a0 + Ua·s, b = b0 + Ub·r
// with s, r complex and packed as [Re s, Im s, Re r, Im r].
class ProductChart {
 public:
  ProductChart(const CMatrix& g, const CVector& a0, const CVector& b0)
      : g_(g), a0_(a0), b0_(b0), ua_(complement_basis(a0)), ub_(complement_basis(b0)) {}

  Eigen::Index size() const { return 2 * (ua_.cols() + ub_.cols()); }

  void point(const Eigen::VectorXd& t, CVector& a, CVector& b) const {
    const Eigen::Index ka = ua_.cols();
    const Eigen::Index kb = ub_.cols();
    a = a0_;
    b = b0_;
    for (Eigen::Index k = 0; k < ka; ++k) a += std::complex<double>(t(k), t(ka + k)) * ua_.col(k);
    for (Eigen::Index k = 0; k < kb; ++k) {
      b += std::complex<double>(t(2 * ka + k), t(2 * ka + kb + k)) * ub_.col(k);
    }
  }

  double value(const Eigen::VectorXd& t) const {
    CVector a, b;
    point(t, a, b);
    const CVector x = product_vector(a, b);
    return expectation(g_, x) / (a.squaredNorm() * b.squaredNorm());
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& t) const {
    CVector a, b;
    point(t, a, b);
    const CVector x = product_vector(a, b);
    const CVector w = g_ * x;
    const double na = a.squaredNorm();
    const double nb = b.squaredNorm();
    const double den = na * nb;
    const double f = x.dot(w).real() / den;
    const Eigen::Index ka = ua_.cols();
    const Eigen::Index kb = ub_.cols();
    Eigen::VectorXd grad(size());
    const std::complex<double> i1(0.0, 1.0);
    for (Eigen::Index k = 0; k < ka; ++k) {
      for (int part = 0; part < 2; ++part) {
        const CVector da = (part == 0 ? std::complex<double>(1.0) : i1) * ua_.col(k);
        const double dn = 2.0 * product_vector(da, b).dot(w).real();
        const double dd = 2.0 * da.dot(a).real() * nb;
        grad(part * ka + k) = (dn - f * dd) / den;
      }
    }
    for (Eigen::Index k = 0; k < kb; ++k) {
      for (int part = 0; part < 2; ++part) {
        const CVector db = (part == 0 ? std::complex<double>(1.0) : i1) * ub_.col(k);
        const double dn = 2.0 * product_vector(a, db).dot(w).real();
        const double dd = 2.0 * db.dot(b).real() * na;
        grad(2 * ka + part * kb + k) = (dn - f * dd) / den;
      }
    }
    return grad;
  }

 private:
  const CMatrix& g_;
  CVector a0_;
  CVector b0_;
  CMatrix ua_;
  CMatrix ub_;
};

// Damped Newton polish of a product point, with a finite-difference Hessian
// of the analytic chart gradient made positive definite by eigenvalue
// reflection.
LmoResult newton_polish(const CMatrix& g, LmoResult start, int dim_a, int dim_b) {
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (dim_a * dim_b <= 1) return start;
  LmoResult cur = start;
  for (int it = 0; it < 30; ++it) {
    const ProductChart chart(g, cur.a, cur.b);
    const Eigen::Index m = chart.size();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd grad = chart.gradient(zero);
    if (grad.norm() <= 1e-13 * scale) break;
    const double h = 1e-5;
    Eigen::MatrixXd hess(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd e = zero;
      e(j) = h;
      hess.col(j) = (chart.gradient(e) - chart.gradient(-e)) / (2.0 * h);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    Eigen::VectorXd lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-10 * scale);
    const Eigen::VectorXd step =
        -es.eigenvectors() * ((es.eigenvectors().transpose() * grad).cwiseQuotient(lam));
    const double f0 = chart.value(zero);
    double alpha = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      const double f1 = chart.value(alpha * step);
      if (f1 < f0) {
        CVector a, b;
        chart.point(alpha * step, a, b);
        cur = {a.normalized(), b.normalized(), f1};
        moved = true;
        break;
      }
    }
    if (!moved || f0 - cur.value <= 1e-16 * scale) break;
  }
  // Re-evaluate on the normalized vectors.
  cur.value = expectation(g, product_vector(cur.a, cur.b));
  return cur.value <= start.value ? cur : start;
}

constexpr int kSpectralVectors = 3;
constexpr int kSpectralFactors = 2;

// Leading Schmidt factors on A of the lowest eigenvectors of g.
std::vector<CVector> spectral_starts(const CMatrix& g, int dim_a, int dim_b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()));
  std::vector<CVector> out;
  const int vecs = std::min<int>(kSpectralVectors, static_cast<int>(g.rows()));
  for (int k = 0; k < vecs; ++k) {
    const CVector v = es.eigenvectors().col(k);
    // v = Σ_ij v(i·dB + j)|i⟩|j⟩, reshaped with rows indexing A.
    const CMatrix m = Eigen::Map<const CMatrix>(v.data(), dim_b, dim_a).transpose();
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
    for (int c = 0; c < std::min<int>(kSpectralFactors, static_cast<int>(svd.matrixU().cols())); ++c) {
      out.push_back(svd.matrixU().col(c));
    }
  }
  return out;
}

constexpr int kScoutIters = 10;
constexpr int kRefineIters = 50;
constexpr std::size_t kRefineCount = 4;
constexpr std::size_t kActiveStarts = 4;

class ReeObjective final : public SepObjective {
 public:
  explicit ReeObjective(const CMatrix& rho) : rho_(rho) {
    const HermEig e = herm_eig(rho);
    const double cut = kSupportCutoff * std::max(e.values(0), 0.0);
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (e.values(i) > cut) rho_log_rho_ += e.values(i) * std::log2(e.values(i));
    }
  }

  double value(const CMatrix& sigma) const override {
    const HermEig es = herm_eig(sigma);
    const CMatrix r = es.vectors.adjoint() * rho_ * es.vectors;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      const double w = r(i, i).real();
      const double s = es.values(i);
      if (s <= 0.0) {
        if (w > tol::trace) return kInf;
        continue;
      }
      cross += w * std::log2(s);
    }
    return rho_log_rho_ - cross;
  }

  CMatrix gradient(const CMatrix& sigma) const override { return ree_gradient(rho_, sigma); }

 private:
  CMatrix rho_;
  double rho_log_rho_ = 0.0;
};

// D(ρ‖xσ + (1−x)τ) as a function of σ.
class MixedObjective final : public SepObjective {
 public:
  MixedObjective(const SepObjective& base, double x, int n) : base_(base), x_(x), n_(n) {}

  double value(const CMatrix& sigma) const override { return base_.value(mixed(sigma)); }
  CMatrix gradient(const CMatrix& sigma) const override { return x_ * base_.gradient(mixed(sigma)); }

 private:
  CMatrix mixed(const CMatrix& sigma) const {
    CMatrix m = x_ * sigma;
    m.diagonal().array() += (1.0 - x_) / n_;
    return m;
  }

  const SepObjective& base_;
  double x_;
  int n_;
};

class MeasuredObjective final : public SepObjective {
 public:
  MeasuredObjective(const Povm& m, const CMatrix& rho) : povm_(m), p_(outcome_probabilities(m, rho)) {}

  double value(const CMatrix& sigma) const override {
    double d = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (p_[i] <= 0.0) continue;
      d += p_[i] * std::log2(p_[i] / floored(trace_product(sigma, povm_.elements()[i])));
    }
    return d;
  }

  CMatrix gradient(const CMatrix& sigma) const override {
    CMatrix g = CMatrix::Zero(sigma.rows(), sigma.cols());
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (p_[i] <= 0.0) continue;
      const double q = floored(trace_product(sigma, povm_.elements()[i]));
      g -= (p_[i] / (q * std::numbers::ln2)) * povm_.elements()[i];
    }
    return g;
  }

  std::vector<std::string> flags() const override {
    if (floor_hit_) return {"q_floor"};
    return {};
  }

 private:
  double floored(double q) const {
    if (q < kQFloor) {
      floor_hit_ = true;
      return kQFloor;
    }
    return q;
  }

  const Povm& povm_;
  std::vector<double> p_;
  mutable bool floor_hit_ = false;
};

// Golden-section minimization of a convex scalar function on [0, hi].
double golden_section(const auto& phi, double hi, int iters) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = phi(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

void require_bipartite(const DensityMatrix& rho) {
  if (rho.parties() != 2) throw ShapeError("separable optimization needs a bipartite state");
}

void add_flags(FwResult& r, const std::vector<std::string>& flags) {
  for (const auto& f : flags) {
    if (std::find(r.flags.begin(), r.flags.end(), f) == r.flags.end()) r.flags.push_back(f);
  }
}

}  // namespace

CMatrix ProductVertex::projector() const {
  const CVector v = product_vector(a, b);
  return v * v.adjoint();
}

SepPoint SepPoint::maximally_mixed(int dim_a, int dim_b) {
  SepPoint p(dim_a, dim_b);
  const double w = 1.0 / (dim_a * dim_b);
  for (int i = 0; i < dim_a; ++i) {
    for (int j = 0; j < dim_b; ++j) {
      p.weights_.push_back(w);
      p.factors_.push_back({CVector::Unit(dim_a, i), CVector::Unit(dim_b, j)});
    }
  }
  return p;
}

void SepPoint::add(double weight, ProductVertex v) {
  v.a.normalize();
  v.b.normalize();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const double oa = std::norm(factors_[i].a.dot(v.a));
    const double ob = std::norm(factors_[i].b.dot(v.b));
    if (oa * ob > 1.0 - 1e-14) {
      weights_[i] += weight;
      return;
    }
  }
  weights_.push_back(weight);
  factors_.push_back(std::move(v));
}

void SepPoint::drop_zero_weights(double threshold) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > threshold) {
      weights_[out] = weights_[i];
      factors_[out] = std::move(factors_[i]);
      ++out;
    }
  }
  weights_.resize(out);
  factors_.resize(out);
}

CMatrix SepPoint::assemble() const {
  const int n = dim_a_ * dim_b_;
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const CVector v = product_vector(factors_[i].a, factors_[i].b);
    m.noalias() += weights_[i] * (v * v.adjoint());
  }
  return m;
}

DensityMatrix SepPoint::state() const { return DensityMatrix::unchecked({dim_a_, dim_b_}, assemble()); }

LmoResult lmo_product(const CMatrix& g, int dim_a, int dim_b, int restarts, std::uint64_t seed,
                      std::span<const ProductVertex> warm) {
  if (g.rows() != dim_a * dim_b || g.cols() != dim_a * dim_b) {
    throw ShapeError("lmo_product: operator does not match dims");
  }
  if (!is_hermitian(g, 1e-8)) throw SymmetryError("lmo_product: operator is not Hermitian");
  Rng rng(seed);
  // Scout every start briefly, then refine the most promising ones.
  std::vector<LmoResult> scouts;
  for (const ProductVertex& v : warm) scouts.push_back(alternate(g, v.a, dim_a, dim_b, kScoutIters));
  for (const CVector& a : spectral_starts(g, dim_a, dim_b)) {
    scouts.push_back(alternate(g, a, dim_a, dim_b, kScoutIters));
  }
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    scouts.push_back(alternate(g, random_unit_vector(dim_a, rng), dim_a, dim_b, kScoutIters));
  }
  std::vector<std::size_t> order(scouts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return scouts[x].value < scouts[y].value; });
  LmoResult best{CVector(), CVector(), kInf};
  for (std::size_t i = 0; i < std::min(kRefineCount, order.size()); ++i) {
    LmoResult cand = alternate(g, scouts[order[i]].a, dim_a, dim_b, kRefineIters);
    cand = newton_polish(g, cand, dim_a, dim_b);
    if (cand.value < best.value) best = cand;
  }
  return best;
}

CMatrix log_derivative(const CMatrix& sigma, const CMatrix& x) {
  const HermEig es = herm_eig(sigma);
  const Eigen::Index n = sigma.rows();
  const double top = std::max(es.values(0), std::numeric_limits<double>::min());
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::max(es.values(i), 1e-300);
  CMatrix y = es.vectors.adjoint() * x * es.vectors;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double k;
      if (i == j) {
        k = 1.0 / s(i);
      } else if (std::abs(s(i) - s(j)) < kDegenerateGap * top) {
        k = 2.0 / (s(i) + s(j));
      } else {
        k = (std::log(s(i)) - std::log(s(j))) / (s(i) - s(j));
      }
      y(i, j) *= k;
    }
  }
  return es.vectors * y * es.vectors.adjoint();
}

CMatrix ree_gradient(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix g = -log_derivative(sigma, rho) / std::numbers::ln2;
  return 0.5 * (g + g.adjoint());
}

FwResult frank_wolfe(const SepObjective& objective, int dim_a, int dim_b, const FwOptions& opts,
                     SepPoint point) {
  FwResult res;
  CMatrix sigma = point.assemble();
  double f = objective.value(sigma);
  double best_lower = -kInf;
  ProductVertex last{CVector::Unit(dim_a, 0), CVector::Unit(dim_b, 0)};
  std::vector<double> vertex_vals;
  std::vector<std::size_t> by_val;
  std::vector<ProductVertex> warm;

  int t = 0;
  for (; t < opts.max_iters; ++t) {
    const CMatrix grad = objective.gradient(sigma);
    // Active vertices the gradient favours seed the oracle alongside the
    // previous answer.
    const std::size_t active = point.factors().size();
    vertex_vals.resize(active);
    for (std::size_t i = 0; i < active; ++i) {
      vertex_vals[i] = expectation(grad, product_vector(point.factors()[i].a, point.factors()[i].b));
    }
    by_val.resize(active);
    std::iota(by_val.begin(), by_val.end(), 0);
    const std::size_t seeded = std::min(kActiveStarts, active);
    std::partial_sort(by_val.begin(), by_val.begin() + seeded, by_val.end(),
                      [&](std::size_t x, std::size_t y) { return vertex_vals[x] < vertex_vals[y]; });
    warm.assign(1, last);
    for (std::size_t i = 0; i < seeded; ++i) warm.push_back(point.factors()[by_val[i]]);
    const LmoResult lmo =
        lmo_product(grad, dim_a, dim_b, opts.lmo_restarts, derive_seed(opts.seed, t), warm);
    last = {lmo.a, lmo.b};
    const double lin_sigma = trace_product(grad, sigma);
    const double gap = lin_sigma - lmo.value;
    best_lower = std::max(best_lower, f - gap);
    const double cert = std::max(f - best_lower, 0.0);
    res.trace.push_back({t, f, cert});
    if (cert <= opts.tol_gap) {
      res.converged = true;
      break;
    }

    // Pairwise step: move weight from the active vertex the gradient likes
    // least onto the oracle vertex.
    std::size_t away = 0;
    double away_val = -kInf;
    for (std::size_t i = 0; i < active; ++i) {
      if (vertex_vals[i] > away_val) {
        away_val = vertex_vals[i];
        away = i;
      }
    }
    bool use_pair = opts.pairwise_steps && active > 0;

    CMatrix direction;
    double gmax = 1.0;
    double step = 0.0;
    double f_new = f;
    const auto phi = [&](double g) {
      const double v = objective.value(sigma + g * direction);
      return std::isfinite(v) ? v : kInf;
    };
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (use_pair) {
        direction = ProductVertex{lmo.a, lmo.b}.projector() - point.factors()[away].projector();
        gmax = point.weights()[away];
      } else {
        direction = ProductVertex{lmo.a, lmo.b}.projector() - sigma;
        gmax = 1.0;
      }
      step = golden_section(phi, gmax, opts.line_search_iters);
      f_new = phi(step);
      if (!(f_new < f)) {
        step = std::min(2.0 / (t + 2.0), gmax);
        f_new = phi(step);
      }
      if (f_new < f || !use_pair) break;
      // A pairwise step that cannot make numerical progress falls back to a
      // plain Frank-Wolfe step.
      use_pair = false;
    }
    if (!(f_new < f)) {
      add_flags(res, {"stalled"});
      break;
    }

    if (use_pair) {
      auto& w = point.mutable_weights();
      w[away] -= step;
      if (step >= gmax * (1.0 - 1e-12)) w[away] = 0.0;
    } else {
      for (double& wi : point.mutable_weights()) wi *= (1.0 - step);
    }
    point.add(step, {lmo.a, lmo.b});
    point.drop_zero_weights(0.0);
    if ((t + 1) % 64 == 0) {
      sigma = point.assemble();
    } else {
      sigma += step * direction;
    }
    f = objective.value(sigma);
  }

  res.value = f;
  res.duality_gap = std::max(f - best_lower, 0.0);
  res.iterations = std::min(t + 1, opts.max_iters);
  res.sigma = std::move(point);
  if (!res.converged && t >= opts.max_iters) add_flags(res, {"max_iters"});
  add_flags(res, objective.flags());
  return res;
}

FwResult fw_ree(const DensityMatrix& rho, const FwOptions& opts) {
  require_bipartite(rho);
  const int da = rho.dims()[0];
  const int db = rho.dims()[1];
  ReeObjective obj(rho.matrix());
  return frank_wolfe(obj, da, db, opts, SepPoint::maximally_mixed(da, db));
}

FwResult fw_measured_ree(const Povm& m, const DensityMatrix& rho, const FwOptions& opts) {
  require_bipartite(rho);
  if (m.dim() != rho.dim()) throw ShapeError("fw_measured_ree: POVM and state dimensions differ");
  const int da = rho.dims()[0];
  const int db = rho.dims()[1];
  MeasuredObjective obj(m, rho.matrix());
  return frank_wolfe(obj, da, db, opts, SepPoint::maximally_mixed(da, db));
}

OneLoccBound onelocc_ree_lower_bound(const DensityMatrix& rho, const std::vector<Povm>& family,
                                     const FwOptions& opts) {
  if (family.empty()) throw DomainError("onelocc_ree_lower_bound: empty measurement family");
  for (const auto& m : family) {
    if (!is_one_way_locc(m.tag())) {
      throw DomainError("onelocc_ree_lower_bound: family member tagged " + to_string(m.tag()));
    }
  }
  OneLoccBound out;
  out.bound = -kInf;
  out.certified_lower = -kInf;
  for (std::size_t i = 0; i < family.size(); ++i) {
    FwOptions o = opts;
    o.seed = derive_seed(opts.seed, i);
    FwResult r = fw_measured_ree(family[i], rho, o);
    if (r.value > out.bound) {
      out.bound = r.value;
      out.best_m = i;
    }
    out.certified_lower = std::max(out.certified_lower, r.lower_bound());
    out.slack += r.duality_gap;
    out.per_measurement.push_back(std::move(r));
  }
  return out;
}

FwResult mixed_set_ree(const DensityMatrix& rho, double x, const FwOptions& opts) {
  require_bipartite(rho);
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("mixed_set_ree: x outside [0,1]");
  const int da = rho.dims()[0];
  const int db = rho.dims()[1];
  const int n = da * db;
  if (x == 0.0) {
    FwResult r;
    r.value = std::log2(static_cast<double>(n)) - vn_entropy(rho);
    r.sigma = SepPoint::maximally_mixed(da, db);
    r.converged = true;
    r.trace.push_back({0, r.value, 0.0});
    return r;
  }
  ReeObjective base(rho.matrix());
  if (x == 1.0) return frank_wolfe(base, da, db, opts, SepPoint::maximally_mixed(da, db));
  MixedObjective obj(base, x, n);
  FwResult r = frank_wolfe(obj, da, db, opts, SepPoint::maximally_mixed(da, db));
  // Report the mixed point x·σ + (1−x)·τ.
  SepPoint mixed(da, db);
  for (std::size_t i = 0; i < r.sigma.weights().size(); ++i) {
    mixed.add(x * r.sigma.weights()[i], r.sigma.factors()[i]);
  }
  const SepPoint tau = SepPoint::maximally_mixed(da, db);
  for (std::size_t i = 0; i < tau.weights().size(); ++i) {
    mixed.add((1.0 - x) * tau.weights()[i], tau.factors()[i]);
  }
  r.sigma = std::move(mixed);
  return r;
}

}  // namespace entkit
