#include "bpp/chain.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "bpp/glauber.hpp"
#include "bpp/util.hpp"

namespace bpp {

namespace {

struct EigenCache {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;       // of the symmetrized matrix
  Eigen::VectorXd sqrt_mu;
};

EigenCache decompose(const ExactChain& chain) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chain.symmetrized);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigen solve failed", -1.0);
  EigenCache c;
  c.eigenvalues = solver.eigenvalues();
  c.vectors = solver.eigenvectors();
  const auto m = chain.measure.size();
  c.sqrt_mu.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    c.sqrt_mu[static_cast<Eigen::Index>(i)] = std::sqrt(chain.measure.probs[i]);
  return c;
}

}  // namespace

ExactChain make_chain(ExactMeasure measure, Eigen::MatrixXd generator) {
  const auto m = static_cast<Eigen::Index>(measure.size());
  if (generator.rows() != m || generator.cols() != m)
    throw std::invalid_argument("make_chain: generator size mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    const double row = generator.row(i).sum();
    if (std::abs(row) > 1e-9)
      throw NumericalError("make_chain: generator row sum not zero", row);
  }
  ExactChain chain{std::move(measure), std::move(generator), {}};
  Eigen::VectorXd sqrt_mu(m);
  for (Eigen::Index i = 0; i < m; ++i)
    sqrt_mu[i] = std::sqrt(chain.measure.probs[static_cast<std::size_t>(i)]);
  chain.symmetrized.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      chain.symmetrized(i, j) = sqrt_mu[i] * chain.generator(i, j) / sqrt_mu[j];
  const double sym_residual =
      (chain.symmetrized - chain.symmetrized.transpose()).cwiseAbs().maxCoeff();
  if (sym_residual > 1e-10)
    throw NumericalError("make_chain: symmetrization residual too large",
                         sym_residual);
  // Symmetrize exactly so the self-adjoint solver sees a symmetric matrix.
  chain.symmetrized = 0.5 * (chain.symmetrized + chain.symmetrized.transpose().eval());
  return chain;
}

ExactChain build_exact_chain(const BoundaryPair& bounds, int k, double alpha,
                             std::uint64_t cap) {
  ExactMeasure measure = exact_measure(bounds, k, alpha, cap);
  const auto m = static_cast<Eigen::Index>(measure.size());
  const int n = bounds.length();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t s = 0; s < measure.size(); ++s) {
    const PolymerConfig& cfg = measure.states[s];
    std::string key = cfg.encode();
    for (int j = 1; j <= k; ++j) {
      for (int x = 1; x <= n - 1; ++x) {
        const Height left = cfg.at(j, x - 1);
        const Height right = cfg.at(j, x + 1);
        if (left != right) continue;  // forced move, no transition
        const Height above = j == 1 ? bounds.xi.at(x) : cfg.at(j - 1, x);
        const Height below = j == k ? bounds.sigma.at(x) : cfg.at(j + 1, x);
        const LocalUpdate law = heat_bath_law(left, right, above, below, alpha);
        if (law.low == law.high) continue;  // single admissible value
        const Height cur = cfg.at(j, x);
        const double p_other = cur == law.high ? 1.0 - law.p_high : law.p_high;
        // Toggling the height swaps the two increments around x.
        const std::size_t pos =
            static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(x - 1);
        std::swap(key[pos], key[pos + 1]);
        const auto it = measure.index_map.find(key);
        std::swap(key[pos], key[pos + 1]);
        if (it == measure.index_map.end())
          throw std::logic_error("build_exact_chain: neighbor state missing");
        const auto target = static_cast<Eigen::Index>(it->second);
        L(static_cast<Eigen::Index>(s), target) += p_other;
        L(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) -= p_other;
      }
    }
  }
  return make_chain(std::move(measure), std::move(L));
}

double detailed_balance_residual(const ExactChain& chain) {
  const auto m = static_cast<Eigen::Index>(chain.measure.size());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double lhs =
          chain.measure.probs[static_cast<std::size_t>(i)] * chain.generator(i, j);
      const double rhs =
          chain.measure.probs[static_cast<std::size_t>(j)] * chain.generator(j, i);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

double spectral_gap_exact(const ExactChain& chain) {
  if (chain.measure.size() < 2)
    throw std::invalid_argument("spectral_gap_exact: need >= 2 states");
  EigenCache c = decompose(chain);
  const auto m = c.eigenvalues.size();
  const double top = c.eigenvalues[m - 1];
  if (std::abs(top) > 1e-8)
    throw NumericalError("spectral_gap_exact: top eigenvalue not zero", top);
  return -c.eigenvalues[m - 2];
}

Eigen::VectorXd distribution_at(const ExactChain& chain, std::size_t initial,
                                double t) {
  EigenCache c = decompose(chain);
  const auto m = c.eigenvalues.size();
  const auto i0 = static_cast<Eigen::Index>(initial);
  Eigen::VectorXd coeff(m);
  for (Eigen::Index q = 0; q < m; ++q)
    coeff[q] = c.vectors(i0, q) * std::exp(t * c.eigenvalues[q]);
  Eigen::VectorXd out(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double acc = 0.0;
    for (Eigen::Index q = 0; q < m; ++q) acc += coeff[q] * c.vectors(j, q);
    out[j] = acc * c.sqrt_mu[j] / c.sqrt_mu[i0];
  }
  return out;
}

namespace {

double worst_tv(const EigenCache& c, double t) {
  const auto m = c.eigenvalues.size();
  Eigen::VectorXd scale(m);
  for (Eigen::Index q = 0; q < m; ++q) scale[q] = std::exp(t * c.eigenvalues[q]);
  // P_t = D^{-1/2} V diag(scale) V^T D^{1/2}
  Eigen::MatrixXd middle = c.vectors * scale.asDiagonal() * c.vectors.transpose();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double tv = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double pij = middle(i, j) * c.sqrt_mu[j] / c.sqrt_mu[i];
      tv += std::abs(pij - c.sqrt_mu[j] * c.sqrt_mu[j]);
    }
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

}  // namespace

double worst_tv_distance(const ExactChain& chain, double t) {
  EigenCache c = decompose(chain);
  return worst_tv(c, t);
}

double tv_mixing_exact(const ExactChain& chain, double resolution) {
  constexpr double kThreshold = 1.0 / (2.0 * 2.718281828459045235360287);
  EigenCache c = decompose(chain);
  if (worst_tv(c, 0.0) <= kThreshold) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (worst_tv(c, hi) > kThreshold) {
    hi *= 2.0;
    if (++guard > 60)
      throw NumericalError("tv_mixing_exact: no mixing within doubling range", hi);
  }
  double lo = hi / 2.0;
  if (hi == 1.0) lo = 0.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (worst_tv(c, mid) <= kThreshold)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double rayleigh_quotient(const ExactChain& chain, const Eigen::VectorXd& f) {
  const auto m = static_cast<Eigen::Index>(chain.measure.size());
  if (f.size() != m) throw std::invalid_argument("rayleigh: size mismatch");
  double mean = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    mean += chain.measure.probs[static_cast<std::size_t>(i)] * f[i];
  double var = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = f[i] - mean;
    var += chain.measure.probs[static_cast<std::size_t>(i)] * d * d;
  }
  if (var == 0.0) throw std::invalid_argument("rayleigh: constant function");
  // E(f) = -<f, Lf>_mu
  Eigen::VectorXd lf = chain.generator * f;
  double dirichlet = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    dirichlet -= chain.measure.probs[static_cast<std::size_t>(i)] * f[i] * lf[i];
  return dirichlet / var;
}

}  // namespace bpp
