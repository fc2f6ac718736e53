#ifndef BPP_CHAIN_HPP
#define BPP_CHAIN_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "bpp/enumeration.hpp"

namespace bpp {

// A reversible generator over an enumerated state space, together with its
// symmetrization D^{1/2} L D^{-1/2} used for eigen work.
struct ExactChain {
  ExactMeasure measure;
  Eigen::MatrixXd generator;
  Eigen::MatrixXd symmetrized;
};

// Wraps a generator matrix: checks row sums, builds the symmetrization.
ExactChain make_chain(ExactMeasure measure, Eigen::MatrixXd generator);

// Single-flip heat-bath generator on E_{xi,sigma}.
ExactChain build_exact_chain(const BoundaryPair& bounds, int k, double alpha,
                             std::uint64_t cap = 10000);

// max over pairs of |mu(x) L(x,y) - mu(y) L(y,x)|.
double detailed_balance_residual(const ExactChain& chain);

// Second-smallest eigenvalue of -L via the symmetrized matrix. Throws
// NumericalError if the top eigenvalue is not numerically zero.
double spectral_gap_exact(const ExactChain& chain);

// Law at time t started from `initial`.
Eigen::VectorXd distribution_at(const ExactChain& chain, std::size_t initial,
                                double t);

// Worst-case total variation distance to equilibrium at time t.
double worst_tv_distance(const ExactChain& chain, double t);

// Smallest t with worst-case TV <= 1/(2e), bisected to `resolution`.
double tv_mixing_exact(const ExactChain& chain, double resolution = 1e-6);

// E(f)/Var(f) for a function given as per-state values.
double rayleigh_quotient(const ExactChain& chain, const Eigen::VectorXd& f);

}  // namespace bpp

#endif  // BPP_CHAIN_HPP
