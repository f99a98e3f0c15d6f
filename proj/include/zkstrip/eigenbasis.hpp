#ifndef ZKSTRIP_EIGENBASIS_HPP
#define ZKSTRIP_EIGENBASIS_HPP

#include <vector>

#include "zkstrip/boundary.hpp"

namespace zk {

// Orthonormal eigenpairs {lambda_l, psi_l} of -d^2/dy^2 on [0,L] for one boundary family,
// together with the quadrature node layout whose discrete inner product reproduces
// <psi_i, psi_j> = delta_ij exactly for the first n modes.
//
//   a: psi_l = sqrt(2/L) sin(l pi y / L),            nodes y_q = (q+1) L/(n+1)
//   b: psi_0 = 1/sqrt(L), psi_l = sqrt(2/L) cos(...), nodes y_q = (q+1/2) L/n
//   c: psi_l = sqrt(2/L) sin((l-1/2) pi y / L),       nodes y_q = (q+1/2) L/n
//   d: constant, then (cos, sin) pairs by increasing frequency, nodes y_q = q L/n
class EigenBasis {
  public:
    EigenBasis(BoundaryCase bc, double L, int n);

    BoundaryCase bc() const { return bc_; }
    double strip_width() const { return L_; }
    int size() const { return n_; }

    double lambda(int m) const { return lambda_[m]; }
    const std::vector<double>& eigenvalues() const { return lambda_; }

    // Closed-form trigonometric evaluators (m is 0-based; the conventional l = m+1).
    double psi(int m, double y) const;
    double psi_d1(int m, double y) const;
    double psi_d2(int m, double y) const;

    double node(int q) const { return nodes_[q]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double quad_weight() const { return weight_; }

  private:
    BoundaryCase bc_;
    double L_;
    int n_;
    double weight_;
    std::vector<double> lambda_;
    std::vector<double> nodes_;

    // case d bookkeeping: mode m -> trig kind and integer frequency
    enum class DKind { Constant, Cos, Sin, NyquistCos };
    std::vector<DKind> dkind_;
    std::vector<int> dfreq_;

    friend class StripTransform;
};

} // namespace zk

#endif
