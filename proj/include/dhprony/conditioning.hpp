///
/// \file conditioning.hpp
///
/// Sensitivity diagnostics: the forward-map Jacobian, component-wise
/// condition numbers of the full and the decimated problem, and the
/// linearized sensitivity of the Hankel-type polynomial system.
///
#ifndef DHPRONY_CONDITIONING_HPP
#define DHPRONY_CONDITIONING_HPP

#include <span>
#include <vector>

#include <dhprony/hankelize.hpp>
#include <dhprony/model.hpp>

namespace dhprony
{

///
/// Condition numbers in the flattened parameter layout
/// (a_{0,1}..a_{d_1-1,1}, z_1, ..., a_{0,s}..a_{d_s-1,s}, z_s).
///
struct ConditionReport
{
    /// CN_{alpha,N}; empty unless computed.
    std::vector<double> full;
    /// CN^{(p)}_alpha; empty unless computed.
    std::vector<double> decimated;
    /// kappa_i per node; empty unless computed.
    std::vector<double> kappa;
    int N = 0;
    int p = 1;
    double delta = 0.0;
    double delta_star = 0.0;
};

///
/// count x R Jacobian of n_k = m_{pk}, k = 0..count-1, with respect to the
/// flattened parameters. p = 1, count = N gives the full Jacobian.
///
CMatrix forward_jacobian(const PronyParameters& params, int p, int count);

/// Absolute row sums of the pseudo-inverse of the full N x R Jacobian.
ConditionReport cn_full(const PronyParameters& params, int N);

/// Absolute row sums of the inverse of the square R x R stride-p Jacobian.
ConditionReport cn_decimated(const PronyParameters& params, int p);

/// Picks out the node entries (one per node) of a flattened report vector.
std::vector<double> node_entries(const PronyParameters& params, std::span<const double> values);

///
/// kappa_i = sum_k |K_{ik}| (sum_{j in J_k} |u^j|) delta_alpha, with
/// K the inverse of the system Jacobian at `solution` and J_k the monomial
/// support of equation k.
///
std::vector<double> kappa_sensitivity(const HankelSystem& system, const CVector& solution,
                                      double delta_alpha);

/// Same quantity with K = B^{-1} V^{-1} from the closed-form factorization
/// at the (known) scaled parameters.
std::vector<double> kappa_closed_form(const HankelSystem& system, const PronyParameters& scaled,
                                      double delta_alpha);

/// Absolute row sums of the inverse of the s x s Vandermonde matrix V(k, j) = w_j^k.
std::vector<double> inverse_vandermonde_row_sums(std::span<const Complex> nodes);

/// prod_{j != i} (1 + |w_j|) / |w_j - w_i|, the classical bound for row i.
std::vector<double> gautschi_bound(std::span<const Complex> nodes);

} // namespace dhprony

#endif
