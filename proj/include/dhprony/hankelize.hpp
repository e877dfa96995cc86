///
/// \file hankelize.hpp
///
/// Eliminating the linear coefficients of a decimated Prony system.
///
/// The decimated measurements n_k satisfy sum_i n_{k+i} c_i = 0, where c_i
/// are the coefficients of prod_j (x - w_j)^{d_j}. Viewing each c_i as a
/// polynomial tau_i(u_1..u_s) in the unknown powered nodes gives the square
/// Hankel-type system
///
///   f_k(u) = sum_{i=0}^{d} n_{k+i} tau_i(u),   k = 0..s-1,
///
/// which has u = w as an isolated root.
///
#ifndef DHPRONY_HANKELIZE_HPP
#define DHPRONY_HANKELIZE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <dhprony/model.hpp>
#include <dhprony/polysolve.hpp>

namespace dhprony
{

struct SymmetricCoefficients
{
    /// sigma_0 .. sigma_m, sigma_0 == 1.
    std::vector<Complex> sigma;
};

/// Elementary symmetric polynomials of `values`, by expanding prod (x + v_i).
SymmetricCoefficients elementary_symmetric(std::span<const Complex> values);

/// Coefficients c_0..c_d (ascending) of prod_j (x - z_j)^{d_j}; c_d = 1.
std::vector<Complex> prony_polynomial(std::span<const Complex> nodes, const MultiplicityVector& mult);

///
/// Integer coefficients of tau_l(u) for l = 0..d. Entry `terms[l]` maps an
/// exponent vector (e_1..e_s), 0 <= e_j <= d_j, to its coefficient.
///
struct TauExpansion
{
    std::vector<int> multiplicities;
    std::vector<std::map<Exponent, std::int64_t>> terms;

    int degree() const noexcept
    {
        return static_cast<int>(terms.size()) - 1;
    }
    /// Largest |coefficient| over all tau_l.
    std::int64_t max_weight() const noexcept;
    Complex evaluate(int l, std::span<const Complex> point) const;
};

///
/// Symbolic expansion of prod_j (x - u_j)^{d_j}. Results are cached per
/// multiplicity vector; the returned reference stays valid for the life of
/// the process.
///
const TauExpansion& tau_expansion(const MultiplicityVector& mult);

struct HankelSystem
{
    SquareSystem equations;
    int stride = 1;
    MultiplicityVector multiplicities;
    /// The n_0..n_{R-1} the equations were built from.
    std::vector<Complex> measurements;
    /// TauExpansion::max_weight of the expansion used.
    std::int64_t max_weight = 1;
};

HankelSystem build_hankel_system(const MeasurementSequence& decimated, const MultiplicityVector& mult);

///
/// Coefficients (ascending powers of u) of the single-node elimination
/// polynomial
///
///   q(u) = sum_{l=0}^{d} (-1)^l binom(d, l) n_{l+1} u^{d-l}.
///
/// Note the 1-based use of n: values n_1..n_{d+1} are read.
///
std::vector<Complex> single_node_polynomial(const MeasurementSequence& decimated, int d);

///
/// Closed form of the system Jacobian at u = w for the scaled data point
/// (w_j, b_{l,j}):
///
///   D_{k,j} = -d_j! w_j^{k+d_j-1} b_{d_j-1,j} prod_{i != j} (w_j - w_i)^{d_i},
///
/// together with its factorization D = V(w) * B where V is the s x s
/// Vandermonde matrix (rows are powers) and B is diagonal.
///
struct JacobianFactorization
{
    CMatrix vandermonde;
    CMatrix scaling;
    CMatrix product;
};

JacobianFactorization closed_form_jacobian(const PronyParameters& scaled);

/// binom(n, k) exactly; n <= 62.
std::int64_t binomial(int n, int k);

} // namespace dhprony

#endif
