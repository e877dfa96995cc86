///
/// \file classical.hpp
///
/// Classical Prony's method, the single-node algebraic reconstruction with
/// decimation, and the confluent Vandermonde solve used to recover the
/// linear coefficients once the nodes are known.
///
#ifndef DHPRONY_CLASSICAL_HPP
#define DHPRONY_CLASSICAL_HPP

#include <optional>
#include <span>
#include <vector>

#include <dhprony/model.hpp>

namespace dhprony
{

/// d x (d+1) Hankel matrix with entry (k, l) = m_{k+l}.
CMatrix hankel_matrix(const MeasurementSequence& meas, int d);

///
/// Right singular vector of the smallest singular value, normalized to be
/// monic (last entry 1). Throws when the last entry is numerically zero.
///
CVector hankel_nullspace(const CMatrix& hankel);

/// Roots of a monic polynomial (ascending coefficients) as eigenvalues of
/// the balanced companion matrix.
std::vector<Complex> polynomial_roots(std::span<const Complex> monic);

struct NodeAssignment
{
    std::vector<Complex> nodes;
    /// Multiplicity of each returned node (a permutation of the input D).
    MultiplicityVector multiplicities;
};

///
/// Groups d roots into s clusters whose sizes are a permutation of D,
/// minimizing the total within-group pairwise distance. Exhaustive for
/// d <= 10; above that a greedy nearest-neighbour grouping is used. Each
/// representative is the group centroid projected to the unit circle;
/// groups are returned in ascending order of argument.
///
NodeAssignment assign_multiplicities(std::span<const Complex> roots, const MultiplicityVector& mult);

///
/// Least-squares fit of m_k = sum_j sum_l a_{l,j} z_j^k k^l over all given
/// measurements. Throws on a numerically rank-deficient basis.
///
std::vector<std::vector<Complex>> confluent_vandermonde_solve(std::span<const Complex> nodes,
                                                              const MultiplicityVector& mult,
                                                              const MeasurementSequence& meas);

/// Hankel nullspace, roots, multiplicity grouping, Vandermonde solve.
PronyParameters prony_solve(const MeasurementSequence& meas, const MultiplicityVector& mult);

struct SingleNodeResult
{
    int stride = 1;
    /// Root of the elimination polynomial closest to the unit circle.
    Complex rho;
    /// All p-th roots of rho / |rho|.
    std::vector<Complex> candidates;
    /// Candidate nearest z_init, when one was supplied.
    std::optional<Complex> node;
};

///
/// Algebraic reconstruction of a single node of order d. Uses stride
/// p* = floor(N / (d+1)), reduced if needed so that index p*(d+1) exists.
/// With `z_init` the nearest p*-th root is selected, and it must lie within
/// `eta` of z_init when eta > 0; without it the full candidate set is
/// returned for external pruning.
///
SingleNodeResult algorithm1_single_node(const MeasurementSequence& meas, int d,
                                        std::optional<Complex> z_init, double eta);

} // namespace dhprony

#endif
