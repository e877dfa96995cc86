///
/// \file pruning.hpp
///
/// Resolving the aliasing introduced by decimation: every solution u of the
/// decimated system corresponds to p^s candidate node vectors, and spurious
/// solutions have to be discarded.
///
#ifndef DHPRONY_PRUNING_HPP
#define DHPRONY_PRUNING_HPP

#include <span>
#include <vector>

#include <dhprony/model.hpp>
#include <dhprony/polysolve.hpp>

namespace dhprony
{

/// Solutions farther than this from the torus are not aliased.
inline constexpr double kTorusCutoff = 0.5;

struct CandidateOrigin
{
    /// Index of the source solution in the SolutionSet (-1 when not applicable).
    int source = -1;
    /// Root branch b_i per coordinate: z_i = (u_i/|u_i|)^{1/p} e^{2 pi i b_i / p}.
    std::vector<int> branches;
};

struct CandidateSet
{
    std::vector<CVector> candidates;
    std::vector<CandidateOrigin> origins;

    std::size_t size() const noexcept
    {
        return candidates.size();
    }
};

/// All p^s coordinate-wise p-th roots of u normalized to the torus; the
/// first coordinate's branch varies fastest.
std::vector<CVector> aliased_roots(const CVector& u, int p);

/// Candidates of aliased_roots(u, p) tagged with their origin.
CandidateSet alias_candidates(const CVector& u, int p, int source);

///
/// sum_{k=0}^{k_max} |sum_i m_{k+i} c_i(z)| with c the Prony polynomial of
/// (z, D) and m the stride-1 measurements. k_max < 0 selects d - 1.
///
double residual(const CVector& z, const MeasurementSequence& meas, const MultiplicityVector& mult,
                int k_max = -1);

/// Lexicographic order on (real, imaginary) of each coordinate.
bool lex_less(const CVector& a, const CVector& b);

/// Candidate of minimal residual; ties go to the lexicographically smaller.
CVector select_min_residual(const CandidateSet& set, const MeasurementSequence& meas,
                            const MultiplicityVector& mult, int k_max = -1);

/// All torus-adjacent solutions of `solutions`, aliased with stride p.
CandidateSet exhaustive_candidates(const SolutionSet& solutions, int p);

CVector select_exhaustive(const SolutionSet& solutions, int p, const MeasurementSequence& meas,
                          const MultiplicityVector& mult, int k_max = -1);

struct PrefilterResult
{
    /// The solution closest to the torus, normalized.
    CVector u_star;
    int source = -1;
    CandidateSet candidates;
};

/// u* = argmin over solutions of max_i |1 - |u_i||, and its aliases.
PrefilterResult select_prefilter(const SolutionSet& solutions, int p);

/// Keeps candidates with max_i |z_i - z_init_i| <= eta.
CandidateSet filter_by_init(const CandidateSet& set, const CVector& z_init, double eta);

} // namespace dhprony

#endif
