///
/// \file esprit.hpp
///
/// Generalized ESPRIT baseline for confluent Prony data.
///
/// The d-dimensional dominant left singular subspace U of the L x (N-L+1)
/// Hankel data matrix is shift invariant: U_up * Phi = U_down. The
/// eigenvalues of Phi estimate the d nodes counted with multiplicity; they
/// are clustered into s groups of sizes (d_1..d_s) by k-means and each
/// group centroid, projected to the unit circle, is a node estimate.
///
#ifndef DHPRONY_ESPRIT_HPP
#define DHPRONY_ESPRIT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <dhprony/model.hpp>

namespace dhprony
{

struct EspritOptions
{
    /// Hankel window (rows). 0 selects floor(N/2).
    int window = 0;
    std::uint64_t seed = 1;
    int restarts = 50;
};

struct KMeansResult
{
    std::vector<Complex> centroids;
    std::vector<int> labels;
};

///
/// k-means on the complex plane followed by a capacity repair so that the
/// cluster sizes are exactly a permutation of `sizes`. Deterministic for a
/// given seed.
///
KMeansResult constrained_kmeans(std::span<const Complex> points, std::span<const int> sizes,
                                std::uint64_t seed, int restarts);

/// The eigenvalue step only: d node estimates counted with multiplicity.
std::vector<Complex> esprit_eigenvalues(const MeasurementSequence& meas, int d, int window);

PronyParameters esprit_estimate(const MeasurementSequence& meas, const MultiplicityVector& mult,
                                const EspritOptions& opts = {});

} // namespace dhprony

#endif
