#include <dhprony/esprit.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <dhprony/classical.hpp>

namespace dhprony
{

namespace
{

double sq(Complex z)
{
    return std::norm(z);
}

struct Clustering
{
    std::vector<Complex> centroids;
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

Clustering lloyd(std::span<const Complex> pts, int k, std::mt19937_64& gen)
{
    const std::size_t n = pts.size();
    Clustering c;
    // k-means++ seeding.
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    c.centroids.push_back(pts[first(gen)]);
    std::vector<double> dist(n);
    while (static_cast<int>(c.centroids.size()) < k)
    {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : c.centroids)
            {
                best = std::min(best, sq(pts[i] - m));
            }
            dist[i] = best;
            total += best;
        }
        if (total == 0.0)
        {
            c.centroids.push_back(pts[first(gen)]);
            continue;
        }
        std::uniform_real_distribution<double> pick(0.0, total);
        double target = pick(gen);
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i)
        {
            target -= dist[i];
            if (target <= 0.0)
            {
                chosen = i;
                break;
            }
        }
        c.centroids.push_back(pts[chosen]);
    }

    c.labels.assign(n, -1);
    for (int iter = 0; iter < 100; ++iter)
    {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i)
        {
            int best = 0;
            for (int m = 1; m < k; ++m)
            {
                if (sq(pts[i] - c.centroids[static_cast<std::size_t>(m)]) <
                    sq(pts[i] - c.centroids[static_cast<std::size_t>(best)]))
                {
                    best = m;
                }
            }
            if (c.labels[i] != best)
            {
                c.labels[i] = best;
                changed = true;
            }
        }
        std::vector<Complex> sum(static_cast<std::size_t>(k), Complex(0.0));
        std::vector<int> count(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i)
        {
            sum[static_cast<std::size_t>(c.labels[i])] += pts[i];
            ++count[static_cast<std::size_t>(c.labels[i])];
        }
        for (int m = 0; m < k; ++m)
        {
            if (count[static_cast<std::size_t>(m)] > 0)
            {
                c.centroids[static_cast<std::size_t>(m)] = sum[static_cast<std::size_t>(m)] /
                                                           static_cast<double>(count[static_cast<std::size_t>(m)]);
            }
        }
        if (!changed)
        {
            break;
        }
    }
    c.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        c.inertia += sq(pts[i] - c.centroids[static_cast<std::size_t>(c.labels[i])]);
    }
    return c;
}

/// Greedy capacity-constrained assignment to fixed centroids.
std::pair<std::vector<int>, double> capacity_assign(std::span<const Complex> pts,
                                                    const std::vector<Complex>& centroids,
                                                    std::vector<int> capacity)
{
    struct Pair
    {
        double dist;
        std::size_t point;
        std::size_t cluster;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        for (std::size_t m = 0; m < centroids.size(); ++m)
        {
            pairs.push_back({sq(pts[i] - centroids[m]), i, m});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
    std::vector<int> labels(pts.size(), -1);
    double cost = 0.0;
    for (const auto& p : pairs)
    {
        if (labels[p.point] < 0 && capacity[p.cluster] > 0)
        {
            labels[p.point] = static_cast<int>(p.cluster);
            --capacity[p.cluster];
            cost += p.dist;
        }
    }
    return {labels, cost};
}

} // namespace

KMeansResult constrained_kmeans(std::span<const Complex> points, std::span<const int> sizes,
                                std::uint64_t seed, int restarts)
{
    const int k = static_cast<int>(sizes.size());
    if (k < 1 || static_cast<int>(points.size()) != std::accumulate(sizes.begin(), sizes.end(), 0))
    {
        throw_invalid("k-means: sizes must sum to the number of points");
    }
    std::mt19937_64 gen(seed);
    Clustering best;
    for (int r = 0; r < std::max(1, restarts); ++r)
    {
        Clustering c = lloyd(points, k, gen);
        if (c.inertia < best.inertia)
        {
            best = std::move(c);
        }
    }

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : best.labels)
    {
        ++counts[static_cast<std::size_t>(l)];
    }
    std::vector<int> want(sizes.begin(), sizes.end());
    std::vector<int> have = counts;
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    if (have != want)
    {
        // Try every assignment of sizes to centroids; keep the cheapest.
        std::vector<int> perm(sizes.begin(), sizes.end());
        std::sort(perm.begin(), perm.end());
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<int> best_labels;
        do
        {
            auto [labels, cost] = capacity_assign(points, best.centroids, perm);
            if (cost < best_cost)
            {
                best_cost = cost;
                best_labels = std::move(labels);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        best.labels = std::move(best_labels);
    }

    KMeansResult out;
    out.labels = best.labels;
    out.centroids.assign(static_cast<std::size_t>(k), Complex(0.0));
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        out.centroids[static_cast<std::size_t>(out.labels[i])] += points[i];
        ++count[static_cast<std::size_t>(out.labels[i])];
    }
    for (int m = 0; m < k; ++m)
    {
        out.centroids[static_cast<std::size_t>(m)] /= static_cast<double>(count[static_cast<std::size_t>(m)]);
    }
    return out;
}

std::vector<Complex> esprit_eigenvalues(const MeasurementSequence& meas, int d, int window)
{
    const int N = meas.size();
    if (N < 2 * d + 1)
    {
        throw_invalid("ESPRIT needs at least 2d+1 measurements");
    }
    const int L = window > 0 ? window : std::max(N / 2, d + 1);
    if (L < d + 1 || L > N - d)
    {
        throw_invalid("ESPRIT window must satisfy d + 1 <= L <= N - d");
    }
    const int cols = N - L + 1;
    CMatrix hankel(L, cols);
    for (int j = 0; j < cols; ++j)
    {
        for (int i = 0; i < L; ++i)
        {
            hankel(i, j) = meas.values[static_cast<std::size_t>(i + j)];
        }
    }
    Eigen::BDCSVD<CMatrix> svd(hankel, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
    {
        throw_solver("singular-subspace extraction failed");
    }
    const CMatrix u = svd.matrixU().leftCols(d);
    const CMatrix upper = u.topRows(L - 1);
    const CMatrix lower = u.bottomRows(L - 1);
    const CMatrix phi = upper.completeOrthogonalDecomposition().solve(lower);
    Eigen::ComplexEigenSolver<CMatrix> es(phi, false);
    if (es.info() != Eigen::Success)
    {
        throw_solver("ESPRIT eigenvalue step did not converge");
    }
    return to_std(es.eigenvalues());
}

PronyParameters esprit_estimate(const MeasurementSequence& meas, const MultiplicityVector& mult,
                                const EspritOptions& opts)
{
    const auto eig = esprit_eigenvalues(meas, mult.total_degree(), opts.window);
    const auto clusters = constrained_kmeans(eig, mult.parts(), opts.seed, opts.restarts);

    struct Rep
    {
        Complex node;
        int size;
    };
    std::vector<Rep> reps;
    for (std::size_t m = 0; m < clusters.centroids.size(); ++m)
    {
        const int size = static_cast<int>(std::count(clusters.labels.begin(), clusters.labels.end(),
                                                     static_cast<int>(m)));
        const Complex c = clusters.centroids[m];
        reps.push_back({std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0), size});
    }
    std::sort(reps.begin(), reps.end(),
              [](const Rep& a, const Rep& b) { return std::arg(a.node) < std::arg(b.node); });
    std::vector<Complex> nodes;
    std::vector<int> parts;
    for (const auto& r : reps)
    {
        nodes.push_back(r.node);
        parts.push_back(r.size);
    }
    const MultiplicityVector assigned(parts);
    auto coefs = confluent_vandermonde_solve(nodes, assigned, meas);
    return PronyParameters(std::move(nodes), std::move(coefs));
}

} // namespace dhprony
