#include <dhprony/classical.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <dhprony/hankelize.hpp>
#include <dhprony/polysolve.hpp>

namespace dhprony
{

CMatrix hankel_matrix(const MeasurementSequence& meas, int d)
{
    if (d < 1)
    {
        throw_invalid("Hankel matrix order must be positive");
    }
    if (meas.size() < 2 * d)
    {
        throw_invalid("insufficient data for Hankel matrix of order " + std::to_string(d));
    }
    CMatrix h(d, d + 1);
    for (int k = 0; k < d; ++k)
    {
        for (int l = 0; l <= d; ++l)
        {
            h(k, l) = meas.values[static_cast<std::size_t>(k + l)];
        }
    }
    return h;
}

CVector hankel_nullspace(const CMatrix& hankel)
{
    if (hankel.size() == 0 || hankel.isZero(0.0))
    {
        throw_invalid("Hankel matrix is zero");
    }
    Eigen::JacobiSVD<CMatrix> svd(hankel, Eigen::ComputeFullV);
    CVector c = svd.matrixV().col(svd.matrixV().cols() - 1);
    const Complex lead = c[c.size() - 1];
    if (std::abs(lead) < 1e-10 * c.norm())
    {
        throw_solver("leading coefficient vanishes; degree structure inconsistent");
    }
    c /= lead;
    c[c.size() - 1] = Complex(1.0);
    return c;
}

namespace
{

/// Parlett-Reinsch diagonal similarity scaling by powers of two.
void balance(CMatrix& a)
{
    const Eigen::Index n = a.rows();
    constexpr double radix = 2.0;
    bool converged = false;
    while (!converged)
    {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
            {
                if (j != i)
                {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            }
            if (c == 0.0 || r == 0.0)
            {
                continue;
            }
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g)
            {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g)
            {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s)
            {
                converged = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

} // namespace

std::vector<Complex> polynomial_roots(std::span<const Complex> monic)
{
    if (monic.size() < 2)
    {
        return {};
    }
    const Eigen::Index d = static_cast<Eigen::Index>(monic.size()) - 1;
    if (monic.back() != Complex(1.0))
    {
        throw_invalid("polynomial_roots expects a monic polynomial");
    }
    CMatrix comp = CMatrix::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i)
    {
        comp(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < d; ++i)
    {
        comp(i, d - 1) = -monic[static_cast<std::size_t>(i)];
    }
    balance(comp);
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    if (es.info() != Eigen::Success)
    {
        throw_solver("companion eigenvalue iteration did not converge");
    }
    return to_std(es.eigenvalues());
}

namespace
{

double group_cost(std::span<const Complex> roots, const std::vector<int>& members)
{
    double cost = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a)
    {
        for (std::size_t b = a + 1; b < members.size(); ++b)
        {
            cost += std::abs(roots[static_cast<std::size_t>(members[a])] -
                             roots[static_cast<std::size_t>(members[b])]);
        }
    }
    return cost;
}

struct PartitionSearch
{
    std::span<const Complex> roots;
    std::vector<int> remaining_sizes; // multiset of sizes not yet opened
    std::vector<std::vector<int>> groups;
    std::vector<int> targets;
    std::vector<std::vector<int>> best_groups;
    std::vector<int> best_targets;
    double best = std::numeric_limits<double>::infinity();

    double partial_cost() const
    {
        double c = 0.0;
        for (const auto& g : groups)
        {
            c += group_cost(roots, g);
        }
        return c;
    }

    void run(int index)
    {
        const double cost = partial_cost();
        if (cost >= best)
        {
            return;
        }
        if (index == static_cast<int>(roots.size()))
        {
            best = cost;
            best_groups = groups;
            best_targets = targets;
            return;
        }
        for (std::size_t g = 0; g < groups.size(); ++g)
        {
            if (static_cast<int>(groups[g].size()) < targets[g])
            {
                groups[g].push_back(index);
                run(index + 1);
                groups[g].pop_back();
            }
        }
        // Open a new group; try each distinct remaining size once.
        std::vector<int> tried;
        for (std::size_t i = 0; i < remaining_sizes.size(); ++i)
        {
            const int size = remaining_sizes[i];
            if (std::find(tried.begin(), tried.end(), size) != tried.end())
            {
                continue;
            }
            tried.push_back(size);
            remaining_sizes.erase(remaining_sizes.begin() + static_cast<std::ptrdiff_t>(i));
            groups.push_back({index});
            targets.push_back(size);
            run(index + 1);
            targets.pop_back();
            groups.pop_back();
            remaining_sizes.insert(remaining_sizes.begin() + static_cast<std::ptrdiff_t>(i), size);
        }
    }
};

std::pair<std::vector<std::vector<int>>, std::vector<int>> greedy_groups(std::span<const Complex> roots,
                                                                         const MultiplicityVector& mult)
{
    std::vector<int> sizes = mult.parts();
    std::sort(sizes.rbegin(), sizes.rend());
    std::vector<int> free(roots.size());
    std::iota(free.begin(), free.end(), 0);
    std::vector<std::vector<int>> groups;
    for (int size : sizes)
    {
        std::vector<int> best_group;
        double best = std::numeric_limits<double>::infinity();
        for (int seed : free)
        {
            std::vector<int> others = free;
            std::sort(others.begin(), others.end(), [&](int a, int b) {
                return std::abs(roots[static_cast<std::size_t>(a)] - roots[static_cast<std::size_t>(seed)]) <
                       std::abs(roots[static_cast<std::size_t>(b)] - roots[static_cast<std::size_t>(seed)]);
            });
            std::vector<int> group(others.begin(), others.begin() + size);
            const double cost = group_cost(roots, group);
            if (cost < best)
            {
                best = cost;
                best_group = group;
            }
        }
        std::erase_if(free, [&](int i) {
            return std::find(best_group.begin(), best_group.end(), i) != best_group.end();
        });
        groups.push_back(std::move(best_group));
    }
    return {groups, sizes};
}

} // namespace

NodeAssignment assign_multiplicities(std::span<const Complex> roots, const MultiplicityVector& mult)
{
    if (static_cast<int>(roots.size()) != mult.total_degree())
    {
        throw_invalid("root count must equal the total degree");
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> sizes;
    if (roots.size() <= 10)
    {
        PartitionSearch search{roots, mult.parts(), {}, {}, {}, {}};
        search.run(0);
        groups = std::move(search.best_groups);
        sizes = std::move(search.best_targets);
    }
    else
    {
        std::tie(groups, sizes) = greedy_groups(roots, mult);
    }

    struct Rep
    {
        Complex node;
        int size;
    };
    std::vector<Rep> reps;
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        Complex centroid(0.0);
        for (int i : groups[g])
        {
            centroid += roots[static_cast<std::size_t>(i)];
        }
        centroid /= static_cast<double>(groups[g].size());
        const double r = std::abs(centroid);
        reps.push_back({r > 0.0 ? centroid / r : Complex(1.0), sizes[g]});
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
    return {std::move(nodes), MultiplicityVector(std::move(parts))};
}

std::vector<std::vector<Complex>> confluent_vandermonde_solve(std::span<const Complex> nodes,
                                                              const MultiplicityVector& mult,
                                                              const MeasurementSequence& meas)
{
    const int s = mult.count();
    const int d = mult.total_degree();
    if (static_cast<int>(nodes.size()) != s)
    {
        throw_invalid("node count does not match multiplicity vector");
    }
    if (meas.size() < mult.parameter_count())
    {
        throw_invalid("need at least R measurements for coefficient recovery");
    }
    const Eigen::Index rows = meas.size();
    CMatrix basis(rows, d);
    int col = 0;
    for (int j = 0; j < s; ++j)
    {
        for (int l = 0; l < mult[j]; ++l, ++col)
        {
            for (Eigen::Index k = 0; k < rows; ++k)
            {
                basis(k, col) = unit_power(nodes[static_cast<std::size_t>(j)], k) *
                                std::pow(static_cast<double>(k), l);
            }
        }
    }
    // Equilibrate columns; k^l spans many orders of magnitude.
    RVector scale(d);
    for (int c = 0; c < d; ++c)
    {
        scale[c] = basis.col(c).norm();
        if (scale[c] == 0.0)
        {
            throw_solver("degenerate node configuration");
        }
        basis.col(c) /= scale[c];
    }
    Eigen::HouseholderQR<CMatrix> qr(basis);
    const CMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    if (condition_estimate(r) > 1e14)
    {
        throw_solver("degenerate node configuration");
    }
    const CVector rhs = to_cvector(meas.values);
    const CVector x = qr.solve(rhs).cwiseQuotient(scale.cast<Complex>());

    std::vector<std::vector<Complex>> out;
    col = 0;
    for (int j = 0; j < s; ++j)
    {
        std::vector<Complex> a;
        for (int l = 0; l < mult[j]; ++l)
        {
            a.push_back(x[col++]);
        }
        out.push_back(std::move(a));
    }
    return out;
}

PronyParameters prony_solve(const MeasurementSequence& meas, const MultiplicityVector& mult)
{
    const int d = mult.total_degree();
    const CVector c = hankel_nullspace(hankel_matrix(meas, d));
    const auto roots = polynomial_roots(to_std(c));
    auto assigned = assign_multiplicities(roots, mult);
    auto coefs = confluent_vandermonde_solve(assigned.nodes, assigned.multiplicities, meas);
    return PronyParameters(std::move(assigned.nodes), std::move(coefs));
}

SingleNodeResult algorithm1_single_node(const MeasurementSequence& meas, int d,
                                        std::optional<Complex> z_init, double eta)
{
    if (d < 1)
    {
        throw_invalid("node order must be positive");
    }
    const int N = meas.size();
    int p = N / (d + 1);
    // The elimination polynomial reads index p(d+1).
    while (p >= 1 && static_cast<long long>(p) * (d + 1) > N - 1)
    {
        --p;
    }
    if (p < 1)
    {
        throw_invalid("not enough measurements");
    }
    const auto dec = decimate(meas, p, d + 2);
    auto q = single_node_polynomial(dec, d);
    const Complex lead = q.back();
    if (lead == Complex(0.0))
    {
        throw_solver("elimination polynomial has vanishing leading coefficient");
    }
    for (auto& c : q)
    {
        c /= lead;
    }
    q.back() = Complex(1.0);
    const auto roots = polynomial_roots(q);

    auto derivative_size = [&](Complex x) {
        Complex acc(0.0);
        for (std::size_t i = q.size() - 1; i >= 1; --i)
        {
            acc = acc * x + static_cast<double>(i) * q[i];
        }
        return std::abs(acc);
    };
    Complex rho = roots.front();
    for (const Complex& r : roots)
    {
        const double dr = std::abs(std::abs(r) - 1.0);
        const double dbest = std::abs(std::abs(rho) - 1.0);
        // Equidistant roots: prefer the better-conditioned (larger |q'|) one.
        if (dr < dbest || (dr == dbest && derivative_size(r) > derivative_size(rho)))
        {
            rho = r;
        }
    }
    if (std::abs(std::abs(rho) - 1.0) > 0.5)
    {
        throw_solver("no circle-adjacent root; model mismatch");
    }

    SingleNodeResult out;
    out.stride = p;
    out.rho = rho;
    const double base = std::arg(rho);
    for (int k = 0; k < p; ++k)
    {
        out.candidates.push_back(std::polar(1.0, (base + 2.0 * std::numbers::pi * k) / p));
    }
    if (z_init)
    {
        auto nearest = std::min_element(out.candidates.begin(), out.candidates.end(),
                                        [&](Complex a, Complex b) {
                                            return std::abs(a - *z_init) < std::abs(b - *z_init);
                                        });
        if (eta > 0.0 && std::abs(*nearest - *z_init) > eta)
        {
            throw_solver("initial approximation inconsistent with candidates (eta too small?)");
        }
        out.node = *nearest;
    }
    return out;
}

} // namespace dhprony
