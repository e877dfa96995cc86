#include <dhprony/pruning.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include <dhprony/hankelize.hpp>

namespace dhprony
{

namespace
{

double torus_distance(const CVector& u)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
    {
        worst = std::max(worst, std::abs(1.0 - std::abs(u(i))));
    }
    return worst;
}

} // namespace

std::vector<CVector> aliased_roots(const CVector& u, int p)
{
    return alias_candidates(u, p, -1).candidates;
}

CandidateSet alias_candidates(const CVector& u, int p, int source)
{
    if (p < 1)
    {
        throw_invalid("decimation stride must be positive");
    }
    const auto s = static_cast<int>(u.size());
    std::vector<double> base(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i)
    {
        base[static_cast<std::size_t>(i)] = std::arg(u(i)) / p;
    }
    long long total = 1;
    for (int i = 0; i < s; ++i)
    {
        total *= p;
    }

    CandidateSet out;
    out.candidates.reserve(static_cast<std::size_t>(total));
    out.origins.reserve(static_cast<std::size_t>(total));
    std::vector<int> branch(static_cast<std::size_t>(s), 0);
    for (long long n = 0; n < total; ++n)
    {
        CVector z(s);
        for (int i = 0; i < s; ++i)
        {
            const double theta = base[static_cast<std::size_t>(i)] +
                                 2.0 * std::numbers::pi * branch[static_cast<std::size_t>(i)] / p;
            z(i) = std::polar(1.0, theta);
        }
        out.candidates.push_back(std::move(z));
        out.origins.push_back({source, branch});
        for (int i = 0; i < s; ++i)
        {
            if (++branch[static_cast<std::size_t>(i)] < p)
            {
                break;
            }
            branch[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

double residual(const CVector& z, const MeasurementSequence& meas, const MultiplicityVector& mult,
                int k_max)
{
    const int d = mult.total_degree();
    if (k_max < 0)
    {
        k_max = d - 1;
    }
    if (meas.stride != 1)
    {
        throw_invalid("residual needs undecimated measurements");
    }
    if (k_max + d > meas.size() - 1)
    {
        throw_invalid("insufficient measurements for residual");
    }
    const auto c = prony_polynomial(to_std(z), mult);
    double sum = 0.0;
    for (int k = 0; k <= k_max; ++k)
    {
        Complex f(0.0);
        for (int i = 0; i <= d; ++i)
        {
            f += meas.values[static_cast<std::size_t>(k + i)] * c[static_cast<std::size_t>(i)];
        }
        sum += std::abs(f);
    }
    return sum;
}

bool lex_less(const CVector& a, const CVector& b)
{
    for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i)
    {
        if (a(i).real() != b(i).real())
        {
            return a(i).real() < b(i).real();
        }
        if (a(i).imag() != b(i).imag())
        {
            return a(i).imag() < b(i).imag();
        }
    }
    return a.size() < b.size();
}

CVector select_min_residual(const CandidateSet& set, const MeasurementSequence& meas,
                            const MultiplicityVector& mult, int k_max)
{
    if (set.candidates.empty())
    {
        throw_solver("no torus-adjacent solutions");
    }
    std::size_t best = 0;
    double best_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.candidates.size(); ++i)
    {
        const double r = residual(set.candidates[i], meas, mult, k_max);
        if (r < best_r || (r == best_r && lex_less(set.candidates[i], set.candidates[best])))
        {
            best = i;
            best_r = r;
        }
    }
    return set.candidates[best];
}

CandidateSet exhaustive_candidates(const SolutionSet& solutions, int p)
{
    CandidateSet all;
    for (std::size_t n = 0; n < solutions.solutions.size(); ++n)
    {
        if (torus_distance(solutions.solutions[n]) > kTorusCutoff)
        {
            continue;
        }
        auto part = alias_candidates(solutions.solutions[n], p, static_cast<int>(n));
        all.candidates.insert(all.candidates.end(), part.candidates.begin(), part.candidates.end());
        all.origins.insert(all.origins.end(), part.origins.begin(), part.origins.end());
    }
    return all;
}

CVector select_exhaustive(const SolutionSet& solutions, int p, const MeasurementSequence& meas,
                          const MultiplicityVector& mult, int k_max)
{
    if (solutions.solutions.empty())
    {
        throw_invalid("empty solution set");
    }
    return select_min_residual(exhaustive_candidates(solutions, p), meas, mult, k_max);
}

PrefilterResult select_prefilter(const SolutionSet& solutions, int p)
{
    if (solutions.solutions.empty())
    {
        throw_invalid("empty solution set");
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < solutions.solutions.size(); ++n)
    {
        const double dist = torus_distance(solutions.solutions[n]);
        if (dist < best_d)
        {
            best = n;
            best_d = dist;
        }
    }
    PrefilterResult out;
    out.source = static_cast<int>(best);
    out.u_star = solutions.solutions[best];
    for (Eigen::Index i = 0; i < out.u_star.size(); ++i)
    {
        out.u_star(i) /= std::abs(out.u_star(i));
    }
    out.candidates = alias_candidates(out.u_star, p, out.source);
    return out;
}

CandidateSet filter_by_init(const CandidateSet& set, const CVector& z_init, double eta)
{
    if (!(eta >= 0.0))
    {
        throw_invalid("eta must be nonnegative");
    }
    CandidateSet out;
    for (std::size_t n = 0; n < set.candidates.size(); ++n)
    {
        const CVector& z = set.candidates[n];
        if (z.size() != z_init.size())
        {
            throw_invalid("initial approximation has the wrong number of nodes");
        }
        if ((z - z_init).cwiseAbs().maxCoeff() <= eta)
        {
            out.candidates.push_back(z);
            out.origins.push_back(set.origins[n]);
        }
    }
    if (out.candidates.empty())
    {
        throw_solver("initial approximation inconsistent with candidates (eta too small?)");
    }
    return out;
}

} // namespace dhprony
