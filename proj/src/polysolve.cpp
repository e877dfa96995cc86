#include <dhprony/polysolve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace dhprony
{

namespace
{

Complex ipow(Complex base, int e)
{
    Complex result(1.0);
    while (e > 0)
    {
        if (e & 1)
        {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    return result;
}

double inf_norm(const CVector& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool all_finite(const CVector& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
        {
            return false;
        }
    }
    return true;
}

bool lex_less(const CVector& a, const CVector& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        if (a[i].real() != b[i].real())
        {
            return a[i].real() < b[i].real();
        }
        if (a[i].imag() != b[i].imag())
        {
            return a[i].imag() < b[i].imag();
        }
    }
    return false;
}

} // namespace

//------------------------------------------------------------------------------
// MultiPoly
//------------------------------------------------------------------------------

MultiPoly::MultiPoly(int variables) : m_vars(variables)
{
    if (variables < 1)
    {
        throw_invalid("polynomial needs at least one variable");
    }
}

void MultiPoly::add_term(const Exponent& exponent, Complex coef)
{
    if (static_cast<int>(exponent.size()) != m_vars)
    {
        throw_invalid("exponent length does not match variable count");
    }
    for (int e : exponent)
    {
        if (e < 0)
        {
            throw_invalid("negative exponent");
        }
    }
    if (coef == Complex(0.0))
    {
        return;
    }
    auto [it, inserted] = m_terms.emplace(exponent, coef);
    if (!inserted)
    {
        it->second += coef;
        if (it->second == Complex(0.0))
        {
            m_terms.erase(it);
        }
    }
}

int MultiPoly::total_degree() const noexcept
{
    int deg = 0;
    for (const auto& [e, c] : m_terms)
    {
        int sum = 0;
        for (int x : e)
        {
            sum += x;
        }
        deg = std::max(deg, sum);
    }
    return deg;
}

Complex MultiPoly::coefficient(const Exponent& exponent) const
{
    auto it = m_terms.find(exponent);
    return it == m_terms.end() ? Complex(0.0) : it->second;
}

double MultiPoly::max_abs_coefficient() const noexcept
{
    double m = 0.0;
    for (const auto& [e, c] : m_terms)
    {
        m = std::max(m, std::abs(c));
    }
    return m;
}

Complex MultiPoly::evaluate(std::span<const Complex> point) const
{
    if (static_cast<int>(point.size()) != m_vars)
    {
        throw_invalid("evaluation point has wrong dimension");
    }
    Complex sum(0.0);
    for (const auto& [e, c] : m_terms)
    {
        Complex mono = c;
        for (int i = 0; i < m_vars; ++i)
        {
            if (e[static_cast<std::size_t>(i)] != 0)
            {
                mono *= ipow(point[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
            }
        }
        sum += mono;
    }
    return sum;
}

MultiPoly MultiPoly::differentiate(int var) const
{
    if (var < 0 || var >= m_vars)
    {
        throw_invalid("differentiation variable out of range");
    }
    MultiPoly out(m_vars);
    for (const auto& [e, c] : m_terms)
    {
        const int power = e[static_cast<std::size_t>(var)];
        if (power == 0)
        {
            continue;
        }
        Exponent lowered = e;
        lowered[static_cast<std::size_t>(var)] -= 1;
        out.add_term(lowered, c * static_cast<double>(power));
    }
    return out;
}

//------------------------------------------------------------------------------
// SquareSystem
//------------------------------------------------------------------------------

SquareSystem::SquareSystem(std::vector<MultiPoly> equations) : m_eqs(std::move(equations))
{
    if (m_eqs.empty())
    {
        throw_invalid("empty polynomial system");
    }
    const int n = static_cast<int>(m_eqs.size());
    for (const auto& eq : m_eqs)
    {
        if (eq.variables() != n)
        {
            throw_invalid("system is not square");
        }
        for (const auto& [e, c] : eq.terms())
        {
            for (int x : e)
            {
                m_max_exponent = std::max(m_max_exponent, x);
            }
        }
    }
    for (const auto& eq : m_eqs)
    {
        m_values.push_back(compile(eq));
        std::vector<Compiled> row;
        for (int j = 0; j < n; ++j)
        {
            row.push_back(compile(eq.differentiate(j)));
        }
        m_partials.push_back(std::move(row));
    }
}

SquareSystem::Compiled SquareSystem::compile(const MultiPoly& p)
{
    Compiled out;
    out.reserve(p.term_count());
    for (const auto& [e, c] : p.terms())
    {
        out.push_back({c, e});
    }
    return out;
}

std::vector<std::vector<Complex>> SquareSystem::power_table(const CVector& point) const
{
    std::vector<std::vector<Complex>> powers(static_cast<std::size_t>(point.size()));
    for (Eigen::Index i = 0; i < point.size(); ++i)
    {
        auto& row = powers[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(m_max_exponent) + 1);
        row[0] = Complex(1.0);
        for (int e = 1; e <= m_max_exponent; ++e)
        {
            row[static_cast<std::size_t>(e)] = row[static_cast<std::size_t>(e) - 1] * point[i];
        }
    }
    return powers;
}

Complex SquareSystem::eval_compiled(const Compiled& c,
                                    const std::vector<std::vector<Complex>>& powers) const
{
    Complex sum(0.0);
    for (const auto& term : c)
    {
        Complex mono = term.coef;
        for (std::size_t i = 0; i < term.exponent.size(); ++i)
        {
            mono *= powers[i][static_cast<std::size_t>(term.exponent[i])];
        }
        sum += mono;
    }
    return sum;
}

std::vector<int> SquareSystem::degrees() const
{
    std::vector<int> out;
    for (const auto& eq : m_eqs)
    {
        out.push_back(eq.total_degree());
    }
    return out;
}

double SquareSystem::coefficient_norm() const noexcept
{
    double m = 0.0;
    for (const auto& eq : m_eqs)
    {
        m = std::max(m, eq.max_abs_coefficient());
    }
    return m;
}

CVector SquareSystem::evaluate(const CVector& point) const
{
    if (point.size() != size())
    {
        throw_invalid("evaluation point has wrong dimension");
    }
    const auto powers = power_table(point);
    CVector out(size());
    for (int k = 0; k < size(); ++k)
    {
        out[k] = eval_compiled(m_values[static_cast<std::size_t>(k)], powers);
    }
    return out;
}

CMatrix SquareSystem::jacobian(const CVector& point) const
{
    if (point.size() != size())
    {
        throw_invalid("evaluation point has wrong dimension");
    }
    const auto powers = power_table(point);
    CMatrix out(size(), size());
    for (int k = 0; k < size(); ++k)
    {
        for (int j = 0; j < size(); ++j)
        {
            out(k, j) = eval_compiled(
                m_partials[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)], powers);
        }
    }
    return out;
}

//------------------------------------------------------------------------------
// Continuation
//------------------------------------------------------------------------------

void TrackOptions::validate() const
{
    if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step))
    {
        throw_invalid("track options: need 0 < min_step <= initial_step <= max_step");
    }
    if (!(corrector_tol > 0.0 && divergence_threshold > 0.0 && endpoint_tol > 0.0 &&
          dedup_tol > 0.0) ||
        max_corrector_iterations < 1 || max_steps < 1)
    {
        throw_invalid("track options: thresholds must be positive");
    }
}

Complex homotopy_gamma(const TrackOptions& opts)
{
    if (opts.gamma)
    {
        return *opts.gamma / std::abs(*opts.gamma);
    }
    std::mt19937_64 gen(opts.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, angle(gen));
}

StartSystem total_degree_start(const SquareSystem& target)
{
    const int n = target.size();
    const auto degrees = target.degrees();
    std::vector<MultiPoly> eqs;
    for (int k = 0; k < n; ++k)
    {
        if (degrees[static_cast<std::size_t>(k)] < 1)
        {
            throw_invalid("system is not square-solvable");
        }
        MultiPoly g(n);
        Exponent e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(k)] = degrees[static_cast<std::size_t>(k)];
        g.add_term(e, Complex(1.0));
        g.add_term(Exponent(static_cast<std::size_t>(n), 0), Complex(-1.0));
        eqs.push_back(std::move(g));
    }

    std::vector<CVector> points;
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    while (true)
    {
        CVector pt(n);
        for (int k = 0; k < n; ++k)
        {
            const int deg = degrees[static_cast<std::size_t>(k)];
            pt[k] = std::polar(1.0, 2.0 * std::numbers::pi * digit[static_cast<std::size_t>(k)] / deg);
        }
        points.push_back(pt);
        int k = 0;
        while (k < n && ++digit[static_cast<std::size_t>(k)] == degrees[static_cast<std::size_t>(k)])
        {
            digit[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n)
        {
            break;
        }
    }
    return {SquareSystem(std::move(eqs)), std::move(points)};
}

double condition_estimate(const CMatrix& m)
{
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    if (!(smin > 0.0) || !std::isfinite(sv[0]))
    {
        return std::numeric_limits<double>::infinity();
    }
    return sv[0] / smin;
}

NewtonResult newton_refine(const SquareSystem& system, const CVector& point, double tol,
                           int max_iterations)
{
    CVector x = point;
    NewtonResult best{x, std::numeric_limits<double>::infinity()};
    for (int it = 0;; ++it)
    {
        const CVector f = system.evaluate(x);
        const double res = inf_norm(f);
        if (!std::isfinite(res))
        {
            break;
        }
        if (res < best.residual)
        {
            best = {x, res};
        }
        const CMatrix jac = system.jacobian(x);
        if (condition_estimate(jac) > kSingularCondition)
        {
            throw_solver("refinement at singular point");
        }
        if (res <= tol || it >= max_iterations)
        {
            break;
        }
        x -= jac.partialPivLu().solve(f);
    }
    return best;
}

namespace
{

struct Homotopy
{
    const SquareSystem& target;
    const SquareSystem& start;
    Complex gamma;

    CVector value(const CVector& u, double t) const
    {
        return gamma * t * start.evaluate(u) + (1.0 - t) * target.evaluate(u);
    }
    CMatrix du(const CVector& u, double t) const
    {
        return gamma * t * start.jacobian(u) + (1.0 - t) * target.jacobian(u);
    }
    CVector dt(const CVector& u) const
    {
        return gamma * start.evaluate(u) - target.evaluate(u);
    }
};

/// Newton corrector at fixed t; requires contraction of successive updates.
bool correct(const Homotopy& h, CVector& u, double t, const TrackOptions& opts)
{
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_corrector_iterations; ++it)
    {
        const CVector delta = h.du(u, t).partialPivLu().solve(h.value(u, t));
        if (!all_finite(delta))
        {
            return false;
        }
        u -= delta;
        const double size = delta.norm();
        if (size <= opts.corrector_tol * (1.0 + u.norm()))
        {
            return true;
        }
        if (size > 0.5 * previous)
        {
            return false;
        }
        previous = size;
    }
    return false;
}

double endpoint_threshold(const SquareSystem& system, const CVector& u, double tol)
{
    // Monomials at the endpoint scale like max(1, |u|)^deg.
    int deg = 0;
    for (int d : system.degrees())
    {
        deg = std::max(deg, d);
    }
    const double mag = std::max(1.0, inf_norm(u));
    return tol * (1.0 + system.coefficient_norm()) * std::pow(mag, deg);
}

} // namespace

PathResult track_path(const SquareSystem& target, const SquareSystem& start,
                      const CVector& start_point, const TrackOptions& opts)
{
    opts.validate();
    if (target.size() != start.size() || start_point.size() != target.size())
    {
        throw_invalid("homotopy dimensions do not match");
    }
    const Homotopy hom{target, start, homotopy_gamma(opts)};

    PathResult out;
    CVector u = start_point;
    double t = 1.0;
    double h = opts.initial_step;
    int streak = 0;

    while (t > 0.0)
    {
        if (out.steps >= opts.max_steps)
        {
            out.status = PathStatus::Failed;
            out.endpoint = u;
            out.residual = inf_norm(target.evaluate(u));
            return out;
        }
        h = std::min(h, t);
        const double t_next = (h >= t) ? 0.0 : t - h;

        // Euler predictor along du/dt = -H_u^{-1} H_t, stepping t downwards.
        const CVector tangent = hom.du(u, t).partialPivLu().solve(-hom.dt(u));
        CVector candidate = u - (t - t_next) * tangent;
        const bool ok = all_finite(tangent) && correct(hom, candidate, t_next, opts);
        ++out.steps;

        if (ok)
        {
            u = candidate;
            t = t_next;
            if (++streak >= 4)
            {
                h = std::min(1.5 * h, opts.max_step);
                streak = 0;
            }
            if (inf_norm(u) > opts.divergence_threshold)
            {
                out.status = PathStatus::Diverged;
                out.endpoint = u;
                out.residual = std::numeric_limits<double>::infinity();
                return out;
            }
        }
        else
        {
            h *= 0.5;
            streak = 0;
            if (h < opts.min_step)
            {
                // Step underflow. A path that has already grown far beyond
                // the unit scale is heading to a solution at infinity.
                const bool escaping = inf_norm(u) >= std::sqrt(opts.divergence_threshold);
                out.status = escaping ? PathStatus::Diverged : PathStatus::Failed;
                out.endpoint = u;
                out.residual = inf_norm(target.evaluate(u));
                return out;
            }
        }
    }

    out.endpoint = u;
    try
    {
        const auto refined = newton_refine(target, u, endpoint_threshold(target, u, opts.endpoint_tol), 10);
        out.endpoint = refined.point;
        out.residual = refined.residual;
        out.status = refined.residual <= endpoint_threshold(target, refined.point, opts.endpoint_tol)
                         ? PathStatus::Converged
                         : PathStatus::Failed;
    }
    catch (const Error&)
    {
        out.residual = inf_norm(target.evaluate(u));
        out.status = PathStatus::Failed;
    }
    return out;
}

SolutionSet solve_system(const SquareSystem& system, const TrackOptions& opts)
{
    opts.validate();
    // Row-normalized copy for tracking; row scaling leaves the solution set
    // and Newton steps unchanged.
    std::vector<MultiPoly> scaled;
    for (const auto& eq : system.equations())
    {
        MultiPoly p(eq.variables());
        const double norm = eq.max_abs_coefficient();
        for (const auto& [e, c] : eq.terms())
        {
            p.add_term(e, c / norm);
        }
        scaled.push_back(std::move(p));
    }
    const SquareSystem target(std::move(scaled));
    const StartSystem start = total_degree_start(target);

    SolutionSet out;
    out.path_count = static_cast<int>(start.points.size());

    struct Endpoint
    {
        CVector point;
        double residual;
        double condition;
    };
    std::vector<Endpoint> found;
    for (const auto& pt : start.points)
    {
        PathResult r = track_path(target, start.system, pt, opts);
        if (r.status == PathStatus::Diverged)
        {
            ++out.diverged;
            continue;
        }
        if (r.status == PathStatus::Failed)
        {
            ++out.failed;
            continue;
        }
        // Final polish and acceptance on the caller's (unscaled) system.
        try
        {
            const double thr = endpoint_threshold(system, r.endpoint, opts.endpoint_tol);
            auto refined = newton_refine(system, r.endpoint, thr, 5);
            if (refined.residual > endpoint_threshold(system, refined.point, opts.endpoint_tol))
            {
                ++out.failed;
                continue;
            }
            ++out.converged;
            found.push_back({refined.point, refined.residual,
                             condition_estimate(system.jacobian(refined.point))});
        }
        catch (const Error&)
        {
            ++out.failed;
        }
    }

    if (found.empty())
    {
        throw_solver("no solutions found");
    }

    // Deterministic dedup: lowest residual wins, ties by lexicographic order.
    std::sort(found.begin(), found.end(), [](const Endpoint& a, const Endpoint& b) {
        if (a.residual != b.residual)
        {
            return a.residual < b.residual;
        }
        return lex_less(a.point, b.point);
    });
    std::vector<Endpoint> kept;
    for (auto& e : found)
    {
        const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Endpoint& k) {
            return (k.point - e.point).norm() <= opts.dedup_tol;
        });
        if (!duplicate)
        {
            kept.push_back(std::move(e));
        }
    }
    std::sort(kept.begin(), kept.end(),
              [](const Endpoint& a, const Endpoint& b) { return lex_less(a.point, b.point); });
    for (auto& k : kept)
    {
        out.solutions.push_back(std::move(k.point));
        out.residuals.push_back(k.residual);
        out.conditions.push_back(k.condition);
    }
    return out;
}

} // namespace dhprony
