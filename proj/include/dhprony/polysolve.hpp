///
/// \file polysolve.hpp
///
/// Small square systems of multivariate complex polynomials and a
/// total-degree homotopy continuation solver for them.
///
/// The homotopy is
///
///   H(u, t) = gamma * t * g(u) + (1 - t) * f(u),
///
/// tracked from t = 1 (start system g_k = u_k^{deg f_k} - 1) to t = 0 with an
/// Euler tangent predictor and a Newton corrector. There is no projective
/// endgame: paths whose norm blows up are reported as diverged.
///
#ifndef DHPRONY_POLYSOLVE_HPP
#define DHPRONY_POLYSOLVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <dhprony/types.hpp>

namespace dhprony
{

using Exponent = std::vector<int>;

///
/// Sparse polynomial in a fixed number of variables. Zero coefficients are
/// never stored.
///
class MultiPoly
{
public:
    explicit MultiPoly(int variables);

    /// Adds `coef * u^exponent` to the polynomial.
    void add_term(const Exponent& exponent, Complex coef);

    int variables() const noexcept
    {
        return m_vars;
    }
    int total_degree() const noexcept;
    std::size_t term_count() const noexcept
    {
        return m_terms.size();
    }
    const std::map<Exponent, Complex>& terms() const noexcept
    {
        return m_terms;
    }
    /// Coefficient of u^exponent (zero when absent).
    Complex coefficient(const Exponent& exponent) const;
    double max_abs_coefficient() const noexcept;

    Complex evaluate(std::span<const Complex> point) const;
    MultiPoly differentiate(int var) const;

private:
    int m_vars;
    std::map<Exponent, Complex> m_terms;
};

///
/// n polynomials in n variables, with cached partial derivatives.
///
class SquareSystem
{
public:
    explicit SquareSystem(std::vector<MultiPoly> equations);

    int size() const noexcept
    {
        return static_cast<int>(m_eqs.size());
    }
    const std::vector<MultiPoly>& equations() const noexcept
    {
        return m_eqs;
    }
    const MultiPoly& operator[](int k) const
    {
        return m_eqs.at(static_cast<std::size_t>(k));
    }
    std::vector<int> degrees() const;
    double coefficient_norm() const noexcept;

    CVector evaluate(const CVector& point) const;
    CMatrix jacobian(const CVector& point) const;

private:
    struct CompiledTerm
    {
        Complex coef;
        std::vector<int> exponent;
    };
    using Compiled = std::vector<CompiledTerm>;

    static Compiled compile(const MultiPoly& p);
    Complex eval_compiled(const Compiled& c, const std::vector<std::vector<Complex>>& powers) const;
    std::vector<std::vector<Complex>> power_table(const CVector& point) const;

    std::vector<MultiPoly> m_eqs;
    std::vector<Compiled> m_values;
    std::vector<std::vector<Compiled>> m_partials;
    int m_max_exponent = 0;
};

struct TrackOptions
{
    double initial_step = 0.05;
    double min_step = 1e-14;
    double max_step = 0.1;
    double corrector_tol = 1e-10;
    int max_corrector_iterations = 4;
    int max_steps = 10000;
    double divergence_threshold = 1e8;
    double endpoint_tol = 1e-12;
    double dedup_tol = 1e-8;
    /// When unset, drawn uniformly from the unit circle using `seed`.
    std::optional<Complex> gamma;
    std::uint64_t seed = 0x5eed;

    void validate() const;
};

enum class PathStatus
{
    Converged,
    Diverged,
    Failed
};

struct PathResult
{
    PathStatus status = PathStatus::Failed;
    CVector endpoint;
    double residual = 0.0;
    int steps = 0;
};

struct StartSystem
{
    SquareSystem system;
    std::vector<CVector> points;
};

struct SolutionSet
{
    std::vector<CVector> solutions;
    std::vector<double> residuals;
    std::vector<double> conditions;
    int path_count = 0;
    int converged = 0;
    int diverged = 0;
    int failed = 0;

    std::size_t size() const noexcept
    {
        return solutions.size();
    }
};

///
/// Start system u_k^{deg f_k} - 1 = 0 and its prod(deg f_k) roots-of-unity
/// solutions, enumerated with the first variable varying fastest.
///
StartSystem total_degree_start(const SquareSystem& target);

/// The homotopy constant used for a solve with these options.
Complex homotopy_gamma(const TrackOptions& opts);

PathResult track_path(const SquareSystem& target, const SquareSystem& start,
                      const CVector& start_point, const TrackOptions& opts);

/// Tracks every total-degree path; returns deduplicated finite endpoints
/// sorted lexicographically by (real, imaginary) of each coordinate.
SolutionSet solve_system(const SquareSystem& system, const TrackOptions& opts = {});

struct NewtonResult
{
    CVector point;
    double residual = 0.0;
};

/// Jacobians with condition estimate above this are treated as singular.
inline constexpr double kSingularCondition = 1e14;

NewtonResult newton_refine(const SquareSystem& system, const CVector& point, double tol,
                           int max_iterations);

/// sigma_max / sigma_min (infinity when singular).
double condition_estimate(const CMatrix& m);

} // namespace dhprony

#endif
