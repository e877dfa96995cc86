#include <dhprony/conditioning.hpp>

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/QR>

namespace dhprony
{

namespace
{

std::vector<double> abs_row_sums(const CMatrix& m)
{
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        out[static_cast<std::size_t>(i)] = m.row(i).cwiseAbs().sum();
    }
    return out;
}

void fill_separation(ConditionReport& r, const PronyParameters& params)
{
    const auto sep = separation(params);
    r.delta = sep.global;
    r.delta_star = sep.diameter;
}

CMatrix checked_inverse(const CMatrix& m, const char* message)
{
    Eigen::FullPivLU<CMatrix> lu(m);
    CMatrix scaled = m;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j)
    {
        const double norm = scaled.col(j).norm();
        if (norm > 0.0)
        {
            scaled.col(j) /= norm;
        }
    }
    if (!lu.isInvertible() || condition_estimate(scaled) > kSingularCondition)
    {
        throw_solver(message);
    }
    return lu.inverse();
}

double support_weight(const MultiPoly& eq, const CVector& u)
{
    double sum = 0.0;
    for (const auto& [e, c] : eq.terms())
    {
        double mono = 1.0;
        for (std::size_t j = 0; j < e.size(); ++j)
        {
            mono *= std::pow(std::abs(u(static_cast<Eigen::Index>(j))), e[j]);
        }
        sum += mono;
    }
    return sum;
}

std::vector<double> kappa_from(const HankelSystem& system, const CMatrix& K, const CVector& u,
                               double delta_alpha)
{
    const int s = system.equations.size();
    std::vector<double> weight(static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k)
    {
        weight[static_cast<std::size_t>(k)] = support_weight(system.equations[k], u);
    }
    std::vector<double> kappa(static_cast<std::size_t>(s), 0.0);
    for (int i = 0; i < s; ++i)
    {
        for (int k = 0; k < s; ++k)
        {
            kappa[static_cast<std::size_t>(i)] +=
                std::abs(K(i, k)) * weight[static_cast<std::size_t>(k)] * delta_alpha;
        }
    }
    return kappa;
}

} // namespace

CMatrix forward_jacobian(const PronyParameters& params, int p, int count)
{
    if (p < 1 || count < 1)
    {
        throw_invalid("forward_jacobian: stride and count must be positive");
    }
    const auto& mult = params.multiplicities();
    CMatrix J(count, mult.parameter_count());
    for (int j = 0; j < mult.count(); ++j)
    {
        const Complex z = params.nodes()[static_cast<std::size_t>(j)];
        const auto& a = params.coefficients()[static_cast<std::size_t>(j)];
        const int col_z = params.node_index(j);
        for (int k = 0; k < count; ++k)
        {
            const long long idx = static_cast<long long>(p) * k;
            const double t = static_cast<double>(idx);
            const Complex zk = unit_power(z, idx);
            double tl = 1.0;
            Complex dz(0.0);
            for (int l = 0; l < mult[j]; ++l)
            {
                J(k, params.coefficient_index(l, j)) = zk * tl;
                dz += a[static_cast<std::size_t>(l)] * tl * t;
                tl *= t;
            }
            // d/dz z^{pk} (pk)^l = (pk)^{l+1} z^{pk-1}
            J(k, col_z) = idx == 0 ? Complex(0.0) : dz * unit_power(z, idx - 1);
        }
    }
    return J;
}

ConditionReport cn_full(const PronyParameters& params, int N)
{
    const int R = params.multiplicities().parameter_count();
    if (N < R)
    {
        throw_invalid("cn_full: need N >= R");
    }
    const CMatrix J = forward_jacobian(params, 1, N);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(J);
    cod.setThreshold(static_cast<double>(std::max(J.rows(), J.cols())) *
                     std::numeric_limits<double>::epsilon());
    if (cod.rank() < R)
    {
        throw_solver("Jacobian rank-deficient at data point");
    }
    ConditionReport r;
    r.full = abs_row_sums(cod.pseudoInverse());
    r.N = N;
    r.p = 1;
    fill_separation(r, params);
    return r;
}

ConditionReport cn_decimated(const PronyParameters& params, int p)
{
    const int R = params.multiplicities().parameter_count();
    const CMatrix J = forward_jacobian(params, p, R);
    ConditionReport r;
    r.decimated = abs_row_sums(checked_inverse(J, "decimation destroyed identifiability (aliasing)"));
    r.N = R * p;
    r.p = p;
    fill_separation(r, params);
    return r;
}

std::vector<double> node_entries(const PronyParameters& params, std::span<const double> values)
{
    std::vector<double> out;
    for (int j = 0; j < params.node_count(); ++j)
    {
        out.push_back(values[static_cast<std::size_t>(params.node_index(j))]);
    }
    return out;
}

std::vector<double> kappa_sensitivity(const HankelSystem& system, const CVector& solution,
                                      double delta_alpha)
{
    const CMatrix D = system.equations.jacobian(solution);
    const CMatrix K = checked_inverse(D, "kappa: system Jacobian singular at solution");
    return kappa_from(system, K, solution, delta_alpha);
}

std::vector<double> kappa_closed_form(const HankelSystem& system, const PronyParameters& scaled,
                                      double delta_alpha)
{
    const auto f = closed_form_jacobian(scaled);
    const CMatrix Vinv = checked_inverse(f.vandermonde, "kappa: Vandermonde matrix singular");
    CMatrix K = Vinv;
    for (Eigen::Index j = 0; j < K.rows(); ++j)
    {
        K.row(j) /= f.scaling(j, j);
    }
    return kappa_from(system, K, to_cvector(scaled.nodes()), delta_alpha);
}

std::vector<double> inverse_vandermonde_row_sums(std::span<const Complex> nodes)
{
    const auto s = static_cast<Eigen::Index>(nodes.size());
    CMatrix V(s, s);
    for (Eigen::Index j = 0; j < s; ++j)
    {
        Complex w(1.0);
        for (Eigen::Index k = 0; k < s; ++k)
        {
            V(k, j) = w;
            w *= nodes[static_cast<std::size_t>(j)];
        }
    }
    return abs_row_sums(checked_inverse(V, "Vandermonde matrix singular"));
}

std::vector<double> gautschi_bound(std::span<const Complex> nodes)
{
    std::vector<double> out(nodes.size(), 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        for (std::size_t j = 0; j < nodes.size(); ++j)
        {
            if (j != i)
            {
                out[i] *= (1.0 + std::abs(nodes[j])) / std::abs(nodes[j] - nodes[i]);
            }
        }
    }
    return out;
}

} // namespace dhprony
