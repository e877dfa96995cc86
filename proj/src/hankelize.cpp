#include <dhprony/hankelize.hpp>

#include <cstdlib>
#include <memory>
#include <mutex>

namespace dhprony
{

namespace
{

constexpr int kMaxTotalDegree = 40;

} // namespace

std::int64_t binomial(int n, int k)
{
    if (n < 0 || n > 62)
    {
        throw_invalid("binomial: n out of range");
    }
    if (k < 0 || k > n)
    {
        return 0;
    }
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i)
    {
        // r * (n - k + i) / i is exact at every step.
        r = r * (n - k + i) / i;
    }
    return r;
}

SymmetricCoefficients elementary_symmetric(std::span<const Complex> values)
{
    // poly[i] = coefficient of x^{m-i} in prod (x + v).
    std::vector<Complex> poly{Complex(1.0)};
    for (const Complex& v : values)
    {
        poly.push_back(Complex(0.0));
        for (std::size_t i = poly.size() - 1; i > 0; --i)
        {
            poly[i] += v * poly[i - 1];
        }
    }
    return {std::move(poly)};
}

std::vector<Complex> prony_polynomial(std::span<const Complex> nodes, const MultiplicityVector& mult)
{
    if (static_cast<int>(nodes.size()) != mult.count())
    {
        throw_invalid("node count does not match multiplicity vector");
    }
    std::vector<Complex> repeated;
    for (std::size_t j = 0; j < nodes.size(); ++j)
    {
        repeated.insert(repeated.end(), static_cast<std::size_t>(mult[static_cast<int>(j)]), -nodes[j]);
    }
    // prod (x - z) = prod (x + (-z)): sigma_i(-z) is the x^{d-i} coefficient.
    const auto sym = elementary_symmetric(repeated);
    const int d = mult.total_degree();
    std::vector<Complex> c(static_cast<std::size_t>(d) + 1);
    for (int l = 0; l <= d; ++l)
    {
        c[static_cast<std::size_t>(l)] = sym.sigma[static_cast<std::size_t>(d - l)];
    }
    return c;
}

std::int64_t TauExpansion::max_weight() const noexcept
{
    std::int64_t w = 0;
    for (const auto& t : terms)
    {
        for (const auto& [e, c] : t)
        {
            w = std::max<std::int64_t>(w, std::llabs(c));
        }
    }
    return w;
}

Complex TauExpansion::evaluate(int l, std::span<const Complex> point) const
{
    Complex sum(0.0);
    for (const auto& [e, c] : terms.at(static_cast<std::size_t>(l)))
    {
        Complex mono(static_cast<double>(c));
        for (std::size_t j = 0; j < e.size(); ++j)
        {
            for (int r = 0; r < e[j]; ++r)
            {
                mono *= point[j];
            }
        }
        sum += mono;
    }
    return sum;
}

namespace
{

TauExpansion expand(const MultiplicityVector& mult)
{
    const int s = mult.count();
    const int d = mult.total_degree();
    if (d > kMaxTotalDegree)
    {
        throw_invalid("total degree too large for exact tau expansion");
    }
    // Running product as a polynomial in x with coefficients in Z[u].
    std::vector<std::map<Exponent, std::int64_t>> acc(1);
    acc[0][Exponent(static_cast<std::size_t>(s), 0)] = 1;

    for (int j = 0; j < s; ++j)
    {
        const int dj = mult[j];
        std::vector<std::map<Exponent, std::int64_t>> next(acc.size() + static_cast<std::size_t>(dj));
        // (x - u_j)^{d_j} = sum_m binom(d_j, m) (-1)^{d_j-m} u_j^{d_j-m} x^m
        for (int m = 0; m <= dj; ++m)
        {
            const std::int64_t factor = binomial(dj, m) * (((dj - m) % 2 == 0) ? 1 : -1);
            for (std::size_t xdeg = 0; xdeg < acc.size(); ++xdeg)
            {
                for (const auto& [e, c] : acc[xdeg])
                {
                    Exponent ne = e;
                    ne[static_cast<std::size_t>(j)] += dj - m;
                    auto& slot = next[xdeg + static_cast<std::size_t>(m)][ne];
                    slot += c * factor;
                }
            }
        }
        for (auto& t : next)
        {
            std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
        }
        acc = std::move(next);
    }
    return {mult.parts(), std::move(acc)};
}

} // namespace

const TauExpansion& tau_expansion(const MultiplicityVector& mult)
{
    static std::mutex guard;
    static std::map<std::vector<int>, std::unique_ptr<const TauExpansion>> cache;

    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(mult.parts());
    if (it == cache.end())
    {
        it = cache.emplace(mult.parts(), std::make_unique<const TauExpansion>(expand(mult))).first;
    }
    return *it->second;
}

HankelSystem build_hankel_system(const MeasurementSequence& decimated, const MultiplicityVector& mult)
{
    const int s = mult.count();
    const int d = mult.total_degree();
    const int R = mult.parameter_count();
    if (decimated.size() < R)
    {
        throw_invalid("need at least R = d+s decimated measurements");
    }
    const TauExpansion& tau = tau_expansion(mult);

    std::vector<MultiPoly> eqs;
    for (int k = 0; k < s; ++k)
    {
        MultiPoly f(s);
        for (int i = 0; i <= d; ++i)
        {
            const Complex n = decimated.values[static_cast<std::size_t>(k + i)];
            for (const auto& [e, c] : tau.terms[static_cast<std::size_t>(i)])
            {
                f.add_term(e, n * static_cast<double>(c));
            }
        }
        if (f.term_count() == 0)
        {
            throw_invalid("measurements produce an identically zero equation");
        }
        eqs.push_back(std::move(f));
    }
    return {SquareSystem(std::move(eqs)), decimated.stride, mult,
            std::vector<Complex>(decimated.values.begin(), decimated.values.begin() + R),
            tau.max_weight()};
}

std::vector<Complex> single_node_polynomial(const MeasurementSequence& decimated, int d)
{
    if (d < 1)
    {
        throw_invalid("degree must be positive");
    }
    if (decimated.size() < d + 2)
    {
        throw_invalid("insufficient decimated measurements for the elimination polynomial");
    }
    std::vector<Complex> q(static_cast<std::size_t>(d) + 1);
    for (int l = 0; l <= d; ++l)
    {
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        q[static_cast<std::size_t>(d - l)] =
            sign * static_cast<double>(binomial(d, l)) * decimated.values[static_cast<std::size_t>(l) + 1];
    }
    return q;
}

JacobianFactorization closed_form_jacobian(const PronyParameters& scaled)
{
    const auto& w = scaled.nodes();
    const auto& b = scaled.coefficients();
    const auto& mult = scaled.multiplicities();
    const int s = mult.count();

    JacobianFactorization out;
    out.vandermonde = CMatrix(s, s);
    out.scaling = CMatrix::Zero(s, s);
    out.product = CMatrix(s, s);

    for (int j = 0; j < s; ++j)
    {
        const int dj = mult[j];
        const Complex wj = w[static_cast<std::size_t>(j)];
        const Complex lead = b[static_cast<std::size_t>(j)].back();
        double factorial = 1.0;
        for (int r = 2; r <= dj; ++r)
        {
            factorial *= r;
        }
        Complex gaps(1.0);
        for (int i = 0; i < s; ++i)
        {
            if (i == j)
            {
                continue;
            }
            const Complex gap = wj - w[static_cast<std::size_t>(i)];
            if (std::abs(gap) <= 1e-14)
            {
                throw_solver("closed-form Jacobian: coincident nodes (singular configuration)");
            }
            gaps *= std::pow(gap, mult[i]);
        }

        // B_jj = -d_j! w_j^{d_j-1} b_{d_j-1,j} prod_{i != j} (w_j - w_i)^{d_i}
        out.scaling(j, j) = -factorial * std::pow(wj, dj - 1) * lead * gaps;
        for (int k = 0; k < s; ++k)
        {
            out.vandermonde(k, j) = std::pow(wj, k);
            // Entry-wise: -d_j! w_j^{k+d_j-1} b_{d_j-1,j} prod(...)
            out.product(k, j) = -factorial * std::pow(wj, k + dj - 1) * lead * gaps;
        }
    }
    return out;
}

} // namespace dhprony
