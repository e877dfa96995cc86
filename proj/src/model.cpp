#include <dhprony/model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace dhprony
{

MultiplicityVector::MultiplicityVector(std::vector<int> parts) : m_parts(std::move(parts))
{
    if (m_parts.empty())
    {
        throw_invalid("multiplicity vector must have at least one part");
    }
    for (int d : m_parts)
    {
        if (d < 1)
        {
            throw_invalid("multiplicities must be positive");
        }
        m_total += d;
    }
}

namespace
{

MultiplicityVector multiplicities_of(const std::vector<std::vector<Complex>>& coefficients)
{
    std::vector<int> parts;
    parts.reserve(coefficients.size());
    for (const auto& c : coefficients)
    {
        parts.push_back(static_cast<int>(c.size()));
    }
    return MultiplicityVector(std::move(parts));
}

} // namespace

PronyParameters::PronyParameters(std::vector<Complex> nodes,
                                 std::vector<std::vector<Complex>> coefficients)
    : m_nodes(std::move(nodes)),
      m_coefficients(std::move(coefficients)),
      m_mult(multiplicities_of(m_coefficients))
{
    if (m_nodes.size() != m_coefficients.size())
    {
        throw_invalid("node count does not match coefficient groups");
    }
    for (std::size_t j = 0; j < m_nodes.size(); ++j)
    {
        if (!(std::abs(std::abs(m_nodes[j]) - 1.0) <= kUnitModulusTolerance))
        {
            throw_invalid("node " + std::to_string(j) + " is not on the unit circle");
        }
        if (m_coefficients[j].back() == Complex(0.0))
        {
            throw_invalid("leading coefficient of node " + std::to_string(j) + " vanishes");
        }
        for (std::size_t i = 0; i < j; ++i)
        {
            if (m_nodes[i] == m_nodes[j])
            {
                throw_invalid("nodes must be pairwise distinct");
            }
        }
    }
}

int PronyParameters::node_index(int j) const
{
    int pos = 0;
    for (int i = 0; i < j; ++i)
    {
        pos += m_mult[i] + 1;
    }
    return pos + m_mult[j];
}

int PronyParameters::coefficient_index(int l, int j) const
{
    return node_index(j) - m_mult[j] + l;
}

std::vector<Complex> PronyParameters::flatten() const
{
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m_mult.parameter_count()));
    for (std::size_t j = 0; j < m_nodes.size(); ++j)
    {
        out.insert(out.end(), m_coefficients[j].begin(), m_coefficients[j].end());
        out.push_back(m_nodes[j]);
    }
    return out;
}

Complex unit_power(Complex z, long long k)
{
    if (k == 0)
    {
        return Complex(1.0);
    }
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    long double angle = static_cast<long double>(std::arg(z)) * static_cast<long double>(k);
    angle = std::fmod(angle, two_pi);
    const double modulus = std::pow(std::abs(z), static_cast<double>(k));
    return std::polar(modulus, static_cast<double>(angle));
}

MeasurementSequence forward_map(const PronyParameters& params, int count)
{
    if (count < 1)
    {
        throw_invalid("forward map needs at least one measurement");
    }
    MeasurementSequence out;
    out.values.assign(static_cast<std::size_t>(count), Complex(0.0));
    const auto& nodes = params.nodes();
    const auto& coefs = params.coefficients();
    for (int k = 0; k < count; ++k)
    {
        Complex sum(0.0);
        for (std::size_t j = 0; j < nodes.size(); ++j)
        {
            // Horner in k; the l = 0 term is a_{0,j} (0^0 = 1).
            Complex amp(0.0);
            for (auto it = coefs[j].rbegin(); it != coefs[j].rend(); ++it)
            {
                amp = amp * static_cast<double>(k) + *it;
            }
            sum += unit_power(nodes[j], k) * amp;
        }
        out.values[static_cast<std::size_t>(k)] = sum;
    }
    return out;
}

MeasurementSequence add_noise(const MeasurementSequence& meas, const NoiseSpec& spec)
{
    if (meas.values.empty())
    {
        throw_invalid("cannot perturb an empty measurement sequence");
    }
    if (spec.level < 0.0)
    {
        throw_invalid("noise level must be nonnegative");
    }
    MeasurementSequence out = meas;
    if (spec.kind == NoiseKind::None || spec.level == 0.0)
    {
        return out;
    }
    std::mt19937_64 gen(spec.seed);
    if (spec.kind == NoiseKind::BoundedUniform)
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        // Shrink slightly so rounding can never reach the closed bound.
        const double radius = spec.level * (1.0 - 1e-12);
        for (auto& v : out.values)
        {
            const double r = radius * std::sqrt(unit(gen));
            v += std::polar(r, phase(gen));
        }
    }
    else
    {
        std::normal_distribution<double> normal(0.0, spec.level / std::numbers::sqrt2);
        for (auto& v : out.values)
        {
            const double re = normal(gen);
            const double im = normal(gen);
            v += Complex(re, im);
        }
    }
    return out;
}

MeasurementSequence decimate(const MeasurementSequence& meas, int stride, int count)
{
    if (meas.stride != 1)
    {
        throw_invalid("decimation expects raw (stride 1) measurements");
    }
    if (stride < 1 || count < 1)
    {
        throw_invalid("decimation stride and count must be positive");
    }
    if (static_cast<long long>(stride) * (count - 1) > meas.size() - 1)
    {
        throw_invalid("insufficient measurements for requested decimation");
    }
    MeasurementSequence out;
    out.stride = stride;
    out.origin = meas.origin;
    out.values.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
    {
        out.values.push_back(meas.values[static_cast<std::size_t>(stride) * static_cast<std::size_t>(k)]);
    }
    return out;
}

PronyParameters scale_map(const PronyParameters& params, int p)
{
    if (p < 1)
    {
        throw_invalid("scaling parameter must be positive");
    }
    std::vector<Complex> nodes;
    std::vector<std::vector<Complex>> coefs;
    for (std::size_t j = 0; j < params.nodes().size(); ++j)
    {
        nodes.push_back(p == 1 ? params.nodes()[j] : unit_power(params.nodes()[j], p));
        std::vector<Complex> b = params.coefficients()[j];
        double scale = 1.0;
        for (auto& c : b)
        {
            c *= scale;
            scale *= p;
        }
        coefs.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        for (std::size_t j = 0; j < i; ++j)
        {
            if (std::abs(nodes[i] - nodes[j]) <= 1e-12)
            {
                throw_invalid("decimation aliased two nodes together");
            }
        }
    }
    return PronyParameters(std::move(nodes), std::move(coefs));
}

SeparationReport separation(std::span<const Complex> nodes)
{
    SeparationReport rep;
    const std::size_t s = nodes.size();
    if (s == 0)
    {
        throw_invalid("separation of an empty node set");
    }
    rep.per_node.assign(s, std::numbers::pi);
    if (s == 1)
    {
        rep.global = std::numbers::pi;
        rep.diameter = std::numbers::pi;
        return rep;
    }
    rep.diameter = 0.0;
    for (std::size_t i = 0; i < s; ++i)
    {
        for (std::size_t j = i + 1; j < s; ++j)
        {
            double dist = std::fmod(std::abs(std::arg(nodes[i]) - std::arg(nodes[j])),
                                    2.0 * std::numbers::pi);
            if (dist > std::numbers::pi)
            {
                dist = 2.0 * std::numbers::pi - dist;
            }
            rep.per_node[i] = std::min(rep.per_node[i], dist);
            rep.per_node[j] = std::min(rep.per_node[j], dist);
            rep.diameter = std::max(rep.diameter, dist);
        }
    }
    rep.global = *std::min_element(rep.per_node.begin(), rep.per_node.end());
    return rep;
}

int choose_decimation(int N, int R)
{
    if (R < 1)
    {
        throw_invalid("parameter count must be positive");
    }
    if (N < R)
    {
        throw_invalid("not enough measurements");
    }
    return N / R;
}

double node_error(std::span<const Complex> truth, std::span<const Complex> estimate)
{
    if (truth.size() != estimate.size())
    {
        throw_invalid("node error: size mismatch");
    }
    std::vector<std::size_t> perm(truth.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do
    {
        double worst = 0.0;
        for (std::size_t j = 0; j < truth.size(); ++j)
        {
            worst = std::max(worst, std::abs(truth[j] - estimate[perm[j]]));
        }
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace dhprony
