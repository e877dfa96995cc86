#ifndef DHPRONY_TESTS_SUPPORT_HPP
#define DHPRONY_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <dhprony/model.hpp>

namespace testing
{

using dhprony::Complex;

inline std::vector<Complex> torus_nodes(int s, double min_sep, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (;;)
    {
        std::vector<Complex> out;
        for (int j = 0; j < s; ++j)
        {
            out.push_back(std::polar(1.0, angle(gen)));
        }
        bool ok = true;
        for (int i = 0; i < s; ++i)
        {
            for (int j = i + 1; j < s; ++j)
            {
                ok = ok && std::abs(std::arg(out[i] / out[j])) >= min_sep;
            }
        }
        if (ok)
        {
            return out;
        }
    }
}

inline dhprony::PronyParameters random_params(const std::vector<int>& parts, double min_sep,
                                              std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    auto nodes = torus_nodes(static_cast<int>(parts.size()), min_sep, gen);
    std::vector<std::vector<Complex>> coefs;
    for (int d : parts)
    {
        std::vector<Complex> a;
        for (int l = 0; l < d; ++l)
        {
            a.push_back(std::polar(mag(gen), angle(gen)));
        }
        coefs.push_back(std::move(a));
    }
    return dhprony::PronyParameters(std::move(nodes), std::move(coefs));
}

/// Direct evaluation of sum_j z_j^k sum_l a_{l,j} k^l with std::pow.
inline Complex naive_moment(const dhprony::PronyParameters& x, int k)
{
    Complex m(0.0);
    for (int j = 0; j < x.node_count(); ++j)
    {
        Complex inner(0.0);
        const auto& a = x.coefficients()[static_cast<std::size_t>(j)];
        for (std::size_t l = 0; l < a.size(); ++l)
        {
            inner += a[l] * std::pow(static_cast<double>(k), static_cast<double>(l));
        }
        m += std::pow(x.nodes()[static_cast<std::size_t>(j)], k) * inner;
    }
    return m;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace testing

#endif
