///
/// \file model.hpp
///
/// The confluent Prony data model
///
///   m_k = sum_j z_j^k sum_{l<d_j} a_{l,j} k^l,   k = 0..N-1,
///
/// with unit-modulus nodes z_j. Houses the forward map, noise injection,
/// decimation, the scaling map and node separation.
///
#ifndef DHPRONY_MODEL_HPP
#define DHPRONY_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <dhprony/types.hpp>

namespace dhprony
{

///
/// Orders (d_1, ..., d_s) of the s nodes. d is the total degree and
/// R = d + s the number of unknowns.
///
class MultiplicityVector
{
public:
    explicit MultiplicityVector(std::vector<int> parts);

    int count() const noexcept
    {
        return static_cast<int>(m_parts.size());
    }
    int total_degree() const noexcept
    {
        return m_total;
    }
    int parameter_count() const noexcept
    {
        return m_total + count();
    }
    int operator[](int j) const
    {
        return m_parts.at(static_cast<std::size_t>(j));
    }
    const std::vector<int>& parts() const noexcept
    {
        return m_parts;
    }

    bool operator==(const MultiplicityVector&) const = default;

private:
    std::vector<int> m_parts;
    int m_total = 0;
};

/// Nodes farther than this from the unit circle are rejected.
inline constexpr double kUnitModulusTolerance = 1e-12;

///
/// A point of the data space: nodes z_j, coefficients a_{l,j} and the
/// multiplicity structure. Validated on construction.
///
class PronyParameters
{
public:
    PronyParameters(std::vector<Complex> nodes,
                    std::vector<std::vector<Complex>> coefficients);

    const std::vector<Complex>& nodes() const noexcept
    {
        return m_nodes;
    }
    const std::vector<std::vector<Complex>>& coefficients() const noexcept
    {
        return m_coefficients;
    }
    const MultiplicityVector& multiplicities() const noexcept
    {
        return m_mult;
    }
    int node_count() const noexcept
    {
        return m_mult.count();
    }

    /// Position of z_j in the layout (a_{0,1}..a_{d_1-1,1}, z_1, ..., z_s).
    int node_index(int j) const;
    /// Position of a_{l,j} in the same layout.
    int coefficient_index(int l, int j) const;

    /// Flattened parameter vector in the layout above.
    std::vector<Complex> flatten() const;

private:
    std::vector<Complex> m_nodes;
    std::vector<std::vector<Complex>> m_coefficients;
    MultiplicityVector m_mult;
};

struct MeasurementSequence
{
    std::vector<Complex> values;
    int stride = 1;
    int origin = 0;

    int size() const noexcept
    {
        return static_cast<int>(values.size());
    }
};

enum class NoiseKind
{
    None,
    BoundedUniform,
    Gaussian
};

struct NoiseSpec
{
    NoiseKind kind = NoiseKind::BoundedUniform;
    double level = 0.0;
    std::uint64_t seed = 0;
};

struct SeparationReport
{
    std::vector<double> per_node;
    double global = 0.0;
    double diameter = 0.0;
};

/// z^k for |z| ~ 1, computed from the argument in extended precision so the
/// error does not grow with k.
Complex unit_power(Complex z, long long k);

MeasurementSequence forward_map(const PronyParameters& params, int count);

///
/// Perturbs every value independently. Bounded-uniform draws from the open
/// disc of radius `level`; Gaussian uses independent real/imaginary parts of
/// standard deviation level/sqrt(2).
///
MeasurementSequence add_noise(const MeasurementSequence& meas, const NoiseSpec& spec);

MeasurementSequence decimate(const MeasurementSequence& meas, int stride, int count);

/// (a_{l,j}, z_j) -> (a_{l,j} p^l, z_j^p). Throws if two powered nodes coincide.
PronyParameters scale_map(const PronyParameters& params, int p);

///
/// Wrapped angular distances between node arguments. For a single node the
/// separation is reported as pi.
///
SeparationReport separation(std::span<const Complex> nodes);

inline SeparationReport separation(const PronyParameters& params)
{
    return separation(std::span<const Complex>(params.nodes()));
}

/// p* = floor(N / R).
int choose_decimation(int N, int R);

///
/// Max over nodes of |z_j - est_j| minimized over relabelings of the
/// estimate. Exhaustive over permutations (s is small).
///
double node_error(std::span<const Complex> truth, std::span<const Complex> estimate);

} // namespace dhprony

#endif
