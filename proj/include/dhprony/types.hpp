///
/// \file types.hpp
/// Common scalar/matrix aliases and the library error type.
///
#ifndef DHPRONY_TYPES_HPP
#define DHPRONY_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dhprony
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

///
/// Broad failure category. The CLI maps these onto exit codes
/// (InvalidInput -> 3, SolverFailure -> 2).
///
enum class ErrorKind
{
    InvalidInput,
    SolverFailure
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

[[noreturn]] inline void throw_invalid(const std::string& what)
{
    throw Error(ErrorKind::InvalidInput, what);
}

[[noreturn]] inline void throw_solver(const std::string& what)
{
    throw Error(ErrorKind::SolverFailure, what);
}

inline CVector to_cvector(const std::vector<Complex>& v)
{
    return Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<Complex> to_std(const CVector& v)
{
    return std::vector<Complex>(v.data(), v.data() + v.size());
}

} // namespace dhprony

#endif
