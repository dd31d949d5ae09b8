///
/// \file errors.hpp
///
/// Exception hierarchy. Every failure raised by the library derives from
/// prolate::Error so callers (and the CLI) can map categories onto exit codes.
///
#ifndef PROLATE_ERRORS_HPP
#define PROLATE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prolate
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A point outside the group or dual group, or a function evaluated off its domain.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Invalid numeric parameter (bandwidth, size, rank, ...).
class ParameterError : public Error
{
public:
    using Error::Error;
};

/// Objects that do not belong together (band on the wrong dual group, ...).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Input data violating a structural requirement, e.g. non-Hermitian sequences.
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// Symbol grid too coarse for the requested operator size.
class ResolutionError : public Error
{
public:
    using Error::Error;
};

/// Solver failures and out-of-tolerance numerical results.
class NumericError : public Error
{
public:
    using Error::Error;
};

class IndexError : public Error
{
public:
    using Error::Error;
};

/// Retained spectral block of a truncated pseudoinverse is singular.
class RankError : public Error
{
public:
    using Error::Error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Hypothesis of a convergence theorem fails (level set of positive measure).
class HypothesisError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
          m_offset(byte_offset)
    {
    }

    std::size_t byte_offset() const noexcept
    {
        return m_offset;
    }

private:
    std::size_t m_offset;
};

} // namespace prolate

#endif // PROLATE_ERRORS_HPP
