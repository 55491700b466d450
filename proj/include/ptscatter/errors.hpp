#pragma once

#include <stdexcept>
#include <string>

namespace ptscatter {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Scattering coefficients diverge at the requested point.
class SpectralSingularity : public Error {
public:
    SpectralSingularity(double flux, double gamma, double k, const std::string& what)
        : Error(what), flux_(flux), gamma_(gamma), k_(k) {}

    double flux() const noexcept { return flux_; }
    double gamma() const noexcept { return gamma_; }
    double k() const noexcept { return k_; }

private:
    double flux_;
    double gamma_;
    double k_;
};

/// The scattering system is rank deficient but consistent (0/0 point).
/// Coefficients exist only as a limit; use coefficients_with_limits().
class DegeneratePoint : public Error {
public:
    DegeneratePoint(double k, const std::string& what) : Error(what), k_(k) {}
    double k() const noexcept { return k_; }

private:
    double k_;
};

/// Transfer matrix requested where t_R = 0.
class NotInvertible : public Error {
public:
    using Error::Error;
};

/// Exhaustive search refused because the input is too large.
class SizeLimit : public Error {
public:
    using Error::Error;
};

/// Wavepacket reached the truncated chain ends before the horizon.
class HorizonError : public Error {
public:
    using Error::Error;
};

} // namespace ptscatter
