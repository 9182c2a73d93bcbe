#pragma once
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace mollow {

template<class T> using Complex = std::complex<T>;
// Superoperator on vec(rho) = (rho00, rho01, rho10, rho11), row-major.
template<class T> using Super = Eigen::Matrix<Complex<T>, 4, 4>;
template<class T> using Vec4 = Eigen::Matrix<Complex<T>, 4, 1>;
template<class T> using Op2 = Eigen::Matrix<Complex<T>, 2, 2>;

enum class ErrorKind { Validation, Range, DegenerateDrive, Degeneracy, Conditioning, PeakNotFound, Scan, Io };

inline char const* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Range: return "range";
        case ErrorKind::DegenerateDrive: return "degenerate-drive";
        case ErrorKind::Degeneracy: return "degeneracy";
        case ErrorKind::Conditioning: return "conditioning";
        case ErrorKind::PeakNotFound: return "peak-not-found";
        case ErrorKind::Scan: return "scan";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string const& what) : std::runtime_error{what}, kind_{kind} {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class DegeneracyError : public Error {
public:
    explicit DegeneracyError(int dim)
        : Error{ErrorKind::Degeneracy, "steady state: kernel dimension is " + std::to_string(dim) + ", expected 1"},
          kernel_dim{dim} {}
    int kernel_dim;
};

/// Drive in the frame rotating at omega_d. Omega: amplitude, dw = omega_d - omega0: detuning.
template<class T = double>
struct DriveParams {
    T Omega = 0;
    T dw = 0;
    T wd = 1;

    T omega() const { return std::hypot(Omega, dw); }
    T beta() const { return std::atan2(dw, Omega); }
    T w0() const { return wd - dw; }
};

/// rho = [[1-n, alpha], [conj(alpha), n]]; index 0 = ground, 1 = excited.
template<class T = double>
struct QubitState {
    T n = 0;
    Complex<T> alpha = 0;

    T det() const { return n * (1 - n) - std::norm(alpha); }
    bool is_physical(T tol = T(1e-12)) const { return n >= -tol && n <= 1 + tol && det() >= -tol; }

    Vec4<T> vec() const { return Vec4<T>{Complex<T>(1 - n), alpha, std::conj(alpha), Complex<T>(n)}; }
    static QubitState from_vec(Vec4<T> const& v) { return {std::real(v(3)), v(1)}; }
};

template<class T = double>
struct LabRates {
    T down = 0, up = 0, zero = 0;

    T gamma_tilde() const { return (down + up) / 2 + 2 * zero; }
};

template<class T = double>
struct RateSet {
    T down = 0;      // Gamma_down
    T up = 0;        // Gamma_up
    T z0 = 0;        // Gamma_0^z
    T zplus = 0;     // Gamma_+^z
    T zminus = 0;    // Gamma_-^z
    T eps = 0;
    T eps_e = 0;
    T upsilon = 0;   // second-order (EID) curvature

    LabRates<T> lab() const { return {down, up, z0}; }
    bool is_valid() const {
        return down >= 0 && up >= 0 && z0 >= 0 && zplus >= 0 && zminus >= 0
            && down * (1 - std::abs(eps)) >= 0 && up * (1 - std::abs(eps_e)) >= 0;
    }
};

} // namespace mollow
