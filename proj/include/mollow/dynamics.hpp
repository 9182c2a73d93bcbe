#pragma once
#include "mollow/generators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <vector>

namespace mollow {

/// exp(R t) for a fixed R. Diagonalizes once; falls back to scaling-and-squaring
/// when the eigenvector matrix is ill-conditioned (near exceptional points).
template<class T>
class Exponential {
public:
    static constexpr double max_condition = 1e8;

    explicit Exponential(Super<T> const& R) : R_{R} {
        Eigen::ComplexEigenSolver<Super<T>> es{R};
        if (es.info() == Eigen::Success) {
            V_ = es.eigenvectors();
            Eigen::JacobiSVD<Super<T>> svd{V_};
            auto const sv = svd.singularValues();
            auto const smin = sv(sv.size() - 1);
            if (smin > 0 && sv(0) / smin <= T(max_condition)) {
                lambda_ = es.eigenvalues();
                Vinv_ = V_.inverse();
                diagonal_ = true;
            }
        }
    }

    Super<T> operator()(T t) const {
        if (t == 0)
            return Super<T>::Identity();
        if (diagonal_) {
            Vec4<T> const e = (lambda_ * t).array().exp().matrix();
            return V_ * e.asDiagonal() * Vinv_;
        }
        return (R_ * t).exp();
    }

    bool diagonalized() const { return diagonal_; }

private:
    Super<T> R_, V_, Vinv_;
    Vec4<T> lambda_;
    bool diagonal_ = false;
};

template<class T>
Super<T> propagator(Super<T> const& R, T t) {
    if (t < 0)
        throw Error{ErrorKind::Validation, "propagator: t must be non-negative"};
    return Exponential<T>{R}(t);
}

template<class T>
Super<T> propagator(Generator<T> const& G, T t) { return propagator(G.R, t); }

template<class T = double>
struct Trajectory {
    std::vector<T> times;
    std::vector<QubitState<T>> states;
    Frame frame = Frame::LabRotatingAtDrive;
};

template<class T>
Trajectory<T> evolve(Generator<T> const& G, QubitState<T> const& rho0, std::vector<T> const& times) {
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0))
            throw Error{ErrorKind::Validation, "evolve: times must be non-negative"};
        if (i > 0 && !(times[i] > times[i - 1]))
            throw Error{ErrorKind::Validation, "evolve: times must be strictly increasing"};
    }
    Exponential<T> const P{G.R};
    Vec4<T> const v0 = rho0.vec();
    Trajectory<T> traj;
    traj.times = times;
    traj.frame = G.frame;
    traj.states.reserve(times.size());
    for (auto t : times)
        traj.states.push_back(QubitState<T>::from_vec(P(t) * v0));
    return traj;
}

/// Normalized kernel vector of R (Tr rho = 1).
template<class T>
Vec4<T> steady_vec(Super<T> const& R) {
    static constexpr double rank_tol = 1e-10;
    Eigen::JacobiSVD<Super<T>> svd{R, Eigen::ComputeFullV};
    auto const sv = svd.singularValues();
    int dim = 0;
    for (int i = 0; i < 4; ++i)
        if (!(sv(0) > 0) || sv(i) / sv(0) < T(rank_tol))
            ++dim;
    if (dim != 1)
        throw DegeneracyError{dim};
    Vec4<T> v = svd.matrixV().col(3);
    auto const tr = v(0) + v(3);
    if (std::abs(tr) < T(1e-300))
        throw Error{ErrorKind::Conditioning, "steady state: kernel vector is traceless"};
    return v / tr;
}

template<class T>
QubitState<T> steady_state(Generator<T> const& G) { return QubitState<T>::from_vec(steady_vec(G.R)); }

} // namespace mollow
