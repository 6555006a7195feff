#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>

namespace jst {

using Complex = std::complex<double>;
using VectorXr = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXr = Eigen::MatrixXd;
using MatrixXc = Eigen::MatrixXcd;

/// Closed integer range [lo, hi] of lattice sites. Empty when hi < lo.
struct GridWindow {
    int lo = 0;
    int hi = -1;

    constexpr bool empty() const { return hi < lo; }
    constexpr int size() const { return empty() ? 0 : hi - lo + 1; }
    constexpr bool contains(int n) const { return n >= lo && n <= hi; }
    constexpr int index(int n) const { return n - lo; }

    constexpr GridWindow shrunk(int k) const { return {lo + k, hi - k}; }
    constexpr GridWindow padded(int k) const { return {lo - k, hi + k}; }

    friend constexpr bool operator==(GridWindow a, GridWindow b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

/// Straddles the origin with the given margins; computation grids for
/// whole-line operators are required to contain 0 in their interior.
inline GridWindow make_computation_window(int lo, int hi) {
    if (!(lo < 0 && 0 < hi))
        throw std::invalid_argument("computation window must satisfy lo < 0 < hi");
    return {lo, hi};
}

/// Complex-valued sequence indexed over a GridWindow.
class ComplexSequence {
public:
    ComplexSequence() = default;
    explicit ComplexSequence(GridWindow w) : win_(w), v_(VectorXc::Zero(w.size())) {}
    ComplexSequence(GridWindow w, VectorXc values) : win_(w), v_(std::move(values)) {
        if (v_.size() != win_.size())
            throw std::invalid_argument("sequence length does not match window");
    }

    GridWindow window() const { return win_; }
    const VectorXc& values() const { return v_; }
    VectorXc& values() { return v_; }

    Complex operator[](int n) const { return v_[win_.index(n)]; }
    Complex& operator[](int n) { return v_[win_.index(n)]; }

    Complex at(int n) const {
        if (!win_.contains(n)) throw std::out_of_range("site outside window");
        return v_[win_.index(n)];
    }

    /// Value with zero extension outside the window.
    Complex value_or_zero(int n) const { return win_.contains(n) ? v_[win_.index(n)] : Complex(0); }

    double norm() const { return v_.norm(); }
    double squaredNorm() const { return v_.squaredNorm(); }
    double max_abs() const { return v_.size() ? v_.cwiseAbs().maxCoeff() : 0.0; }

private:
    GridWindow win_;
    VectorXc v_;
};

inline Complex inner_product(const ComplexSequence& f, const ComplexSequence& g) {
    if (!(f.window() == g.window()))
        throw std::invalid_argument("inner_product: window mismatch");
    return f.values().dot(g.values());  // conjugates the left argument
}

/// Snapshot of a wave function u(t, .) at a fixed time.
struct WavePacket {
    double time = 0.0;
    ComplexSequence values;

    GridWindow window() const { return values.window(); }
    double norm() const { return values.norm(); }
};

}  // namespace jst
