#include "jst/spectral.hpp"

#include <cmath>

#include "jst/core.hpp"

namespace jst {

SpectralTransform::SpectralTransform(const CoefficientProfile& p, GridWindow window,
                                     int circle_samples)
    : profile_(p), window_(window) {
    if (circle_samples < 4 || circle_samples % 2 != 0)
        throw std::invalid_argument("SpectralTransform: circle_samples must be even and >= 4");
    if (!(window.lo < 0 && 0 < window.hi))
        throw std::invalid_argument("SpectralTransform: window must straddle 0");

    const int M = circle_samples;
    const int half = M / 2;
    measure_.theta_grid = VectorXc(half);
    measure_.angles = VectorXr(half);
    measure_.dphi = 2.0 * M_PI / M;
    for (int k = 0; k < half; ++k) {
        measure_.angles[k] = M_PI * (2.0 * k + 1.0) / M;
        measure_.theta_grid[k] = std::polar(1.0, measure_.angles[k]);
    }

    e_plus_ = jost_table(p, measure_.theta_grid, Side::plus, window);
    e_minus_ = jost_table(p, measure_.theta_grid, Side::minus, window);

    // a.c. density 1/(2 pi |alpha|^2) per unit angle; the grid never touches
    // theta^2 = 1, so no pole handling is needed here. The window straddles
    // the origin, so the Wronskian bracket can sit at n = 0.
    const int i0 = window.index(0), i1 = window.index(1);
    measure_.ac_weight = VectorXr(half);
    for (int k = 0; k < half; ++k) {
        const Complex theta = measure_.theta_grid[k];
        const Complex W = p.a(0) * (e_plus_(k, i0) * e_minus_(k, i1) -
                                    e_minus_(k, i0) * e_plus_(k, i1));
        const Complex alpha = 2.0 * theta / (1.0 - theta * theta) * W;
        measure_.ac_weight[k] = 1.0 / (2.0 * M_PI * std::norm(alpha));
    }

    if (!p.is_free()) {
        measure_.point_masses = find_eigenvalues(p, window);
        e_bound_ = MatrixXr(measure_.point_masses.size(), window.size());
        for (std::size_t j = 0; j < measure_.point_masses.size(); ++j) {
            const auto ep = bound_state_jost(p, measure_.point_masses[j].theta, window);
            e_bound_.row(static_cast<Eigen::Index>(j)) = ep.values().real().transpose();
        }
    } else {
        e_bound_ = MatrixXr(0, window.size());
    }
}

TransformedPair SpectralTransform::forward(const ComplexSequence& f) const {
    if (!(f.window() == window_))
        throw std::invalid_argument("SpectralTransform::forward: window mismatch");
    TransformedPair F;
    F.plus_component = e_plus_ * f.values();
    F.minus_component = e_minus_ * f.values();
    const VectorXr fr = f.values().real(), fi = f.values().imag();
    const VectorXr er = e_bound_ * fr, ei = e_bound_ * fi;
    F.eigen_components = VectorXc(er.size());
    for (Eigen::Index j = 0; j < er.size(); ++j) F.eigen_components[j] = Complex(er[j], ei[j]);
    return F;
}

ComplexSequence SpectralTransform::inverse(const TransformedPair& F,
                                           bool with_point_masses) const {
    if (F.plus_component.size() != measure_.theta_grid.size() ||
        F.minus_component.size() != measure_.theta_grid.size() ||
        F.eigen_components.size() != static_cast<Eigen::Index>(measure_.point_masses.size()))
        throw std::invalid_argument("SpectralTransform::inverse: grid mismatch");

    VectorXc wp = F.plus_component, wm = F.minus_component;
    for (Eigen::Index k = 0; k < wp.size(); ++k) {
        const double wgt = measure_.ac_weight[k] * measure_.dphi;
        wp[k] *= wgt;
        wm[k] *= wgt;
    }
    VectorXc out = e_plus_.adjoint() * wp + e_minus_.adjoint() * wm;
    if (with_point_masses) {
        for (std::size_t j = 0; j < measure_.point_masses.size(); ++j) {
            const Complex c = measure_.point_masses[j].gamma * F.eigen_components[j];
            out += c * e_bound_.row(static_cast<Eigen::Index>(j)).transpose();
        }
    }
    return ComplexSequence(window_, std::move(out));
}

double SpectralTransform::norm_squared(const TransformedPair& F, bool with_point_masses) const {
    double total = 0.0;
    for (Eigen::Index k = 0; k < F.plus_component.size(); ++k)
        total += (std::norm(F.plus_component[k]) + std::norm(F.minus_component[k])) *
                 measure_.ac_weight[k] * measure_.dphi;
    if (with_point_masses)
        for (std::size_t j = 0; j < measure_.point_masses.size(); ++j)
            total += measure_.point_masses[j].gamma * std::norm(F.eigen_components[j]);
    return total;
}

double SpectralTransform::parseval_residual(const ComplexSequence& f,
                                            bool with_point_masses) const {
    const double f2 = f.squaredNorm();
    if (f2 == 0.0) throw std::invalid_argument("parseval_residual: zero input");
    return std::abs(norm_squared(forward(f), with_point_masses) - f2) / f2;
}

double SpectralTransform::diagonalization_residual(const ComplexSequence& f) const {
    if (!(f.window() == window_))
        throw std::invalid_argument("diagonalization_residual: window mismatch");
    const double edge_tol = 1e-14 * (1.0 + f.max_abs());
    for (int n : {window_.lo, window_.lo + 1, window_.hi - 1, window_.hi})
        if (std::abs(f[n]) > edge_tol)
            throw std::invalid_argument("diagonalization_residual: f must vanish near the window edge");

    // H f windowed exactly: with two zero sites at each edge the zero-padded
    // interior stencil is the true H f.
    ComplexSequence hf(window_);
    const ComplexSequence interior = apply_operator(profile_, f);
    for (int n = window_.lo + 1; n <= window_.hi - 1; ++n) hf[n] = interior[n];

    const TransformedPair Ff = forward(f);
    const TransformedPair Fhf = forward(hf);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < measure_.theta_grid.size(); ++k) {
        const double lambda = std::cos(measure_.angles[k]);
        worst = std::max(worst, std::abs(Fhf.plus_component[k] - lambda * Ff.plus_component[k]));
        worst = std::max(worst, std::abs(Fhf.minus_component[k] - lambda * Ff.minus_component[k]));
    }
    for (std::size_t j = 0; j < measure_.point_masses.size(); ++j)
        worst = std::max(worst, std::abs(Fhf.eigen_components[j] -
                                         measure_.point_masses[j].lambda * Ff.eigen_components[j]));
    return worst;
}

void SpectralTransform::apply_evolution_phase(TransformedPair& F, double t) const {
    for (Eigen::Index k = 0; k < measure_.theta_grid.size(); ++k) {
        const Complex phase = std::exp(Complex(0.0, -t * std::cos(measure_.angles[k])));
        F.plus_component[k] *= phase;
        F.minus_component[k] *= phase;
    }
    for (std::size_t j = 0; j < measure_.point_masses.size(); ++j)
        F.eigen_components[j] *= std::exp(Complex(0.0, -t * measure_.point_masses[j].lambda));
}

}  // namespace jst
