#include "jst/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "jst/core.hpp"
#include "jst/csv.hpp"

namespace jst {

namespace {

constexpr double kPoleGuard = 1e-6;  // |1 - theta^2| below this: extrapolate

int evaluation_site(GridWindow w) {
    // Any interior site works for n-independent brackets; prefer the origin.
    if (w.contains(0) && w.contains(1)) return 0;
    return w.lo + w.size() / 2 - 1;
}

Complex alpha_at(const CoefficientProfile& p, Complex theta, GridWindow w) {
    const auto ep = compute_jost(p, theta, Side::plus, w);
    const auto em = compute_jost(p, theta, Side::minus, w);
    const Complex W = wronskian(p, ep.values, em.values, evaluation_site(w));
    return 2.0 * theta / (1.0 - theta * theta) * W;
}

Complex beta_at(const CoefficientProfile& p, Complex theta, Side side, GridWindow w) {
    const Complex theta_inv = 1.0 / theta;
    const auto e_opp = compute_jost(p, theta, side == Side::plus ? Side::minus : Side::plus, w);
    const auto e_inv = compute_jost(p, theta_inv, side, w);
    const Complex W = wronskian(p, e_opp.values, e_inv.values, evaluation_site(w));
    const double sign = side == Side::plus ? 1.0 : -1.0;
    return sign * 2.0 * theta / (1.0 - theta * theta) * W;
}

bool on_unit_circle(Complex theta) { return std::abs(std::abs(theta) - 1.0) <= 1e-12; }

}  // namespace

Complex wronskian(const CoefficientProfile& p, const ComplexSequence& f,
                  const ComplexSequence& g, int n) {
    if (!f.window().contains(n) || !f.window().contains(n + 1) || !g.window().contains(n) ||
        !g.window().contains(n + 1))
        throw std::out_of_range("wronskian: n, n+1 must lie in both windows");
    return p.a(n) * (f[n] * g[n + 1] - g[n] * f[n + 1]);
}

CircleValue alpha_of_theta(const CoefficientProfile& p, Complex theta, GridWindow w) {
    const double r = std::abs(theta);
    if (r == 0.0 || r > 1.0 + 1e-12)
        throw std::domain_error("alpha_of_theta: need 0 < |theta| <= 1");
    if (std::abs(1.0 - theta * theta) < kPoleGuard) {
        // Two-point limit extrapolation along the same radius; the symmetric
        // average cancels the O(delta) term of the smooth numerator.
        const double delta = 1e-3;
        const Complex rot = std::polar(1.0, delta);
        const Complex v = 0.5 * (alpha_at(p, theta * rot, w) + alpha_at(p, theta / rot, w));
        return {v, true};
    }
    return {alpha_at(p, theta, w), false};
}

CircleValue beta_of_theta(const CoefficientProfile& p, Complex theta, Side side, GridWindow w) {
    if (!on_unit_circle(theta))
        throw std::domain_error("beta_of_theta: |theta| = 1 required");
    if (std::abs(1.0 - theta * theta) < kPoleGuard) {
        const double delta = 1e-3;
        const Complex rot = std::polar(1.0, delta);
        const Complex v =
            0.5 * (beta_at(p, theta * rot, side, w) + beta_at(p, theta / rot, side, w));
        return {v, true};
    }
    return {beta_at(p, theta, side, w), false};
}

double scattering_relation_residual(const CoefficientProfile& p, const VectorXc& theta_grid,
                                    GridWindow w) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < theta_grid.size(); ++k) {
        const Complex theta = theta_grid[k];
        if (!on_unit_circle(theta))
            throw std::domain_error("scattering_relation_residual: grid must lie on |theta| = 1");
        if (std::abs(1.0 - theta * theta) < kPoleGuard)
            throw std::domain_error("scattering_relation_residual: grid touches theta^2 = 1");
        const Complex theta_inv = 1.0 / theta;
        const auto ep = compute_jost(p, theta, Side::plus, w).values;
        const auto em = compute_jost(p, theta, Side::minus, w).values;
        const auto ep_inv = compute_jost(p, theta_inv, Side::plus, w).values;
        const auto em_inv = compute_jost(p, theta_inv, Side::minus, w).values;
        const Complex alpha = alpha_at(p, theta, w);
        const Complex beta_p = beta_at(p, theta, Side::plus, w);
        const Complex beta_m = beta_at(p, theta, Side::minus, w);
        for (int n = w.lo; n <= w.hi; ++n) {
            // e^+ = alpha e^-(1/theta) + beta_- e^-;  e^- = alpha e^+(1/theta) + beta_+ e^+
            const Complex lhs_p = ep[n];
            const Complex rhs_p = alpha * em_inv[n] + beta_m * em[n];
            const Complex lhs_m = em[n];
            const Complex rhs_m = alpha * ep_inv[n] + beta_p * ep[n];
            worst = std::max(worst, std::abs(lhs_p - rhs_p) / std::max(1.0, std::abs(lhs_p)));
            worst = std::max(worst, std::abs(lhs_m - rhs_m) / std::max(1.0, std::abs(lhs_m)));
        }
    }
    return worst;
}

VectorXc rotated_circle_grid(int M) {
    if (M < 2) throw std::invalid_argument("rotated_circle_grid: M < 2");
    VectorXc grid(M);
    for (int k = 0; k < M; ++k)
        grid[k] = std::polar(1.0, M_PI * (2.0 * k + 1.0) / M);
    return grid;
}

ComplexSequence bound_state_jost(const CoefficientProfile& p, double theta, GridWindow w) {
    if (theta == 0.0 || !(std::abs(theta) < 1.0))
        throw std::domain_error("bound_state_jost: theta must lie in (-1,1) \\ {0}");
    const auto ep = compute_jost(p, Complex(theta, 0.0), Side::plus, w).values;
    if (p.is_free()) return ep;
    const auto em = compute_jost(p, Complex(theta, 0.0), Side::minus, w).values;

    // Matching site at the left edge of the perturbation, nudged off any
    // accidental zero of the eigenfunction.
    int m = p.window_lo;
    for (int cand : {p.window_lo, p.window_lo - 1, p.window_lo + 1})
        if (w.contains(cand) && std::abs(em[cand]) > std::abs(em[m])) m = cand;
    if (std::abs(em[m]) == 0.0)
        throw std::runtime_error("bound_state_jost: degenerate matching site");
    const Complex scale = ep[m] / em[m];

    ComplexSequence out(w);
    for (int n = w.lo; n <= w.hi; ++n) out[n] = n >= m ? ep[n] : scale * em[n];
    return out;
}

int argument_principle_zero_count(const CoefficientProfile& p, GridWindow w, double radius,
                                  int samples) {
    double total_turn = 0.0;
    Complex prev = alpha_at(p, radius * std::polar(1.0, M_PI / samples), w);
    Complex first = prev;
    for (int k = 1; k <= samples; ++k) {
        const double phi = M_PI * (2.0 * k + 1.0) / samples;
        const Complex cur =
            k == samples ? first : alpha_at(p, radius * std::polar(1.0, phi), w);
        if (std::abs(prev) == 0.0 || std::abs(cur) == 0.0)
            throw std::runtime_error("argument principle: alpha vanishes on the contour");
        total_turn += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total_turn / (2.0 * M_PI)));
}

std::vector<BoundState> find_eigenvalues(const CoefficientProfile& p, GridWindow w) {
    if (!(w.lo < 0 && 0 < w.hi)) throw std::invalid_argument("find_eigenvalues: window must straddle 0");

    // Symmetric tridiagonal truncation of H on the window.
    const int N = w.size();
    VectorXr diag(N), offdiag(N - 1);
    for (int n = w.lo; n <= w.hi; ++n) diag[w.index(n)] = p.b(n);
    for (int n = w.lo; n < w.hi; ++n) offdiag[w.index(n)] = p.a(n);
    Eigen::SelfAdjointEigenSolver<MatrixXr> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("find_eigenvalues: tridiagonal solver failed");

    std::vector<double> candidates;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (std::abs(lambda) > 1.0 + 1e-7) candidates.push_back(lambda);
    }

    std::vector<double> thetas;
    for (double lambda : candidates) thetas.push_back(theta_of_lambda(lambda));
    std::sort(thetas.begin(), thetas.end());

    auto alpha_real = [&](double theta) { return alpha_at(p, Complex(theta, 0.0), w).real(); };

    std::vector<BoundState> states;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        double guess = thetas[i];
        // Bracket width capped by half the gap to neighboring candidates, so
        // near-degenerate pairs (deep double wells) polish to distinct roots.
        double width = 1e-3;
        if (i > 0) width = std::min(width, 0.45 * (thetas[i] - thetas[i - 1]));
        if (i + 1 < thetas.size()) width = std::min(width, 0.45 * (thetas[i + 1] - thetas[i]));
        width = std::max(width, 1e-12);

        double lo = guess - width, hi = guess + width;
        double flo = alpha_real(lo), fhi = alpha_real(hi);
        double root = guess;
        if (flo == 0.0) {
            root = lo;
        } else if (fhi == 0.0) {
            root = hi;
        } else if (flo * fhi < 0.0) {
            for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fmid = alpha_real(mid);
                if (fmid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                (flo * fmid < 0.0 ? hi : lo) = mid;
                (flo * fmid < 0.0 ? fhi : flo) = fmid;
            }
            root = 0.5 * (lo + hi);
        }
        // else: no sign change within the bracket; keep the matrix value and
        // let the argument-principle cross-check below arbitrate.

        BoundState s;
        s.theta = root;
        s.lambda = lambda_of_theta(Complex(root, 0.0)).real();
        s.gamma = 1.0 / bound_state_jost(p, root, w).squaredNorm();
        states.push_back(s);
    }

    const int winding = argument_principle_zero_count(p, w);
    if (winding != static_cast<int>(states.size()))
        throw std::runtime_error(
            "find_eigenvalues: eigensolver count disagrees with the argument principle "
            "(window too small)");
    return states;
}

ScatteringData compute_scattering(const CoefficientProfile& p, int M, GridWindow w,
                                  int alpha_coeff_count) {
    ScatteringData data;
    data.theta_grid = rotated_circle_grid(M);
    data.alpha = VectorXc(M);
    data.beta_plus = VectorXc(M);
    data.beta_minus = VectorXc(M);
    data.total_product = total_product(p);

    // The rotated grid is closed under conjugation: conj(theta_k) = theta_{M-1-k},
    // so one pair of tables serves both theta and 1/theta.
    MatrixXc ep = jost_table(p, data.theta_grid, Side::plus, w);
    MatrixXc em = jost_table(p, data.theta_grid, Side::minus, w);
    const int n0 = evaluation_site(w);
    const int i0 = w.index(n0), i1 = w.index(n0 + 1);

    for (int k = 0; k < M; ++k) {
        const Complex theta = data.theta_grid[k];
        const int kc = M - 1 - k;
        const Complex pref = 2.0 * theta / (1.0 - theta * theta);
        const Complex W_pm = p.a(n0) * (ep(k, i0) * em(k, i1) - em(k, i0) * ep(k, i1));
        const Complex W_bp = p.a(n0) * (em(k, i0) * ep(kc, i1) - ep(kc, i0) * em(k, i1));
        const Complex W_bm = p.a(n0) * (ep(k, i0) * em(kc, i1) - em(kc, i0) * ep(k, i1));
        data.alpha[k] = pref * W_pm;
        data.beta_plus[k] = pref * W_bp;
        data.beta_minus[k] = -pref * W_bm;
    }

    // Wronskian drift of W(e^+, e^-) across the window (diagnostic).
    double drift = 0.0;
    for (int k = 0; k < M; ++k) {
        Complex w_ref(0.0, 0.0);
        double local = 0.0, scale = 0.0;
        for (int n = w.lo; n < w.hi; ++n) {
            const Complex W = p.a(n) * (ep(k, w.index(n)) * em(k, w.index(n + 1)) -
                                        em(k, w.index(n)) * ep(k, w.index(n + 1)));
            if (n == w.lo)
                w_ref = W;
            else
                local = std::max(local, std::abs(W - w_ref));
            scale = std::max(scale, std::abs(W));
        }
        if (scale > 0.0) drift = std::max(drift, local / scale);
    }
    data.wronskian_drift = drift;

    data.bound_states = find_eigenvalues(p, w);

    // Taylor coefficients of alpha from an interior circle: on |theta| = r < 1
    // the tail aliases with weight r^M, whereas on the boundary the K_j need
    // not decay at all.
    const double r = 0.95;
    const int J = std::min(alpha_coeff_count, M / 2);
    VectorXc inner(M);
    for (int k = 0; k < M; ++k) inner[k] = alpha_at(p, r * data.theta_grid[k], w);
    data.alpha_coeffs = VectorXr(J);
    VectorXc cp = VectorXc::Ones(M);
    double rpow = 1.0;
    for (int j = 0; j < J; ++j) {
        Complex sum(0.0, 0.0);
        for (int k = 0; k < M; ++k) sum += inner[k] * cp[k];
        sum /= static_cast<double>(M) * rpow;
        data.alpha_coeffs[j] = (data.total_product * sum).real();
        for (int k = 0; k < M; ++k) cp[k] *= std::conj(data.theta_grid[k]);
        rpow *= r;
    }
    return data;
}

void save_scattering_csv(const ScatteringData& data, const std::filesystem::path& path) {
    csv::Writer w(path, "theta_re,theta_im,alpha_re,alpha_im,beta_re,beta_im");
    for (Eigen::Index k = 0; k < data.theta_grid.size(); ++k)
        w.row({csv::fmt(data.theta_grid[k].real()), csv::fmt(data.theta_grid[k].imag()),
               csv::fmt(data.alpha[k].real()), csv::fmt(data.alpha[k].imag()),
               csv::fmt(data.beta_plus[k].real()), csv::fmt(data.beta_plus[k].imag())});
}

void save_eigenvalues_csv(const std::vector<BoundState>& states,
                          const std::filesystem::path& path) {
    csv::Writer w(path, "theta_j,lambda_j,gamma_j");
    for (const auto& s : states)
        w.row({csv::fmt(s.theta), csv::fmt(s.lambda), csv::fmt(s.gamma)});
}

}  // namespace jst
