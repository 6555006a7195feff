#include "jst/evolution.hpp"

#include <cmath>

#include "jst/csv.hpp"

namespace jst {

namespace {

// Mass may spread by at most ~1 site per unit time (group velocity of the
// free band); require ceil(|horizon|) + min_padding free sites beyond the
// packet's measurable support.
void check_padding(const WavePacket& u0, double horizon, const EvolutionConfig& cfg) {
    const GridWindow w = u0.window();
    const double floor = cfg.boundary_tolerance * u0.values.norm();
    int slo = w.hi + 1, shi = w.lo - 1;
    for (int n = w.lo; n <= w.hi; ++n) {
        if (std::abs(u0.values[n]) > floor) {
            slo = std::min(slo, n);
            shi = std::max(shi, n);
        }
    }
    if (shi < slo) return;  // zero packet
    const int pad = static_cast<int>(std::ceil(std::abs(horizon))) + cfg.min_padding;
    if (slo - w.lo < pad || w.hi - shi < pad)
        throw std::invalid_argument(
            "evolution: window padding violation; need " + std::to_string(pad) +
            " free sites beyond the packet support");
}

void check_boundary(const ComplexSequence& u, double tol_rel) {
    const double floor = tol_rel * u.norm();
    const GridWindow w = u.window();
    if (std::abs(u[w.lo]) > floor || std::abs(u[w.hi]) > floor)
        throw std::runtime_error(
            "evolution: boundary reflection detected; rerun with larger window padding");
}

}  // namespace

// LU factors of (I + i h/2 A). The matrix is strictly diagonally dominant for
// |h| (||a|| + ||b||) < 1, so the pivotless elimination is safe in this regime.
CayleyStepper::CayleyStepper(const CoefficientProfile& p, GridWindow w, double h,
                             AffineOperator op)
    : h_(h) {
    const int N = w.size();
    if (N < 3) throw std::invalid_argument("CayleyStepper: window too small");
    sub_ = VectorXc(N);
    diag_ = VectorXc(N);
    sup_ = VectorXc(N);
    const Complex ih2(0.0, 0.5 * h);
    for (int n = w.lo; n <= w.hi; ++n) {
        const int i = w.index(n);
        diag_[i] = 1.0 + ih2 * (op.alpha * p.b(n) + op.beta);
        sup_[i] = n < w.hi ? ih2 * op.alpha * p.a(n) : Complex(0.0);
        sub_[i] = n > w.lo ? ih2 * op.alpha * p.a(n - 1) : Complex(0.0);
    }
    mult_ = VectorXc(N);
    diag_mod_ = diag_;
    for (int i = 1; i < N; ++i) {
        mult_[i] = sub_[i] / diag_mod_[i - 1];
        diag_mod_[i] -= mult_[i] * sup_[i - 1];
    }
}

void CayleyStepper::step(VectorXc& u) const {
    const Eigen::Index N = u.size();
    if (N != diag_.size()) throw std::invalid_argument("CayleyStepper::step: size mismatch");
    static thread_local VectorXc r;
    r.resize(N);
    // r = (I - i h/2 A) u
    for (Eigen::Index i = 0; i < N; ++i) {
        r[i] = (2.0 - diag_[i]) * u[i];
        if (i > 0) r[i] -= sub_[i] * u[i - 1];
        if (i < N - 1) r[i] -= sup_[i] * u[i + 1];
    }
    for (Eigen::Index i = 1; i < N; ++i) r[i] -= mult_[i] * r[i - 1];
    u[N - 1] = r[N - 1] / diag_mod_[N - 1];
    for (Eigen::Index i = N - 2; i >= 0; --i) u[i] = (r[i] - sup_[i] * u[i + 1]) / diag_mod_[i];
}

WavePacket evolve_spectral(const SpectralTransform& transform, const WavePacket& u0, double t,
                           const EvolutionConfig& cfg) {
    if (!(u0.window() == transform.window()))
        throw std::invalid_argument("evolve_spectral: window mismatch");
    check_padding(u0, t, cfg);
    const double norm0 = u0.norm();
    if (t == 0.0) return u0;

    TransformedPair F = transform.forward(u0.values);
    if (!cfg.include_bound_states) F.eigen_components.setZero();
    transform.apply_evolution_phase(F, t);
    WavePacket out;
    out.time = u0.time + t;
    out.values = transform.inverse(F, cfg.include_bound_states);

    if (norm0 > 0.0) {
        // the negative-control mode deliberately sheds the bound-state share,
        // so unitarity is only enforced for the full transform
        if (cfg.include_bound_states && std::abs(out.norm() - norm0) > 1e-6 * norm0)
            throw std::runtime_error("evolve_spectral: norm drift beyond tolerance");
        check_boundary(out.values, cfg.boundary_tolerance);
    }
    return out;
}

WavePacket evolve_spectral(const CoefficientProfile& p, const WavePacket& u0, double t,
                           const EvolutionConfig& cfg) {
    SpectralTransform transform(p, u0.window(), cfg.circle_samples);
    return evolve_spectral(transform, u0, t, cfg);
}

WavePacket evolve_direct(const CoefficientProfile& p, const WavePacket& u0, double t,
                         const EvolutionConfig& cfg, AffineOperator op) {
    check_padding(u0, op.alpha * t, cfg);
    WavePacket out;
    out.time = u0.time + t;
    out.values = u0.values;
    if (t == 0.0) return out;

    const double norm0 = u0.norm();
    const GridWindow w = u0.window();
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / cfg.time_step)));
    const CayleyStepper stepper(p, w, t / steps, op);

    VectorXc u = u0.values.values();
    for (int s = 0; s < steps; ++s) stepper.step(u);
    out.values = ComplexSequence(w, std::move(u));

    if (norm0 > 0.0) {
        if (std::abs(out.norm() - norm0) > 1e-9 * norm0)
            throw std::runtime_error("evolve_direct: norm drift beyond solver tolerance");
        check_boundary(out.values, cfg.boundary_tolerance);
    }
    return out;
}

WavePacket evolve(const CoefficientProfile& p, const WavePacket& u0, double t,
                  EvolutionMethod method, const EvolutionConfig& cfg) {
    return method == EvolutionMethod::spectral ? evolve_spectral(p, u0, t, cfg)
                                               : evolve_direct(p, u0, t, cfg);
}

double bessel_j_series(int k, double t) {
    if (k < 0) {
        const double v = bessel_j_series(-k, t);
        return (-k) % 2 ? -v : v;  // J_{-k} = (-1)^k J_k
    }
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    const double half = std::abs(t) / 2.0;
    const double log_first = k * std::log(half) - std::lgamma(k + 1.0);
    if (log_first < -745.0) return 0.0;  // below the double range: treat as 0
    double term = std::exp(log_first);
    if (t < 0.0 && k % 2) term = -term;
    double sum = term;
    const double q = half * half;
    for (int s = 0; s < 256; ++s) {
        term *= -q / ((s + 1.0) * (k + s + 1.0));
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum) + 5e-324) break;
    }
    return sum;
}

Complex free_kernel(int n, int m, double t) {
    const int k = n - m;
    const double J = bessel_j_series(k, t);
    switch (((k % 4) + 4) % 4) {  // (-i)^k
        case 0: return {J, 0.0};
        case 1: return {0.0, -J};
        case 2: return {-J, 0.0};
        default: return {0.0, J};
    }
}

double cross_validate(const CoefficientProfile& p, const WavePacket& u0, double t,
                      const EvolutionConfig& cfg) {
    const double norm0 = u0.norm();
    if (norm0 == 0.0) return 0.0;
    const WavePacket a = evolve_spectral(p, u0, t, cfg);
    const WavePacket b = evolve_direct(p, u0, t, cfg);
    return (a.values.values() - b.values.values()).norm() / norm0;
}

void save_packet_csv(const WavePacket& u, const std::filesystem::path& path) {
    csv::Writer w(path, "t,n,re_u,im_u,abs_u");
    for (int n = u.window().lo; n <= u.window().hi; ++n)
        w.row({csv::fmt(u.time), csv::fmt(n), csv::fmt(u.values[n].real()),
               csv::fmt(u.values[n].imag()), csv::fmt(std::abs(u.values[n]))});
}

WavePacket load_packet_csv(const std::filesystem::path& path) {
    auto rows = csv::read(path, "t,n,re_u,im_u,abs_u");
    if (rows.empty()) throw std::runtime_error("empty packet file: " + path.string());
    const std::string ctx = path.string();
    const int lo = csv::parse_int(rows.front()[1], ctx);
    const int hi = csv::parse_int(rows.back()[1], ctx);
    WavePacket u;
    u.time = csv::parse_double(rows.front()[0], ctx);
    u.values = ComplexSequence({lo, hi});
    int expected = lo;
    for (const auto& row : rows) {
        const int n = csv::parse_int(row[1], ctx);
        if (n != expected) throw std::runtime_error("packet rows must be consecutive in " + ctx);
        u.values[n] = Complex(csv::parse_double(row[2], ctx), csv::parse_double(row[3], ctx));
        ++expected;
    }
    return u;
}

}  // namespace jst
