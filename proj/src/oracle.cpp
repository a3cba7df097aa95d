#include "rabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace rabi {

namespace {

// Householder reduction to tridiagonal form, Q^T A Q = tridiag(d, e)
void tridiagonalize(Eigen::MatrixXd& A, Eigen::MatrixXd& Q, Eigen::VectorXd& d, Eigen::VectorXd& e) {
    const Eigen::Index n = A.rows();
    Q.setIdentity(n, n);
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        Eigen::VectorXd v = A.col(k).tail(m);
        const double alpha = v.norm();
        if (alpha == 0.0) continue;
        const double a0 = v(0);
        const double r = a0 > 0 ? -alpha : alpha;
        v(0) -= r;
        const double vn2 = v.squaredNorm();
        if (vn2 == 0.0) continue;
        const double beta = 2.0 / vn2;
        auto S = A.bottomRightCorner(m, m);
        Eigen::VectorXd p = beta * (S * v);
        const double K = 0.5 * beta * v.dot(p);
        Eigen::VectorXd w = p - K * v;
        S.noalias() -= v * w.transpose() + w * v.transpose();
        A(k + 1, k) = A(k, k + 1) = r;
        A.col(k).tail(m - 1).setZero();
        A.row(k).tail(m - 1).setZero();
        auto Qb = Q.rightCols(m);
        Eigen::VectorXd qv = Qb * v;
        Qb.noalias() -= beta * qv * v.transpose();
    }
    d = A.diagonal();
    e.setZero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = A(i + 1, i);
}

// implicit QL with Wilkinson-type shifts; e(i) couples i and i+1
void tridiagonal_ql(Eigen::VectorXd& d, Eigen::VectorXd& e, Eigen::MatrixXd& Z) {
    const Eigen::Index n = d.size();
    const double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            Eigen::Index m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::fabs(d(m)) + std::fabs(d(m + 1));
                if (std::fabs(e(m)) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 100) throw NumericalError("QL iteration did not converge");
            double g = (d(l + 1) - d(l)) / (2.0 * e(l));
            double r = std::hypot(g, 1.0);
            g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            Eigen::Index i = m - 1;
            bool early = false;
            for (; i >= l; --i) {
                const double f = s * e(i), b = c * e(i);
                r = std::hypot(f, g);
                e(i + 1) = r;
                if (r == 0.0) {
                    d(i + 1) -= p;
                    e(m) = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d(i + 1) - p;
                r = (d(i) - g) * s + 2.0 * c * b;
                p = s * r;
                d(i + 1) = g + p;
                g = c * r - b;
                for (Eigen::Index k = 0; k < Z.rows(); ++k) {
                    const double zf = Z(k, i + 1);
                    Z(k, i + 1) = s * Z(k, i) + c * zf;
                    Z(k, i) = c * Z(k, i) - s * zf;
                }
                if (i == 0) break;
            }
            if (early) continue;
            d(l) -= p;
            e(l) = g;
            e(m) = 0.0;
        }
    }
}

}  // namespace

SymEigen symmetric_eigen(const Eigen::MatrixXd& H, double rel_residual) {
    const Eigen::Index n = H.rows();
    if (H.cols() != n) throw ValidationError("eigensolver needs a square matrix");
    SymEigen out;
    if (n == 0) return out;
    Eigen::MatrixXd A = 0.5 * (H + H.transpose());
    Eigen::MatrixXd Q;
    Eigen::VectorXd d, e;
    tridiagonalize(A, Q, d, e);
    tridiagonal_ql(d, e, Q);

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d(a) < d(b); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = d(order[j]);
        out.vectors.col(j) = Q.col(order[j]);
    }
    const double hnorm = std::max(H.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    Eigen::MatrixXd R = H * out.vectors - out.vectors * out.values.asDiagonal();
    out.residual = R.colwise().norm().maxCoeff();
    if (out.residual > rel_residual * hnorm)
        throw NumericalError("eigensolver residual " + std::to_string(out.residual) + " exceeds contract");
    return out;
}

std::vector<double> hermite_all(int nmax, double x) {
    std::vector<double> h(static_cast<std::size_t>(nmax) + 1);
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (nmax >= 1) h[1] = std::numbers::sqrt2 * x * h[0];
    for (int n = 1; n < nmax; ++n)
        h[n + 1] = std::sqrt(2.0 / (n + 1)) * x * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
    return h;
}

double hermite_phi(int n, double x) { return hermite_all(n, x)[static_cast<std::size_t>(n)]; }

Eigen::MatrixXd build_hamiltonian(const ModelParams& params, int n_cut, Sector sector) {
    if (n_cut < 8) throw ValidationError("Fock cutoff must be >= 8");
    const int F = n_cut + 1;
    const double g = params.g, D = params.delta;
    // a^+a + g(a + a^+) on one Fock block
    Eigen::MatrixXd Hb = Eigen::MatrixXd::Zero(F, F);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(F, F);
    for (int n = 0; n < F; ++n) {
        Hb(n, n) = n;
        if (n + 1 < F) X(n, n + 1) = X(n + 1, n) = std::sqrt(n + 1.0);
    }
    if (sector != Sector::Full) {
        Eigen::MatrixXd H = Hb + g * X;
        const double s = sector == Sector::ParityPlus ? D : -D;
        for (int n = 0; n < F; ++n) H(n, n) += s * (n % 2 ? -1.0 : 1.0);
        return H;
    }
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * F, 2 * F);
    H.topLeftCorner(F, F) = Hb + D * Eigen::MatrixXd::Identity(F, F);
    H.bottomRightCorner(F, F) = Hb - D * Eigen::MatrixXd::Identity(F, F);
    H.topRightCorner(F, F) = g * X;
    H.bottomLeftCorner(F, F) = g * X;
    return H;
}

SpectralModel build_model(const ModelParams& params, int n_cut, Sector sector) {
    SpectralModel m;
    m.params = params;
    m.n_cut = n_cut;
    m.sector = sector;
    m.hamiltonian = build_hamiltonian(params, n_cut, sector);
    auto eig = symmetric_eigen(m.hamiltonian);
    m.energies = std::move(eig.values);
    m.vectors = std::move(eig.vectors);
    return m;
}

namespace {
// rows: spin components of the eigenfunctions at x
Eigen::MatrixXd eigenfunctions_at(const SpectralModel& m, double x) {
    const int F = m.fock_dim();
    const auto h = hermite_all(m.n_cut, x);
    Eigen::Map<const Eigen::VectorXd> hv(h.data(), F);
    Eigen::MatrixXd out(m.spin_dim(), m.vectors.cols());
    for (int s = 0; s < m.spin_dim(); ++s) out.row(s) = hv.transpose() * m.vectors.middleRows(s * F, F);
    return out;
}
}  // namespace

Kernel2x2 oracle_heat_kernel(const SpectralModel& model, const EvalPoint& p) {
    const Eigen::VectorXd w = (-p.t * model.energies.array()).exp();
    const Eigen::MatrixXd fx = eigenfunctions_at(model, p.x), fy = eigenfunctions_at(model, p.y);
    const Eigen::MatrixXd K = fx * w.asDiagonal() * fy.transpose();
    if (model.spin_dim() == 1) return {K(0, 0), 0.0, 0.0, 0.0};
    return {K(0, 0), K(0, 1), K(1, 0), K(1, 1)};
}

double oracle_partition(const SpectralModel& model, double beta) {
    if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
    // ascending energies: sum the small terms first
    double z = 0.0;
    for (Eigen::Index i = model.energies.size() - 1; i >= 0; --i) z += std::exp(-beta * model.energies(i));
    return z;
}

CertifiedOracle::CertifiedOracle(ModelParams params, Sector sector, int n_start, int n_max)
    : params_(params), sector_(sector), n_start_(n_start), n_max_(n_max) {}

const SpectralModel& CertifiedOracle::model(int level) {
    while (static_cast<int>(models_.size()) <= level) {
        const int n = n_start_ << models_.size();
        models_.push_back(std::make_unique<SpectralModel>(build_model(params_, n, sector_)));
    }
    return *models_[static_cast<std::size_t>(level)];
}

CertifiedOracle::Kernel CertifiedOracle::kernel(const EvalPoint& p, double tol) {
    int level = 0;
    Kernel2x2 prev = oracle_heat_kernel(model(0), p);
    while (true) {
        const int n_next = n_start_ << (level + 1);
        if (n_next > n_max_) return {prev, std::numeric_limits<double>::infinity(), n_start_ << level};
        Kernel2x2 next = oracle_heat_kernel(model(level + 1), p);
        const double delta = max_abs_diff(prev, next);
        if (delta <= tol || (n_start_ << (level + 2)) > n_max_) return {next, delta, n_next};
        prev = next;
        ++level;
    }
}

CertifiedOracle::Scalar CertifiedOracle::partition(double beta, double tol) {
    int level = 0;
    double prev = oracle_partition(model(0), beta);
    while (true) {
        const int n_next = n_start_ << (level + 1);
        if (n_next > n_max_) return {prev, std::numeric_limits<double>::infinity(), n_start_ << level};
        const double next = oracle_partition(model(level + 1), beta);
        const double delta = std::fabs(next - prev);
        if (delta <= tol * std::fabs(next) || (n_start_ << (level + 2)) > n_max_) return {next, delta, n_next};
        prev = next;
        ++level;
    }
}

Kernel2x2 position_kernel(const Eigen::MatrixXd& P, int n_cut, double x, double y) {
    const int F = n_cut + 1;
    const auto hx = hermite_all(n_cut, x), hy = hermite_all(n_cut, y);
    Eigen::Map<const Eigen::VectorXd> vx(hx.data(), F), vy(hy.data(), F);
    auto blk = [&](int s, int sp) { return vx.dot(P.block(s * F, sp * F, F, F) * vy); };
    return {blk(0, 0), blk(0, 1), blk(1, 0), blk(1, 1)};
}

namespace {
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& A, double scale) {
    const auto eig = symmetric_eigen(A);
    const Eigen::VectorXd w = (scale * eig.values.array()).exp();
    return eig.vectors * w.asDiagonal() * eig.vectors.transpose();
}
}  // namespace

Eigen::MatrixXd trotter_matrix_product(const ModelParams& params, int n_cut, double t, int N) {
    if (N < 1) throw ValidationError("Trotter step count must be >= 1");
    if (!(t > 0.0)) throw ValidationError("t must be > 0");
    const int F = n_cut + 1;
    // b^+b - g^2 = a^+a + g (a + a^+) sigma_x: the full Hamiltonian without the splitting
    const Eigen::MatrixXd A = build_hamiltonian(ModelParams(params.g, 0.0), n_cut, Sector::Full);
    const Eigen::MatrixXd EA = sym_exp(A, -t / N);
    Eigen::VectorXd eb(2 * F);
    eb.head(F).setConstant(std::exp(-t * params.delta / N));
    eb.tail(F).setConstant(std::exp(t * params.delta / N));
    const Eigen::MatrixXd step = EA * eb.asDiagonal();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2 * F, 2 * F);
    for (int i = 0; i < N; ++i) P = P * step;
    return P;
}

Eigen::MatrixXd heat_semigroup_matrix(const SpectralModel& model, double t) {
    const Eigen::VectorXd w = (-t * model.energies.array()).exp();
    return model.vectors * w.asDiagonal() * model.vectors.transpose();
}

double spectral_norm(const Eigen::MatrixXd& A) {
    const auto eig = symmetric_eigen(A.transpose() * A, 1e-8);
    return std::sqrt(std::max(0.0, eig.values(eig.values.size() - 1)));
}

Eigen::MatrixXd parity_transform(int n_cut) {
    const int F = n_cut + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(F, F);
    for (int n = 0; n < F; ++n) T(n, n) = n % 2 ? -1.0 : 1.0;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(F, F);
    Eigen::MatrixXd C(2 * F, 2 * F), U(2 * F, 2 * F);
    C << I, I, I, -I;
    U << I, I, T, -T;
    return 0.5 * C * U;
}

Eigen::MatrixXd parity_operator(int n_cut) {
    const int F = n_cut + 1;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * F, 2 * F);
    for (int n = 0; n < F; ++n) {
        const double t = n % 2 ? -1.0 : 1.0;
        P(n, n) = -t;
        P(F + n, F + n) = t;
    }
    return P;
}

}  // namespace rabi
