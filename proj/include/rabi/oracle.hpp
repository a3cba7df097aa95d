// oracle.hpp - Fock-space ground truth: Hamiltonians, dense symmetric
// eigensolver, spectral heat kernels, traces and Trotter products in matrix form.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "rabi/core.hpp"

namespace rabi {

struct SymEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
    double residual = 0.0;    // max_i ||H v_i - e_i v_i||
};

// Householder tridiagonalisation followed by implicit QL with shifts.
// Throws NumericalError if a pair misses the residual contract.
SymEigen symmetric_eigen(const Eigen::MatrixXd& H, double rel_residual = 1e-10);

// normalised Hermite functions phi_0..phi_nmax at x
std::vector<double> hermite_all(int nmax, double x);
double hermite_phi(int n, double x);

enum class Sector { Full, ParityPlus, ParityMinus };

// Full model basis is spin-major: index = spin * (n_cut + 1) + n, spin 0 is sigma_z = +1.
struct SpectralModel {
    ModelParams params;
    int n_cut = 0;
    Sector sector = Sector::Full;
    Eigen::MatrixXd hamiltonian;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;

    int fock_dim() const { return n_cut + 1; }
    int spin_dim() const { return sector == Sector::Full ? 2 : 1; }
};

Eigen::MatrixXd build_hamiltonian(const ModelParams& params, int n_cut, Sector sector);
SpectralModel build_model(const ModelParams& params, int n_cut, Sector sector);

// 2x2 for the full model; parity models put the scalar in k11
Kernel2x2 oracle_heat_kernel(const SpectralModel& model, const EvalPoint& p);
double oracle_partition(const SpectralModel& model, double beta);

// Kernel with a cutoff-doubling certificate. Models are built on demand and
// kept, starting at n_start and doubling up to n_max.
class CertifiedOracle {
public:
    CertifiedOracle(ModelParams params, Sector sector, int n_start = 60, int n_max = 240);

    struct Kernel {
        Kernel2x2 value;
        double cutoff_delta;  // change under the last doubling
        int n_cut;
    };
    struct Scalar {
        double value;
        double cutoff_delta;
        int n_cut;
    };
    Kernel kernel(const EvalPoint& p, double tol = 1e-9);
    Scalar partition(double beta, double tol = 1e-12);
    const SpectralModel& model(int level);

private:
    ModelParams params_;
    Sector sector_;
    int n_start_, n_max_;
    std::vector<std::unique_ptr<SpectralModel>> models_;
};

// position-space kernel sum_{nm} phi_n(x) P_{(s,n),(s',m)} phi_m(y) of a full-model matrix
Kernel2x2 position_kernel(const Eigen::MatrixXd& P, int n_cut, double x, double y);

// (e^{-t(b^+b - g^2)/N} e^{-t delta sigma_z/N})^N, b = a + g sigma_x
Eigen::MatrixXd trotter_matrix_product(const ModelParams& params, int n_cut, double t, int N);
// e^{-tH} of the truncated full model
Eigen::MatrixXd heat_semigroup_matrix(const SpectralModel& model, double t);
double spectral_norm(const Eigen::MatrixXd& A);

// C U of the parity decomposition in the spin-major full basis
Eigen::MatrixXd parity_transform(int n_cut);
// -sigma_z (-1)^{a^+a}
Eigen::MatrixXd parity_operator(int n_cut);

// Parity blocks of a full 2x2 kernel after the C U conjugation in position
// space. Needs the kernel at (x,y), (x,-y), (-x,y), (-x,-y).
struct ParityBlocks {
    double plus, minus, off_pm, off_mp;
};
template <class KernelFn>
ParityBlocks parity_blocks(KernelFn&& K, double x, double y);

}  // namespace rabi

#include "rabi/oracle_impl.hpp"
