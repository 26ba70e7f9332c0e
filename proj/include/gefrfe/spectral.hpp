#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace gefrfe {

/// Eigendecomposition L = V diag(lambda) V^T of a graph Laplacian.
///
/// Eigenvalues ascend. Each eigenvector is sign-canonicalized so that its
/// entry of largest magnitude is positive (lowest index wins ties). Degenerate
/// eigenspaces keep whatever basis the eigensolver returns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns are eigenvectors

  Eigen::Index size() const { return eigenvalues.size(); }
  /// Graph Fourier transform matrix F = V^T.
  Eigen::MatrixXd gft() const { return eigenvectors.transpose(); }
  double max_eigenvalue() const;
};

/// Throws NumericError if `laplacian` is not symmetric within 1e-12 or the
/// eigensolver fails.
SpectralDecomposition decompose(const Eigen::MatrixXd& laplacian);

/// Flips columns in place per the sign convention above.
void canonicalize_signs(Eigen::MatrixXd& eigenvectors);

/// One diagonal block of the real Schur form of F.
struct SchurBlock {
  Eigen::Index start = 0;
  int size = 1;        // 1 or 2
  double angle = 0.0;  // principal argument: 0 or pi for size 1, in (0, pi) for size 2
};

/// Unitary eigenstructure of the orthogonal GFT matrix, stored in real form.
///
/// F = U B U^T with U orthogonal and B block diagonal: 1x1 blocks are +1/-1,
/// 2x2 blocks are rotations by `angle`. A rotation block carries the
/// eigenvalue pair exp(+-i angle); a -1 block carries exp(i pi).
class FractionalBasis {
 public:
  FractionalBasis() = default;
  FractionalBasis(Eigen::MatrixXd schur_vectors, std::vector<SchurBlock> blocks);

  Eigen::Index size() const { return schur_vectors_.rows(); }
  const Eigen::MatrixXd& schur_vectors() const { return schur_vectors_; }
  const std::vector<SchurBlock>& blocks() const { return blocks_; }

  /// Complex unitary P with F = P diag(mu) P^H.
  Eigen::MatrixXcd unitary_basis() const;
  /// mu_l = exp(i theta_l), |mu_l| = 1, theta_l in (-pi, pi].
  Eigen::VectorXcd unit_eigenvalues() const;
  /// theta_l matching unit_eigenvalues().
  Eigen::VectorXd angles() const;

  /// Projector onto the -1 eigenspace of F.
  const Eigen::MatrixXd& negative_projector() const { return negative_projector_; }

 private:
  Eigen::MatrixXd schur_vectors_;
  std::vector<SchurBlock> blocks_;
  Eigen::MatrixXd negative_projector_;
};

/// Real Schur decomposition of F = V^T, standardized into rotation blocks.
FractionalBasis fractional_basis(const SpectralDecomposition& dec);

/// F^alpha together with the eigenstructure it was built from.
class FractionalOperator {
 public:
  FractionalOperator(double alpha, Eigen::MatrixXcd matrix, std::shared_ptr<const FractionalBasis> basis);

  double alpha() const { return alpha_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index size() const { return matrix_.rows(); }
  const FractionalBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FractionalBasis>& shared_basis() const { return basis_; }

  Eigen::MatrixXcd unitary_basis() const { return basis_->unitary_basis(); }
  Eigen::VectorXcd unit_eigenvalues() const { return basis_->unit_eigenvalues(); }

 private:
  double alpha_;
  Eigen::MatrixXcd matrix_;
  std::shared_ptr<const FractionalBasis> basis_;
};

/// F^alpha = P diag(mu^alpha) P^H with the principal branch. Evaluated in the
/// real Schur basis: rotation blocks become rotations by alpha*theta and -1
/// blocks contribute exp(i pi alpha) on their projector.
FractionalOperator gfrft_matrix(std::shared_ptr<const FractionalBasis> basis, double alpha);
FractionalOperator gfrft_matrix(const SpectralDecomposition& dec, double alpha);

/// x_hat = F^alpha x. Throws std::invalid_argument on a length mismatch.
Eigen::VectorXcd gfrft_apply(const FractionalOperator& op, const Eigen::VectorXcd& x);
Eigen::VectorXcd gfrft_apply(const FractionalOperator& op, const Eigen::VectorXd& x);

/// Operator of order -alpha over the same basis.
FractionalOperator gfrft_inverse(const FractionalOperator& op);

/// dF^alpha/dalpha = P diag(mu^alpha Log mu) P^H.
Eigen::MatrixXcd gfrft_alpha_derivative(const FractionalBasis& basis, double alpha);
Eigen::MatrixXcd gfrft_alpha_derivative(const SpectralDecomposition& dec, double alpha);

namespace serial {

/// Reference evaluation of F^alpha through the complex unitary basis.
Eigen::MatrixXcd gfrft_matrix_complex(const FractionalBasis& basis, double alpha);

}  // namespace serial

}  // namespace gefrfe

namespace gefrfe {

/// Everything the embedding needs from one graph; computed once, reused for every alpha.
struct GraphSpectra {
  SpectralDecomposition dec;
  std::shared_ptr<const FractionalBasis> basis;
};

GraphSpectra compute_spectra(const Eigen::MatrixXd& laplacian);

}  // namespace gefrfe
