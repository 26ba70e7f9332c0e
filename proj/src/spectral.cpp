#include "gefrfe/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kSignTieTolerance = 1e-12;

using cd = std::complex<double>;

}  // namespace

double SpectralDecomposition::max_eigenvalue() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.maxCoeff();
}

void canonicalize_signs(Eigen::MatrixXd& eigenvectors) {
  for (Eigen::Index c = 0; c < eigenvectors.cols(); ++c) {
    auto col = eigenvectors.col(c);
    const double largest = col.cwiseAbs().maxCoeff();
    if (largest == 0.0) continue;
    const double threshold = largest * (1.0 - kSignTieTolerance);
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) >= threshold) {
        if (col(r) < 0.0) col = -col;
        break;
      }
    }
  }
}

SpectralDecomposition decompose(const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() == 0) {
    throw NumericError("decompose: expected a non-empty square matrix");
  }
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw NumericError("decompose: matrix is not symmetric (max |L - L^T| = " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw NumericError("decompose: symmetric eigensolver did not converge");
  }
  SpectralDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
  canonicalize_signs(dec.eigenvectors);
  return dec;
}

FractionalBasis::FractionalBasis(Eigen::MatrixXd schur_vectors, std::vector<SchurBlock> blocks)
    : schur_vectors_(std::move(schur_vectors)), blocks_(std::move(blocks)) {
  const Eigen::Index n = schur_vectors_.rows();
  negative_projector_ = Eigen::MatrixXd::Zero(n, n);
  for (const SchurBlock& b : blocks_) {
    if (b.size == 1 && b.angle != 0.0) {
      auto u = schur_vectors_.col(b.start);
      negative_projector_.noalias() += u * u.transpose();
    }
  }
}

Eigen::MatrixXcd FractionalBasis::unitary_basis() const {
  const Eigen::Index n = size();
  Eigen::MatrixXcd p(n, n);
  const double s = 1.0 / std::numbers::sqrt2;
  for (const SchurBlock& b : blocks_) {
    if (b.size == 1) {
      p.col(b.start) = schur_vectors_.col(b.start).cast<cd>();
    } else {
      auto ua = schur_vectors_.col(b.start).cast<cd>();
      auto ub = schur_vectors_.col(b.start + 1).cast<cd>();
      p.col(b.start) = s * (ua - cd(0, 1) * ub);
      p.col(b.start + 1) = s * (ua + cd(0, 1) * ub);
    }
  }
  return p;
}

Eigen::VectorXd FractionalBasis::angles() const {
  Eigen::VectorXd theta(size());
  for (const SchurBlock& b : blocks_) {
    theta(b.start) = b.angle;
    if (b.size == 2) theta(b.start + 1) = -b.angle;
  }
  return theta;
}

Eigen::VectorXcd FractionalBasis::unit_eigenvalues() const {
  Eigen::VectorXd theta = angles();
  Eigen::VectorXcd mu(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) mu(i) = std::polar(1.0, theta(i));
  return mu;
}

FractionalBasis fractional_basis(const SpectralDecomposition& dec) {
  const Eigen::MatrixXd f = dec.gft();
  const Eigen::Index n = f.rows();
  Eigen::RealSchur<Eigen::MatrixXd> schur(f);
  if (schur.info() != Eigen::Success) {
    throw NumericError("fractional_basis: real Schur decomposition of the GFT matrix did not converge");
  }
  const Eigen::MatrixXd& t = schur.matrixT();
  Eigen::MatrixXd u = schur.matrixU();

  std::vector<SchurBlock> blocks;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      // Orthogonal 2x2 block with a complex pair; F normal => block is a rotation.
      const double cos_part = 0.5 * (t(i, i) + t(i + 1, i + 1));
      const double sin_part = 0.5 * (t(i + 1, i) - t(i, i + 1));
      double angle = std::atan2(sin_part, cos_part);
      if (angle < 0.0) {
        u.col(i + 1) = -u.col(i + 1);
        angle = -angle;
      }
      blocks.push_back({i, 2, angle});
      i += 2;
    } else {
      blocks.push_back({i, 1, t(i, i) < 0.0 ? std::numbers::pi : 0.0});
      i += 1;
    }
  }
  return FractionalBasis(std::move(u), std::move(blocks));
}

FractionalOperator::FractionalOperator(double alpha, Eigen::MatrixXcd matrix,
                                       std::shared_ptr<const FractionalBasis> basis)
    : alpha_(alpha), matrix_(std::move(matrix)), basis_(std::move(basis)) {}

FractionalOperator gfrft_matrix(std::shared_ptr<const FractionalBasis> basis, double alpha) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("gfrft_matrix: alpha must be finite");
  }
  const Eigen::MatrixXd& u = basis->schur_vectors();
  const Eigen::Index n = u.rows();

  // W = U * Re(B^alpha), block by block.
  Eigen::MatrixXd w(n, n);
  const double neg_cos = std::cos(std::numbers::pi * alpha);
  for (const SchurBlock& b : basis->blocks()) {
    if (b.size == 1) {
      w.col(b.start) = b.angle == 0.0 ? u.col(b.start) : Eigen::VectorXd(neg_cos * u.col(b.start));
    } else {
      const double c = std::cos(alpha * b.angle);
      const double s = std::sin(alpha * b.angle);
      w.col(b.start) = c * u.col(b.start) + s * u.col(b.start + 1);
      w.col(b.start + 1) = -s * u.col(b.start) + c * u.col(b.start + 1);
    }
  }
  Eigen::MatrixXcd m(n, n);
  m.real().noalias() = w * u.transpose();
  m.imag() = std::sin(std::numbers::pi * alpha) * basis->negative_projector();
  return FractionalOperator(alpha, std::move(m), std::move(basis));
}

FractionalOperator gfrft_matrix(const SpectralDecomposition& dec, double alpha) {
  return gfrft_matrix(std::make_shared<const FractionalBasis>(fractional_basis(dec)), alpha);
}

Eigen::VectorXcd gfrft_apply(const FractionalOperator& op, const Eigen::VectorXcd& x) {
  if (x.size() != op.size()) {
    throw std::invalid_argument("gfrft_apply: signal length " + std::to_string(x.size()) +
                                " does not match operator size " + std::to_string(op.size()));
  }
  return op.matrix() * x;
}

Eigen::VectorXcd gfrft_apply(const FractionalOperator& op, const Eigen::VectorXd& x) {
  return gfrft_apply(op, Eigen::VectorXcd(x.cast<cd>()));
}

FractionalOperator gfrft_inverse(const FractionalOperator& op) {
  return gfrft_matrix(op.shared_basis(), -op.alpha());
}

Eigen::MatrixXcd gfrft_alpha_derivative(const FractionalBasis& basis, double alpha) {
  const Eigen::MatrixXcd p = basis.unitary_basis();
  const Eigen::VectorXd theta = basis.angles();
  Eigen::VectorXcd d(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    d(i) = cd(0.0, theta(i)) * std::polar(1.0, alpha * theta(i));
  }
  return p * d.asDiagonal() * p.adjoint();
}

Eigen::MatrixXcd gfrft_alpha_derivative(const SpectralDecomposition& dec, double alpha) {
  return gfrft_alpha_derivative(fractional_basis(dec), alpha);
}

GraphSpectra compute_spectra(const Eigen::MatrixXd& laplacian) {
  GraphSpectra s;
  s.dec = decompose(laplacian);
  s.basis = std::make_shared<const FractionalBasis>(fractional_basis(s.dec));
  return s;
}

namespace serial {

Eigen::MatrixXcd gfrft_matrix_complex(const FractionalBasis& basis, double alpha) {
  const Eigen::MatrixXcd p = basis.unitary_basis();
  const Eigen::VectorXd theta = basis.angles();
  Eigen::VectorXcd powered(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) powered(i) = std::polar(1.0, alpha * theta(i));
  return p * powered.asDiagonal() * p.adjoint();
}

}  // namespace serial

}  // namespace gefrfe
