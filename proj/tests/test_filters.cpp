#include "doctest.h"

#include <random>

#include "gefrfe/errors.hpp"
#include "gefrfe/filters.hpp"
#include "gefrfe/graph.hpp"
#include "support/oracles.hpp"

using namespace gefrfe;
using cd = std::complex<double>;

namespace {

double response_at(const FilterSpec& f, double lambda, double r) {
  Eigen::VectorXd v(1);
  v << lambda;
  return evaluate_filter(f, v, r)(0);
}

}  // namespace

TEST_CASE("filter values at landmark eigenvalues") {
  CHECK(response_at(FilterSpec(Heat{3}), 0.0, 5.0) == 1.0);
  CHECK(response_at(FilterSpec(AntiHeat{1}), 5.0, 5.0) == 1.0);
  CHECK(response_at(FilterSpec(PartSine{6, 0.579}), 0.579 * 5, 6.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(response_at(FilterSpec(PartSine{1, 0.579}), 0.579, 6.0)) <= 1e-12);
  CHECK(response_at(FilterSpec(PartSine{6}), 0.579 * 3.99, 6.0) == 0.0);
  CHECK(response_at(FilterSpec(LambdaIdentity{}), 2.5, 6.0) == 2.5);
}

TEST_CASE("anti-heat rejects R below the spectrum") {
  const Eigen::VectorXd lam = Eigen::Vector3d(0.0, 1.0, 3.0);
  CHECK_THROWS_AS(evaluate_filter(FilterSpec(AntiHeat{1}), lam, 2.0), UsageError);
  CHECK(evaluate_filter(FilterSpec(AntiHeat{1}), lam)(2) == 1.0);
}

TEST_CASE("filter names round trip through the parser") {
  for (const FilterSpec& f : default_filter_bank()) CHECK(FilterSpec::parse(f.name()).name() == f.name());
  CHECK(FilterSpec::parse("PS11:0.5").name() == "PS11:0.5");
  CHECK(FilterSpec::parse("PS11:0.579").name() == "PS11");
  CHECK(FilterSpec::parse("H0.5").name() == "H0.5");
  CHECK_THROWS_AS(FilterSpec::parse("Q1"), UsageError);
  CHECK_THROWS_AS(FilterSpec::parse("H"), UsageError);
  CHECK_THROWS_AS(FilterSpec::parse("H-1"), UsageError);
  CHECK_THROWS_AS(FilterSpec::parse("PS0"), UsageError);
  CHECK_THROWS_AS(parse_filter_bank("H1,H1"), UsageError);
  CHECK(parse_filter_bank("X, H1,AH3 ,PS6:0.579").size() == 4);

  const auto bank = default_filter_bank();
  REQUIRE(bank.size() == 10);
  const char* expected[] = {"X", "H1", "H3", "H6", "AH1", "AH3", "AH6", "PS1", "PS6", "PS11"};
  for (std::size_t i = 0; i < bank.size(); ++i) CHECK(bank[i].name() == expected[i]);
}

TEST_CASE("filter response shape properties") {
  Eigen::VectorXd lam = Eigen::VectorXd::LinSpaced(200, 0.0, 12.0);
  const double r = lam.maxCoeff();
  for (double t : {1.0, 3.0, 6.0}) {
    const Eigen::VectorXd h = evaluate_filter(FilterSpec(Heat{t}), lam, r);
    const Eigen::VectorXd ah = evaluate_filter(FilterSpec(AntiHeat{t}), lam, r);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      CHECK(h(i) > 0.0);
      CHECK(h(i) <= 1.0);
      CHECK(ah(i) > 0.0);
      CHECK(ah(i) <= 1.0);
      if (i > 0 && h(i - 1) > 1e-300) CHECK(h(i) < h(i - 1));
      if (i > 0) CHECK(ah(i) > ah(i - 1));
    }
  }
  for (int rr : {1, 6, 11}) {
    const PartSine ps{rr, 0.579};
    const Eigen::VectorXd v = evaluate_filter(FilterSpec(ps), lam, r);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      CHECK(v(i) >= 0.0);
      CHECK(v(i) <= 1.0);
      const bool inside = lam(i) >= 0.579 * (rr - 2) && lam(i) <= 0.579 * rr;
      if (!inside) CHECK(v(i) == 0.0);
      if (inside && lam(i) > 0.579 * (rr - 2) && lam(i) < 0.579 * rr) CHECK(v(i) > 0.0);
    }
  }
  CHECK(evaluate_filter(FilterSpec(LambdaIdentity{}), lam, r) == lam);
}

TEST_CASE("heat kernel") {
  const auto dec = decompose(laplacian(testing::path_graph(3)));
  CHECK((heat_kernel_matrix(dec, 0.0) - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-10);

  for (const Graph& g : testing::random_connected_graphs(10, 3, 14, 0.35, 4)) {
    const GraphSpectra s = compute_spectra(laplacian(g));
    const Eigen::Index n = s.dec.size();
    for (double t : {1.0, 3.0, 6.0}) {
      const Eigen::MatrixXd k = heat_kernel_matrix(s.dec, t);
      CHECK((k - k.transpose()).norm() <= 1e-12);
      CHECK((k.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);

      // K_t x against filtering in the GFT domain and transforming back
      const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, -2.0, 3.0).array().sin();
      const auto gft = gfrft_matrix(s.basis, 1.0);
      const Eigen::VectorXcd spectrum = gfrft_apply(gft, x);
      const Eigen::VectorXd h = evaluate_filter(FilterSpec(Heat{t}), s.dec.eigenvalues);
      const Eigen::VectorXcd back = gfrft_inverse(gft).matrix() * h.cast<cd>().cwiseProduct(spectrum);
      const Eigen::VectorXd direct = s.dec.eigenvectors * (-t * s.dec.eigenvalues.array()).exp().matrix().asDiagonal() *
                                     s.dec.eigenvectors.transpose() * x;
      CHECK((k * x - direct).norm() <= 1e-10);
      CHECK((back - (k * x).cast<cd>()).norm() <= 1e-8);
    }
  }
}
