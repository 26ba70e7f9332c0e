#include "gefrfe/filters.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <system_error>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError("bad filter '" + std::string(whole) + "'");
  }
  return value;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

FilterSpec::FilterSpec(Variant v) : variant_(v) {
  std::visit(overloaded{
                 [](const Heat& h) {
                   if (!(h.t > 0.0)) throw UsageError("heat filter needs t > 0");
                 },
                 [](const AntiHeat& h) {
                   if (!(h.t > 0.0)) throw UsageError("anti-heat filter needs t > 0");
                 },
                 [](const PartSine& p) {
                   if (p.r < 1 || !(p.rho > 0.0)) throw UsageError("part-sine filter needs r >= 1 and rho > 0");
                 },
                 [](const LambdaIdentity&) {},
             },
             variant_);
}

FilterSpec FilterSpec::parse(std::string_view text) {
  if (text == "X") return FilterSpec(LambdaIdentity{});
  if (text.starts_with("AH")) return FilterSpec(AntiHeat{parse_number(text.substr(2), text)});
  if (text.starts_with("H")) return FilterSpec(Heat{parse_number(text.substr(1), text)});
  if (text.starts_with("PS")) {
    std::string_view rest = text.substr(2);
    double rho = kDefaultPartSineRho;
    if (auto colon = rest.find(':'); colon != std::string_view::npos) {
      rho = parse_number(rest.substr(colon + 1), text);
      rest = rest.substr(0, colon);
    }
    int r = 0;
    auto res = std::from_chars(rest.data(), rest.data() + rest.size(), r);
    if (rest.empty() || res.ec != std::errc() || res.ptr != rest.data() + rest.size()) {
      throw UsageError("bad filter '" + std::string(text) + "'");
    }
    return FilterSpec(PartSine{r, rho});
  }
  throw UsageError("unknown filter '" + std::string(text) + "' (expected H<t>, AH<t>, PS<r>[:rho] or X)");
}

std::string FilterSpec::name() const {
  return std::visit(overloaded{
                        [](const Heat& h) { return "H" + shortest(h.t); },
                        [](const AntiHeat& h) { return "AH" + shortest(h.t); },
                        [](const PartSine& p) {
                          std::string s = "PS" + std::to_string(p.r);
                          if (p.rho != kDefaultPartSineRho) s += ":" + shortest(p.rho);
                          return s;
                        },
                        [](const LambdaIdentity&) { return std::string("X"); },
                    },
                    variant_);
}

std::vector<FilterSpec> parse_filter_bank(std::string_view text) {
  std::vector<FilterSpec> bank;
  std::set<std::string> seen;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      FilterSpec f = FilterSpec::parse(item);
      if (!seen.insert(f.name()).second) throw UsageError("duplicate filter '" + f.name() + "'");
      bank.push_back(f);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (bank.empty()) throw UsageError("empty filter bank");
  return bank;
}

std::vector<FilterSpec> default_filter_bank() {
  return {FilterSpec(LambdaIdentity{}), FilterSpec(Heat{1}),     FilterSpec(Heat{3}),     FilterSpec(Heat{6}),
          FilterSpec(AntiHeat{1}),      FilterSpec(AntiHeat{3}), FilterSpec(AntiHeat{6}), FilterSpec(PartSine{1}),
          FilterSpec(PartSine{6}),      FilterSpec(PartSine{11})};
}

Eigen::VectorXd evaluate_filter(const FilterSpec& filter, const Eigen::VectorXd& eigenvalues, double max_eigenvalue) {
  return std::visit(
      overloaded{
          [&](const Heat& h) -> Eigen::VectorXd { return (-h.t * eigenvalues.array()).exp().matrix(); },
          [&](const AntiHeat& h) -> Eigen::VectorXd {
            if (eigenvalues.size() > 0 && max_eigenvalue < eigenvalues.maxCoeff()) {
              throw UsageError("anti-heat filter: R = " + shortest(max_eigenvalue) +
                               " is below the largest eigenvalue " + shortest(eigenvalues.maxCoeff()));
            }
            return (-h.t * (max_eigenvalue - eigenvalues.array())).exp().matrix();
          },
          [&](const PartSine& p) -> Eigen::VectorXd {
            const double lo = p.rho * (p.r - 2);
            const double hi = p.rho * p.r;
            const double scale = std::numbers::pi / (2.0 * p.rho);
            Eigen::VectorXd out(eigenvalues.size());
            for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
              const double lam = eigenvalues(i);
              out(i) = (lam >= lo && lam <= hi) ? std::max(0.0, std::sin(scale * (lam - lo))) : 0.0;
            }
            return out;
          },
          [&](const LambdaIdentity&) -> Eigen::VectorXd { return eigenvalues; },
      },
      filter.variant());
}

Eigen::VectorXd evaluate_filter(const FilterSpec& filter, const Eigen::VectorXd& eigenvalues) {
  return evaluate_filter(filter, eigenvalues, eigenvalues.size() == 0 ? 0.0 : eigenvalues.maxCoeff());
}

Eigen::MatrixXd heat_kernel_matrix(const SpectralDecomposition& dec, double t) {
  const Eigen::VectorXd response = (-t * dec.eigenvalues.array()).exp().matrix();
  return dec.eigenvectors * response.asDiagonal() * dec.eigenvectors.transpose();
}

}  // namespace gefrfe
