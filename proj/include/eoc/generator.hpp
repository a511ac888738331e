#pragma once

// Archimedean generators psi (with inverse phi) and the copula they induce,
//
//   C(u_1, ..., u_n) = psi(phi(u_1) + ... + phi(u_n)).
//
// Three families are provided:
//   Independence   psi(s) = exp(-s)                 phi(t) = -log t
//   GumbelVariant  psi(s) = exp(1 - (1 + s)^theta)  phi(t) = (1 - log t)^(1/theta) - 1
//   ExpReciprocal  psi(s) = theta / log(s + e^theta) phi(t) = exp(theta / t) - exp(theta)
//
// GumbelVariant is a proper generator for theta >= 1 only; smaller positive
// theta is still evaluated but reported through valid_generator() == false.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eoc/error.hpp"

namespace eoc {

enum class Family { Independence, GumbelVariant, ExpReciprocal };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Independence: return "independence";
    case Family::GumbelVariant: return "gumbel_variant";
    case Family::ExpReciprocal: return "exp_reciprocal";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "independence") return Family::Independence;
  if (s == "gumbel_variant") return Family::GumbelVariant;
  if (s == "exp_reciprocal") return Family::ExpReciprocal;
  return std::nullopt;
}

/// Anything the condition checkers can scan: a decreasing psi with inverse phi
/// and analytic first/second derivatives of both.
template <typename G>
concept GeneratorLike = requires(const G& g, double v) {
  { g.psi(v) } -> std::convertible_to<double>;
  { g.psi_d1(v) } -> std::convertible_to<double>;
  { g.psi_d2(v) } -> std::convertible_to<double>;
  { g.phi(v) } -> std::convertible_to<double>;
  { g.phi_d1(v) } -> std::convertible_to<double>;
  { g.phi_d2(v) } -> std::convertible_to<double>;
  { g.valid_generator() } -> std::convertible_to<bool>;
};

class Generator {
 public:
  Generator() = default;

  Generator(Family family, double theta) : family_(family), theta_(theta) {
    if (family_ != Family::Independence) {
      detail::require_domain(std::isfinite(theta_) && theta_ > 0.0,
                             std::string(family_name(family_)) + " requires theta > 0");
    }
    if (family_ == Family::ExpReciprocal) {
      detail::require_domain(theta_ < 700.0, "exp_reciprocal theta too large (overflow)");
    }
  }

  static Generator independence() { return {Family::Independence, 0.0}; }
  static Generator gumbel_variant(double theta) { return {Family::GumbelVariant, theta}; }
  static Generator exp_reciprocal(double theta) { return {Family::ExpReciprocal, theta}; }

  Family family() const { return family_; }
  double theta() const { return theta_; }

  /// False when the parameter lies outside the family's generator range
  /// (GumbelVariant with theta < 1). Such generators still evaluate.
  bool valid_generator() const {
    return family_ != Family::GumbelVariant || theta_ >= 1.0;
  }

  std::string describe() const {
    std::string s(family_name(family_));
    if (family_ != Family::Independence) s += "(theta=" + format_double(theta_) + ")";
    return s;
  }

  // ---- psi and derivatives, s >= 0 ----

  double psi(double s) const {
    check_s(s);
    if (std::isinf(s)) return 0.0;
    switch (family_) {
      case Family::Independence: return std::exp(-s);
      case Family::GumbelVariant: return std::exp(-std::expm1(theta_ * std::log1p(s)));
      case Family::ExpReciprocal: return theta_ / er_log(s);
    }
    return 0.0;
  }

  double psi_d1(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return -std::exp(-s);
      case Family::GumbelVariant:
        return -theta_ * std::pow(1.0 + s, theta_ - 1.0) * psi(s);
      case Family::ExpReciprocal: {
        const double big_l = er_log(s);
        return -theta_ * er_inv_shift(s) / (big_l * big_l);
      }
    }
    return 0.0;
  }

  double psi_d2(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return std::exp(-s);
      case Family::GumbelVariant: {
        const double w = 1.0 + s;
        return psi(s) * (theta_ * theta_ * std::pow(w, 2.0 * theta_ - 2.0) -
                         theta_ * (theta_ - 1.0) * std::pow(w, theta_ - 2.0));
      }
      case Family::ExpReciprocal: {
        const double big_l = er_log(s);
        const double q = er_inv_shift(s);
        return theta_ * (2.0 + big_l) * q * q / (big_l * big_l * big_l);
      }
    }
    return 0.0;
  }

  // ---- log-domain forms, finite where psi itself underflows ----

  double log_psi(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return -s;
      case Family::GumbelVariant: return -std::expm1(theta_ * std::log1p(s));
      case Family::ExpReciprocal: return -std::log1p(std::log1p(s * std::exp(-theta_)) / theta_);
    }
    return 0.0;
  }

  /// psi'(s) / psi(s)
  double psi_d1_over_psi(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return -1.0;
      case Family::GumbelVariant: return -theta_ * std::pow(1.0 + s, theta_ - 1.0);
      case Family::ExpReciprocal: return -er_inv_shift(s) / er_log(s);
    }
    return 0.0;
  }

  /// psi''(s) / psi(s)
  double psi_d2_over_psi(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return 1.0;
      case Family::GumbelVariant: {
        const double w = 1.0 + s;
        return theta_ * theta_ * std::pow(w, 2.0 * theta_ - 2.0) -
               theta_ * (theta_ - 1.0) * std::pow(w, theta_ - 2.0);
      }
      case Family::ExpReciprocal: {
        const double big_l = er_log(s);
        const double q = er_inv_shift(s);
        return (2.0 + big_l) * q * q / (big_l * big_l);
      }
    }
    return 0.0;
  }

  /// (log psi)''(s), in closed form to avoid cancellation.
  double log_psi_d2(double s) const {
    check_s(s);
    switch (family_) {
      case Family::Independence: return 0.0;
      case Family::GumbelVariant: return -theta_ * (theta_ - 1.0) * std::pow(1.0 + s, theta_ - 2.0);
      case Family::ExpReciprocal: {
        const double big_l = er_log(s);
        const double q = er_inv_shift(s);
        return q * q * (big_l + 1.0) / (big_l * big_l);
      }
    }
    return 0.0;
  }

  /// phi(exp(log_t)) for log_t <= 0; +inf where phi overflows.
  double phi_of_log(double log_t) const {
    detail::require_domain(log_t <= 0.0, "phi_of_log argument must be <= 0");
    switch (family_) {
      case Family::Independence: return -log_t;
      case Family::GumbelVariant: return std::expm1(std::log1p(-log_t) / theta_);
      case Family::ExpReciprocal: {
        const double t = std::exp(log_t);
        if (t == 0.0) return std::numeric_limits<double>::infinity();
        // theta (1 - t) / t = -theta expm1(log_t) / t
        return std::exp(theta_) * std::expm1(-theta_ * std::expm1(log_t) / t);
      }
    }
    return 0.0;
  }

  // ---- phi = psi^{-1} and derivatives, t in (0, 1] ----

  double phi(double t) const {
    check_t(t);
    switch (family_) {
      case Family::Independence: return -std::log(t);
      case Family::GumbelVariant: return std::expm1(std::log1p(-std::log(t)) / theta_);
      case Family::ExpReciprocal: {
        const double v = theta_ * (1.0 - t) / t;
        return std::exp(theta_) * std::expm1(v);
      }
    }
    return 0.0;
  }

  double phi_d1(double t) const {
    check_t(t);
    switch (family_) {
      case Family::Independence: return -1.0 / t;
      case Family::GumbelVariant: {
        const double w = 1.0 - std::log(t);
        return -std::pow(w, 1.0 / theta_ - 1.0) / (theta_ * t);
      }
      case Family::ExpReciprocal: return -(theta_ / (t * t)) * std::exp(theta_ / t);
    }
    return 0.0;
  }

  double phi_d2(double t) const {
    check_t(t);
    switch (family_) {
      case Family::Independence: return 1.0 / (t * t);
      case Family::GumbelVariant: {
        const double w = 1.0 - std::log(t);
        const double r = 1.0 / theta_;
        return r / (t * t) * ((r - 1.0) * std::pow(w, r - 2.0) + std::pow(w, r - 1.0));
      }
      case Family::ExpReciprocal:
        return std::exp(theta_ / t) * (2.0 * theta_ / (t * t * t) + theta_ * theta_ / (t * t * t * t));
    }
    return 0.0;
  }

  /// phi''(t) / phi'(t), finite even where phi' itself overflows.
  double phi_d2_over_d1(double t) const {
    check_t(t);
    switch (family_) {
      case Family::Independence: return -1.0 / t;
      case Family::GumbelVariant: {
        const double w = 1.0 - std::log(t);
        return -((1.0 / theta_ - 1.0) / w + 1.0) / t;
      }
      case Family::ExpReciprocal: return -(2.0 / t + theta_ / (t * t));
    }
    return 0.0;
  }

  // ---- the induced copula ----

  /// C(u) = psi(sum phi(u_i)). Arguments are clamped to [0, 1]; any zero gives 0.
  double copula(std::span<const double> u) const {
    detail::require_contract(!u.empty(), "copula needs at least one argument");
    for (double ui : u) {
      if (!(ui > 0.0)) return 0.0;
    }
    switch (family_) {
      case Family::Independence: {
        double prod = 1.0;
        for (double ui : u) prod *= std::min(ui, 1.0);
        return prod;
      }
      case Family::GumbelVariant: {
        const double s = gumbel_sum(u);
        return std::exp(-std::expm1(theta_ * std::log1p(s)));
      }
      case Family::ExpReciprocal: return theta_ / (theta_ + er_excess_log(u));
    }
    return 0.0;
  }

  /// Fills grad with dC/du_i and returns C(u).
  double copula_gradient(std::span<const double> u, std::span<double> grad) const {
    detail::require_contract(grad.size() == u.size(), "gradient buffer size mismatch");
    const double value = copula(u);
    const std::size_t n = u.size();
    std::size_t zeros = 0;
    for (double ui : u) zeros += !(ui > 0.0);
    if (zeros > 0) {
      // On the boundary only the independence copula has a nonzero partial,
      // and only when exactly one argument vanishes.
      std::fill(grad.begin(), grad.end(), 0.0);
      if (family_ == Family::Independence && zeros == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          if (u[i] > 0.0) continue;
          double prod = 1.0;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i) prod *= std::min(u[j], 1.0);
          grad[i] = prod;
        }
      }
      return value;
    }
    switch (family_) {
      case Family::Independence:
        for (std::size_t i = 0; i < n; ++i) {
          double prod = 1.0;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i) prod *= std::min(u[j], 1.0);
          grad[i] = prod;
        }
        break;
      case Family::GumbelVariant: {
        const double s = gumbel_sum(u);
        const double log_psi = -std::expm1(theta_ * std::log1p(s));
        const double base = (theta_ - 1.0) * std::log1p(s) + log_psi;
        for (std::size_t i = 0; i < n; ++i) {
          const double ui = std::min(u[i], 1.0);
          const double w = 1.0 - std::log(ui);
          grad[i] = std::exp(base + (1.0 / theta_ - 1.0) * std::log(w) - std::log(ui));
        }
        break;
      }
      case Family::ExpReciprocal: {
        const double ell = er_excess_log(u);
        const double big_l = theta_ + ell;
        for (std::size_t i = 0; i < n; ++i) {
          const double ui = std::min(u[i], 1.0);
          const double v = theta_ * (1.0 - ui) / ui;
          grad[i] = theta_ * theta_ / (big_l * big_l * ui * ui) * std::exp(v - ell);
        }
        break;
      }
    }
    return value;
  }

  friend bool operator==(const Generator& a, const Generator& b) {
    return a.family_ == b.family_ && (a.family_ == Family::Independence || a.theta_ == b.theta_);
  }

 private:
  static void check_s(double s) { detail::require_domain(s >= 0.0, "psi argument must be >= 0"); }
  static void check_t(double t) {
    detail::require_domain(t > 0.0 && t <= 1.0, "phi argument must lie in (0, 1]");
  }

  static std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  // log(s + e^theta) without forming e^theta + s directly.
  double er_log(double s) const { return theta_ + std::log1p(s * std::exp(-theta_)); }
  // 1 / (s + e^theta)
  double er_inv_shift(double s) const {
    return std::exp(-theta_) / (1.0 + s * std::exp(-theta_));
  }

  double gumbel_sum(std::span<const double> u) const {
    double s = 0.0;
    for (double ui : u) s += std::expm1(std::log1p(-std::log(std::min(ui, 1.0))) / theta_);
    return s;
  }

  // log(sum phi(u_i) + e^theta) - theta, computed in log space so that
  // exp(theta / u) never has to be formed.
  double er_excess_log(std::span<const double> u) const {
    double vmax = 0.0;
    for (double ui : u) vmax = std::max(vmax, theta_ * (1.0 - std::min(ui, 1.0)) / ui);
    if (vmax < 600.0) {
      double acc = 0.0;
      for (double ui : u) acc += std::expm1(theta_ * (1.0 - std::min(ui, 1.0)) / ui);
      return std::log1p(acc);
    }
    double acc = 0.0;
    for (double ui : u) acc += std::exp(theta_ * (1.0 - std::min(ui, 1.0)) / ui - vmax);
    acc -= static_cast<double>(u.size() - 1) * std::exp(-vmax);
    return vmax + std::log(acc);
  }

  Family family_ = Family::Independence;
  double theta_ = 0.0;
};

}  // namespace eoc
