#include "knotflow/kernels.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "knotflow/errors.hpp"

namespace knotflow {
namespace {

// coefficient * base^power, treating a zero coefficient as an exact zero even
// when the power is negative and the base vanishes.
double term(double coefficient, double base, int power) {
  if (coefficient == 0.0) return 0.0;
  return coefficient * std::pow(base, power);
}

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto slash = text.find('/');
  auto parse_plain = [&](std::string_view part) {
    double v = 0.0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size() || part.empty()) {
      throw Error(ErrorKind::ParseError, "cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return v;
  };
  if (slash == std::string_view::npos) {
    value = parse_plain(text);
  } else {
    const double num = parse_plain(text.substr(0, slash));
    const double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    value = num / den;
  }
  return value;
}

int parse_integer(std::string_view text, std::string_view what) {
  int value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::ParseError, "cannot read integer " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view text) {
  std::map<std::string, std::string, std::less<>> params;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorKind::ParseError, "expected key=value, got '" + std::string(item) + "'");
    }
    params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return params;
}

}  // namespace

Kernel::Kernel(KernelFamily family, double j, int q) : family_(family), j_(j), q_(q) {
  switch (family_) {
    case KernelFamily::None:
      p_ = 0.0;
      degeneracy_ = {Degeneracy::Kind::Order, std::numeric_limits<int>::max()};
      break;
    case KernelFamily::Distortion:
      p_ = 0.0;
      degeneracy_ = {Degeneracy::Kind::Zero, -1};
      break;
    case KernelFamily::Mobius:
      p_ = 1.0;
      degeneracy_ = {Degeneracy::Kind::Unsupported, -1};
      break;
    case KernelFamily::OHara:
      p_ = j_ * q_;
      if (q_ >= 2) {
        degeneracy_ = {Degeneracy::Kind::Order, q_ - 2};
      } else {
        degeneracy_ = {p_ < 0.5 ? Degeneracy::Kind::Zero : Degeneracy::Kind::Unsupported, -1};
      }
      break;
  }

  // Confirm the declared vanishing order of g at 1 from the data itself: the
  // ratio g(1 + s)/g(1 + s/2) must scale like 2^{m+1}.
  if (degeneracy_.kind == Degeneracy::Kind::Order && family_ != KernelFamily::None) {
    const int m = degeneracy_.order;
    if (std::abs(g(1.0)) > 1e-12) {
      throw Error(ErrorKind::InadmissibleParameters, "declared degenerate kernel has g(1) != 0");
    }
    const double s = 1e-2;
    const double observed = std::log2(std::abs(g(1.0 + s) / g(1.0 + 0.5 * s)));
    if (std::abs(observed - (m + 1)) > 0.1) {
      throw Error(ErrorKind::InadmissibleParameters, "kernel does not vanish to the declared order at the diagonal");
    }
  }
}

Kernel Kernel::none() { return Kernel(KernelFamily::None, 0.0, 0); }

Kernel Kernel::distortion(int q) {
  if (q < 1) throw Error(ErrorKind::InadmissibleParameters, "distortion exponent q must be a positive integer");
  return Kernel(KernelFamily::Distortion, 0.0, q);
}

Kernel Kernel::mobius() { return Kernel(KernelFamily::Mobius, 0.0, 0); }

Kernel Kernel::ohara(double j, int q) {
  if (!(j > 0.0) || q < 1) throw Error(ErrorKind::InadmissibleParameters, "O'Hara kernel needs j > 0 and q >= 1");
  if (j * q < 1.0 - 1e-12) throw Error(ErrorKind::InadmissibleParameters, "O'Hara kernel needs j*q >= 1");
  return Kernel(KernelFamily::OHara, j, q);
}

bool Kernel::flow_admissible() const noexcept {
  switch (degeneracy_.kind) {
    case Degeneracy::Kind::Zero: return p_ < 0.5;
    case Degeneracy::Kind::Order: return degeneracy_.order > 4.0 * p_ - 2.0;
    case Degeneracy::Kind::Unsupported: return false;
  }
  return false;
}

std::string Kernel::name() const {
  switch (family_) {
    case KernelFamily::None: return "none";
    case KernelFamily::Distortion: return "distortion:q=" + std::to_string(q_);
    case KernelFamily::Mobius: return "mobius";
    case KernelFamily::OHara: return "ohara:j=" + format_number(j_) + ",q=" + std::to_string(q_);
  }
  return "unknown";
}

double Kernel::h(double alpha) const { return h_at_log(std::log(alpha)); }

double Kernel::h_prime(double alpha) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return q_ * std::pow(alpha, q_ - 1);
    case KernelFamily::Mobius: return 1.0;
    case KernelFamily::OHara: {
      const double e = std::expm1(j_ * std::log(alpha));
      return term(q_ * j_, e, q_ - 1) * std::pow(alpha, j_ - 1.0);
    }
  }
  return 0.0;
}

double Kernel::g(double alpha) const { return g_at_log(std::log(alpha)); }

double Kernel::g_prime(double alpha) const { return g_prime_at_log(std::log(alpha)); }

double Kernel::g_double_prime(double alpha) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return -static_cast<double>(q_) * q_ * (q_ + 1) * std::pow(alpha, q_ - 1);
    case KernelFamily::Mobius: return -2.0;
    case KernelFamily::OHara: {
      const double j = j_;
      const double e = std::expm1(j * std::log(alpha));
      const double a_j = std::pow(alpha, j);
      const double inner = (q_ - 1) * j * (term((q_ - 2) * j, e, q_ - 3) * a_j * a_j * a_j + term(2.0 * j, e, q_ - 2) * a_j * a_j) +
                           (j + 1) * (term((q_ - 1) * j, e, q_ - 2) * a_j * a_j + term(j, e, q_ - 1) * a_j);
      return -q_ * j * inner / alpha;
    }
  }
  return 0.0;
}

double Kernel::h_at_log(double t) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return std::exp(q_ * t);
    case KernelFamily::Mobius: return std::expm1(t);
    case KernelFamily::OHara: return std::pow(std::expm1(j_ * t), q_);
  }
  return 0.0;
}

double Kernel::g_at_log(double t) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return -q_ * std::exp((q_ + 1) * t);
    case KernelFamily::Mobius: return -std::exp(2.0 * t);
    case KernelFamily::OHara: return -term(q_ * j_, std::expm1(j_ * t), q_ - 1) * std::exp((j_ + 1.0) * t);
  }
  return 0.0;
}

double Kernel::g_excess_at_log(double t) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return -q_ * std::expm1((q_ + 1) * t);
    case KernelFamily::Mobius: return -std::expm1(2.0 * t);
    case KernelFamily::OHara: return g_at_log(t) - g_at_log(0.0);
  }
  return 0.0;
}

double Kernel::g_prime_at_log(double t) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return -static_cast<double>(q_) * (q_ + 1) * std::exp(q_ * t);
    case KernelFamily::Mobius: return -2.0 * std::exp(t);
    case KernelFamily::OHara: {
      const double e = std::expm1(j_ * t);
      const double a_j = std::exp(j_ * t);
      return -q_ * j_ * a_j * (term((q_ - 1) * j_, e, q_ - 2) * a_j + term(j_ + 1.0, e, q_ - 1));
    }
  }
  return 0.0;
}

double Kernel::K(double u, double v) const {
  if (is_none()) return 0.0;
  return h_at_log(std::log(v / u)) * std::pow(v, -p_);
}

double Kernel::K_u(double u, double v) const {
  if (is_none()) return 0.0;
  return g_at_log(std::log(v / u)) * std::pow(v, -(p_ + 1.0));
}

double Kernel::uK_uu(double u, double v) const {
  if (is_none()) return 0.0;
  const double t = std::log(v / u);
  return -std::exp(t) * g_prime_at_log(t) * std::pow(v, -(p_ + 1.0));
}

double Kernel::diagonal_limit(double speed_sq, double curvature_sq) const {
  switch (family_) {
    case KernelFamily::None: return 0.0;
    case KernelFamily::Distortion: return h(1.0 / speed_sq);
    case KernelFamily::Mobius: return curvature_sq / 12.0;
    case KernelFamily::OHara: {
      // h vanishes to order q at 1 while v^{-p} = v^{-jq}.
      if (std::abs(j_ - 1.0) < 1e-12) return std::pow(curvature_sq / 12.0, q_);
      if (j_ < 1.0) return 0.0;
      return std::numeric_limits<double>::infinity();
    }
  }
  return 0.0;
}

Kernel parse_kernel(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  const auto params = parse_params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1));
  auto require = [&](std::string_view key) -> const std::string& {
    const auto it = params.find(key);
    if (it == params.end()) {
      throw Error(ErrorKind::ParseError, "kernel '" + std::string(spec) + "' is missing " + std::string(key));
    }
    return it->second;
  };
  auto expect_keys = [&](std::size_t count) {
    if (params.size() != count) throw Error(ErrorKind::ParseError, "unexpected parameters in '" + std::string(spec) + "'");
  };

  if (family == "none") {
    expect_keys(0);
    return Kernel::none();
  }
  if (family == "mobius") {
    expect_keys(0);
    return Kernel::mobius();
  }
  if (family == "distortion") {
    expect_keys(1);
    return Kernel::distortion(parse_integer(require("q"), "q"));
  }
  if (family == "ohara") {
    expect_keys(2);
    return Kernel::ohara(parse_number(require("j"), "j"), parse_integer(require("q"), "q"));
  }
  throw Error(ErrorKind::ParseError, "unknown kernel '" + std::string(spec) + "'");
}

}  // namespace knotflow
