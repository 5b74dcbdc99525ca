#include "monofit/families.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "monofit/errors.hpp"

namespace monofit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2*pi)

std::string format_value(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::int64_t poisson_knuth(double mean, Rng& rng) {
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_double();
  } while (p > limit);
  return k - 1;
}

}  // namespace

FamilySpec FamilySpec::normal_fixed_sigma(double sigma) {
  if (!(sigma > 0.0))
    throw ConfigError("normal family requires sigma > 0, got " + format_value(sigma));
  return FamilySpec(FamilyKind::NormalFixedSigma, sigma);
}

FamilySpec FamilySpec::from_name(std::string_view name, std::optional<double> sigma) {
  FamilySpec spec = [&] {
    if (name == "bernoulli") return bernoulli();
    if (name == "poisson") return poisson();
    if (name == "geometric") return geometric();
    if (name == "exponential") return exponential();
    if (name == "normal") {
      if (!sigma) throw ConfigError("normal family requires --sigma");
      return normal_fixed_sigma(*sigma);
    }
    throw ConfigError("unknown family '" + std::string(name) +
                      "' (expected bernoulli, poisson, geometric, normal, exponential)");
  }();
  if (sigma && spec.kind() != FamilyKind::NormalFixedSigma)
    throw ConfigError("sigma only applies to the normal family");
  return spec;
}

const char* FamilySpec::name() const {
  switch (kind_) {
    case FamilyKind::Bernoulli: return "bernoulli";
    case FamilyKind::Poisson: return "poisson";
    case FamilyKind::Geometric: return "geometric";
    case FamilyKind::NormalFixedSigma: return "normal";
    case FamilyKind::Exponential: return "exponential";
  }
  return "?";
}

double FamilySpec::sigma() const {
  if (kind_ != FamilyKind::NormalFixedSigma)
    throw ConfigError(std::string(name()) + " family has no sigma");
  return sigma_;
}

bool FamilySpec::contains_theta(double theta) const {
  if (std::isnan(theta)) return false;
  switch (kind_) {
    case FamilyKind::Bernoulli: return theta >= 0.0 && theta <= 1.0;
    case FamilyKind::Poisson:
    case FamilyKind::Geometric: return theta >= 0.0;
    case FamilyKind::NormalFixedSigma: return std::isfinite(theta);
    case FamilyKind::Exponential: return theta > 0.0;
  }
  return false;
}

std::string FamilySpec::theta_interval() const {
  switch (kind_) {
    case FamilyKind::Bernoulli: return "[0, 1]";
    case FamilyKind::Poisson:
    case FamilyKind::Geometric: return "[0, inf)";
    case FamilyKind::NormalFixedSigma: return "(-inf, inf)";
    case FamilyKind::Exponential: return "(0, inf)";
  }
  return "?";
}

void FamilySpec::require_theta(double theta) const {
  if (!contains_theta(theta))
    throw DomainError(std::string(name()) + ": parameter " + format_value(theta) +
                      " outside " + theta_interval());
}

bool is_integral(double x) {
  return std::isfinite(x) && std::fabs(x - std::round(x)) <= kIntegerTolerance;
}

bool FamilySpec::observable(double x) const {
  switch (kind_) {
    case FamilyKind::Bernoulli: {
      if (!is_integral(x)) return false;
      const double v = std::round(x);
      return v == 0.0 || v == 1.0;
    }
    case FamilyKind::Poisson:
    case FamilyKind::Geometric: return is_integral(x) && std::round(x) >= 0.0;
    case FamilyKind::NormalFixedSigma: return std::isfinite(x);
    case FamilyKind::Exponential: return std::isfinite(x) && x > 0.0;
  }
  return false;
}

double log_pdf(const FamilySpec& family, double x, double theta) {
  family.require_theta(theta);
  switch (family.kind()) {
    case FamilyKind::Bernoulli: {
      if (!is_integral(x)) return kNegInf;
      const double v = std::round(x);
      if (v == 1.0) return std::log(theta);      // -inf at theta = 0
      if (v == 0.0) return std::log1p(-theta);   // -inf at theta = 1
      return kNegInf;
    }
    case FamilyKind::Poisson: {
      if (!is_integral(x) || std::round(x) < 0.0) return kNegInf;
      const double k = std::round(x);
      if (theta == 0.0) return k == 0.0 ? 0.0 : kNegInf;
      return -theta + k * std::log(theta) - std::lgamma(k + 1.0);
    }
    case FamilyKind::Geometric: {
      // mean parameterization: p = 1/(1+theta), mass (1-p)^k p
      if (!is_integral(x) || std::round(x) < 0.0) return kNegInf;
      const double k = std::round(x);
      if (theta == 0.0) return k == 0.0 ? 0.0 : kNegInf;
      const double log_q = std::log(theta) - std::log1p(theta);  // ln(1-p)
      return k * log_q - std::log1p(theta);
    }
    case FamilyKind::NormalFixedSigma: {
      const double z = (x - theta) / family.sigma();
      return -0.5 * z * z - std::log(family.sigma()) - kHalfLog2Pi;
    }
    case FamilyKind::Exponential: {
      if (!(x > 0.0)) return kNegInf;
      return -std::log(theta) - x / theta;
    }
  }
  return kNegInf;
}

double sample(const FamilySpec& family, double theta, Rng& rng) {
  family.require_theta(theta);
  switch (family.kind()) {
    case FamilyKind::Bernoulli:
      return rng.next_double() < theta ? 1.0 : 0.0;
    case FamilyKind::Poisson: {
      // chunked Knuth product method; exp(-chunk) stays well above underflow
      std::int64_t total = 0;
      double remaining = theta;
      while (remaining > 30.0) {
        total += poisson_knuth(30.0, rng);
        remaining -= 30.0;
      }
      if (remaining > 0.0) total += poisson_knuth(remaining, rng);
      return static_cast<double>(total);
    }
    case FamilyKind::Geometric: {
      if (theta == 0.0) return 0.0;
      // inversion on p = 1/(1+theta)
      const double log_q = std::log(theta) - std::log1p(theta);
      const double u = rng.next_double();
      return std::floor(std::log1p(-u) / log_q);
    }
    case FamilyKind::NormalFixedSigma: {
      // Box-Muller, one value per call
      const double u1 = 1.0 - rng.next_double();  // (0,1]
      const double u2 = rng.next_double();
      const double r = std::sqrt(-2.0 * std::log(u1));
      return theta + family.sigma() * r * std::cos(6.28318530717958647693 * u2);
    }
    case FamilyKind::Exponential: {
      double x;
      do {
        double u;
        do {
          u = rng.next_double();
        } while (u == 0.0);
        x = -theta * std::log(u);
      } while (!(x > 0.0));
      return x;
    }
  }
  return 0.0;
}

void validate_observable(const FamilySpec& family, const ObservationTable& table) {
  check_shape(table);
  for (int i = 0; i < table.level_count(); ++i) {
    const auto& level = table.levels[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < level.values.size(); ++j) {
      const double x = level.values[j];
      if (!family.observable(x))
        throw ValidationError(std::string(family.name()) + ": value " + format_value(x) +
                              " at level " + std::to_string(i + 1) + " (" + level.label +
                              "), observation " + std::to_string(j + 1) +
                              " is not observable");
    }
  }
}

}  // namespace monofit
