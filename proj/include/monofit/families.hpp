#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "monofit/rng.hpp"
#include "monofit/table.hpp"

namespace monofit {

enum class FamilyKind { Bernoulli, Poisson, Geometric, NormalFixedSigma, Exponential };

// One-parameter PDF family parameterized by its mean.  Each kind fixes a
// parameter interval Theta and an observable set D:
//
//   Bernoulli         Theta = [0,1]       D = {0,1}
//   Poisson           Theta = [0,inf)     D = nonnegative integers
//   Geometric         Theta = [0,inf)     D = nonnegative integers
//   NormalFixedSigma  Theta = R           D = R            (sigma > 0 fixed)
//   Exponential       Theta = (0,inf)     D = (0,inf)
//
// Boundary parameters (Bernoulli 0 and 1, Poisson 0, geometric 0) are
// included because sample means can attain them; the corresponding PDFs
// are point masses.  Values are immutable and freely shareable.
class FamilySpec {
 public:
  static FamilySpec bernoulli() { return FamilySpec(FamilyKind::Bernoulli); }
  static FamilySpec poisson() { return FamilySpec(FamilyKind::Poisson); }
  static FamilySpec geometric() { return FamilySpec(FamilyKind::Geometric); }
  static FamilySpec normal_fixed_sigma(double sigma);
  static FamilySpec exponential() { return FamilySpec(FamilyKind::Exponential); }

  // Accepts "bernoulli", "poisson", "geometric", "normal", "exponential".
  // sigma is required for "normal" and rejected otherwise.
  static FamilySpec from_name(std::string_view name, std::optional<double> sigma = {});

  FamilyKind kind() const { return kind_; }
  const char* name() const;
  double sigma() const;  // NormalFixedSigma only

  // Parameter interval Theta.
  bool contains_theta(double theta) const;
  std::string theta_interval() const;
  void require_theta(double theta) const;  // throws DomainError

  // Observable set D.
  bool observable(double x) const;

  bool operator==(const FamilySpec&) const = default;

 private:
  explicit FamilySpec(FamilyKind kind, double sigma = 0.0) : kind_(kind), sigma_(sigma) {}

  FamilyKind kind_;
  double sigma_;
};

// Integer-valued families accept x within this distance of an integer.
inline constexpr double kIntegerTolerance = 1e-9;

bool is_integral(double x);

// ln f(x|theta).  Returns -infinity exactly where the density/mass is
// zero, including the point-mass boundaries (e.g. Bernoulli f(1|0) = 0,
// geometric f(x|0) = 0 for x != 0).  Throws DomainError for theta
// outside Theta.
double log_pdf(const FamilySpec& family, double x, double theta);

// One draw from f(.|theta); deterministic given the rng state.
double sample(const FamilySpec& family, double theta, Rng& rng);

// Throws ValidationError naming the first entry outside D, or
// StructuralError for an empty table or level.
void validate_observable(const FamilySpec& family, const ObservationTable& table);

}  // namespace monofit
