#pragma once

#include <string>
#include <variant>

namespace cpt {

struct IdentityPwf {};

/// Tversky-Kahneman 1992 form p^d / (p^d + (1-p)^d)^(1/d).
struct Tk92Pwf {
  double delta = 1.0;
};

/// Prelec form exp(-gamma (-ln p)^theta).
struct PrelecPwf {
  double gamma = 1.0;
  double theta = 1.0;
};

/// Smallest TK92 exponent for which w stays strictly increasing on [0,1].
inline constexpr double kTk92MinDelta = 0.28;

/// A validated probability weighting function.
class WeightingSpec {
 public:
  using Family = std::variant<IdentityPwf, Tk92Pwf, PrelecPwf>;

  static WeightingSpec identity() { return WeightingSpec(IdentityPwf{}); }
  static WeightingSpec tk92(double delta);
  static WeightingSpec prelec(double gamma, double theta);

  const Family& family() const { return family_; }
  bool is_identity() const { return std::holds_alternative<IdentityPwf>(family_); }
  std::string family_name() const;

 private:
  explicit WeightingSpec(Family f) : family_(f) {}
  Family family_;
};

/// w(p) for p in [0,1]; w(0) = 0 and w(1) = 1 exactly.
double pwf_value(const WeightingSpec& w, double p);

/// 1 - w(p), accurate when p is close to 1 and `complement` = 1 - p is
/// supplied exactly.
double pwf_complement(const WeightingSpec& w, double p, double complement);

/// dw/dp on the open interval (0,1).
double pwf_derivative(const WeightingSpec& w, double p);

/// dw/dp where the caller also knows 1 - p to full precision (e.g. from a
/// survival function). Used by the perception integrals near the upper tail.
double pwf_derivative(const WeightingSpec& w, double p, double complement);

}  // namespace cpt
