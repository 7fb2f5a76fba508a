#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace cpt {

/// Kahneman-Tversky power utility: (x-x0)^alpha on gains, -lambda (x0-x)^beta on losses.
struct KtParams {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 1.0;
};

/// Kobberling-Wakker exponential utility.
struct KwParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Curvature class a branch of the generalized utility is declared to have.
enum class BranchShape { Concave, Convex, Linear };

/// Generalized exponential utility
///
///   gain (x >= x0):  lambda1 * (mu1 - exp(alpha/gamma1 * (x - x0))) / alpha
///   loss (x <  x0):  lambda2 * (mu2 - exp(beta/gamma2  * (x - x0))) / beta
///
/// The declared shapes select which parameter inequalities are enforced.
struct GeneralizedParams {
  double lambda1 = 2.0;
  double lambda2 = 4.0;
  double alpha = 3.0;
  double beta = 2.0;
  double gamma1 = -5.0;
  double gamma2 = -5.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  BranchShape gain_shape = BranchShape::Concave;
  BranchShape loss_shape = BranchShape::Concave;
};

/// Branch declared Linear when |alpha/gamma| is at most this.
inline constexpr double kLinearCurvatureTol = 1e-6;

/// A validated utility function with its reference point.
///
/// Construction throws std::invalid_argument if the parameters violate the
/// family's constraints, so every UtilitySpec in existence is usable.
/// u(x0) is 0 by convention; x > x0 is the gain branch, x < x0 the loss branch.
/// `domain_min` optionally bounds the metric from below (e.g. 0 for SNR).
class UtilitySpec {
 public:
  using Family = std::variant<KtParams, KwParams, GeneralizedParams>;

  static UtilitySpec kt(const KtParams& p, double x0,
                        double domain_min = -std::numeric_limits<double>::infinity());
  static UtilitySpec kw(const KwParams& p, double x0,
                        double domain_min = -std::numeric_limits<double>::infinity());
  static UtilitySpec generalized(const GeneralizedParams& p, double x0,
                                 double domain_min = -std::numeric_limits<double>::infinity());

  const Family& family() const { return family_; }
  double x0() const { return x0_; }
  double domain_min() const { return domain_min_; }

  template <typename T>
  const T* get() const { return std::get_if<T>(&family_); }

  std::string family_name() const;

  /// Same parameters, different reference point.
  UtilitySpec with_reference(double x0) const;

 private:
  UtilitySpec(Family f, double x0, double domain_min);
  Family family_;
  double x0_;
  double domain_min_;
};

enum class Side { Left, Right, Auto };

/// Derivative at KT's reference point when alpha < 1 or beta < 1.
class unbounded_derivative : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Slope {
  double value;
  bool at_kink;  ///< x == x0 and the side was resolved automatically
};

double utility_value(const UtilitySpec& spec, double x);

/// One-sided analytic derivative. At x0, Side::Auto returns the right
/// derivative and sets `at_kink`.
Slope utility_derivative(const UtilitySpec& spec, double x, Side side = Side::Auto);

double utility_second_derivative(const UtilitySpec& spec, double x);

/// Signed Arrow-Pratt coefficient -u''(x)/u'(x). Rejects x == x0.
///
/// For the generalized family this is -alpha/gamma1 on gains and
/// -beta/gamma2 on losses, i.e. positive on concave branches.
double arrow_pratt(const UtilitySpec& spec, double x);

/// Case-study regime the closed-form power allocation relies on:
/// generalized family, both branches concave, mu1 = mu2 = 1,
/// and -lambda1/gamma1 < -lambda2/gamma2.
bool is_concave_loss_averse(const UtilitySpec& spec);

}  // namespace cpt
