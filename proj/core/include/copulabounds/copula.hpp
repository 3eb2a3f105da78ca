#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <variant>

namespace cbounds {

inline double frechet_lower(double u, double v) { return std::max(0.0, u + v - 1.0); }
inline double frechet_upper(double u, double v) { return std::min(u, v); }

enum class Provenance { known_copula, quasi_copula, unverified };

const char* to_string(Provenance p);

/// Structural description of a surface, when one is known. Integration
/// routines use it to pick closed forms or to place quadrature breakpoints.
namespace shape {
struct Generic {};
struct Lower {};         ///< W
struct Upper {};         ///< M
struct Independence {};  ///< uv
struct Gaussian {
  double rho;
};
struct OnePointUpper {
  double a, b, theta;
};
struct OnePointLower {
  double a, b, theta;
};
}  // namespace shape

using SurfaceShape = std::variant<shape::Generic, shape::Lower, shape::Upper, shape::Independence,
                                  shape::Gaussian, shape::OnePointUpper, shape::OnePointLower>;

/// A function on the unit square together with what is known about it.
/// Immutable; copies share the evaluator. Evaluation must be safe from
/// concurrent callers.
class CopulaSurface {
 public:
  using Evaluator = std::function<double(double, double)>;

  CopulaSurface(Evaluator eval, Provenance provenance, SurfaceShape shape = shape::Generic{},
                std::string label = {});

  /// Value at (u, v); throws std::domain_error outside [0,1]^2.
  double operator()(double u, double v) const;

  Provenance provenance() const { return provenance_; }
  bool is_copula() const { return provenance_ == Provenance::known_copula; }
  const SurfaceShape& shape() const { return shape_; }
  const std::string& label() const { return label_; }

  CopulaSurface with_label(std::string label) const;

 private:
  std::shared_ptr<const Evaluator> eval_;
  Provenance provenance_;
  SurfaceShape shape_;
  std::string label_;
};

struct Rectangle {
  double u1, u2, v1, v2;

  /// Throws std::invalid_argument unless 0 <= u1 <= u2 <= 1 and likewise v.
  static Rectangle make(double u1, double u2, double v1, double v2);
};

/// C-volume C(u2,v2) + C(u1,v1) - C(u1,v2) - C(u2,v1).
double volume(const CopulaSurface& c, const Rectangle& r);

CopulaSurface lower_frechet();
CopulaSurface upper_frechet();
CopulaSurface independence();

/// Gaussian copula; rho = +1 and -1 return M and W exactly.
CopulaSurface gaussian_copula(double rho);

/// Pointwise best-possible bounds for copulas with C(a, b) = theta:
/// min(u, v, theta + (u-a)^+ + (v-b)^+) and max(0, u+v-1, theta - (a-u)^+ - (b-v)^+).
CopulaSurface one_point_upper(double a, double b, double theta);
CopulaSurface one_point_lower(double a, double b, double theta);

/// u - C(u, 1 - v). Maps copulas to copulas and quasi-copulas to quasi-copulas.
CopulaSurface bar_transform(const CopulaSurface& c);

/// u + v - 1 + C(1 - u, 1 - v).
double survival_value(const CopulaSurface& c, double u, double v);

/// Wraps a costly surface so each distinct (u, v) is evaluated once. The cache
/// is shared by copies and guarded for concurrent population.
CopulaSurface memoize(const CopulaSurface& c);

struct ValidationReport {
  bool passed = true;
  std::string worst_check;  ///< "boundary", "monotone", "lipschitz", "volume" or empty
  double worst_violation = 0.0;  ///< magnitude by which the worst check failed (<= 0 when passing)
  double u = 0.0, v = 0.0;       ///< lattice location of the worst check
  double min_cell_volume = 0.0;  ///< most negative cell volume seen (copula check only)
  double cell_u = 0.0, cell_v = 0.0;
};

/// Boundary conditions, monotonicity and 1-Lipschitz on the (grid_n+1)^2
/// lattice. Failures are report content, never exceptions.
ValidationReport validate_quasi_copula(const CopulaSurface& c, int grid_n = 200, double tol = 1e-9);

/// validate_quasi_copula plus V_C(cell) >= -tol on every lattice cell.
ValidationReport validate_copula(const CopulaSurface& c, int grid_n = 200, double tol = 1e-9);

}  // namespace cbounds
