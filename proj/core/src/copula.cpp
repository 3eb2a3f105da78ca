#include "copulabounds/copula.hpp"

#include "copulabounds/numerics.hpp"
#include "copulabounds/parallel.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace cbounds {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::known_copula: return "known-copula";
    case Provenance::quasi_copula: return "quasi-copula";
    case Provenance::unverified: return "unverified";
  }
  return "?";
}

CopulaSurface::CopulaSurface(Evaluator eval, Provenance provenance, SurfaceShape shape,
                             std::string label)
    : eval_(std::make_shared<const Evaluator>(std::move(eval))),
      provenance_(provenance),
      shape_(shape),
      label_(std::move(label)) {
  if (!*eval_) throw std::invalid_argument("CopulaSurface: empty evaluator");
}

double CopulaSurface::operator()(double u, double v) const {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("copula surface evaluated outside the unit square");
  }
  return (*eval_)(u, v);
}

CopulaSurface CopulaSurface::with_label(std::string label) const {
  CopulaSurface copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

Rectangle Rectangle::make(double u1, double u2, double v1, double v2) {
  if (!(0.0 <= u1 && u1 <= u2 && u2 <= 1.0 && 0.0 <= v1 && v1 <= v2 && v2 <= 1.0)) {
    throw std::invalid_argument("Rectangle: corners must be ordered inside [0,1]^2");
  }
  return {u1, u2, v1, v2};
}

double volume(const CopulaSurface& c, const Rectangle& r) {
  return c(r.u2, r.v2) + c(r.u1, r.v1) - c(r.u1, r.v2) - c(r.u2, r.v1);
}

CopulaSurface lower_frechet() {
  return {frechet_lower, Provenance::known_copula, shape::Lower{}, "W"};
}

CopulaSurface upper_frechet() {
  return {frechet_upper, Provenance::known_copula, shape::Upper{}, "M"};
}

CopulaSurface independence() {
  return {[](double u, double v) { return u * v; }, Provenance::known_copula, shape::Independence{},
          "Pi"};
}

CopulaSurface gaussian_copula(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("gaussian_copula: |rho| must be <= 1");
  if (rho == 1.0) return upper_frechet();
  if (rho == -1.0) return lower_frechet();
  auto eval = [rho](double u, double v) {
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    const double c = bivariate_normal_cdf(norm_quantile(u), norm_quantile(v), rho);
    return std::clamp(c, frechet_lower(u, v), frechet_upper(u, v));
  };
  return {eval, Provenance::known_copula, shape::Gaussian{rho}, "Gaussian(" + std::to_string(rho) + ")"};
}

namespace {

void check_one_point(double a, double b, double theta) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("one-point bound: (a,b) outside [0,1]^2");
  }
  if (!(theta >= frechet_lower(a, b) - 1e-15 && theta <= frechet_upper(a, b) + 1e-15)) {
    throw std::invalid_argument("one-point bound: theta outside [W(a,b), M(a,b)]");
  }
}

}  // namespace

CopulaSurface one_point_upper(double a, double b, double theta) {
  check_one_point(a, b, theta);
  auto eval = [a, b, theta](double u, double v) {
    return std::min({u, v, theta + std::max(0.0, u - a) + std::max(0.0, v - b)});
  };
  return {eval, Provenance::known_copula, shape::OnePointUpper{a, b, theta}, "C_U"};
}

CopulaSurface one_point_lower(double a, double b, double theta) {
  check_one_point(a, b, theta);
  auto eval = [a, b, theta](double u, double v) {
    return std::max({0.0, u + v - 1.0, theta - std::max(0.0, a - u) - std::max(0.0, b - v)});
  };
  return {eval, Provenance::known_copula, shape::OnePointLower{a, b, theta}, "C_L"};
}

CopulaSurface bar_transform(const CopulaSurface& c) {
  SurfaceShape s = shape::Generic{};
  if (std::holds_alternative<shape::Upper>(c.shape())) s = shape::Lower{};
  if (std::holds_alternative<shape::Lower>(c.shape())) s = shape::Upper{};
  if (const auto* g = std::get_if<shape::Gaussian>(&c.shape())) s = shape::Gaussian{-g->rho};
  if (std::holds_alternative<shape::Independence>(c.shape())) s = shape::Independence{};
  return {[c](double u, double v) { return u - c(u, 1.0 - v); }, c.provenance(), s,
          "bar(" + c.label() + ")"};
}

double survival_value(const CopulaSurface& c, double u, double v) {
  return u + v - 1.0 + c(1.0 - u, 1.0 - v);
}

namespace {

struct PointHash {
  std::size_t operator()(const std::pair<double, double>& p) const noexcept {
    const auto a = std::bit_cast<std::uint64_t>(p.first);
    const auto b = std::bit_cast<std::uint64_t>(p.second);
    return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL));
  }
};

struct Cache {
  std::shared_mutex mutex;
  std::unordered_map<std::pair<double, double>, double, PointHash> values;
};

}  // namespace

CopulaSurface memoize(const CopulaSurface& c) {
  auto cache = std::make_shared<Cache>();
  auto eval = [c, cache](double u, double v) {
    const std::pair key{u, v};
    {
      std::shared_lock lock(cache->mutex);
      if (auto it = cache->values.find(key); it != cache->values.end()) return it->second;
    }
    const double value = c(u, v);
    std::unique_lock lock(cache->mutex);
    cache->values.emplace(key, value);
    return value;
  };
  return {eval, c.provenance(), c.shape(), c.label()};
}

namespace {

struct Worst {
  double margin = 0.0;  // violation amount; positive means failure
  std::string check;
  double u = 0.0, v = 0.0;

  void offer(double amount, const char* name, double uu, double vv) {
    if (check.empty() || amount > margin) {
      margin = amount;
      check = name;
      u = uu;
      v = vv;
    }
  }
};

ValidationReport validate(const CopulaSurface& c, int grid_n, double tol, bool copula) {
  if (grid_n < 2) throw std::invalid_argument("validation grid must have grid_n >= 2");
  const std::size_t n = static_cast<std::size_t>(grid_n);
  auto at = [n](std::size_t i) { return i == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n); };
  std::vector<double> val((n + 1) * (n + 1));
  parallel_for(n + 1, [&](std::size_t i) {
    for (std::size_t j = 0; j <= n; ++j) val[i * (n + 1) + j] = c(at(i), at(j));
  });
  auto C = [&](std::size_t i, std::size_t j) { return val[i * (n + 1) + j]; };

  constexpr double kBoundaryTol = 1e-12;
  Worst worst;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = at(k);
    worst.offer(std::abs(C(0, k)) - kBoundaryTol, "boundary", 0.0, t);
    worst.offer(std::abs(C(k, 0)) - kBoundaryTol, "boundary", t, 0.0);
    worst.offer(std::abs(C(n, k) - t) - kBoundaryTol, "boundary", 1.0, t);
    worst.offer(std::abs(C(k, n) - t) - kBoundaryTol, "boundary", t, 1.0);
  }
  ValidationReport report;
  double min_vol = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (i < n) {
        const double du = C(i + 1, j) - C(i, j);
        worst.offer(-du - tol, "monotone", at(i), at(j));
        worst.offer(du - (at(i + 1) - at(i)) - tol, "lipschitz", at(i), at(j));
      }
      if (j < n) {
        const double dv = C(i, j + 1) - C(i, j);
        worst.offer(-dv - tol, "monotone", at(i), at(j));
        worst.offer(dv - (at(j + 1) - at(j)) - tol, "lipschitz", at(i), at(j));
      }
      if (copula && i < n && j < n) {
        const double vol = C(i + 1, j + 1) + C(i, j) - C(i, j + 1) - C(i + 1, j);
        worst.offer(-vol - tol, "volume", at(i), at(j));
        if (vol < min_vol) {
          min_vol = vol;
          report.cell_u = at(i);
          report.cell_v = at(j);
        }
      }
    }
  }
  report.passed = worst.margin <= 0.0;
  report.worst_check = worst.check;
  report.worst_violation = worst.margin;
  report.u = worst.u;
  report.v = worst.v;
  report.min_cell_volume = min_vol;
  return report;
}

}  // namespace

ValidationReport validate_quasi_copula(const CopulaSurface& c, int grid_n, double tol) {
  return validate(c, grid_n, tol, false);
}

ValidationReport validate_copula(const CopulaSurface& c, int grid_n, double tol) {
  return validate(c, grid_n, tol, true);
}

}  // namespace cbounds
