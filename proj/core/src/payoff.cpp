#include "copulabounds/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cbounds {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

void require_strike(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("strike must be finite and >= 0");
}

}  // namespace

PayoffSpec PayoffSpec::basket(double alpha, double beta, double strike) {
  if (alpha == 0.0 || beta == 0.0 || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("basket: alpha and beta must be finite and nonzero");
  }
  if (!std::isfinite(strike)) throw std::invalid_argument("basket: strike must be finite");
  return {PayoffKind::basket, alpha, beta, strike, 0.0};
}

PayoffSpec PayoffSpec::call_on_min(double k) { require_strike(k); return {PayoffKind::call_on_min, 0, 0, k, 0}; }
PayoffSpec PayoffSpec::put_on_min(double k) { require_strike(k); return {PayoffKind::put_on_min, 0, 0, k, 0}; }
PayoffSpec PayoffSpec::call_on_max(double k) { require_strike(k); return {PayoffKind::call_on_max, 0, 0, k, 0}; }
PayoffSpec PayoffSpec::put_on_max(double k) { require_strike(k); return {PayoffKind::put_on_max, 0, 0, k, 0}; }

PayoffSpec PayoffSpec::worst_off_call(double k1, double k2) {
  require_strike(k1); require_strike(k2);
  return {PayoffKind::worst_off_call, 0, 0, k1, k2};
}
PayoffSpec PayoffSpec::worst_off_put(double k1, double k2) {
  require_strike(k1); require_strike(k2);
  return {PayoffKind::worst_off_put, 0, 0, k1, k2};
}
PayoffSpec PayoffSpec::best_off_call(double k1, double k2) {
  require_strike(k1); require_strike(k2);
  return {PayoffKind::best_off_call, 0, 0, k1, k2};
}
PayoffSpec PayoffSpec::best_off_put(double k1, double k2) {
  require_strike(k1); require_strike(k2);
  return {PayoffKind::best_off_put, 0, 0, k1, k2};
}
PayoffSpec PayoffSpec::product() { return {PayoffKind::product, 0, 0, 0, 0}; }
PayoffSpec PayoffSpec::log_product() { return {PayoffKind::log_product, 0, 0, 0, 0}; }

double PayoffSpec::operator()(double x, double y) const {
  const double k = strike_, k2 = strike2_;
  switch (kind_) {
    case PayoffKind::basket: return pos(alpha_ * x + beta_ * y - k);
    case PayoffKind::call_on_min: return pos(std::min(x, y) - k);
    case PayoffKind::put_on_min: return pos(k - std::min(x, y));
    case PayoffKind::call_on_max: return pos(std::max(x, y) - k);
    case PayoffKind::put_on_max: return pos(k - std::max(x, y));
    case PayoffKind::worst_off_call: return std::min(pos(x - k), pos(y - k2));
    case PayoffKind::worst_off_put: return std::min(pos(k - x), pos(k2 - y));
    case PayoffKind::best_off_call: return std::max(pos(x - k), pos(y - k2));
    case PayoffKind::best_off_put: return std::max(pos(k - x), pos(k2 - y));
    case PayoffKind::product: return x * y;
    case PayoffKind::log_product: return std::log(x) * std::log(y);
  }
  return 0.0;
}

// The put rows follow from the mixed second difference: (K - min)^+ loses
// value as the pair becomes more concordant, (K - max)^+ gains.
int PayoffSpec::concordance_sign() const {
  switch (kind_) {
    case PayoffKind::basket: return alpha_ * beta_ > 0.0 ? 1 : -1;
    case PayoffKind::call_on_min:
    case PayoffKind::put_on_max:
    case PayoffKind::worst_off_call:
    case PayoffKind::worst_off_put:
    case PayoffKind::product:
    case PayoffKind::log_product: return 1;
    case PayoffKind::put_on_min:
    case PayoffKind::call_on_max:
    case PayoffKind::best_off_call:
    case PayoffKind::best_off_put: return -1;
  }
  return 1;
}

int PayoffSpec::kink_values(double x, double y, std::array<double, 3>& out) const {
  const double k = strike_, k2 = strike2_;
  switch (kind_) {
    case PayoffKind::basket:
      out[0] = alpha_ * x + beta_ * y - k;
      return 1;
    case PayoffKind::call_on_min:
    case PayoffKind::put_on_min:
    case PayoffKind::call_on_max:
    case PayoffKind::put_on_max:
      out = {x - y, x - k, y - k};
      return 3;
    case PayoffKind::worst_off_call:
    case PayoffKind::worst_off_put:
    case PayoffKind::best_off_call:
    case PayoffKind::best_off_put:
      out = {x - k, y - k2, (x - k) - (y - k2)};
      return 3;
    case PayoffKind::product:
    case PayoffKind::log_product: return 0;
  }
  return 0;
}

std::string PayoffSpec::name() const {
  std::ostringstream os;
  switch (kind_) {
    case PayoffKind::basket: os << "basket(" << alpha_ << "," << beta_ << "," << strike_ << ")"; break;
    case PayoffKind::call_on_min: os << "call-on-min(" << strike_ << ")"; break;
    case PayoffKind::put_on_min: os << "put-on-min(" << strike_ << ")"; break;
    case PayoffKind::call_on_max: os << "call-on-max(" << strike_ << ")"; break;
    case PayoffKind::put_on_max: os << "put-on-max(" << strike_ << ")"; break;
    case PayoffKind::worst_off_call: os << "worst-off-call(" << strike_ << "," << strike2_ << ")"; break;
    case PayoffKind::worst_off_put: os << "worst-off-put(" << strike_ << "," << strike2_ << ")"; break;
    case PayoffKind::best_off_call: os << "best-off-call(" << strike_ << "," << strike2_ << ")"; break;
    case PayoffKind::best_off_put: os << "best-off-put(" << strike_ << "," << strike2_ << ")"; break;
    case PayoffKind::product: os << "product-xy"; break;
    case PayoffKind::log_product: os << "log-product"; break;
  }
  return os.str();
}

}  // namespace cbounds
