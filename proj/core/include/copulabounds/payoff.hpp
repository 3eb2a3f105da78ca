#pragma once

#include <array>
#include <string>

namespace cbounds {

enum class PayoffKind {
  basket,          ///< (alpha x + beta y - K)^+
  call_on_min,     ///< (min(x, y) - K)^+
  put_on_min,      ///< (K - min(x, y))^+
  call_on_max,     ///< (max(x, y) - K)^+
  put_on_max,      ///< (K - max(x, y))^+
  worst_off_call,  ///< min((x - K1)^+, (y - K2)^+)
  worst_off_put,   ///< min((K1 - x)^+, (K2 - y)^+)
  best_off_call,   ///< max((x - K1)^+, (y - K2)^+)
  best_off_put,    ///< max((K1 - x)^+, (K2 - y)^+)
  product,         ///< x y
  log_product,     ///< log x log y
};

/// Two-asset European pay-off, already discounted.
class PayoffSpec {
 public:
  static PayoffSpec basket(double alpha, double beta, double strike);
  static PayoffSpec spread(double strike) { return basket(1.0, -1.0, strike); }
  static PayoffSpec call_on_min(double strike);
  static PayoffSpec put_on_min(double strike);
  static PayoffSpec call_on_max(double strike);
  static PayoffSpec put_on_max(double strike);
  static PayoffSpec worst_off_call(double k1, double k2);
  static PayoffSpec worst_off_put(double k1, double k2);
  static PayoffSpec best_off_call(double k1, double k2);
  static PayoffSpec best_off_put(double k1, double k2);
  static PayoffSpec product();
  static PayoffSpec log_product();

  double operator()(double x, double y) const;

  /// +1 when the pay-off is 2-increasing (price nondecreasing in the
  /// concordance order), -1 when 2-decreasing.
  int concordance_sign() const;

  /// Values of the functions whose zero sets carry the pay-off's kinks.
  /// Returns how many entries of `out` were filled.
  int kink_values(double x, double y, std::array<double, 3>& out) const;

  PayoffKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double strike() const { return strike_; }
  double strike2() const { return strike2_; }
  std::string name() const;

 private:
  PayoffSpec(PayoffKind kind, double alpha, double beta, double strike, double strike2)
      : kind_(kind), alpha_(alpha), beta_(beta), strike_(strike), strike2_(strike2) {}

  PayoffKind kind_;
  double alpha_;
  double beta_;
  double strike_;
  double strike2_;
};

}  // namespace cbounds
