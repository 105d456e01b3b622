#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace degwave {

enum class ProfileKind { power_law, tabulated };

/// One row of a tabulated profile: samples of a, b and a' at x in (0, 1].
struct TableRow {
  double x = 0.0;
  double a = 0.0;
  double b = 0.0;
  double aprime = 0.0;
};

/// The coefficient pair (a, b) of  u_tt = a u_xx + b u_x,  degenerate at x = 0.
///
/// Power-law profiles are a = x^K, b = c x^h (K = 0 gives a == 1). Tabulated
/// profiles interpolate a, b and the supplied a' piecewise linearly; below the
/// first sample they continue a as a power law with the local exponent
/// x a'/a and keep b/a constant.
class CoefficientProfile {
 public:
  static CoefficientProfile power_law(double K, double h, double c);
  static CoefficientProfile tabulated(std::vector<TableRow> rows);
  /// CSV with header x,a,b,aprime.
  static CoefficientProfile from_csv(const std::filesystem::path& path);

  double a(double x) const;
  double b(double x) const;
  double a_prime(double x) const;
  double b_over_a(double x) const;

  ProfileKind kind() const { return kind_; }
  double K_exp() const { return K_; }
  double h_exp() const { return h_; }
  double c_drift() const { return c_; }
  const std::vector<TableRow>& table() const { return table_; }

  std::string describe() const;

 private:
  CoefficientProfile() = default;

  std::size_t segment(double x) const;

  ProfileKind kind_ = ProfileKind::power_law;
  double K_ = 0.0;
  double h_ = 0.0;
  double c_ = 0.0;
  std::vector<TableRow> table_;
  double tail_exponent_ = 0.0;
};

/// eta(x) = exp(int_{1/2}^x b/a) and sigma = a / eta, evaluable anywhere on
/// [0, 1] and sampled on the quadrature grid x_i = (i/n)^2.
class WeightPair {
 public:
  double eta(double x) const;
  double sigma(double x) const;

  double eta_at_1() const { return eta_at_1_; }
  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& eta_nodes() const { return eta_nodes_; }
  const std::vector<double>& sigma_nodes() const { return sigma_nodes_; }

 private:
  friend WeightPair build_weights(const CoefficientProfile&, std::size_t);

  double log_eta(double x) const;

  CoefficientProfile profile_ = CoefficientProfile::power_law(0.0, 0.0, 0.0);
  std::vector<double> nodes_;
  std::vector<double> cumulative_;  // int_0^{nodes_[i]} b/a
  double cumulative_half_ = 0.0;    // int_0^{1/2} b/a
  std::vector<double> eta_nodes_;
  std::vector<double> sigma_nodes_;
  double eta_at_1_ = 1.0;
  double eta_min_ = 1.0;
  double eta_max_ = 1.0;
};

/// Throws Error(hypothesis_violation) when b/a is not integrable at 0.
WeightPair build_weights(const CoefficientProfile& profile, std::size_t n_quad);

enum class Degeneracy { none, WD, SD, supercritical };

const char* to_string(Degeneracy d);

struct DegeneracyReport {
  double K_measured = 0.0;
  Degeneracy classification = Degeneracy::none;
  double M = 0.0;      // max|b| / a(1)
  double M_inf = 0.0;  // max x|b|/a
  bool hyp_b_over_a_L1 = false;
  bool hyp_xK_over_a_monotone = false;
  bool hyp_xb_over_a_Linf = false;
  std::size_t n_probe = 0;
};

/// Probes x_i = (i/n)^2, i = 1..n. The probe-grid maximum is taken as the sup.
DegeneracyReport classify_degeneracy(const CoefficientProfile& profile,
                                     std::size_t n_probe);

enum class TimeRegime { WD_or_K1, SD_Kgt1 };

const char* to_string(TimeRegime r);

struct ControlTimeBound {
  double T0 = std::numeric_limits<double>::infinity();
  TimeRegime regime = TimeRegime::WD_or_K1;
  double gap = 0.0;  // 2 - K - 2M  or  2 - K - 2M_inf
  /// max{1, 1/a(1), K eta_max / (a(1) eta_min)}
  double inner_max = 1.0;
  /// The drift constant that entered the gap (M or M_inf).
  double drift_constant = 0.0;

  bool finite() const { return gap > 0.0; }
};

ControlTimeBound observability_time(const DegeneracyReport& report,
                                    const WeightPair& weights, double a_at_1);

/// Right-hand constant of the direct inequality:
/// 2 (2 + K + M) T + 4 max{1/a(1), 1}.
double direct_inequality_constant(const DegeneracyReport& report, double a_at_1,
                                  double T);

/// Lower observability constant T * gap - 8 * inner_max (may be <= 0).
double observability_lower_constant(const ControlTimeBound& bound, double T);

}  // namespace degwave
