#include "coefficients.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "quadrature.hpp"

namespace degwave {

CoefficientProfile CoefficientProfile::power_law(double K, double h, double c) {
  require(std::isfinite(K) && K >= 0.0, ErrorCode::invalid_argument,
          "power-law exponent K must be finite and >= 0");
  require(std::isfinite(h) && std::isfinite(c), ErrorCode::invalid_argument,
          "power-law drift parameters must be finite");
  CoefficientProfile p;
  p.kind_ = ProfileKind::power_law;
  p.K_ = K;
  p.h_ = h;
  p.c_ = c;
  return p;
}

CoefficientProfile CoefficientProfile::tabulated(std::vector<TableRow> rows) {
  require(rows.size() >= 2, ErrorCode::invalid_argument,
          "tabulated profile needs at least two rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require(std::isfinite(r.x) && std::isfinite(r.a) && std::isfinite(r.b) &&
                std::isfinite(r.aprime),
            ErrorCode::invalid_argument, "tabulated profile has non-finite entries");
    require(r.a > 0.0, ErrorCode::invalid_argument,
            "tabulated a must be positive on (0,1]");
    if (i > 0) {
      require(r.x > rows[i - 1].x, ErrorCode::invalid_argument,
              "tabulated x must be strictly increasing");
    }
  }
  require(rows.front().x > 0.0, ErrorCode::invalid_argument,
          "tabulated x must lie in (0,1]");
  require(std::abs(rows.back().x - 1.0) <= 1e-12, ErrorCode::invalid_argument,
          "tabulated profile must end at x = 1");
  rows.back().x = 1.0;

  CoefficientProfile p;
  p.kind_ = ProfileKind::tabulated;
  const auto& first = rows.front();
  p.tail_exponent_ = first.x * first.aprime / first.a;
  require(p.tail_exponent_ >= 0.0, ErrorCode::invalid_argument,
          "tabulated a must be nondecreasing at its first sample");
  p.table_ = std::move(rows);
  return p;
}

CoefficientProfile CoefficientProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error,
          "cannot open coefficient table " + path.string());

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::io_error,
          "empty coefficient table " + path.string());

  // Column order comes from the header.
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
      header.push_back(cell);
    }
  }
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    require(it != header.end(), ErrorCode::invalid_argument,
            "coefficient table is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = column("x"), ca = column("a"), cb = column("b"),
                    cd = column("aprime");

  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_argument,
                    "unparsable number '" + cell + "' in " + path.string());
      }
    }
    require(values.size() == header.size(), ErrorCode::invalid_argument,
            "row width mismatch in " + path.string());
    rows.push_back({values[cx], values[ca], values[cb], values[cd]});
  }
  return tabulated(std::move(rows));
}

std::size_t CoefficientProfile::segment(double x) const {
  auto it = std::upper_bound(table_.begin(), table_.end(), x,
                             [](double v, const TableRow& r) { return v < r.x; });
  std::size_t i = static_cast<std::size_t>(it - table_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, table_.size() - 2);
}

namespace {

double lerp_field(const TableRow& lo, const TableRow& hi, double x,
                  double TableRow::*field) {
  const double s = (x - lo.x) / (hi.x - lo.x);
  return lo.*field + s * (hi.*field - lo.*field);
}

}  // namespace

double CoefficientProfile::a(double x) const {
  if (kind_ == ProfileKind::power_law) {
    return K_ == 0.0 ? 1.0 : std::pow(x, K_);
  }
  const auto& first = table_.front();
  if (x < first.x) {
    return tail_exponent_ == 0.0 ? first.a
                                 : first.a * std::pow(x / first.x, tail_exponent_);
  }
  const std::size_t i = segment(x);
  return lerp_field(table_[i], table_[i + 1], x, &TableRow::a);
}

double CoefficientProfile::b(double x) const {
  if (kind_ == ProfileKind::power_law) {
    if (c_ == 0.0) return 0.0;
    return h_ == 0.0 ? c_ : c_ * std::pow(x, h_);
  }
  const auto& first = table_.front();
  if (x < first.x) return first.b * (a(x) / first.a);
  const std::size_t i = segment(x);
  return lerp_field(table_[i], table_[i + 1], x, &TableRow::b);
}

double CoefficientProfile::a_prime(double x) const {
  if (kind_ == ProfileKind::power_law) {
    if (K_ == 0.0) return 0.0;
    return K_ * std::pow(x, K_ - 1.0);
  }
  const auto& first = table_.front();
  if (x < first.x) return tail_exponent_ * a(x) / x;
  const std::size_t i = segment(x);
  return lerp_field(table_[i], table_[i + 1], x, &TableRow::aprime);
}

double CoefficientProfile::b_over_a(double x) const {
  if (kind_ == ProfileKind::power_law) {
    if (c_ == 0.0) return 0.0;
    return c_ * std::pow(x, h_ - K_);
  }
  return b(x) / a(x);
}

std::string CoefficientProfile::describe() const {
  std::ostringstream os;
  if (kind_ == ProfileKind::power_law) {
    os << "a = x^" << K_ << ", b = " << c_ << " x^" << h_;
  } else {
    os << "tabulated profile with " << table_.size() << " rows";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

double WeightPair::log_eta(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const std::size_t n = nodes_.size() - 1;
  std::size_t i = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::sqrt(x) * static_cast<double>(n)));
  while (i > 0 && nodes_[i] > x) --i;
  while (i + 1 < n && nodes_[i + 1] <= x) ++i;

  auto f = [this](double s) { return profile_.b_over_a(s); };
  double g = 0.0;
  if (i == 0) {
    g = quadrature::integrate_from_zero(f, x).value;
  } else {
    g = cumulative_[i] + quadrature::gauss_legendre(f, nodes_[i], x);
  }
  return g - cumulative_half_;
}

double WeightPair::eta(double x) const { return std::exp(log_eta(x)); }

double WeightPair::sigma(double x) const { return profile_.a(x) / eta(x); }

WeightPair build_weights(const CoefficientProfile& profile, std::size_t n_quad) {
  require(n_quad >= 64, ErrorCode::invalid_argument,
          "build_weights needs n_quad >= 64");

  WeightPair w;
  w.profile_ = profile;
  const double n = static_cast<double>(n_quad);
  w.nodes_.resize(n_quad + 1);
  for (std::size_t i = 0; i <= n_quad; ++i) {
    const double s = static_cast<double>(i) / n;
    w.nodes_[i] = s * s;
  }
  w.nodes_.back() = 1.0;

  auto abs_ratio = [&](double s) { return std::abs(profile.b_over_a(s)); };
  const auto check = quadrature::integrate_from_zero(abs_ratio, w.nodes_[1]);
  if (!check.converged) {
    throw Error(ErrorCode::hypothesis_violation,
                "b/a is not integrable at x = 0 (dyadic panel ratio " +
                    std::to_string(check.tail_ratio) + "); " + profile.describe());
  }

  auto ratio = [&](double s) { return profile.b_over_a(s); };
  w.cumulative_.assign(n_quad + 1, 0.0);
  w.cumulative_[1] = quadrature::integrate_from_zero(ratio, w.nodes_[1]).value;
  for (std::size_t i = 2; i <= n_quad; ++i) {
    w.cumulative_[i] =
        w.cumulative_[i - 1] + quadrature::gauss_legendre(ratio, w.nodes_[i - 1], w.nodes_[i]);
  }
  // Base point 1/2: evaluated through the same path as every other point so
  // that eta(1/2) is exactly 1.
  w.cumulative_half_ = 0.0;
  w.cumulative_half_ = w.log_eta(0.5);

  w.eta_nodes_.resize(n_quad + 1);
  w.sigma_nodes_.resize(n_quad + 1);
  for (std::size_t i = 0; i <= n_quad; ++i) {
    const double x = w.nodes_[i];
    const double lg = (i == 0) ? -w.cumulative_half_
                               : w.cumulative_[i] - w.cumulative_half_;
    w.eta_nodes_[i] = std::exp(lg);
    w.sigma_nodes_[i] = profile.a(x) / w.eta_nodes_[i];
  }
  w.eta_at_1_ = w.eta(1.0);
  const auto [mn, mx] = std::minmax_element(w.eta_nodes_.begin(), w.eta_nodes_.end());
  w.eta_min_ = std::min({*mn, 1.0, w.eta_at_1_});
  w.eta_max_ = std::max({*mx, 1.0, w.eta_at_1_});
  require(w.eta_min_ > 0.0 && std::isfinite(w.eta_max_),
          ErrorCode::hypothesis_violation, "eta is not bounded away from 0 and infinity");
  return w;
}

// ---------------------------------------------------------------------------

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::none: return "none";
    case Degeneracy::WD: return "WD";
    case Degeneracy::SD: return "SD";
    case Degeneracy::supercritical: return "supercritical";
  }
  return "?";
}

const char* to_string(TimeRegime r) {
  return r == TimeRegime::WD_or_K1 ? "WD_or_K1" : "SD_Kgt1";
}

DegeneracyReport classify_degeneracy(const CoefficientProfile& profile,
                                     std::size_t n_probe) {
  require(n_probe >= 128, ErrorCode::invalid_argument,
          "classify_degeneracy needs n_probe >= 128");
  DegeneracyReport r;
  r.n_probe = n_probe;

  std::vector<double> xs(n_probe);
  for (std::size_t i = 1; i <= n_probe; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n_probe);
    xs[i - 1] = s * s;
  }
  xs.back() = 1.0;

  const double a1 = profile.a(1.0);
  double max_b = 0.0;
  std::vector<double> xb_over_a(n_probe);
  for (std::size_t i = 0; i < n_probe; ++i) {
    const double x = xs[i];
    const double a = profile.a(x);
    r.K_measured = std::max(r.K_measured, x * std::abs(profile.a_prime(x)) / a);
    max_b = std::max(max_b, std::abs(profile.b(x)));
    xb_over_a[i] = x * std::abs(profile.b_over_a(x));
    r.M_inf = std::max(r.M_inf, xb_over_a[i]);
  }
  r.M = max_b / a1;

  const double K = r.K_measured;
  if (K <= 0.0) {
    r.classification = Degeneracy::none;
  } else if (K < 1.0) {
    r.classification = Degeneracy::WD;
  } else if (K < 2.0) {
    r.classification = Degeneracy::SD;
  } else {
    r.classification = Degeneracy::supercritical;
  }

  auto abs_ratio = [&](double s) { return std::abs(profile.b_over_a(s)); };
  r.hyp_b_over_a_L1 = quadrature::integrate_from_zero(abs_ratio, xs.front()).converged;

  r.hyp_xK_over_a_monotone = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < n_probe; ++i) {
    const double q = std::pow(xs[i], K) / profile.a(xs[i]);
    if (i > 0 && q < prev * (1.0 - 1e-10)) {
      r.hyp_xK_over_a_monotone = false;
      break;
    }
    prev = q;
  }

  // Bounded means finite and not maximal at the probe closest to 0.
  const double rest_max =
      *std::max_element(xb_over_a.begin() + 1, xb_over_a.end());
  r.hyp_xb_over_a_Linf = std::isfinite(r.M_inf) &&
                         (xb_over_a.front() == 0.0 ||
                          xb_over_a.front() <= rest_max * (1.0 + 1e-9));
  return r;
}

ControlTimeBound observability_time(const DegeneracyReport& report,
                                    const WeightPair& weights, double a_at_1) {
  ControlTimeBound out;
  const double K = report.K_measured;
  const bool strong = K > 1.0;
  out.regime = strong ? TimeRegime::SD_Kgt1 : TimeRegime::WD_or_K1;
  out.drift_constant = strong ? report.M_inf : report.M;
  out.gap = 2.0 - K - 2.0 * out.drift_constant;
  out.inner_max = std::max({1.0, 1.0 / a_at_1,
                            K * weights.eta_max() / (a_at_1 * weights.eta_min())});
  out.T0 = out.gap > 0.0 ? 8.0 * out.inner_max / out.gap
                         : std::numeric_limits<double>::infinity();
  return out;
}

double direct_inequality_constant(const DegeneracyReport& report, double a_at_1,
                                  double T) {
  return 2.0 * (2.0 + report.K_measured + report.M) * T +
         4.0 * std::max(1.0 / a_at_1, 1.0);
}

double observability_lower_constant(const ControlTimeBound& bound, double T) {
  return T * bound.gap - 8.0 * bound.inner_max;
}

}  // namespace degwave
