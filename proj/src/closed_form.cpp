#include "scmimo/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace scmimo {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

double cmfp_rate_closed(double rho, int antennas, int users, double trace_a2) {
  require_positive(rho, "rho");
  require_positive(antennas, "antennas");
  require_positive(users, "users");
  require_positive(trace_a2, "tr(A^2)");
  const double m = antennas, k = users;
  return 0.5 * k * std::log2(1.0 + m * rho / (k * (trace_a2 / m) * rho + k));
}

double cmfp_rate_limit(int antennas, int users, double trace_a2) {
  require_positive(antennas, "antennas");
  require_positive(users, "users");
  require_positive(trace_a2, "tr(A^2)");
  const double m = antennas, k = users;
  return 0.5 * k * std::log2(1.0 + m * m / (k * trace_a2));
}

double coop_capacity(double rho, int antennas, int users) {
  require_positive(rho, "rho");
  require_positive(antennas, "antennas");
  require_positive(users, "users");
  const double m = antennas, k = users;
  return 0.5 * k * std::log2(1.0 + m * rho / k);
}

double cmfe_rate_closed(double rho, int antennas, int users, double trace_a, double trace_a2,
                        const RVector& pdp_row) {
  require_positive(rho, "rho");
  require_positive(antennas, "antennas");
  require_positive(users, "users");
  if (pdp_row.size() == 0 || std::abs(pdp_row.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("PDP row must sum to 1");
  const double m = antennas, k = users;
  const double s = pdp_row.squaredNorm();
  const double num = trace_a2 * s * rho + trace_a * trace_a * rho;
  const double den = trace_a2 * (k - s) * rho + m;
  return 0.5 * k * std::log2(1.0 + num / den);
}

double cmfp_desired_power(double rho, int antennas, int users) {
  return static_cast<double>(antennas) * rho / users;
}

double cmfp_effective_noise(double rho, int antennas, double trace_a2) {
  return trace_a2 * rho / antennas + 1.0;
}

double cmfe_noise_power(int antennas, int users, double trace_a) {
  return trace_a / (static_cast<double>(antennas) * users);
}

int appendix_case(int l, int l_prime, int b, int k, int q) {
  if (k == q) {
    if (l == l_prime) return b == 0 ? 1 : 2;
    return b == 0 ? 3 : 4;
  }
  if (l == l_prime) return b == 0 ? 5 : 6;
  return 7;
}

cdouble appendix_moment(int l, int l_prime, int b, int k, int q, const CorrelationMatrix& corr,
                        const PowerDelayProfile& pdp) {
  const int taps = pdp.taps();
  const int users = pdp.users();
  auto in_taps = [taps](int x) { return x >= 0 && x < taps; };
  if (!in_taps(l) || !in_taps(l_prime) || !in_taps(l - b) || !in_taps(l_prime - b))
    throw std::out_of_range("appendix_moment: tap index outside [0, L)");
  if (k < 0 || k >= users || q < 0 || q >= users)
    throw std::out_of_range("appendix_moment: user index outside [0, K)");
  if (corr.size() <= 0) throw std::invalid_argument("appendix_moment: empty correlation");

  const double tr = corr.trace();
  const double tr2 = corr.trace_squared();
  const auto d = [&pdp](int tap, int user) { return pdp.power(user, tap); };
  switch (appendix_case(l, l_prime, b, k, q)) {
    case 1: return (tr2 + tr * tr) * d(l, k) * d(l, k);
    case 2: return tr2 * d(l, k) * d(l - b, k);
    case 3: return tr * tr * d(l, k) * d(l_prime, k);
    case 5: return tr2 * d(l, k) * d(l, q);
    case 6: return tr2 * d(l, k) * d(l - b, q);
    default: return 0.0;
  }
}

}  // namespace scmimo
