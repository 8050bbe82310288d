#include "twrelay/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace twr {
namespace {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

  double uniform_open() {
    // 53 random mantissa bits, shifted away from zero for the logarithm.
    double u;
    do {
      u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> draw_link(NormalSource& src, int n, int m) {
  std::vector<std::complex<double>> taps(m);
  const double sd = std::sqrt(1.0 / (2.0 * m));
  for (auto& h : taps) {
    const double re = src.next() * sd;
    const double im = src.next() * sd;
    h = {re, im};
  }
  std::vector<double> gains(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < m; ++l) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) * l / n;
      acc += taps[l] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    gains[k] = std::norm(acc);
  }
  return gains;
}

}  // namespace

ChannelState generate_rayleigh_csi(int n_subcarriers, int n_taps, bool reciprocal,
                                   std::uint64_t seed) {
  if (n_subcarriers < 1) throw ParameterError("n_subcarriers must be positive");
  if (n_taps < 1) throw ParameterError("n_taps must be positive");
  if (n_taps > n_subcarriers) throw ParameterError("n_taps must not exceed n_subcarriers");
  NormalSource src(seed);
  ChannelState csi;
  csi.g1 = draw_link(src, n_subcarriers, n_taps);
  csi.g2 = draw_link(src, n_subcarriers, n_taps);
  if (reciprocal) {
    csi.gt1 = csi.g1;
    csi.gt2 = csi.g2;
  } else {
    csi.gt1 = draw_link(src, n_subcarriers, n_taps);
    csi.gt2 = draw_link(src, n_subcarriers, n_taps);
  }
  return csi;
}

PowerBudget scale_budget(const SnrScale& scale) {
  if (!(scale.x > 0.0) || !std::isfinite(scale.x)) {
    throw ParameterError("SNR scale factor must be positive");
  }
  return {scale.x * scale.base.p1, scale.x * scale.base.p2, scale.x * scale.base.pr};
}

std::pair<double, double> average_snr(const ChannelState& csi, const PowerBudget& budget) {
  const double n = static_cast<double>(csi.size());
  if (n == 0) return {0.0, 0.0};
  double s1 = 0.0, s2 = 0.0;
  for (double g : csi.g1) s1 += g;
  for (double g : csi.g2) s2 += g;
  return {s1 / n * budget.p1 / n, s2 / n * budget.p2 / n};
}

double budget_from_snr_db(int n_subcarriers, double snr_db) {
  if (n_subcarriers < 1) throw ParameterError("n_subcarriers must be positive");
  return n_subcarriers * std::pow(10.0, snr_db / 10.0);
}

}  // namespace twr
