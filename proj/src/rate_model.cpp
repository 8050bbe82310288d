#include "twrelay/rate_model.hpp"

#include <algorithm>
#include <limits>

namespace twr {
namespace {

void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("time proportion t must lie in (0,1)");
  }
}

void check_sizes(const ChannelState& csi, std::size_t a, std::size_t b, std::size_t c) {
  const std::size_t n = csi.size();
  if (a != n || b != n || c != n || csi.g2.size() != n || csi.gt1.size() != n ||
      csi.gt2.size() != n) {
    throw ParameterError("allocation and channel sizes disagree");
  }
}

// Phase-level link rates without the rho weights.
struct LinkRates {
  std::vector<double> up1, up2, sum, down12, down21;
};

LinkRates link_rates(const ResourceAllocation& a, const ChannelState& csi) {
  a.validate(csi.size());
  check_sizes(csi, a.p1.size(), a.p2.size(), a.pr.size());
  const double t = a.t, s = 1.0 - a.t;
  const std::size_t n = csi.size();
  LinkRates l;
  l.up1.resize(n);
  l.up2.resize(n);
  l.sum.resize(n);
  l.down12.resize(n);
  l.down21.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = csi.g1[i] * a.p1[i], x2 = csi.g2[i] * a.p2[i];
    l.up1[i] = t * log2_1p(x1 / t);
    l.up2[i] = t * log2_1p(x2 / t);
    l.sum[i] = t * log2_1p((x1 + x2) / t);
    l.down12[i] = s * log2_1p(csi.gt2[i] * a.pr[i] / s);
    l.down21[i] = s * log2_1p(csi.gt1[i] * a.pr[i] / s);
  }
  return l;
}

double total(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

}  // namespace

MaRates ma_rates(const std::vector<double>& p1, const std::vector<double>& p2, double t,
                 const ChannelState& csi, double rho) {
  check_t(t);
  MaRates r;
  for (std::size_t n = 0; n < p1.size(); ++n) {
    const double x1 = csi.g1[n] * p1[n], x2 = csi.g2[n] * p2[n];
    r.r1 += log2_1p(x1 / t);
    r.r2 += log2_1p(x2 / t);
    r.r3 += log2_1p((x1 + x2) / t);
  }
  r.r1 *= t;
  r.r2 *= t / rho;
  r.r3 *= t / (rho + 1.0);
  return r;
}

BcRates bc_rates(const std::vector<double>& pr, double t, const ChannelState& csi, double rho) {
  check_t(t);
  const double s = 1.0 - t;
  BcRates r;
  for (std::size_t n = 0; n < pr.size(); ++n) {
    r.r4 += log2_1p(csi.gt2[n] * pr[n] / s);
    r.r5 += log2_1p(csi.gt1[n] * pr[n] / s);
  }
  r.r4 *= s;
  r.r5 *= s / rho;
  return r;
}

MaRates ma_rates(const ResourceAllocation& alloc, const ChannelState& csi, double rho) {
  alloc.validate(csi.size());
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  return ma_rates(alloc.p1, alloc.p2, alloc.t, csi, rho);
}

BcRates bc_rates(const ResourceAllocation& alloc, const ChannelState& csi, double rho) {
  alloc.validate(csi.size());
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  return bc_rates(alloc.pr, alloc.t, csi, rho);
}

RegionConstraints df_constraints(const ResourceAllocation& alloc, const ChannelState& csi) {
  const LinkRates l = link_rates(alloc, csi);
  RegionConstraints c;
  c.cap12 = std::min(total(l.up1), total(l.down12));
  c.cap21 = std::min(total(l.up2), total(l.down21));
  c.cap_sum = total(l.sum);
  return c;
}

RegionConstraints psc_df_constraints(const ResourceAllocation& alloc, const ChannelState& csi) {
  const LinkRates l = link_rates(alloc, csi);
  RegionConstraints c;
  for (std::size_t n = 0; n < l.up1.size(); ++n) {
    c.cap12 += std::min(l.up1[n], l.down12[n]);
    c.cap21 += std::min(l.up2[n], l.down21[n]);
  }
  c.cap_sum = total(l.sum);
  return c;
}

RegionConstraints cutset_constraints(const ResourceAllocation& alloc, const ChannelState& csi) {
  RegionConstraints c = df_constraints(alloc, csi);
  c.cap_sum.reset();
  return c;
}

RegionConstraints af_constraints(const std::vector<double>& p1, const std::vector<double>& p2,
                                 const std::vector<double>& pr, const ChannelState& csi) {
  check_sizes(csi, p1.size(), p2.size(), pr.size());
  RegionConstraints c;
  for (std::size_t n = 0; n < p1.size(); ++n) {
    const double a = pr[n] / (p1[n] * csi.g1[n] + p2[n] * csi.g2[n] + 1.0);
    const double f2 = csi.gt2[n] * a, f1 = csi.gt1[n] * a;
    c.cap12 += 0.5 * log2_1p(2.0 * p1[n] * csi.g1[n] * f2 / (1.0 + f2));
    c.cap21 += 0.5 * log2_1p(2.0 * p2[n] * csi.g2[n] * f1 / (1.0 + f1));
  }
  return c;
}

RegionConstraints constraints_for(Strategy s, const ResourceAllocation& alloc,
                                  const ChannelState& csi) {
  switch (s) {
    case Strategy::kMscDf: return df_constraints(alloc, csi);
    case Strategy::kPscDf: return psc_df_constraints(alloc, csi);
    case Strategy::kCutset: return cutset_constraints(alloc, csi);
    case Strategy::kAf: return af_constraints(alloc.p1, alloc.p2, alloc.pr, csi);
  }
  throw ParameterError("unknown strategy");
}

double max_r12_on_ray(const RegionConstraints& c, double rho) {
  double r = std::min(c.cap12, c.cap21 / rho);
  if (c.cap_sum) r = std::min(r, *c.cap_sum / (1.0 + rho));
  return std::max(r, 0.0);
}

bool region_contains(const RegionConstraints& c, const RatePair& rate) {
  if (rate.r12 > c.cap12 + kMembershipTol) return false;
  if (rate.r21 > c.cap21 + kMembershipTol) return false;
  if (c.cap_sum && rate.r12 + rate.r21 > *c.cap_sum + kMembershipTol) return false;
  return true;
}

}  // namespace twr
