#include "twrelay/barrier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "twrelay/rate_model.hpp"

namespace twr {
namespace {

constexpr double kLn2 = std::numbers::ln2;

using Sparse = std::vector<std::pair<int, double>>;

// tau log2(1 + q/tau) with q = sum coeff * x and tau = t or 1 - t.
struct Perspective {
  Sparse q;
  bool broadcast = false;
};

// c0 + lin . x + sum of perspective terms >= 0
struct Row {
  double c0 = 0.0;
  Sparse lin;
  std::vector<Perspective> terms;
};

class Program {
 public:
  Program(BarrierRegion region, double rho, const ChannelState& csi, const PowerBudget& budget)
      : n_(static_cast<int>(csi.size())), psc_(region == BarrierRegion::kPerSubcarrier) {
    dim_ = 3 * n_ + 2 + (psc_ ? 2 * n_ : 0);
    const int n = n_;
    auto up = [&](const std::vector<double>& g, int base, int i) {
      return Perspective{{{base + i, g[i]}}, false};
    };
    auto down = [&](const std::vector<double>& g, int i) {
      return Perspective{{{2 * n + i, g[i]}}, true};
    };
    auto sum_term = [&](int i) {
      return Perspective{{{i, csi.g1[i]}, {n + i, csi.g2[i]}}, false};
    };
    const int r = r_idx();
    if (psc_) {
      Row r12{0.0, {{r, -1.0}}, {}}, r21{0.0, {{r, -rho}}, {}};
      for (int i = 0; i < n; ++i) {
        const int u = u_idx(i), v = v_idx(i);
        rows_.push_back({0.0, {{u, -1.0}}, {up(csi.g1, 0, i)}});
        rows_.push_back({0.0, {{u, -1.0}}, {down(csi.gt2, i)}});
        rows_.push_back({0.0, {{v, -1.0}}, {up(csi.g2, n, i)}});
        rows_.push_back({0.0, {{v, -1.0}}, {down(csi.gt1, i)}});
        r12.lin.push_back({u, 1.0});
        r21.lin.push_back({v, 1.0});
      }
      rows_.push_back(r12);
      rows_.push_back(r21);
    } else {
      Row a{0.0, {{r, -1.0}}, {}}, b{0.0, {{r, -1.0}}, {}};
      Row c{0.0, {{r, -rho}}, {}}, d{0.0, {{r, -rho}}, {}};
      for (int i = 0; i < n; ++i) {
        a.terms.push_back(up(csi.g1, 0, i));
        b.terms.push_back(down(csi.gt2, i));
        c.terms.push_back(up(csi.g2, n, i));
        d.terms.push_back(down(csi.gt1, i));
      }
      rows_.insert(rows_.end(), {a, b, c, d});
    }
    Row s{0.0, {{r, -(1.0 + rho)}}, {}};
    for (int i = 0; i < n; ++i) s.terms.push_back(sum_term(i));
    rows_.push_back(s);

    const double caps[3] = {budget.p1, budget.p2, budget.pr};
    for (int k = 0; k < 3; ++k) {
      Row b{caps[k], {}, {}};
      for (int i = 0; i < n; ++i) b.lin.push_back({k * n + i, -1.0});
      rows_.push_back(b);
    }
    for (int j = 0; j < 3 * n; ++j) rows_.push_back({0.0, {{j, 1.0}}, {}});
    rows_.push_back({0.0, {{t_idx(), 1.0}}, {}});
    rows_.push_back({1.0, {{t_idx(), -1.0}}, {}});
  }

  int dim() const { return dim_; }
  int rows() const { return static_cast<int>(rows_.size()); }
  int t_idx() const { return 3 * n_; }
  int r_idx() const { return 3 * n_ + 1; }
  int u_idx(int i) const { return 3 * n_ + 2 + i; }
  int v_idx(int i) const { return 4 * n_ + 2 + i; }

  double phi(const Perspective& p, const Eigen::VectorXd& x) const {
    double q = 0.0;
    for (auto [j, c] : p.q) q += c * x[j];
    const double tau = p.broadcast ? 1.0 - x[t_idx()] : x[t_idx()];
    return tau * log2_1p(q / tau);
  }

  double row_value(const Row& row, const Eigen::VectorXd& x) const {
    double f = row.c0;
    for (auto [j, c] : row.lin) f += c * x[j];
    for (const auto& p : row.terms) f += phi(p, x);
    return f;
  }

  /// Barrier objective tau R + sum log f; -inf outside the domain.
  double value(const Eigen::VectorXd& x, double tau) const {
    const double t = x[t_idx()];
    if (!(t > 0.0 && t < 1.0)) return -HUGE_VAL;
    for (int j = 0; j < 3 * n_; ++j) {
      if (!(x[j] >= 0.0)) return -HUGE_VAL;
    }
    double acc = tau * x[r_idx()];
    for (const auto& row : rows_) {
      const double f = row_value(row, x);
      if (!(f > 0.0)) return -HUGE_VAL;
      acc += std::log(f);
    }
    return acc;
  }

  void derivatives(const Eigen::VectorXd& x, double tau, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    grad.setZero(dim_);
    hess.setZero(dim_, dim_);
    grad[r_idx()] = tau;
    Eigen::VectorXd g(dim_);
    std::vector<int> touched;
    std::vector<char> mark(dim_, 0);
    const int ti = t_idx();
    for (const auto& row : rows_) {
      g.setZero();
      touched.clear();
      auto touch = [&](int j) {
        if (!mark[j]) {
          mark[j] = 1;
          touched.push_back(j);
        }
      };
      const double f = row_value(row, x);
      for (auto [j, c] : row.lin) {
        g[j] += c;
        touch(j);
      }
      // Curvature of the perspective terms, added straight into hess / f.
      for (const auto& p : row.terms) {
        double q = 0.0;
        for (auto [j, c] : p.q) q += c * x[j];
        const double s = p.broadcast ? -1.0 : 1.0;
        const double tau_v = p.broadcast ? 1.0 - x[ti] : x[ti];
        const double den = tau_v + q;
        const double fq = tau_v / (den * kLn2);
        const double ft = log2_1p(q / tau_v) - q / (den * kLn2);
        const double fqq = -tau_v / (den * den * kLn2);
        const double fqt = q / (den * den * kLn2);
        const double ftt = -q * q / (tau_v * den * den * kLn2);
        for (auto [j, c] : p.q) {
          g[j] += fq * c;
          touch(j);
        }
        g[ti] += s * ft;
        touch(ti);
        for (auto [j, cj] : p.q) {
          for (auto [k, ck] : p.q) hess(j, k) += fqq * cj * ck / f;
          hess(j, ti) += s * fqt * cj / f;
          hess(ti, j) += s * fqt * cj / f;
        }
        hess(ti, ti) += ftt / f;
      }
      for (int j : touched) {
        grad[j] += g[j] / f;
        for (int k : touched) hess(j, k) -= g[j] * g[k] / (f * f);
      }
      for (int j : touched) mark[j] = 0;
    }
  }

  Eigen::VectorXd start(const ChannelState& csi, const PowerBudget& budget, double rho) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
    const int n = n_;
    for (int i = 0; i < n; ++i) {
      x[i] = 0.5 * budget.p1 / n;
      x[n + i] = 0.5 * budget.p2 / n;
      x[2 * n + i] = 0.5 * budget.pr / n;
    }
    x[t_idx()] = 0.5;
    double r = HUGE_VAL;
    if (psc_) {
      double su = 0.0, sv = 0.0;
      for (int i = 0; i < n; ++i) {
        x[u_idx(i)] = std::min(row_value(rows_[4 * i], x), row_value(rows_[4 * i + 1], x)) - 1.0;
        x[v_idx(i)] =
            std::min(row_value(rows_[4 * i + 2], x), row_value(rows_[4 * i + 3], x)) - 1.0;
        su += x[u_idx(i)];
        sv += x[v_idx(i)];
      }
      r = std::min(su, sv / rho);
    }
    // Remaining rate rows read as f = (concave sum) - c R with R = 0 here.
    for (const auto& row : rows_) {
      double coef = 0.0;
      for (auto [j, c] : row.lin) {
        if (j == r_idx()) coef = -c;
      }
      if (coef > 0.0 && !row.terms.empty()) r = std::min(r, row_value(row, x) / coef);
    }
    (void)csi;
    x[r_idx()] = r - 1.0;
    return x;
  }

 private:
  int n_;
  bool psc_;
  int dim_ = 0;
  std::vector<Row> rows_;
};

}  // namespace

BarrierResult barrier_df_solve(BarrierRegion region, double rho, const ChannelState& csi,
                               const PowerBudget& budget, double gap_tol) {
  csi.validate();
  budget.validate();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be positive");
  const Program prog(region, rho, csi, budget);
  Eigen::VectorXd x = prog.start(csi, budget, rho);
  const double m = prog.rows();

  BarrierResult res;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double tau = 1.0;
  while (true) {
    for (int k = 0; k < 200; ++k) {
      prog.derivatives(x, tau, grad, hess);
      Eigen::MatrixXd neg = -hess;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(neg);
      Eigen::VectorXd step = ldlt.solve(grad);
      double dec = grad.dot(step);
      if (ldlt.info() != Eigen::Success || !std::isfinite(dec) || dec < 0.0) {
        neg.diagonal().array() += 1e-10 * (1.0 + neg.diagonal().cwiseAbs().maxCoeff());
        step = neg.ldlt().solve(grad);
        dec = grad.dot(step);
        if (!std::isfinite(dec) || dec <= 0.0) break;
      }
      ++res.newton_steps;
      if (dec / 2.0 <= 1e-10) break;
      const double f0 = prog.value(x, tau);
      double s = 1.0;
      bool moved = false;
      while (s > 1e-14) {
        const Eigen::VectorXd trial = x + s * step;
        const double f1 = prog.value(trial, tau);
        if (f1 >= f0 + 0.01 * s * dec) {
          x = trial;
          moved = true;
          break;
        }
        s *= 0.5;
      }
      if (!moved) break;
    }
    if (m / tau < gap_tol) break;
    tau *= 20.0;
  }

  const int n = static_cast<int>(csi.size());
  res.alloc.p1.assign(x.data(), x.data() + n);
  res.alloc.p2.assign(x.data() + n, x.data() + 2 * n);
  res.alloc.pr.assign(x.data() + 2 * n, x.data() + 3 * n);
  res.alloc.t = x[prog.t_idx()];
  res.objective = x[prog.r_idx()];
  res.gap_bound = m / tau;
  return res;
}

}  // namespace twr
