#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "oddsphere/error.hpp"

namespace oddsphere {

/// maximize c.x  subject to  A x <= b, each variable either free or >= 0.
class LinearProgram {
 public:
  struct Row {
    std::vector<std::pair<std::size_t, double>> coeffs;
    double rhs = 0.0;
  };

  std::size_t add_variable(double objective = 0.0, bool free = true) {
    objective_.push_back(objective);
    free_.push_back(free);
    return objective_.size() - 1;
  }

  void set_objective(std::size_t var, double c) { objective_.at(var) = c; }

  void add_le(std::vector<std::pair<std::size_t, double>> coeffs, double rhs) {
    for (const auto& [v, a] : coeffs) require(v < objective_.size(), "LP row uses unknown variable");
    rows_.push_back({std::move(coeffs), rhs});
  }

  std::size_t num_variables() const noexcept { return objective_.size(); }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<bool>& free_flags() const noexcept { return free_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  /// Largest amount by which x violates a constraint or sign bound.
  double max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (const auto& r : rows_) {
      double lhs = 0.0;
      for (const auto& [v, a] : r.coeffs) lhs += a * x[v];
      worst = std::max(worst, lhs - r.rhs);
    }
    for (std::size_t v = 0; v < x.size(); ++v)
      if (!free_[v]) worst = std::max(worst, -x[v]);
    return worst;
  }

  double value_at(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) s += objective_[v] * x[v];
    return s;
  }

 private:
  std::vector<double> objective_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double value = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_pivots = 200000;
};

namespace detail {

/// Dense dictionary simplex over A x + s = b, s >= 0:
///   basic_i = b_i - sum_j a_ij nonbasic_j,  z = z0 + sum_j c_j nonbasic_j.
/// Labels 0..n-1 are structural columns, n..n+m-1 slacks. Pricing is
/// Dantzig with a Harris two-pass ratio test, switching to Bland's rule
/// (lowest label) after a run of degenerate pivots. The dictionary is
/// rebuilt from the original data every few dozen pivots and before
/// optimality is declared, so rounding does not accumulate.
class Dictionary {
 public:
  Dictionary(Eigen::MatrixXd original, Eigen::VectorXd rhs)
      : m_(static_cast<std::size_t>(original.rows())),
        n_(static_cast<std::size_t>(original.cols())),
        a0_(std::move(original)),
        b0_(std::move(rhs)),
        a_(m_ * n_),
        b_(m_),
        c_(n_),
        basic_(m_),
        nonbasic_(n_),
        cost_(n_ + m_, 0.0) {
    for (std::size_t j = 0; j < n_; ++j) nonbasic_[j] = j;
    for (std::size_t i = 0; i < m_; ++i) basic_[i] = n_ + i;
    refactor();
  }

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  double rhs(std::size_t i) const { return b_[i]; }
  double objective_value() const noexcept { return z0_; }
  std::size_t basic(std::size_t i) const { return basic_[i]; }
  std::size_t nonbasic(std::size_t j) const { return nonbasic_[j]; }
  double a(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  /// Objective sum_l cost[l] x_l over all n + m labels.
  void set_cost(std::vector<double> cost) {
    cost_ = std::move(cost);
    price();
  }

  /// Rebuilds a, b, c from the original data for the current basis. Basic
  /// slacks make most of the basis an identity, so only the k x k block of
  /// basic structural columns against rows with nonbasic slacks is factored.
  void refactor() {
    std::vector<std::size_t> s_rows, s_labels, t_rows, r_rows;
    std::vector<bool> slack_basic(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] < n_) {
        s_rows.push_back(i);
        s_labels.push_back(basic_[i]);
      } else {
        slack_basic[basic_[i] - n_] = true;
        t_rows.push_back(i);
      }
    }
    for (std::size_t r = 0; r < m_; ++r)
      if (!slack_basic[r]) r_rows.push_back(r);
    const auto k = static_cast<Eigen::Index>(s_labels.size());
    ensure(static_cast<std::size_t>(k) == r_rows.size(), "simplex basis has the wrong size");

    Eigen::MatrixXd block(k, k);
    for (Eigen::Index p = 0; p < k; ++p)
      for (Eigen::Index q = 0; q < k; ++q) block(p, q) = a0_(r_rows[p], s_labels[q]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    if (k > 0) lu.compute(block);

    // Original columns of the nonbasic labels, restricted to the R rows.
    std::vector<Eigen::Index> r_pos(m_, -1);
    for (Eigen::Index p = 0; p < k; ++p) r_pos[r_rows[p]] = p;
    Eigen::MatrixXd cr = Eigen::MatrixXd::Zero(k, n_);
    for (std::size_t j = 0; j < n_; ++j) {
      std::size_t l = nonbasic_[j];
      if (l < n_) {
        for (Eigen::Index p = 0; p < k; ++p) cr(p, j) = a0_(r_rows[p], l);
      } else {
        ensure(r_pos[l - n_] >= 0, "nonbasic slack outside the factored rows");
        cr(r_pos[l - n_], j) = 1.0;
      }
    }
    Eigen::VectorXd br(k);
    for (Eigen::Index p = 0; p < k; ++p) br(p) = b0_(r_rows[p]);
    Eigen::MatrixXd y = k > 0 ? Eigen::MatrixXd(lu.solve(cr)) : Eigen::MatrixXd(0, n_);
    Eigen::VectorXd xs = k > 0 ? Eigen::VectorXd(lu.solve(br)) : Eigen::VectorXd(0);
    ensure(y.allFinite() && xs.allFinite(), "simplex basis became singular");

    for (Eigen::Index q = 0; q < k; ++q) {
      std::size_t i = s_rows[q];
      for (std::size_t j = 0; j < n_; ++j) a_[i * n_ + j] = y(q, j);
      b_[i] = xs(q);
    }
    for (std::size_t i : t_rows) {
      std::size_t row = basic_[i] - n_;
      double bi = b0_(row);
      for (Eigen::Index q = 0; q < k; ++q) bi -= a0_(row, s_labels[q]) * xs(q);
      b_[i] = bi;
      for (std::size_t j = 0; j < n_; ++j) {
        std::size_t l = nonbasic_[j];
        double v = l < n_ ? a0_(row, l) : 0.0;
        for (Eigen::Index q = 0; q < k; ++q) v -= a0_(row, s_labels[q]) * y(q, j);
        a_[i * n_ + j] = v;
      }
    }
    price();
  }

  void pivot(std::size_t r, std::size_t e) {
    const double p = a_[r * n_ + e];
    double* row_r = &a_[r * n_];
    for (std::size_t j = 0; j < n_; ++j) row_r[j] /= p;
    row_r[e] = 1.0 / p;
    b_[r] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row_i = &a_[i * n_];
      const double f = row_i[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) row_i[j] -= f * row_r[j];
      row_i[e] = -f * row_r[e];
      b_[i] -= f * b_[r];
    }
    const double f = c_[e];
    for (std::size_t j = 0; j < n_; ++j) c_[j] -= f * row_r[j];
    c_[e] = -f * row_r[e];
    z0_ += f * b_[r];
    std::swap(basic_[r], nonbasic_[e]);
  }

  /// Runs to optimality of the current cost. Columns labelled skip_label
  /// never enter.
  LpStatus optimize(const SimplexOptions& opt, std::size_t& pivots, std::size_t skip_label) {
    constexpr std::size_t kRefactorEvery = 40;
    std::size_t degenerate_run = 0, since_refactor = 0;
    while (true) {
      if (pivots >= opt.max_pivots) return LpStatus::iteration_limit;
      if (since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
      const bool bland = degenerate_run > 50;
      std::size_t e = entering(opt.tolerance, bland, skip_label);
      if (e == n_) {
        if (since_refactor == 0) return LpStatus::optimal;
        refactor();  // confirm on fresh data before declaring optimality
        since_refactor = 0;
        continue;
      }
      std::size_t r = leaving(e, opt.tolerance, bland);
      if (r == m_) {
        if (since_refactor == 0) return LpStatus::unbounded;
        refactor();
        since_refactor = 0;
        continue;
      }
      degenerate_run = b_[r] <= opt.tolerance ? degenerate_run + 1 : 0;
      pivot(r, e);
      ++pivots;
      ++since_refactor;
    }
  }

 private:
  void price() {
    z0_ = 0.0;
    for (std::size_t j = 0; j < n_; ++j) c_[j] = cost_[nonbasic_[j]];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      z0_ += cb * b_[i];
      for (std::size_t j = 0; j < n_; ++j) c_[j] -= cb * a_[i * n_ + j];
    }
  }

  std::size_t entering(double tol, bool bland, std::size_t skip_label) const {
    std::size_t e = n_;
    double best = tol;
    for (std::size_t j = 0; j < n_; ++j) {
      if (nonbasic_[j] == skip_label || c_[j] <= tol) continue;
      if (bland) {
        if (e == n_ || nonbasic_[j] < nonbasic_[e]) e = j;
      } else if (c_[j] > best) {
        best = c_[j];
        e = j;
      }
    }
    return e;
  }

  /// Harris two-pass ratio test: bound the step with a tolerance-relaxed
  /// ratio, then take the largest pivot among rows within that bound.
  /// In Bland mode, the exact minimum ratio with the lowest label. Entries
  /// below tol times the column scale count as zero: they are rounding
  /// residue, and pivoting on them makes the basis singular.
  std::size_t leaving(std::size_t e, double tol, bool bland) const {
    double scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) scale = std::max(scale, std::abs(a_[i * n_ + e]));
    const double piv_tol = tol * scale;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      double aie = a_[i * n_ + e];
      if (aie <= piv_tol) continue;
      double bi = std::max(b_[i], 0.0);
      bound = std::min(bound, bland ? bi / aie : (bi + tol) / aie);
    }
    if (!std::isfinite(bound)) return m_;
    std::size_t r = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      double aie = a_[i * n_ + e];
      if (aie <= piv_tol) continue;
      double q = std::max(b_[i], 0.0) / aie;
      if (bland) {
        if (q <= bound + 1e-12 && (r == m_ || basic_[i] < basic_[r])) r = i;
      } else if (q <= bound && (r == m_ || aie > a_[r * n_ + e])) {
        r = i;
      }
    }
    return r;
  }

  std::size_t m_, n_;
  Eigen::MatrixXd a0_;
  Eigen::VectorXd b0_;
  std::vector<double> a_, b_, c_;
  std::vector<std::size_t> basic_, nonbasic_;
  std::vector<double> cost_;
  double z0_ = 0.0;
};

}  // namespace detail

/// Two-phase dense simplex. Free variables are split as x = x+ - x-.
inline LpResult solve(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  const std::size_t nv = lp.num_variables(), m = lp.num_rows();
  std::vector<std::size_t> neg_col(nv, 0);
  std::size_t cols = nv;
  for (std::size_t v = 0; v < nv; ++v)
    if (lp.free_flags()[v]) neg_col[v] = cols++;
  const std::size_t aux = cols;  // phase-one artificial variable
  const std::size_t n = cols + 1;

  Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::VectorXd b0(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows()[i];
    for (const auto& [v, coef] : row.coeffs) {
      a0(i, v) += coef;
      if (lp.free_flags()[v]) a0(i, neg_col[v]) -= coef;
    }
    a0(i, aux) = -1.0;
    b0(i) = row.rhs;
  }
  detail::Dictionary dict(std::move(a0), std::move(b0));

  LpResult result;
  std::size_t pivots = 0;

  // Phase one only when the origin is infeasible.
  std::size_t worst = m;
  for (std::size_t i = 0; i < m; ++i)
    if (dict.rhs(i) < -opt.tolerance && (worst == m || dict.rhs(i) < dict.rhs(worst))) worst = i;
  if (worst != m) {
    std::vector<double> phase_one(n + m, 0.0);
    phase_one[aux] = -1.0;
    dict.set_cost(phase_one);
    std::size_t aux_col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (dict.nonbasic(j) == aux) aux_col = j;
    dict.pivot(worst, aux_col);
    dict.refactor();
    ++pivots;
    LpStatus st = dict.optimize(opt, pivots, n + m);
    if (st == LpStatus::iteration_limit) {
      result.status = st;
      return result;
    }
    if (dict.objective_value() < -1e-7) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive the artificial variable out of the basis if it is still there.
    for (std::size_t i = 0; i < m; ++i) {
      if (dict.basic(i) != aux) continue;
      std::size_t e = n;
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(dict.a(i, j)) > opt.tolerance && (e == n || std::abs(dict.a(i, j)) > std::abs(dict.a(i, e))))
          e = j;
      ensure(e != n, "simplex: cannot remove artificial variable");
      dict.pivot(i, e);
      dict.refactor();
      ++pivots;
    }
  }

  std::vector<double> cost(n + m, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    cost[v] = lp.objective()[v];
    if (lp.free_flags()[v]) cost[neg_col[v]] = -lp.objective()[v];
  }
  dict.set_cost(cost);
  result.status = dict.optimize(opt, pivots, aux);
  result.pivots = pivots;
  if (result.status != LpStatus::optimal) return result;

  std::vector<double> column_value(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) column_value[dict.basic(i)] = std::max(dict.rhs(i), 0.0);
  result.x.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    result.x[v] = column_value[v];
    if (lp.free_flags()[v]) result.x[v] -= column_value[neg_col[v]];
  }
  result.value = lp.value_at(result.x);
  return result;
}

}  // namespace oddsphere
