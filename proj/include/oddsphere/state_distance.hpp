#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "oddsphere/bridge.hpp"
#include "oddsphere/error.hpp"
#include "oddsphere/harmonic.hpp"
#include "oddsphere/lip.hpp"
#include "oddsphere/simplex.hpp"
#include "oddsphere/states.hpp"
#include "oddsphere/toeplitz.hpp"

namespace oddsphere {

/// Real-linearly independent harmonic polynomials whose restrictions span
/// the real polynomials of degree <= max_degree on S^{2d-1}. The constant 1
/// comes first.
inline std::vector<ExactSymbol> harmonic_basis(std::size_t d, int max_degree) {
  require(max_degree >= 0, "family degree must be >= 0");
  Enumeration en(d);
  std::vector<MultiIndex> exps = en.up_to_degree(max_degree);
  std::vector<ExactSymbol> candidates;
  for (int total = 0; total <= max_degree; ++total)
    for (const auto& a : exps)
      for (const auto& b : exps) {
        if (a.degree() + b.degree() != total || b < a) continue;
        if (a == b) {
          candidates.push_back(ExactSymbol::monomial(a, b));
          continue;
        }
        ExactSymbol fwd = ExactSymbol::monomial(a, b), bwd = ExactSymbol::monomial(b, a);
        candidates.push_back(fwd + bwd);
        candidates.push_back((fwd - bwd).scaled(GaussRational(0, 1)));
      }

  // Incremental exact row reduction over R on (re, im) coefficient vectors.
  std::map<std::pair<ExactSymbol::Key, int>, std::size_t> column;
  auto vectorize = [&](const ExactSymbol& p) {
    std::map<std::size_t, Rational> v;
    for (const auto& [key, c] : p.terms()) {
      for (int part = 0; part < 2; ++part) {
        const Rational& x = part == 0 ? c.re : c.im;
        if (sgn(x) == 0) continue;
        auto [it, _] = column.try_emplace({key, part}, column.size());
        v[it->second] = x;
      }
    }
    return v;
  };
  std::vector<std::pair<std::size_t, std::map<std::size_t, Rational>>> echelon;  // (pivot, row)
  std::vector<ExactSymbol> basis;
  for (const auto& cand : candidates) {
    ExactSymbol h = harmonic_extension(cand).extension;
    auto v = vectorize(h);
    for (const auto& [piv, row] : echelon) {
      auto it = v.find(piv);
      if (it == v.end()) continue;
      Rational f = it->second / row.at(piv);
      for (const auto& [col, x] : row) {
        Rational& y = v[col];
        y -= f * x;
        if (sgn(y) == 0) v.erase(col);
      }
    }
    if (v.empty()) continue;
    std::size_t piv = v.begin()->first;
    echelon.emplace_back(piv, std::move(v));
    basis.push_back(std::move(h));
  }
  return basis;
}

struct StateDistanceOptions {
  int family_degree = 2;     // degree of the boundary polynomials g, f
  std::size_t support = 5;   // K lives on indices 1..support
  std::size_t pairs = 512;   // sampled Lipschitz pairs
  std::uint64_t seed = 0;
};

/// Optimiser of the state-distance LP: T = sigma(g) + K, paired with f.
struct LpOptimizer {
  Symbol g;
  Symbol f;
  LipCompactOperator k{3.0};
  double u = 0.0;  // bound on Lip(K)
  double v = 0.0;  // bound on L(g)
};

struct RhoResult {
  double value = 0.0;
  LpOptimizer optimizer;
  std::size_t pivots = 0;
  double max_violation = 0.0;
};

/// Estimates rho_{L~}(mu, nu) = sup{|mu(a) - nu(a)| : L~(a) <= 1} over
/// a = (sigma(g) + K, f) with g, f real polynomials of bounded degree and K
/// supported on a fixed corner. L~(a) <= 1 becomes the linear system
///   (i+j)^s |K_ij| <= u,  |g(x)-g(y)| <= v |x-y|,  u + v <= 1,
///   |f(x)-f(y)| <= |x-y|,  |g(x) - f(x)| <= gamma_{n0}
/// over sampled pairs and points, with the gauge g(x0) = 0. The constraint
/// system depends only on the weight and sampling, so it is assembled once
/// and reused for every pair of states.
class StateDistanceSolver {
 public:
  StateDistanceSolver(BergmanWeight w, int cutoff, BridgeConfig cfg, StateDistanceOptions opts)
      : w_(std::move(w)), cutoff_(cutoff), cfg_(std::move(cfg)), opts_(opts) {
    const std::size_t d = w_.dim();
    require(cfg_.sampler.dim() == d, "sampler dimension does not match weight");
    require(cutoff_ >= 0, "degree cutoff must be >= 0");
    truncation_ = count_up_to_degree(cutoff_, d);
    require(opts_.support <= truncation_, "K support exceeds the truncation");
    require(opts_.pairs >= 1, "at least one Lipschitz pair is required");

    basis_ = harmonic_basis(d, opts_.family_degree);
    const std::size_t nb = basis_.size();
    const auto& pts = cfg_.sampler.points();
    x0_ = pts.front();
    for (const auto& h : basis_) {
      sigma_.push_back(ToeplitzMatrix(w_, h, cutoff_).entries());
      at_x0_.push_back(h.evaluate(x0_).real());
    }

    // Variables: g coefficients (constant dropped by the gauge), f coefficients,
    // K upper triangle, u, v.
    for (std::size_t i = 1; i < nb; ++i) g_vars_.push_back(lp_.add_variable());
    for (std::size_t i = 0; i < nb; ++i) f_vars_.push_back(lp_.add_variable());
    for (std::size_t i = 1; i <= opts_.support; ++i)
      for (std::size_t j = i; j <= opts_.support; ++j) k_vars_.push_back({{i, j}, lp_.add_variable()});
    u_var_ = lp_.add_variable(0.0, false);
    v_var_ = lp_.add_variable(0.0, false);

    // K enters through kappa_ij = (i+j)^s K_ij; the raw weights reach 1e6
    // and more, which wrecks the conditioning of the dictionary.
    const double s = w_.alpha() + 2.0;
    for (const auto& [ij, var] : k_vars_) {
      k_scale_.push_back(std::pow(static_cast<double>(ij.first + ij.second), -s));
      lp_.add_le({{var, 1.0}, {u_var_, -1.0}}, 0.0);
      lp_.add_le({{var, -1.0}, {u_var_, -1.0}}, 0.0);
    }
    lp_.add_le({{u_var_, 1.0}, {v_var_, 1.0}}, 1.0);

    for (const auto& p : pts) sample_vals_.push_back(values_at(p));
    for (const auto& [p, q] : choose_pairs(pts.size()))
      add_lipschitz_rows(lp_, sample_vals_[p], sample_vals_[q], chordal_distance(pts[p], pts[q]));
    for (const auto& v : sample_vals_) add_gap_rows(lp_, v);
  }

  const BergmanWeight& weight() const noexcept { return w_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t truncation() const noexcept { return truncation_; }
  const BridgeConfig& bridge() const noexcept { return cfg_; }
  const std::vector<ExactSymbol>& basis() const noexcept { return basis_; }
  std::size_t num_constraints() const noexcept { return lp_.num_rows(); }
  const LinearProgram& program() const noexcept { return lp_; }

  /// The state as a linear functional on the LP variables.
  std::vector<double> functional(const State& st) const {
    validate_state(st, w_.dim(), truncation_);
    std::vector<double> c(lp_.num_variables(), 0.0);
    const std::size_t nb = basis_.size();
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PointState>) {
            for (std::size_t i = 0; i < nb; ++i) c[f_vars_[i]] = basis_[i].evaluate(s.x).real();
          } else if constexpr (std::is_same_v<T, SigmaPullbackState>) {
            for (std::size_t i = 0; i < nb; ++i) c[f_vars_[i]] = trace_product(s.rho, sigma_[i]);
          } else if constexpr (std::is_same_v<T, PiPullbackState>) {
            for (std::size_t i = 1; i < nb; ++i)
              c[g_vars_[i - 1]] = basis_[i].evaluate(s.x).real() - at_x0_[i];
          } else {
            // trace(rho (sigma(g) + K)); sigma(h - h(x0)) = sigma(h) - h(x0) I, trace rho = 1.
            for (std::size_t i = 1; i < nb; ++i)
              c[g_vars_[i - 1]] = trace_product(s.rho, sigma_[i]) - at_x0_[i];
            for (std::size_t t = 0; t < k_vars_.size(); ++t) {
              const auto& [ij, var] = k_vars_[t];
              auto a = static_cast<Eigen::Index>(ij.first - 1), b = static_cast<Eigen::Index>(ij.second - 1);
              c[var] = k_scale_[t] * (a == b ? s.rho(a, a).real() : 2.0 * s.rho(a, b).real());
            }
          }
        },
        st);
    return c;
  }

  RhoResult distance(const State& mu, const State& nu) const {
    std::vector<double> a = functional(mu), b = functional(nu);
    LinearProgram lp = lp_;
    add_anchor_rows(lp, mu, nu);
    for (std::size_t i = 0; i < a.size(); ++i) lp.set_objective(i, a[i] - b[i]);
    LpResult res = solve(lp);
    ensure(res.status != LpStatus::infeasible, "state-distance LP infeasible (a = 0 is feasible)");
    ensure(res.status != LpStatus::unbounded, "state-distance LP unbounded");
    ensure(res.status == LpStatus::optimal, "state-distance LP hit the pivot limit");
    RhoResult out;
    out.value = std::max(0.0, res.value);
    out.pivots = res.pivots;
    out.max_violation = lp.max_violation(res.x);
    out.optimizer = unpack(res.x);
    return out;
  }

 private:
  std::vector<double> values_at(const Point& x) const {
    std::vector<double> v;
    for (const auto& h : basis_) v.push_back(h.evaluate(x).real());
    return v;
  }

  /// |g(p) - g(q)| <= v dist and |f(p) - f(q)| <= dist, from basis values at p
  /// and q. Rows hold difference quotients: raw differences of close points
  /// are tiny and ruin the scaling of the LP.
  void add_lipschitz_rows(LinearProgram& lp, const std::vector<double>& vp, const std::vector<double>& vq,
                          double dist) const {
    if (dist < 1e-12) return;
    const std::size_t nb = basis_.size();
    for (double sign : {1.0, -1.0}) {
      std::vector<std::pair<std::size_t, double>> g_row, f_row;
      for (std::size_t i = 1; i < nb; ++i) g_row.push_back({g_vars_[i - 1], sign * (vp[i] - vq[i]) / dist});
      g_row.push_back({v_var_, -1.0});
      lp.add_le(std::move(g_row), 0.0);
      for (std::size_t i = 0; i < nb; ++i) f_row.push_back({f_vars_[i], sign * (vp[i] - vq[i]) / dist});
      lp.add_le(std::move(f_row), 1.0);
    }
  }

  /// |g(x) - f(x)| <= gamma_{n0}.
  void add_gap_rows(LinearProgram& lp, const std::vector<double>& v) const {
    const std::size_t nb = basis_.size();
    for (double sign : {1.0, -1.0}) {
      std::vector<std::pair<std::size_t, double>> row;
      for (std::size_t i = 1; i < nb; ++i) row.push_back({g_vars_[i - 1], sign * (v[i] - at_x0_[i])});
      for (std::size_t i = 0; i < nb; ++i) row.push_back({f_vars_[i], -sign * v[i]});
      lp.add_le(std::move(row), cfg_.gamma.hi);
    }
  }

  /// Point-type states read g or f at a point that is usually not a sample,
  /// where the sampled constraints leave the LP slack. The constraints of
  /// L~(a) <= 1 at those points are exact, so imposing them there only
  /// tightens the estimate.
  void add_anchor_rows(LinearProgram& lp, const State& mu, const State& nu) const {
    std::vector<Point> anchors;
    for (const State* st : {&mu, &nu}) {
      if (const auto* p = std::get_if<PointState>(st)) anchors.push_back(p->x);
      if (const auto* p = std::get_if<PiPullbackState>(st)) anchors.push_back(p->x);
    }
    const auto& pts = cfg_.sampler.points();
    std::vector<std::vector<double>> anchor_vals;
    for (const auto& x : anchors) {
      std::vector<double> vx = values_at(x);
      for (std::size_t q = 0; q < pts.size(); ++q)
        add_lipschitz_rows(lp, vx, sample_vals_[q], chordal_distance(x, pts[q]));
      for (std::size_t a = 0; a < anchor_vals.size(); ++a)
        add_lipschitz_rows(lp, vx, anchor_vals[a], chordal_distance(x, anchors[a]));
      add_gap_rows(lp, vx);
      anchor_vals.push_back(std::move(vx));
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> choose_pairs(std::size_t n) const {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) all.emplace_back(p, q);
    if (all.size() <= opts_.pairs) return all;
    std::mt19937_64 rng(opts_.seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(opts_.pairs);
    std::sort(all.begin(), all.end());
    return all;
  }

  LpOptimizer unpack(const std::vector<double>& x) const {
    const std::size_t d = w_.dim();
    LpOptimizer o;
    o.g = Symbol(d);
    o.f = Symbol(d);
    double shift = 0.0;
    for (std::size_t i = 1; i < basis_.size(); ++i) {
      double t = x[g_vars_[i - 1]];
      o.g += to_float(basis_[i]).scaled(t);
      shift += t * at_x0_[i];
    }
    o.g += Symbol::constant(d, -shift);
    for (std::size_t i = 0; i < basis_.size(); ++i) o.f += to_float(basis_[i]).scaled(x[f_vars_[i]]);
    o.k = LipCompactOperator(w_.alpha() + 2.0);
    for (std::size_t t = 0; t < k_vars_.size(); ++t)
      o.k.set(k_vars_[t].first.first, k_vars_[t].first.second, k_scale_[t] * x[k_vars_[t].second]);
    o.u = x[u_var_];
    o.v = x[v_var_];
    return o;
  }

  BergmanWeight w_;
  int cutoff_;
  BridgeConfig cfg_;
  StateDistanceOptions opts_;
  std::size_t truncation_ = 0;
  std::vector<ExactSymbol> basis_;
  std::vector<Eigen::MatrixXcd> sigma_;
  std::vector<double> at_x0_;
  std::vector<std::vector<double>> sample_vals_;
  Point x0_;
  LinearProgram lp_;
  std::vector<std::size_t> g_vars_, f_vars_;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> k_vars_;
  std::vector<double> k_scale_;
  std::size_t u_var_ = 0, v_var_ = 0;
};

/// Number of sphere samples whose full pair set covers the requested pair count.
inline std::size_t samples_for_pairs(std::size_t pairs) {
  std::size_t n = 2;
  while (n * (n - 1) / 2 < pairs) ++n;
  return n;
}

struct HausdorffEstimate {
  double value = 0.0;
  Interval upper_bound_2gamma;
  std::vector<State> toeplitz_side;  // netA followed by delta_x o pi for x in netB
  std::vector<State> sphere_side;    // netB followed by nu o sigma for nu in netA
  std::vector<std::vector<double>> distances;  // [toeplitz][sphere]
  /// (toeplitz index, sphere index) of each witness pairing nu <-> nu o sigma
  /// and delta_x o pi <-> delta_x.
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;
  double witness_max = 0.0;
};

/// Hausdorff distance, under the LP estimate of rho_{L~}, between the
/// Toeplitz-side net netA (closed under the pullbacks delta_x o pi) and the
/// sphere-side net netB (closed under nu o sigma).
inline HausdorffEstimate hausdorff_estimate(const StateDistanceSolver& solver,
                                            const std::vector<DensityState>& net_a,
                                            const std::vector<PointState>& net_b) {
  require(!net_a.empty() && !net_b.empty(), "state nets must be nonempty");
  HausdorffEstimate out;
  for (const auto& s : net_a) out.toeplitz_side.push_back(s);
  for (const auto& p : net_b) out.toeplitz_side.push_back(PiPullbackState{p.x});
  for (const auto& p : net_b) out.sphere_side.push_back(p);
  for (const auto& s : net_a) out.sphere_side.push_back(SigmaPullbackState{s.rho});
  for (std::size_t i = 0; i < net_a.size(); ++i) out.witnesses.emplace_back(i, net_b.size() + i);
  for (std::size_t i = 0; i < net_b.size(); ++i) out.witnesses.emplace_back(net_a.size() + i, i);

  const std::size_t na = out.toeplitz_side.size(), nb = out.sphere_side.size();
  out.distances.assign(na, std::vector<double>(nb, 0.0));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      out.distances[i][j] = solver.distance(out.toeplitz_side[i], out.sphere_side[j]).value;

  double directed_a = 0.0, directed_b = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    directed_a = std::max(directed_a, *std::min_element(out.distances[i].begin(), out.distances[i].end()));
  for (std::size_t j = 0; j < nb; ++j) {
    double best = out.distances[0][j];
    for (std::size_t i = 1; i < na; ++i) best = std::min(best, out.distances[i][j]);
    directed_b = std::max(directed_b, best);
  }
  out.value = std::max(directed_a, directed_b);
  for (const auto& [i, j] : out.witnesses) out.witness_max = std::max(out.witness_max, out.distances[i][j]);
  Interval g = solver.bridge().gamma;
  out.upper_bound_2gamma = {2.0 * g.lo, 2.0 * g.hi};
  return out;
}

/// Vector states e_1..e_vectors plus seeded random rank-one states.
inline std::vector<DensityState> default_density_net(std::size_t truncation, std::size_t vectors,
                                                     std::size_t random_states, std::uint64_t seed) {
  std::vector<DensityState> net;
  for (std::size_t j = 1; j <= vectors; ++j) net.push_back(vector_state(j, truncation));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < random_states; ++i) net.push_back(random_rank_one_state(truncation, rng));
  return net;
}

inline std::vector<PointState> random_point_net(std::size_t d, std::size_t count, std::uint64_t seed) {
  SphereSampler s(d, count, seed);
  std::vector<PointState> net;
  for (const auto& p : s.points()) net.push_back({p});
  return net;
}

}  // namespace oddsphere
