#pragma once

// Command-line front end. run() never calls exit(), so tests drive it
// directly with captured streams.

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oddsphere/oddsphere.hpp"

namespace oddsphere::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInternal = 1, kInput = 2 };

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

inline json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

inline void csv_trailer(std::ostream& out, const json& config) { out << "# config: " << config.dump() << "\n"; }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  json j = json::parse(in, nullptr, false);
  require(!j.is_discarded(), "invalid JSON in " + path);
  return j;
}

/// "1,2,4.5" -> {1, 2, 4.5}.
inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used > 0 && used == item.size(), "bad number '" + item + "' in list");
    out.push_back(v);
  }
  require(!out.empty(), "empty list");
  return out;
}

/// point:x1,y1,...  (real coordinates of C^d = R^{2d}), vector:j, density:FILE.json.
inline State parse_state(const std::string& spec, std::size_t d, std::size_t truncation) {
  auto colon = spec.find(':');
  require(colon != std::string::npos, "state spec needs a kind prefix: " + spec);
  std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
  if (kind == "point") {
    auto coords = parse_list(body);
    require(coords.size() == 2 * d, "point state needs " + std::to_string(2 * d) + " real coordinates");
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = {coords[2 * i], coords[2 * i + 1]};
    return point_state(std::move(x));
  }
  if (kind == "vector") {
    std::size_t used = 0;
    long j = 0;
    try {
      j = std::stol(body, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used > 0 && used == body.size() && j >= 1, "vector state needs an index j >= 1");
    return vector_state(static_cast<std::size_t>(j), truncation);
  }
  if (kind == "density") return DensityState{density_from_json(read_json_file(body))};
  throw InputError("unknown state kind '" + kind + "'");
}

inline std::string exact_abs(const ExactEntry& e) {
  Rational sq = e.abs_sq();
  if (is_perfect_square(sq)) return exact_sqrt(sq).get_str();
  return "sqrt(" + sq.get_str() + ")";
}

inline bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Pulls --config FILE out of args and appends every key it sets that the
/// command line does not, so flags win.
inline void merge_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      require(i + 1 < args.size(), "--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  require(!has_flag(args, "--config"), "--config given more than once");
  if (path.empty()) return;
  json cfg = read_json_file(path);
  require(cfg.is_object(), "config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        require(v.is_number(), "config list '" + key + "' must hold numbers");
        joined += (joined.empty() ? "" : ",") + v.dump();
      }
      args.push_back(flag);
      args.push_back(joined);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      throw InputError("config key '" + key + "' has an unsupported value");
    }
  }
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name. Returns 0 on success,
/// 2 on bad input, 1 when a mathematical invariant fails.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Toeplitz quantization of odd spheres: Bergman weights, Toeplitz matrices, "
               "harmonic extensions, Lip-norms and state-distance estimates"};
  app.name("oddsphere");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;
  std::size_t d = 1;
  double alpha = 1.0;
  int degree = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string symbol_text, format = "json";

  auto add_d = [&](CLI::App* sub) { sub->add_option("--d", d, "Complex dimension d (sphere S^{2d-1})")->required(); };
  auto add_alpha = [&](CLI::App* sub) { sub->add_option("--alpha", alpha, "Weight exponent alpha")->required(); };
  auto add_degree = [&](CLI::App* sub, const char* help) { sub->add_option("--degree", degree, help)->required(); };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "Random seed")->capture_default_str(); };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };

  // weights
  auto* weights = app.add_subcommand("weights", "Monomial norms and orthonormal basis coefficients (CSV)");
  add_d(weights);
  add_alpha(weights);
  add_degree(weights, "Total degree cutoff");
  weights->callback([&] {
    action = [&] {
      BergmanWeight w(d, alpha);
      require(degree >= 0, "degree cutoff must be >= 0");
      Enumeration en(d);
      out << "index,multi_index,norm_sq,basis_coeff\n";
      std::uint64_t j = 1;
      for (const auto& k : en.up_to_degree(degree)) {
        std::string norm = w.integer_alpha() ? w.exact_norm_sq(k).get_str() : fmt(w.monomial_norm_sq(k));
        out << j++ << ",\"" << json(k.entries()).dump() << "\"," << norm << "," << fmt(w.basis_coeff(k)) << "\n";
      }
      csv_trailer(out, json{{"command", "weights"}, {"d", d}, {"alpha", alpha}, {"degree", degree}});
      return kOk;
    };
  });

  // toeplitz
  std::size_t samples = 2000;
  auto* toeplitz = app.add_subcommand("toeplitz", "Matrix of T_phi on polynomials of degree <= N");
  toeplitz->add_option("--symbol", symbol_text, "Symbol, e.g. \"(1/2)*z1^2*zb2 + zb1\"")->required();
  add_d(toeplitz);
  add_alpha(toeplitz);
  add_degree(toeplitz, "Total degree cutoff N");
  toeplitz->add_flag("--exact", exact, "Exact entries coeff*sqrt(radicand) (integer alpha)");
  toeplitz->add_option("--samples", samples, "Sphere samples for the norm upper bound")->capture_default_str();
  add_seed(toeplitz);
  add_format(toeplitz);
  toeplitz->callback([&] {
    action = [&] {
      ExactSymbol phi = parse_symbol(symbol_text, d);
      BergmanWeight w(d, alpha);
      require(degree >= 0, "degree cutoff must be >= 0");
      ToeplitzMatrix t(w, phi, degree);
      std::optional<ExactToeplitz> ex;
      if (exact) ex.emplace(w, phi, degree);
      SphereSampler sampler(d, samples, seed);
      Interval norm = norm_interval(t, &sampler);
      const auto m = t.size();
      json config{{"command", "toeplitz"}, {"symbol", symbol_text}, {"d", d},       {"alpha", alpha},
                  {"degree", degree},      {"exact", exact},        {"samples", samples}, {"seed", seed}};
      auto value = [&](Eigen::Index r, Eigen::Index c) {
        return ex ? ex->entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c)).to_complex()
                  : t.entries()(r, c);
      };
      if (format == "csv") {
        out << "row,col,re,im" << (exact ? ",coeff_re,coeff_im,radicand" : "") << "\n";
        for (Eigen::Index r = 0; r < m; ++r)
          for (Eigen::Index c = 0; c < m; ++c) {
            std::complex<double> v = value(r, c);
            if (v == std::complex<double>(0.0)) continue;
            out << r + 1 << "," << c + 1 << "," << fmt(v.real()) << "," << fmt(v.imag());
            if (ex) {
              ExactEntry e = ex->entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
              out << "," << e.coeff.re.get_str() << "," << e.coeff.im.get_str() << "," << e.radicand.get_str();
            }
            out << "\n";
          }
        csv_trailer(out, config);
        return kOk;
      }
      json re = json::array(), im = json::array(), exact_entries = json::array();
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c) {
          std::complex<double> v = value(r, c);
          re.push_back(v.real());
          im.push_back(v.imag());
          if (ex) {
            ExactEntry e = ex->entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            exact_entries.push_back(
                {{"coeff_re", e.coeff.re.get_str()}, {"coeff_im", e.coeff.im.get_str()}, {"radicand", e.radicand.get_str()}});
          }
        }
      json doc{{"M", m}, {"entries", {{"re", re}, {"im", im}}}, {"norm_interval", interval_json(norm)},
               {"config", config}};
      if (ex) doc["exact_entries"] = exact_entries;
      out << doc.dump() << "\n";
      return kOk;
    };
  });

  // harmonic-extend
  auto* harmonic = app.add_subcommand("harmonic-extend", "Harmonic extension of real boundary data");
  harmonic->add_option("--symbol", symbol_text, "Real-valued symbol")->required();
  add_d(harmonic);
  harmonic->add_flag("--exact", exact, "Emit coefficients as exact rationals");
  harmonic->add_option("--samples", samples, "Sphere samples for the boundary residual")->capture_default_str();
  add_seed(harmonic);
  harmonic->callback([&] {
    action = [&] {
      DirichletSolution s = harmonic_extension(parse_symbol(symbol_text, d));
      SphereSampler sampler(d, samples, seed);
      json ext = exact ? symbol_to_json(s.extension) : symbol_to_json(to_float(s.extension));
      json doc{{"extension", ext},
               {"text", format_symbol(s.extension)},
               {"report",
                {{"laplacian_zero", s.extension.laplacian().is_zero()},
                 {"boundary_residual_max", boundary_residual_max(s, sampler)}}},
               {"config",
                {{"command", "harmonic-extend"}, {"symbol", symbol_text}, {"d", d}, {"exact", exact},
                 {"samples", samples}, {"seed", seed}}}};
      out << doc.dump() << "\n";
      return kOk;
    };
  });

  // gamma
  double tol = 1e-12;
  auto* gamma = app.add_subcommand("gamma", "Certified interval for zeta(alpha + 2) - 1");
  add_alpha(gamma);
  gamma->add_option("--tol", tol, "Maximum interval width")->capture_default_str();
  gamma->callback([&] {
    action = [&] {
      require(tol > 0.0, "tolerance must be > 0");
      Interval g = gamma_interval(alpha, tol);
      Interval q = qgh_upper_bound(alpha, tol);
      ensure(g.lo <= g.hi && g.hi - g.lo <= tol, "gamma interval exceeds the requested width");
      json doc{{"alpha", alpha},
               {"gamma", interval_json(g)},
               {"width", g.hi - g.lo},
               {"qgh_upper_bound", interval_json(q)},
               {"config", {{"command", "gamma"}, {"alpha", alpha}, {"tol", tol}}}};
      out << doc.dump() << "\n";
      return kOk;
    };
  });

  // lemma-check
  std::size_t trials = 1000, support = 20;
  auto* lemma = app.add_subcommand("lemma-check", "Random check of ||K|| <= gamma_alpha Lip(K)");
  add_alpha(lemma);
  lemma->add_option("--trials", trials, "Number of random operators")->capture_default_str();
  add_seed(lemma);
  lemma->add_option("--support", support, "K is supported on the top-left support x support block")
      ->capture_default_str();
  lemma->callback([&] {
    action = [&] {
      LemmaCheck r = lemma_bound_check(alpha, trials, seed, support);
      json doc{{"max_norm", r.max_norm},
               {"max_ratio", r.max_ratio},
               {"max_row_sum", r.max_row_sum},
               {"gamma", interval_json(r.gamma)},
               {"violations", r.violations},
               {"pass", r.pass},
               {"config",
                {{"command", "lemma-check"}, {"alpha", alpha}, {"trials", trials}, {"seed", seed}, {"support", support}}}};
      out << doc.dump() << "\n";
      if (!r.pass) {
        err << "error: norm bound violated in " << r.violations << " trial(s)\n";
        return kInternal;
      }
      return kOk;
    };
  });

  // Shared by rho and qgh.
  int cutoff = 12, family_degree = 2;
  std::size_t pairs = 512, k_support = 5;
  double n0 = 0.0;
  auto add_lp_options = [&](CLI::App* sub) {
    add_d(sub);
    sub->add_option("--degree", family_degree, "Degree of the boundary polynomials g and f")->capture_default_str();
    sub->add_option("--cutoff", cutoff, "Toeplitz truncation: polynomials of degree <= cutoff")->capture_default_str();
    sub->add_option("--pairs", pairs, "Sampled Lipschitz pairs")->capture_default_str();
    sub->add_option("--support", k_support, "Compact part K lives on indices 1..support")->capture_default_str();
    sub->add_option("--n0", n0, "Bridge anchor n0 (default: alpha)");
    add_seed(sub);
  };
  auto make_solver = [&](double a) {
    require(a >= static_cast<double>(d), "every alpha must satisfy alpha >= d");
    double anchor = n0 > 0.0 ? n0 : a;
    StateDistanceOptions opts;
    opts.family_degree = family_degree;
    opts.pairs = pairs;
    opts.support = k_support;
    opts.seed = seed;
    return StateDistanceSolver(BergmanWeight(d, a), cutoff,
                               BridgeConfig::make(d, anchor, samples_for_pairs(pairs), seed), opts);
  };
  auto lp_config = [&](const std::string& command) {
    return json{{"command", command}, {"d", d},         {"degree", family_degree}, {"cutoff", cutoff},
                {"pairs", pairs},     {"support", k_support}, {"n0", n0},         {"seed", seed}};
  };

  // rho
  std::string mu_spec, nu_spec;
  auto* rho = app.add_subcommand("rho", "LP estimate of the state distance rho(mu, nu)");
  add_alpha(rho);
  rho->add_option("--mu", mu_spec, "State: point:x1,y1,..  vector:j  density:FILE.json")->required();
  rho->add_option("--nu", nu_spec, "State: point:x1,y1,..  vector:j  density:FILE.json")->required();
  add_lp_options(rho);
  rho->callback([&] {
    action = [&] {
      StateDistanceSolver solver = make_solver(alpha);
      State mu = parse_state(mu_spec, d, solver.truncation());
      State nu = parse_state(nu_spec, d, solver.truncation());
      RhoResult r = solver.distance(mu, nu);
      json config = lp_config("rho");
      config["alpha"] = alpha;
      config["mu"] = mu_spec;
      config["nu"] = nu_spec;
      json doc{{"value", r.value},
               {"upper_bound_2gamma", interval_json({2 * solver.bridge().gamma.lo, 2 * solver.bridge().gamma.hi})},
               {"u", r.optimizer.u},
               {"v", r.optimizer.v},
               {"pivots", r.pivots},
               {"max_violation", r.max_violation},
               {"config", config}};
      out << doc.dump() << "\n";
      return kOk;
    };
  });

  // qgh
  std::string alpha_list = "1,2,4,8";
  std::size_t vectors = 5, random_states = 5, points = 3;
  auto* qgh = app.add_subcommand("qgh", "Hausdorff LP estimate and 2 gamma bound per alpha (CSV)");
  qgh->add_option("--alpha-list", alpha_list, "Comma-separated alphas")->capture_default_str();
  add_lp_options(qgh);
  qgh->add_option("--vectors", vectors, "Vector states e_1..e_vectors in the Toeplitz net")->capture_default_str();
  qgh->add_option("--random-states", random_states, "Seeded random rank-one states in the Toeplitz net")
      ->capture_default_str();
  qgh->add_option("--points", points, "Seeded point masses in the sphere net")->capture_default_str();
  qgh->callback([&] {
    action = [&] {
      std::vector<double> alphas = parse_list(alpha_list);
      for (double a : alphas) require(a >= static_cast<double>(d), "every alpha must satisfy alpha >= d");
      out << "alpha,lp_hausdorff_estimate,upper_bound_2gamma_lo,upper_bound_2gamma_hi\n";
      for (double a : alphas) {
        StateDistanceSolver solver = make_solver(a);
        auto net_a = default_density_net(solver.truncation(), vectors, random_states, seed);
        auto net_b = random_point_net(d, points, seed);
        HausdorffEstimate est = hausdorff_estimate(solver, net_a, net_b);
        out << fmt(a) << "," << fmt(est.value) << "," << fmt(est.upper_bound_2gamma.lo) << ","
            << fmt(est.upper_bound_2gamma.hi) << "\n";
      }
      json config = lp_config("qgh");
      config["alpha_list"] = alphas;
      config["vectors"] = vectors;
      config["random_states"] = random_states;
      config["points"] = points;
      csv_trailer(out, config);
      return kOk;
    };
  });

  // kernel-check
  std::size_t count = 20;
  double radius = 0.6;
  auto* kernel = app.add_subcommand("kernel-check", "Truncated basis series against the closed-form kernel (CSV)");
  add_d(kernel);
  add_alpha(kernel);
  add_degree(kernel, "Total degree of the truncated series");
  kernel->add_option("--points", count, "Random point pairs in the ball")->capture_default_str();
  kernel->add_option("--radius", radius, "Points are drawn from |z| <= radius")->capture_default_str();
  add_seed(kernel);
  kernel->callback([&] {
    action = [&] {
      BergmanWeight w(d, alpha);
      auto zs = random_ball_points(d, count, radius, seed);
      auto vs = random_ball_points(d, count, radius, seed + 1);
      out << "pair,series_re,series_im,kernel_re,kernel_im,gap\n";
      for (std::size_t i = 0; i < count; ++i) {
        KernelSeriesCheck c = kernel_series_check(w, zs[i], vs[i], degree);
        out << i + 1 << "," << fmt(c.partial_sum.real()) << "," << fmt(c.partial_sum.imag()) << ","
            << fmt(c.closed_form.real()) << "," << fmt(c.closed_form.imag()) << "," << fmt(c.gap) << "\n";
      }
      csv_trailer(out, json{{"command", "kernel-check"}, {"d", d}, {"alpha", alpha}, {"degree", degree},
                            {"points", count}, {"radius", radius}, {"seed", seed}});
      return kOk;
    };
  });

  // commutator-decay
  std::string phi_text = "zb1", psi_text = "z1";
  auto* commutator = app.add_subcommand("commutator-decay", "Per-degree max entry of [T_phi, T_psi] (CSV)");
  commutator->add_option("--phi", phi_text, "First symbol")->capture_default_str();
  commutator->add_option("--psi", psi_text, "Second symbol")->capture_default_str();
  add_d(commutator);
  add_alpha(commutator);
  add_degree(commutator, "Truncation degree");
  commutator->add_flag("--exact", exact, "Also report the exact maximum modulus (integer alpha)");
  commutator->callback([&] {
    action = [&] {
      ExactSymbol phi = parse_symbol(phi_text, d), psi = parse_symbol(psi_text, d);
      BergmanWeight w(d, alpha);
      require(degree >= 0, "degree cutoff must be >= 0");
      auto rows = commutator_decay(w, phi, psi, degree);
      std::vector<ExactDegreeMax> exact_rows;
      if (exact) exact_rows = commutator_decay_exact(w, phi, psi, degree);
      out << "degree,max_abs" << (exact ? ",max_abs_exact" : "") << "\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        out << rows[i].degree << "," << fmt(rows[i].max_abs);
        if (exact) out << "," << exact_abs(exact_rows[i].max_entry);
        out << "\n";
      }
      csv_trailer(out, json{{"command", "commutator-decay"}, {"phi", phi_text}, {"psi", psi_text}, {"d", d},
                            {"alpha", alpha}, {"degree", degree}, {"exact", exact}});
      return kOk;
    };
  });

  // u-diff
  std::string udiff_symbol = "z1";
  auto* udiff = app.add_subcommand("u-diff", "Per-degree max |U* T_phi U - T_phi| between weights d and alpha (CSV)");
  udiff->add_option("--symbol", udiff_symbol, "Symbol")->capture_default_str();
  add_d(udiff);
  add_alpha(udiff);
  add_degree(udiff, "Truncation degree");
  udiff->callback([&] {
    action = [&] {
      ExactSymbol phi = parse_symbol(udiff_symbol, d);
      require(degree >= 0, "degree cutoff must be >= 0");
      out << "degree,max_abs\n";
      for (const auto& r : u_conjugation_difference(phi, alpha, degree))
        out << r.degree << "," << fmt(r.max_abs) << "\n";
      csv_trailer(out, json{{"command", "u-diff"}, {"symbol", udiff_symbol}, {"d", d}, {"alpha", alpha},
                            {"degree", degree}});
      return kOk;
    };
  });

  try {
    merge_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }

  try {
    return action();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace oddsphere::cli
