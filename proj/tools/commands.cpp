#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "hvqm/evolution.hpp"
#include "hvqm/hidden_density.hpp"
#include "hvqm/stats.hpp"
#include "hvqm/stern_gerlach.hpp"
#include "hvqm/von_neumann.hpp"

namespace hvqm::cli {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << content;
}

HalfLineDensity make_family(const RunConfig& cfg) {
  const std::string family = cfg.get_string("family");
  const double hbar = cfg.get_double("hbar");
  if (family == "lognormal") {
    return make_lognormal({hbar, cfg.get_double("sigma")});
  }
  if (family == "dirac") {
    return HalfLineDensity::dirac(hbar);
  }
  throw std::invalid_argument("unknown family '" + family +
                              "' (expected lognormal or dirac)");
}

SpectralState make_state(const RunConfig& cfg) {
  const auto levels = cfg.get_double_list("levels");
  const auto amps = cfg.get_amplitudes();
  if (levels.size() != amps.size()) {
    throw std::invalid_argument("levels and amplitudes differ in length");
  }
  std::vector<SpectralLevel> spec(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    spec[i] = {levels[i], amps[i]};
  }
  return SpectralState(spec);
}

// E[f(l')] for one continuous branch through the pdf, substitution
// l' = l e^u over a 12-sigma window.
template <typename F>
double quad_branch(const ConditionalDensity& c, F f) {
  const double l = c.l();
  const double s = c.plus().sigma();
  auto integrand = [&](double u) {
    const double lp = l * std::exp(u);
    return f(lp) * c.pdf(lp) * std::abs(l) * std::exp(u);
  };
  return stats::integrate(integrand, -12.0 * s, 12.0 * s, 1e-12).value;
}

template <typename F>
double quad_mixture(const MixtureDensity& mix, F f) {
  double total = 0.0;
  for (const auto& comp : mix.components()) {
    total += comp.weight * quad_branch(comp.density, f);
  }
  for (const auto& atom : mix.atoms()) total += atom.weight * f(atom.location);
  return total;
}

double rel_discrepancy(double closed, double quad) {
  return std::abs(closed - quad) / std::max(std::abs(closed), 1e-12);
}

// log-uniform grid of n points between the [1e-6, 1-1e-6] quantiles of one
// branch, ascending in l'
std::vector<double> branch_grid(const ConditionalDensity& c, std::size_t n) {
  const double q_lo = c.quantile(1e-6);
  const double q_hi = c.quantile(1.0 - 1e-6);
  const double m_lo = std::min(std::abs(q_lo), std::abs(q_hi));
  const double m_hi = std::max(std::abs(q_lo), std::abs(q_hi));
  const double sign = c.l() > 0.0 ? 1.0 : -1.0;
  std::vector<double> grid(n);
  const double step = (std::log(m_hi) - std::log(m_lo)) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = sign * std::exp(std::log(m_lo) + double(i) * step);
  }
  if (sign < 0.0) std::reverse(grid.begin(), grid.end());
  return grid;
}

double trapezoid_mass(const std::vector<double>& x,
                      const std::vector<double>& y) {
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    mass += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  }
  return mass;
}

void cmd_profile(const RunConfig& cfg, std::string& csv,
                 std::ostream& summary) {
  if (cfg.get_string("family") != "lognormal") {
    throw std::invalid_argument("degenerate: point mass at l' = l");
  }
  const double l = cfg.get_double("l");
  const double sigma = cfg.get_double("sigma");
  if (l == 0.0) throw std::invalid_argument("profile requires l != 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("profile requires sigma > 0");
  const std::size_t n = cfg.get_u64("n_grid");
  if (n < 2) throw std::invalid_argument("n_grid must be at least 2");

  const auto law = conditional_density(
      l, make_lognormal({cfg.get_double("hbar"), sigma}),
      cfg.get_double("hbar"));
  const auto grid = branch_grid(law, n);

  std::vector<double> density(n);
  csv = "lprime,density\n";
  for (std::size_t i = 0; i < n; ++i) {
    density[i] = law.pdf(grid[i]);
    csv += format_double(grid[i]) + "," + format_double(density[i]) + "\n";
  }

  const double mass = trapezoid_mass(grid, density);
  if (std::abs(mass - 1.0) > 1e-4) {
    throw SolverError("profile grid mass " + std::to_string(mass) +
                      " deviates from 1 by more than 1e-4");
  }
  summary << "profile: l = " << format_double(l)
          << ", trapezoid mass = " << format_double(mass)
          << ", mode = " << format_double(l * std::exp(-sigma * sigma))
          << "\n";
}

void cmd_moments(const RunConfig& cfg, std::string& csv,
                 std::ostream& summary) {
  const auto plus = make_family(cfg);
  const auto state = make_state(cfg);
  const double hbar = cfg.get_double("hbar");

  const auto closed = mixture_moments(state, plus, hbar);
  const auto mix = modified_born_density(state, plus, hbar);
  const double m1_quad = quad_mixture(mix, [](double lp) { return lp; });
  const double var_quad = quad_mixture(mix, [&](double lp) {
    return (lp - closed.m1) * (lp - closed.m1);
  });

  csv =
      "mq,varq,m1,m2,var,m1_quadrature,var_quadrature,"
      "m1_rel_discrepancy,var_rel_discrepancy\n";
  csv += format_double(closed.mq) + "," + format_double(closed.varq) + "," +
         format_double(closed.m1) + "," + format_double(closed.m2) + "," +
         format_double(closed.var) + "," + format_double(m1_quad) + "," +
         format_double(var_quad) + "," +
         format_double(rel_discrepancy(closed.m1, m1_quad)) + "," +
         format_double(rel_discrepancy(closed.var, var_quad)) + "\n";

  summary << "moments: m1 = " << format_double(closed.m1)
          << ", var = " << format_double(closed.var)
          << ", max rel discrepancy = "
          << format_double(std::max(rel_discrepancy(closed.m1, m1_quad),
                                    rel_discrepancy(closed.var, var_quad)))
          << "\n";
}

void cmd_born(const RunConfig& cfg, std::string& csv, std::ostream& summary) {
  const auto plus = make_family(cfg);
  const auto state = make_state(cfg);
  const auto mix =
      modified_born_density(state, plus, cfg.get_double("hbar"));
  const std::size_t n = cfg.get_u64("n_grid");
  if (n < 2) throw std::invalid_argument("n_grid must be at least 2");

  std::vector<double> grid;
  for (const auto& comp : mix.components()) {
    const auto part = branch_grid(comp.density, n);
    grid.insert(grid.end(), part.begin(), part.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  csv = "kind,lprime,value\n";
  for (double lp : grid) {
    csv += "continuous," + format_double(lp) + "," +
           format_double(mix.pdf(lp)) + "\n";
  }
  for (const auto& atom : mix.atoms()) {
    csv += "atom," + format_double(atom.location) + "," +
           format_double(atom.weight) + "\n";
  }

  summary << "born: " << mix.components().size() << " continuous branches, "
          << mix.atoms().size() << " point masses, atom mass = "
          << format_double(mix.atom_mass()) << "\n";
}

void cmd_simulate(const RunConfig& cfg, std::string& csv,
                  std::ostream& summary) {
  const auto plus = make_family(cfg);
  const auto state = make_state(cfg);

  MeasurementConfig mc;
  mc.g = cfg.get_double("g");
  mc.t = cfg.get_double("t");
  mc.hbar = cfg.get_double("hbar");
  mc.n_events = cfg.get_u64("n_events");
  mc.seed = cfg.get_u64("seed");
  mc.workers = static_cast<unsigned>(cfg.get_u64("workers"));
  mc.validate();

  const auto events = simulate_events(state, mc, symmetrize(plus));

  csv = "index,chosen_l,lambda,outcome,pointer_shift\n";
  double mean = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    csv += std::to_string(i) + "," + format_double(ev.chosen_l) + "," +
           format_double(ev.lambda) + "," + format_double(ev.outcome_lprime) +
           "," + format_double(ev.pointer_shift) + "\n";
    mean += ev.outcome_lprime;
  }
  mean /= double(events.size());

  summary << "simulate: " << events.size()
          << " events, sample mean outcome = " << format_double(mean)
          << ", closed-form mean = "
          << format_double(mixture_moments(state, plus, mc.hbar).m1) << "\n";
}

void cmd_sg(const RunConfig& cfg, std::string& csv, std::ostream& summary) {
  const double hbar = cfg.get_double("hbar");
  const double lambda = cfg.get_double("lambda");
  const double sigma0 = cfg.get_double("sigma0");
  const double t = cfg.get_double("t");
  const SGParams sg{cfg.get_double("mu"), cfg.get_double("T"),
                    cfg.get_double("m_a")};
  const double l = cfg.get_double("l");
  const std::size_t n = cfg.get_u64("n_grid");
  if (lambda == 0.0) throw std::invalid_argument("lambda must be nonzero");
  if (!(t > 0.0)) throw std::invalid_argument("flight time must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (n < 256) {
    throw std::invalid_argument("validation runs need n_grid >= 256");
  }

  const double delta = phase_imprint(sg, l);
  const double k0 = delta / hbar;
  GaussianPacket packet{sigma0, 0.0, k0, sg.m_a, lambda, 0.0};
  const auto final_packet = analytic_evolve(packet, t);
  const double s_final = std::sqrt(final_packet.spatial_variance());

  const double lo = std::min(0.0, final_packet.center) - 14.0 * s_final;
  const double hi = std::max(0.0, final_packet.center) + 14.0 * s_final;
  auto grid = make_gaussian_grid(lo, hi, n, 0.0, sigma0, k0);
  require_packet_margin(grid, 0.0, sigma0);
  require_packet_margin(grid, final_packet.center, s_final);

  double dt = cfg.get_double("dt");
  if (!(dt > 0.0)) dt = default_dt_free(grid, lambda, sg.m_a);
  const long steps = static_cast<long>(std::ceil(t / dt));
  dt = t / double(steps);

  EvolveStats stats{};
  const auto out = evolve_free(grid, lambda, sg.m_a, dt, steps, &stats);
  if (stats.aliasing_warning) {
    summary << "warning: phase wavevector beyond half the resolvable band\n";
  }

  const auto obs = observables(out);
  double err2 = 0.0;
  for (std::size_t j = 0; j < out.n; ++j) {
    const double diff =
        std::norm(out.values[j]) - final_packet.density(out.z(j));
    err2 += diff * diff;
  }
  const double l2_err = std::sqrt(err2 * out.dz());
  const double center_err = std::abs(obs.mean_z - final_packet.center);
  const double var_err =
      std::abs(obs.var_z - final_packet.spatial_variance());
  const double norm_drift = std::abs(stats.norm_out - stats.norm_in);
  const double outcome = sg_outcome(final_packet.center, sg.g_M(), t, hbar);

  csv =
      "lambda,sigma0,delta,t,n_grid,dt,steps,center_analytic,center_numeric,"
      "center_error,var_analytic,var_numeric,var_error,l2_density_error,"
      "norm_drift,outcome\n";
  csv += format_double(lambda) + "," + format_double(sigma0) + "," +
         format_double(delta) + "," + format_double(t) + "," +
         std::to_string(n) + "," + format_double(dt) + "," +
         std::to_string(steps) + "," + format_double(final_packet.center) +
         "," + format_double(obs.mean_z) + "," + format_double(center_err) +
         "," + format_double(final_packet.spatial_variance()) + "," +
         format_double(obs.var_z) + "," + format_double(var_err) + "," +
         format_double(l2_err) + "," + format_double(norm_drift) + "," +
         format_double(outcome) + "\n";

  const std::string dump = cfg.get_string("dump_density");
  if (!dump.empty()) {
    std::ofstream snap(dump, std::ios::binary);
    if (!snap) throw std::invalid_argument("cannot open dump file: " + dump);
    dump_density_csv(out, snap);
  }

  summary << "sg: center error = " << format_double(center_err)
          << ", L2 density error = " << format_double(l2_err)
          << ", outcome l' = " << format_double(outcome) << "\n";
}

void cmd_evolve_check(const RunConfig& cfg, std::string& csv,
                      std::ostream& summary) {
  const double sigma0 = cfg.get_double("sigma0");
  const double speed = cfg.get_double("speed");
  const double t = cfg.get_double("t");
  const std::size_t n0 = cfg.get_u64("n_grid");
  const std::uint64_t refinements = cfg.get_u64("refinements");
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  if (refinements < 1 || refinements > 8) {
    throw std::invalid_argument("refinements must lie in [1, 8]");
  }
  if (n0 < 256) {
    throw std::invalid_argument("validation runs need n_grid >= 256");
  }

  double dt0 = cfg.get_double("dt");
  csv = "n,dt,steps,linf_error,l2_error,norm_drift,observed_order\n";

  double prev_linf = 0.0;
  std::vector<double> linf_errors;
  for (std::uint64_t r = 0; r < refinements; ++r) {
    const std::size_t n = n0 << r;
    auto grid = make_gaussian_grid(-16.0, 16.0, n, 0.0, sigma0, 0.0);
    double dt = dt0 > 0.0 ? dt0 / double(1 << r)
                          : default_dt_advect(grid, speed);
    const long steps = static_cast<long>(std::ceil(t / dt));
    dt = t / double(steps);

    require_packet_margin(grid, speed * t, sigma0);
    const auto out = advect(grid, speed, dt, steps);
    const auto exact =
        make_gaussian_grid(-16.0, 16.0, n, speed * t, sigma0, 0.0);

    double linf = 0.0, l22 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(out.values[j] - exact.values[j]);
      linf = std::max(linf, d);
      l22 += d * d;
    }
    const double l2 = std::sqrt(l22 * out.dz());
    const double drift = std::abs(observables(out).norm - 1.0);

    csv += std::to_string(n) + "," + format_double(dt) + "," +
           std::to_string(steps) + "," + format_double(linf) + "," +
           format_double(l2) + "," + format_double(drift) + ",";
    if (r > 0 && linf > 0.0 && prev_linf > 0.0) {
      csv += format_double(std::log2(prev_linf / linf));
    }
    csv += "\n";
    prev_linf = linf;
    linf_errors.push_back(linf);
  }

  summary << "evolve-check: base Linf error = "
          << format_double(linf_errors.front());
  if (linf_errors.size() > 1) {
    summary << ", final refinement ratio = "
            << format_double(linf_errors[linf_errors.size() - 2] /
                             linf_errors.back());
  }
  summary << "\n";
}

void cmd_limit(const RunConfig& cfg, std::string& csv, std::ostream& summary) {
  const double hbar = cfg.get_double("hbar");
  const auto sigmas = cfg.get_double_list("sigmas");
  csv = "sigma,abs_m1_minus_hbar,var_plus\n";
  for (double s : sigmas) {
    const auto d = make_lognormal({hbar, s});
    csv += format_double(s) + "," +
           format_double(std::abs(d.moment(1) - hbar)) + "," +
           format_double(d.variance()) + "\n";
  }
  summary << "limit: " << sigmas.size() << " ladder rungs\n";
}

void cmd_bound(const RunConfig& cfg, std::string& csv, std::ostream& summary) {
  const double sigma = cfg.get_double("sigma");
  const double delta_l = cfg.get_double("delta_l");
  const double l_star = reliability_bound(sigma, delta_l);
  csv = "sigma,delta_l,l_star\n";
  csv += format_double(sigma) + "," + format_double(delta_l) + "," +
         format_double(l_star) + "\n";
  summary << "bound: l* = " << format_double(l_star) << "\n";
}

}  // namespace

void run_command(RunConfig& cfg, std::ostream& summary) {
  cfg.canonicalize();
  const std::string out_path = cfg.get_string("out");
  if (out_path.empty()) throw std::invalid_argument("missing output path");

  std::string csv;
  const std::string& cmd = cfg.command();
  if (cmd == "profile") {
    cmd_profile(cfg, csv, summary);
  } else if (cmd == "moments") {
    cmd_moments(cfg, csv, summary);
  } else if (cmd == "born") {
    cmd_born(cfg, csv, summary);
  } else if (cmd == "simulate") {
    cmd_simulate(cfg, csv, summary);
  } else if (cmd == "sg") {
    cmd_sg(cfg, csv, summary);
  } else if (cmd == "evolve-check") {
    cmd_evolve_check(cfg, csv, summary);
  } else if (cmd == "limit") {
    cmd_limit(cfg, csv, summary);
  } else if (cmd == "bound") {
    cmd_bound(cfg, csv, summary);
  } else {
    throw std::invalid_argument("unknown command: " + cmd);
  }

  write_file(out_path, csv);
  write_file(out_path + ".config", cfg.serialize());
}

}  // namespace hvqm::cli
