#include "ctinfo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctinfo/acceptance.hpp"
#include "ctinfo/closedform.hpp"
#include "ctinfo/common.hpp"
#include "ctinfo/config.hpp"
#include "ctinfo/filter.hpp"
#include "ctinfo/icap.hpp"
#include "ctinfo/infomeasures.hpp"
#include "ctinfo/oudyn.hpp"
#include "ctinfo/paths.hpp"
#include "ctinfo/simulate.hpp"

namespace ctinfo::cli {

namespace {

using json = nlohmann::json;
using paths::EventPath;
using paths::TimeWindow;

struct Global {
    std::uint64_t seed = 1;
    int threads = 0;  // 0: library default
    std::string out_dir;
    std::string params_file;
    config::KeyValues params;
    bool have_params = false;
};

std::string prefixed(const Global& g, const std::string& file) {
    if (g.out_dir.empty() || file.find('/') != std::string::npos) return file;
    return g.out_dir + "/" + file;
}

std::string preamble(const Global& g) {
    return std::string("ctinfo ") + version + " seed=" + std::to_string(g.seed) +
           " config=" + (g.have_params ? g.params.fnv1a_hash() : std::string("none"));
}

json meta(const Global& g) {
    return json{{"version", version},
                {"seed", g.seed},
                {"config_hash", g.have_params ? g.params.fnv1a_hash() : "none"}};
}

void write_json(const Global& g, const std::string& file, json j) {
    j["meta"] = meta(g);
    std::ofstream out(prefixed(g, file));
    require(out.good(), "cannot open output file: " + file);
    out << j.dump(2) << "\n";
}

simulate::RefractoryParams refractory_from(const config::KeyValues& kv) {
    kv.restrict_keys({"mu", "delta_x"});
    simulate::RefractoryParams p;
    p.mu = kv.get_number("mu");
    p.delta_x = kv.get_number("delta_x", 0.0);
    p.validate();
    return p;
}

simulate::PhaseDist phase_dist_from(const std::string& descriptor) {
    std::istringstream in(descriptor);
    std::string kind;
    in >> kind;
    if (kind == "delta") {
        double a = 0.0;
        in >> a;
        return simulate::PhaseDist::delta_at(a);
    }
    if (kind == "uniform") return simulate::PhaseDist::uniform_phase();
    if (kind == "tabulated") {
        std::string file;
        in >> file;
        std::ifstream df(file);
        require(df.good(), "phase_dist: cannot open density file: " + file);
        std::vector<double> dens;
        double v;
        while (df >> v) dens.push_back(v);
        return simulate::PhaseDist::tabulated(std::move(dens));
    }
    throw std::invalid_argument("phase_dist must be 'delta <a>', 'uniform' or "
                                "'tabulated <file>', got: " + descriptor);
}

simulate::EventDrivenParams event_driven_from(const config::KeyValues& kv) {
    kv.restrict_keys({"c", "delta_x", "delta_y", "phase_dist"});
    simulate::EventDrivenParams p;
    p.c = kv.get_number("c");
    p.delta_x = kv.get_number("delta_x");
    p.delta_y = kv.get_number("delta_y");
    p.phase_dist = phase_dist_from(kv.get_string("phase_dist", "delta 0"));
    p.validate();
    return p;
}

simulate::CoupledSpikingParams coupled_from(const config::KeyValues& kv) {
    kv.restrict_keys({"lambda_y", "lambda_base", "m", "sigma", "t_cut", "y_history"});
    simulate::CoupledSpikingParams p;
    p.lambda_y = kv.get_number("lambda_y");
    p.lambda_base = kv.get_number("lambda_base");
    p.m = kv.get_number("m");
    p.sigma = kv.get_number("sigma");
    p.t_cut = kv.get_number("t_cut");
    p.validate();
    return p;
}

simulate::YHistory y_history_from(const config::KeyValues& kv, double default_len) {
    const std::string descriptor = kv.get_string("y_history", "silent");
    std::istringstream in(descriptor);
    std::string kind;
    in >> kind;
    if (kind == "stationary") return simulate::YHistory::stationary();
    if (kind == "silent") {
        double len = default_len;
        in >> len;
        return simulate::YHistory::silent(len);
    }
    throw std::invalid_argument("y_history must be 'silent [L]' or 'stationary'");
}

oudyn::OUParams ou_from(const config::KeyValues& kv) {
    kv.restrict_keys({"A", "B", "C", "D", "V_x", "V_y", "rho"});
    oudyn::OUParams p;
    p.A = kv.get_number("A");
    p.B = kv.get_number("B");
    p.C = kv.get_number("C");
    p.D = kv.get_number("D");
    p.V_x = kv.get_number("V_x");
    p.V_y = kv.get_number("V_y");
    p.rho = kv.get_number("rho", 0.0);
    p.validate();
    return p;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_simulate(const Global& g, const std::string& model, double horizon, double burn_in,
                 const std::string& out, const std::string& out_y) {
    const TimeWindow w(-burn_in, 0.0, horizon);
    if (model == "poisson") {
        g.params.restrict_keys({"mu"});
        const double mu = g.params.get_number("mu");
        require(mu > 0.0, "poisson: mu must be positive");
        auto x = simulate::simulate_thinning([mu](double, auto) { return mu; }, mu, w, g.seed);
        paths::write_events_csv(prefixed(g, out), x, preamble(g));
        return 0;
    }
    if (model == "refractory") {
        auto x = simulate::simulate_refractory(refractory_from(g.params), w, g.seed);
        paths::write_events_csv(prefixed(g, out), x, preamble(g));
        return 0;
    }
    if (model == "event-driven") {
        const auto r = simulate::simulate_event_driven(event_driven_from(g.params), w, g.seed);
        paths::write_events_csv(prefixed(g, out), r.x,
                                preamble(g) + " phase=" + std::to_string(r.phase));
        if (!out_y.empty()) paths::write_events_csv(prefixed(g, out_y), r.y, preamble(g));
        return 0;
    }
    if (model == "coupled") {
        const auto p = coupled_from(g.params);
        const auto r = simulate::simulate_coupled_spiking(p, w, g.seed,
                                                          y_history_from(g.params, p.t_cut));
        paths::write_events_csv(prefixed(g, out), r.x, preamble(g));
        if (!out_y.empty()) paths::write_events_csv(prefixed(g, out_y), r.y, preamble(g));
        return 0;
    }
    throw std::invalid_argument("unknown model: " + model +
                                " (poisson|refractory|event-driven|coupled)");
}

int cmd_filter(const Global& g, const std::string& events_file, double tau, double horizon,
               double grid_step, const std::string& out) {
    const auto p = coupled_from(g.params);
    const auto x = paths::read_events_csv(events_file, TimeWindow(tau, std::max(tau, 0.0), horizon));
    const auto tr = filter::marginal_intensity_trace(x, p, grid_step);
    paths::write_intensity_csv(prefixed(g, out), tr, "lambda_full", preamble(g));
    return 0;
}

json rate_to_json(const infomeasures::RateEstimate& est) {
    return json{{"value", est.value},
                {"stderr", est.stderr_},
                {"n_events", est.n_events},
                {"horizon", est.horizon}};
}

int cmd_estimate(const Global& g, const std::string& what, const std::string& model,
                 const std::string& events_file, const std::string& events_y_file, double tau,
                 double horizon, double grid_step, const std::string& dt_list, std::size_t k_bins,
                 const std::string& out) {
    const TimeWindow w(tau, std::max(tau, 0.0), horizon);
    const auto x = paths::read_events_csv(events_file, w);
    json j;
    j["params"] = g.have_params ? g.params.canonical() : "";

    if (what == "binned") {
        std::vector<double> dts;
        std::istringstream in(dt_list);
        std::string tok;
        while (std::getline(in, tok, ',')) dts.push_back(std::stod(tok));
        require(!dts.empty(), "estimate binned: --dt-list is required");
        json rows = json::array();
        for (const auto& row : infomeasures::binned_storage_demo(x, dts, k_bins))
            rows.push_back({{"dt", row.dt}, {"k", row.k}, {"estimate", row.estimate}});
        j["rows"] = rows;
        write_json(g, out, j);
        return 0;
    }

    if (what == "elusive") {
        const auto p = refractory_from(g.params);
        const auto full = infomeasures::refractory_intensity(x, p);
        const auto res = infomeasures::elusive_information(x, full, p);
        j["value"] = res.value;
        j["integrand_at_cut"] = res.integrand_at_cut;
        j["divergence_warning"] = res.divergence_warning;
        write_json(g, out, j);
        return 0;
    }

    infomeasures::RateEstimate est;
    if (model == "poisson" || model == "refractory") {
        require(what == "memory", "estimate " + what + ": only the memory rate is defined "
                                  "for a single train with model " + model);
        simulate::RefractoryParams p;
        if (model == "poisson") {
            g.params.restrict_keys({"mu"});
            p = simulate::RefractoryParams{g.params.get_number("mu"), 0.0};
        } else {
            p = refractory_from(g.params);
        }
        est = infomeasures::ergodic_memory_rate(x, infomeasures::refractory_intensity(x, p),
                                                infomeasures::refractory_markov_intensity(x, p));
    } else if (model == "coupled") {
        const auto p = coupled_from(g.params);
        const auto full = filter::marginal_intensity_trace(x, p, grid_step);
        if (what == "memory") {
            const auto markov = paths::IntensityTrace::constant(
                w.tau, w.t_end, closedform::coupled_markov_rate(p));
            est = infomeasures::ergodic_memory_rate(x, full, markov);
        } else if (what == "transfer") {
            require(!events_y_file.empty(), "estimate transfer: --events-y is required");
            simulate::CoupledRealisation r;
            r.x = x;
            r.y = paths::read_events_csv(events_y_file, w);
            r.y_last_pre_window = w.tau - p.t_cut;
            const auto cond = filter::conditional_intensity_trace(r, p, grid_step);
            est = infomeasures::ergodic_transfer_rate(x, cond, full);
        } else {
            throw std::invalid_argument("estimate: unknown quantity " + what);
        }
    } else {
        throw std::invalid_argument("estimate: unknown model " + model);
    }
    j.update(rate_to_json(est));
    write_json(g, out, j);
    return 0;
}

int cmd_analytic(const Global& g, const std::string& model, const std::string& out) {
    json j;
    if (model == "refractory") {
        const auto p = refractory_from(g.params);
        const auto f = closedform::refractory_closed_forms(p.mu, p.delta_x);
        j = json{{"lambda0", f.lambda0},
                 {"memory_rate", f.memory_rate},
                 {"argmax_delta_x", f.argmax_delta_x},
                 {"max_rate", f.max_rate}};
    } else if (model == "event-driven") {
        const auto p = event_driven_from(g.params);
        const auto rep = closedform::event_driven_report(p);
        j = json{{"m_ring", rep.m_ring},
                 {"m_st", rep.m_st},
                 {"overestimate", rep.overestimate},
                 {"xi", rep.xi}};
    } else {
        throw std::invalid_argument("analytic: unknown model " + model);
    }
    write_json(g, out, j);
    return 0;
}

int cmd_ou(const Global& g, const std::string& what, double dt, double horizon,
           std::size_t n_paths, const std::string& probe_list, double rho_min, double rho_max,
           std::size_t rho_points, double vy_min, double vy_max, std::size_t vy_points,
           const std::string& out) {
    const auto p = ou_from(g.params);
    if (what == "simulate") {
        const auto path = oudyn::simulate_coupled_ou(p, dt, horizon, g.seed);
        paths::write_samples_csv(prefixed(g, out), path, preamble(g));
        return 0;
    }
    if (what == "rates") {
        const auto sr = oudyn::sum_rate_coupled_ou(p);
        const auto sr_y = oudyn::sum_rate_coupled_ou(p.swapped());
        const auto crit = oudyn::critical_noise(p);
        write_json(g, out,
                   json{{"TE_yx", oudyn::te_rate_coupled_ou(p)},
                        {"TE_xy", oudyn::te_rate_coupled_ou(p.swapped())},
                        {"M_x", sr.memory},
                        {"M_y", sr_y.memory},
                        {"sum_x", sr.sum},
                        {"kappa_eff_x", oudyn::kappa_eff(p)},
                        {"kappa_eff_y", oudyn::kappa_eff(p.swapped())},
                        {"V_y_critical", {crit.first, crit.second}}});
        return 0;
    }
    if (what == "sweep") {
        std::ofstream f(prefixed(g, out));
        require(f.good(), "cannot open output file: " + out);
        f.precision(12);
        f << "# " << preamble(g) << "\n";
        f << "rho,Vy,TE_yx,TE_xy,M_x,M_y,kappa_eff\n";
        for (std::size_t i = 0; i < rho_points; ++i) {
            const double rho = rho_points == 1 ? rho_min
                                               : rho_min + (rho_max - rho_min) *
                                                               static_cast<double>(i) /
                                                               static_cast<double>(rho_points - 1);
            for (std::size_t jv = 0; jv < vy_points; ++jv) {
                const double vy = vy_points == 1 ? vy_min
                                                 : vy_min + (vy_max - vy_min) *
                                                                static_cast<double>(jv) /
                                                                static_cast<double>(vy_points - 1);
                auto q = p;
                q.rho = rho;
                q.V_y = vy;
                f << rho << "," << vy << ",";
                if (!q.stable() || vy <= 0.0) {
                    f << "nan,nan,nan,nan,nan\n";  // skipped: unstable or degenerate
                    continue;
                }
                try {
                    const double te = oudyn::te_rate_coupled_ou(q);
                    const double te_y = oudyn::te_rate_coupled_ou(q.swapped());
                    const auto sx = oudyn::sum_rate_coupled_ou(q);
                    const auto sy = oudyn::sum_rate_coupled_ou(q.swapped());
                    f << te << "," << te_y << "," << sx.memory << "," << sy.memory << ","
                      << oudyn::kappa_eff(q) << "\n";
                } catch (const numerical_error&) {
                    f << "nan,nan,nan,nan,nan\n";
                }
            }
        }
        return 0;
    }
    if (what == "martingale") {
        std::vector<double> probes;
        std::istringstream in(probe_list);
        std::string tok;
        while (std::getline(in, tok, ',')) probes.push_back(std::stod(tok));
        require(!probes.empty(), "ou martingale: --probes is required");
        json rows = json::array();
        std::vector<std::vector<double>> z(probes.size());
        std::vector<double> rates;
        for (std::size_t i = 0; i < n_paths; ++i) {
            const auto path = oudyn::simulate_coupled_ou(p, dt, horizon, g.seed, i);
            const auto acc = oudyn::girsanov_accumulator(path, p);
            rates.push_back(acc.trace.final_m() / horizon);
            for (std::size_t k = 0; k < probes.size(); ++k) {
                const auto idx = static_cast<std::size_t>(std::llround(probes[k] / dt));
                require(idx < acc.z.size(), "ou martingale: probe beyond horizon");
                z[k].push_back(acc.z[idx]);
            }
        }
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const auto s = ensemble::summarize(z[k]);
            double sum = 0.0, sumsq = 0.0;
            for (double v : z[k]) {
                sum += v;
                sumsq += v * v;
            }
            rows.push_back({{"t", probes[k]},
                            {"mean_Z", s.mean},
                            {"se", s.se},
                            {"ess", sumsq > 0.0 ? sum * sum / sumsq : 0.0}});
        }
        const auto rs = ensemble::summarize(rates);
        write_json(g, out,
                   json{{"mean_accumulator_rate", rs.mean},
                        {"se", rs.se},
                        {"closed_form_sum_rate", oudyn::sum_rate_coupled_ou(p).sum},
                        {"martingale", rows}});
        return 0;
    }
    throw std::invalid_argument("ou: unknown subcommand " + what);
}

int cmd_icap(const Global& g, const std::string& what, double dt_min, double dt_max,
             std::size_t points, const std::string& out) {
    const std::string model = g.params.get_string("model");
    json j;
    auto coeffs_json = [](const icap::CoefficientSet& c) {
        auto field = [](const std::optional<double>& v, bool div) {
            return div ? json("divergent") : (v ? json(*v) : json(nullptr));
        };
        return json{{"c00", field(c.c00, c.c00_divergent)},
                    {"c01", field(c.c01, c.c01_divergent)},
                    {"c10", field(c.c10, c.c10_divergent)},
                    {"c11", field(c.c11, c.c11_divergent)},
                    {"instantaneous_divergent", c.instantaneous_divergent},
                    {"rate_divergent", c.rate_divergent}};
    };

    auto evaluator = [&]() -> std::function<double(double)> {
        if (model == "two-state") {
            g.params.restrict_keys({"model", "k_plus", "k_minus"});
            const double kp = g.params.get_number("k_plus");
            const double km = g.params.get_number("k_minus");
            return [kp, km](double t) { return icap::parametric_ix_two_state(kp, km, t); };
        }
        if (model == "ou") {
            g.params.restrict_keys({"model", "kappa"});
            const double kappa = g.params.get_number("kappa");
            return [kappa](double t) { return oudyn::ou_parametric_ais(kappa, t); };
        }
        throw std::invalid_argument("icap fit: model must be two-state or ou");
    };

    if (what == "coeffs") {
        if (model == "two-state") {
            g.params.restrict_keys({"model", "k_plus", "k_minus"});
            j["coeffs"] = coeffs_json(icap::master_eq_coeffs(icap::MasterEqModel::two_state(
                g.params.get_number("k_plus"), g.params.get_number("k_minus"))));
        } else if (model == "spiking") {
            g.params.restrict_keys({"model", "lambda0"});
            j["coeffs"] = coeffs_json(icap::spiking_coeffs(g.params.get_number("lambda0")));
        } else if (model == "ou") {
            g.params.restrict_keys({"model", "kappa"});
            j["coeffs"] = coeffs_json(oudyn::ou_asymptotic_coeffs(g.params.get_number("kappa")));
        } else {
            throw std::invalid_argument("icap coeffs: model must be two-state, spiking or ou");
        }
        write_json(g, out, j);
        return 0;
    }
    if (what == "fit") {
        require(points >= 8, "icap fit: need at least 8 points");
        const auto f = evaluator();
        std::vector<std::pair<double, double>> samples;
        for (std::size_t i = 0; i < points; ++i) {
            const double t = dt_min * std::pow(dt_max / dt_min,
                                               static_cast<double>(i) /
                                                   static_cast<double>(points - 1));
            samples.emplace_back(t, f(t));
        }
        const auto fit = icap::fit_asymptotic_coeffs(samples);
        j["coeffs"] = coeffs_json(fit.coeffs);
        j["residual_rms"] = fit.residual_rms;
        j["basis_warning"] = fit.basis_warning;
        write_json(g, out, j);
        return 0;
    }
    throw std::invalid_argument("icap: unknown subcommand " + what);
}

int cmd_fig2(const Global& g, double horizon, double grid_step) {
    const auto p = g.have_params ? coupled_from(g.params) : [] {
        simulate::CoupledSpikingParams q;
        q.lambda_y = 1.0;
        q.lambda_base = 0.5;
        q.m = 5.0;
        q.sigma = 0.1;
        q.t_cut = 1.0;
        return q;
    }();
    const TimeWindow w(-p.t_cut, 0.0, horizon);
    const auto real = simulate::simulate_coupled_spiking(p, w, g.seed,
                                                         simulate::YHistory::silent(p.t_cut));
    const auto cond = filter::conditional_intensity_trace(real, p, grid_step);
    const auto full = filter::marginal_intensity_trace(real.x, p, grid_step);
    const double lam0 = closedform::coupled_markov_rate(p);
    const auto markov = paths::IntensityTrace::constant(w.tau, w.t_end, lam0);

    const auto mem = infomeasures::pathwise_memory(real.x, full, markov);
    const auto tra = infomeasures::pathwise_transfer(real.x, cond, full);

    paths::write_events_csv(prefixed(g, "events_x.csv"), real.x, preamble(g));
    paths::write_events_csv(prefixed(g, "events_y.csv"), real.y, preamble(g));
    paths::write_intensity_csv(prefixed(g, "lambda_cond.csv"), cond, "lambda_cond", preamble(g));
    paths::write_intensity_csv(prefixed(g, "lambda_full.csv"), full, "lambda_full", preamble(g));
    paths::write_intensity_csv(prefixed(g, "lambda_markov.csv"), markov, "lambda_markov",
                               preamble(g));
    paths::write_info_csv(prefixed(g, "memory.csv"), prefixed(g, "memory_jumps.csv"), mem,
                          preamble(g));
    paths::write_info_csv(prefixed(g, "transfer.csv"), prefixed(g, "transfer_jumps.csv"), tra,
                          preamble(g));
    std::cout << "wrote trace bundle: events_{x,y}.csv lambda_{cond,full,markov}.csv "
                 "memory[_jumps].csv transfer[_jumps].csv (lambda0 = "
              << lam0 << ")\n";
    return 0;
}

int cmd_fig3(const Global& g, const std::string& out) {
    Global g2 = g;
    if (!g.have_params) {
        g2.params = config::KeyValues::parse_text(
            "A = -5\nB = 5\nC = 1\nD = -2\nV_x = 1\nV_y = 1\nrho = 0\n");
        g2.have_params = true;
    }
    return cmd_ou(g2, "sweep", 0, 0, 0, "", -1.0, 1.0, 21, 0.02, 1.0, 50, out);
}

int cmd_validate(const Global& g, const std::string& out, ensemble::policy pol,
                 double tol_scale) {
    const auto results = acceptance::run_all(g.seed == 1 ? 20240801 : g.seed, pol, tol_scale);
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name
                  << "  [measured " << r.measured << ", target " << r.target << ", tol "
                  << r.tolerance << ", " << r.seconds << " s]\n";
        if (!r.pass) std::cout << r.detail;
        all = all && r.pass;
        rows.push_back({{"id", r.id},
                        {"name", r.name},
                        {"measured", r.measured},
                        {"target", r.target},
                        {"tolerance", r.tolerance},
                        {"status", r.pass ? "pass" : "fail"},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
    }
    if (!out.empty()) write_json(g, out, json{{"criteria", rows}, {"pass", all}});
    std::cout << (all ? "all criteria passed" : "validation FAILED") << "\n";
    return all ? 0 : 2;
}

}  // namespace

int ctinfo_main(int argc, const char* const* argv) {
    CLI::App app{"ctinfo: simulation and estimation toolkit for continuous-time "
                 "information dynamics"};
    app.require_subcommand(1);
    app.footer(
        "parameter-file keys by model (unknown keys are hard errors):\n"
        "  poisson:      mu\n"
        "  refractory:   mu, delta_x\n"
        "  event-driven: c, delta_x, delta_y, phase_dist (= 'delta <a>' | 'uniform' |\n"
        "                'tabulated <file>')\n"
        "  coupled:      lambda_y, lambda_base, m, sigma, t_cut,\n"
        "                y_history (= 'silent [L]' | 'stationary', optional)\n"
        "  ou:           A, B, C, D, V_x, V_y, rho\n"
        "  icap:         model (= 'two-state' | 'spiking' | 'ou') with k_plus, k_minus\n"
        "                or lambda0 or kappa");

    Global g;
    app.add_option("--seed", g.seed, "base RNG seed (ensembles use streams (seed, i))");
    app.add_option("--threads", g.threads, "worker threads for ensembles (0 = default)");
    app.add_option("--out-dir", g.out_dir, "directory prefixed to bare output file names");
    app.add_option("--params", g.params_file, "key-value parameter file ('mu = 1.0' lines)");

    // simulate
    std::string model, out = "out.csv", out_y;
    double horizon = 100.0, burn_in = 0.0;
    auto* sim = app.add_subcommand("simulate", "simulate a point-process model");
    sim->add_option("model", model, "poisson|refractory|event-driven|coupled")->required();
    sim->add_option("--horizon", horizon, "observation horizon T (seconds)")->required();
    sim->add_option("--burn-in", burn_in, "history length before t=0");
    sim->add_option("--out", out, "events CSV for X");
    sim->add_option("--out-y", out_y, "events CSV for Y (2-train models)");

    // filter
    std::string events_file, events_y_file;
    double tau = 0.0, grid_step = 1e-3;
    auto* fil = app.add_subcommand("filter", "marginal intensity of the coupled model");
    fil->add_option("--events", events_file, "X events CSV")->required();
    fil->add_option("--horizon", horizon, "window end")->required();
    fil->add_option("--tau", tau, "history origin (window start)");
    fil->add_option("--grid-step", grid_step, "filter grid step h");
    fil->add_option("--out", out, "intensity CSV (t,lambda_full)");

    // estimate
    std::string what, dt_list;
    std::size_t k_bins = 1;
    auto* est = app.add_subcommand("estimate", "ergodic rate / elusive / binned estimators");
    est->add_option("quantity", what, "memory|transfer|elusive|binned")->required();
    est->add_option("--model", model, "poisson|refractory|coupled");
    est->add_option("--events", events_file, "X events CSV")->required();
    est->add_option("--events-y", events_y_file, "Y events CSV (transfer)");
    est->add_option("--horizon", horizon, "window end")->required();
    est->add_option("--tau", tau, "history origin");
    est->add_option("--grid-step", grid_step, "filter grid step (coupled model)");
    est->add_option("--dt-list", dt_list, "comma list of bin widths (binned)");
    est->add_option("--k", k_bins, "history bins (binned)");
    est->add_option("--out", out, "summary JSON");

    // analytic
    auto* ana = app.add_subcommand("analytic", "closed-form reports");
    ana->add_option("model", model, "refractory|event-driven")->required();
    ana->add_option("--out", out, "report JSON");

    // ou
    double dt = 1e-3;
    std::size_t n_paths = 200, rho_points = 21, vy_points = 50, points = 24;
    double rho_min = -1.0, rho_max = 1.0, vy_min = 0.02, vy_max = 1.0;
    double dt_min = 1e-5, dt_max = 1e-3;
    std::string probes = "0.5,1,2,5";
    auto* ou = app.add_subcommand("ou", "coupled Ornstein-Uhlenbeck tools");
    ou->add_option("action", what, "simulate|rates|sweep|martingale")->required();
    ou->add_option("--dt", dt, "integration step");
    ou->add_option("--horizon", horizon, "path horizon");
    ou->add_option("--paths", n_paths, "ensemble size (martingale)");
    ou->add_option("--probes", probes, "comma list of Z_t probe times");
    ou->add_option("--rho-min", rho_min);
    ou->add_option("--rho-max", rho_max);
    ou->add_option("--rho-points", rho_points);
    ou->add_option("--vy-min", vy_min);
    ou->add_option("--vy-max", vy_max);
    ou->add_option("--vy-points", vy_points);
    ou->add_option("--out", out, "output file");

    // icap
    auto* ic = app.add_subcommand("icap", "predictive-capacity coefficients and fits");
    ic->add_option("action", what, "coeffs|fit")->required();
    ic->add_option("--dt-min", dt_min, "smallest lag");
    ic->add_option("--dt-max", dt_max, "largest lag");
    ic->add_option("--points", points, "number of lag samples");
    ic->add_option("--out", out, "coefficients JSON");

    // fig2 / fig3
    double fig2_horizon = 10.0, fig2_step = 1e-3;
    auto* f2 = app.add_subcommand("fig2", "coupled-spiking trace bundle for one realisation");
    f2->add_option("--horizon", fig2_horizon, "window length");
    f2->add_option("--grid-step", fig2_step, "filter grid step");
    auto* f3 = app.add_subcommand("fig3", "rate surface over (rho, V_y) for the coupled OU");
    f3->add_option("--out", out, "surface CSV");

    // validate
    std::string report = "validation.json";
    double tol_scale = 1.0;
    auto* val = app.add_subcommand("validate", "run the release criteria suite");
    val->add_option("--out", report, "machine-readable report JSON");
    val->add_option("--tol-scale", tol_scale,
                    "multiplier on every numeric tolerance (0 forces failures)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        if (!g.params_file.empty()) {
            g.params = config::KeyValues::parse_file(g.params_file);
            g.have_params = true;
        }
#ifdef _OPENMP
        if (g.threads > 0) omp_set_num_threads(g.threads);
#endif
        const auto pol =
            (g.threads == 1) ? ensemble::policy::serial : ensemble::policy::parallel;

        if (sim->parsed()) return cmd_simulate(g, model, horizon, burn_in, out, out_y);
        if (fil->parsed()) return cmd_filter(g, events_file, tau, horizon, grid_step, out);
        if (est->parsed())
            return cmd_estimate(g, what, model, events_file, events_y_file, tau, horizon,
                                grid_step, dt_list, k_bins, out);
        if (ana->parsed()) return cmd_analytic(g, model, out);
        if (ou->parsed())
            return cmd_ou(g, what, dt, horizon, n_paths, probes, rho_min, rho_max, rho_points,
                          vy_min, vy_max, vy_points, out);
        if (ic->parsed()) return cmd_icap(g, what, dt_min, dt_max, points, out);
        if (f2->parsed()) return cmd_fig2(g, fig2_horizon, fig2_step);
        if (f3->parsed()) return cmd_fig3(g, out);
        if (val->parsed()) return cmd_validate(g, report, pol, tol_scale);
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 3;
    } catch (const insufficient_data& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace ctinfo::cli
