// Command-line surface for the quaternionic Schur analysis library. Every
// subcommand reads JSON, emits one JSON report on stdout and exits 0 on pass,
// 1 on fail, 2 on usage or parse errors. Randomized checks are driven by
// --seed and are byte-stable for a fixed seed.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qschur/json_io.hpp"
#include "qschur/linsys.hpp"
#include "qschur/qschur.hpp"

using namespace qschur;

namespace {

struct Residual {
    std::string label;
    double value;
    double bound;
};

struct Report {
    std::string command;
    std::vector<json> inputs;
    std::vector<Residual> residuals;
    json result = json::object();
    json extra = json::object();
    bool forced_fail = false;

    void note_input(const json& j) { inputs.push_back(j); }

    void check(const std::string& label, double value, double bound) {
        residuals.push_back({label, value, bound});
    }

    bool pass() const {
        if (forced_fail) return false;
        for (const auto& r : residuals)
            if (!(r.value <= r.bound)) return false;
        return true;
    }

    std::string digest() const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        auto mix = [&h](const std::string& s) {
            for (const unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ull;
            }
        };
        mix(command);
        for (const auto& j : inputs) mix(j.dump());
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    int emit(bool timing, double runtime_ms) const {
        json rep;
        rep["command"] = command;
        rep["inputs_digest"] = digest();
        json res = json::array();
        for (const auto& r : residuals)
            res.push_back(json{{"label", r.label}, {"value", r.value}, {"bound", r.bound}});
        rep["residuals"] = res;
        rep["verdict"] = pass() ? "pass" : "fail";
        for (auto it = extra.begin(); it != extra.end(); ++it) rep[it.key()] = it.value();
        rep["result"] = result;
        if (timing) rep["runtime_ms"] = runtime_ms;
        std::cout << rep.dump(2) << "\n";
        return pass() ? 0 : 1;
    }
};

json trace_to_json(const SystemTrace& t) {
    json inputs = json::array(), states = json::array(), outputs = json::array();
    for (const auto& m : t.inputs) inputs.push_back(to_json(m));
    for (const auto& m : t.states) states.push_back(to_json(m));
    for (const auto& m : t.outputs) outputs.push_back(to_json(m));
    return json{{"horizon", t.horizon}, {"inputs", inputs}, {"states", states}, {"outputs", outputs}};
}

json certificate_to_json(const GramCertificate& c) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(to_json(p));
    return json{{"points", pts},
                {"gram", to_json(c.gram)},
                {"trunc", c.trunc},
                {"tol", c.tol},
                {"psd", c.psd},
                {"gram_min_eigenvalue", c.gram_min_eigenvalue},
                {"psd_margin", c.psd_margin},
                {"tail_allowance", c.tail_allowance},
                {"toeplitz_norm", c.toeplitz_norm},
                {"certified", c.certified}};
}

Quaternion quat_arg(const std::string& text, const std::string& what) {
    return quaternion_from_json(parse_json_text(text, what));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic Schur analysis toolbox"};
    app.require_subcommand(1);

    std::uint64_t seed = 12345;
    std::size_t trunc = 32;
    bool timing = false;
    app.add_option("--seed", seed, "seed for randomized checks (default 12345)");
    app.add_option("--trunc", trunc, "default series truncation degree (default 32)");
    app.add_flag("--timing", timing, "include runtime_ms in the report");

    std::string f_path, g_path, a_path, r_path, u_path, u2_path, s_path, points_path, x0_path;
    std::string quat_text, p_text;
    std::size_t n_opt = 0, grid = 32, horizon = 64, kmax = 8;
    double tol = 1e-10, range = 0.0;

    auto* cmd_star = app.add_subcommand("star-mul", "star product of two series");
    cmd_star->add_option("--f", f_path, "left series JSON")->required();
    cmd_star->add_option("--g", g_path, "right series JSON")->required();

    auto* cmd_recip = app.add_subcommand("reciprocal", "star reciprocal of a series");
    cmd_recip->add_option("--f", f_path, "series JSON")->required();

    std::string side = "left";
    auto* cmd_resolvent = app.add_subcommand("s-resolvent", "S-resolvent operator at a point");
    cmd_resolvent->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
    cmd_resolvent->add_option("--r", quat_text, "point quaternion as [w,x,y,z]")->required();
    cmd_resolvent->add_option("--A", a_path, "matrix JSON")->required();

    auto* cmd_probe = app.add_subcommand("spectrum-probe", "scan a half-plane slice for the S-spectrum");
    cmd_probe->add_option("--A", a_path, "matrix JSON")->required();
    cmd_probe->add_option("--grid", grid, "grid resolution per axis (default 32)");
    cmd_probe->add_option("--range", range, "half-width of the scan (default 1.1 ||A||)");
    cmd_probe->add_option("--tol", tol, "membership threshold (default 1e-10)");

    auto* cmd_realize = app.add_subcommand("realize", "minimal realization from series coefficients");
    cmd_realize->add_option("--coeffs", s_path, "series JSON")->required();
    cmd_realize->add_option("--tol", tol, "rank threshold (default 1e-10)");

    auto* cmd_transfer = app.add_subcommand("transfer", "transfer-function series of a realization");
    cmd_transfer->add_option("--R", r_path, "realization JSON")->required();
    cmd_transfer->add_option("--N", n_opt, "truncation degree (default --trunc)");

    auto* cmd_tcheck = app.add_subcommand("transfer-check",
                                          "star-quotient vs pointwise-quotient comparison");
    cmd_tcheck->add_option("--R", r_path, "realization JSON")->required();
    cmd_tcheck->add_option("--u1", u_path, "first input sequence JSON")->required();
    cmd_tcheck->add_option("--u2", u2_path, "second input sequence JSON")->required();
    cmd_tcheck->add_option("--p", p_text, "sample point as [w,x,y,z]")->required();
    cmd_tcheck->add_option("--N", n_opt, "truncation degree (default --trunc)");

    auto* cmd_sim = app.add_subcommand("simulate", "run the state recursion");
    cmd_sim->add_option("--R", r_path, "realization JSON")->required();
    cmd_sim->add_option("--u", u_path, "input sequence JSON")->required();
    cmd_sim->add_option("--T", horizon, "horizon (default 64)");
    cmd_sim->add_option("--x0", x0_path, "initial state JSON (default zero)");

    auto* cmd_certify = app.add_subcommand("certify", "Schur-multiplier certificate");
    cmd_certify->add_option("--s", s_path, "series JSON")->required();
    cmd_certify->add_option("--points", points_path, "sample points JSON (default seeded 8-point set)");
    cmd_certify->add_option("--N", n_opt, "kernel truncation (default 24)");
    double cert_tol = 1e-8;
    cmd_certify->add_option("--tol", cert_tol, "certificate tolerance (default 1e-8)");

    auto* cmd_coeffs = app.add_subcommand("schur-coeffs", "Schur algorithm coefficients");
    cmd_coeffs->add_option("--s", s_path, "series JSON")->required();
    cmd_coeffs->add_option("--kmax", kmax, "maximum number of coefficients (default 8)");

    auto* cmd_blaschke = app.add_subcommand("blaschke", "elementary Blaschke factor");
    cmd_blaschke->add_option("--a", quat_text, "parameter quaternion as [w,x,y,z]")->required();

    auto* cmd_gram = app.add_subcommand("kernel-gram", "Gram matrix of the k_s kernel");
    cmd_gram->add_option("--s", s_path, "series JSON")->required();
    cmd_gram->add_option("--points", points_path, "sample points JSON (default seeded 8-point set)");
    cmd_gram->add_option("--N", n_opt, "kernel truncation (default --trunc)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    try {
        if (app.got_subcommand(cmd_star)) {
            rep.command = "star-mul";
            const json fj = load_json_file(f_path), gj = load_json_file(g_path);
            rep.note_input(fj);
            rep.note_input(gj);
            const QSeries f = qseries_from_json(fj), g = qseries_from_json(gj);
            rep.result = to_json(star_mul(f, g));
        } else if (app.got_subcommand(cmd_recip)) {
            rep.command = "reciprocal";
            const json fj = load_json_file(f_path);
            rep.note_input(fj);
            const QSeries f = qseries_from_json(fj);
            const QSeries inv = star_reciprocal(f);
            rep.check("f * finv - 1", max_coeff_gap(star_mul(f, inv), QSeries::unit(f.trunc())), 1e-10);
            rep.check("finv * f - 1", max_coeff_gap(star_mul(inv, f), QSeries::unit(f.trunc())), 1e-10);
            rep.result = to_json(inv);
        } else if (app.got_subcommand(cmd_resolvent)) {
            rep.command = "s-resolvent";
            const json aj = load_json_file(a_path);
            rep.note_input(aj);
            rep.note_input(json(quat_text));
            const QMatrix a = qmatrix_from_json(aj);
            const Quaternion r = quat_arg(quat_text, "--r");
            const Side s = side == "left" ? Side::Left : Side::Right;
            const QMatrix res = s_resolvent(s, r, a);
            const double eq = s == Side::Left ? left_resolvent_equation_residual(a, r)
                                              : right_resolvent_equation_residual(a, r);
            rep.check("resolvent equation", eq, 1e-9);
            rep.extra["side"] = side;
            rep.result = to_json(res);
        } else if (app.got_subcommand(cmd_probe)) {
            rep.command = "spectrum-probe";
            const json aj = load_json_file(a_path);
            rep.note_input(aj);
            const QMatrix a = qmatrix_from_json(aj);
            const double a_norm = operator_norm(a);
            const double r_max = range > 0.0 ? range : 1.1 * a_norm + 0.1;
            if (grid < 2) grid = 2;
            // Inclusive grid over the half plane {x + yi : y >= 0} of the
            // i-slice (any slice sees every sphere). The spectrum is a
            // zero-measure variety, so a cell hits when the pencil's smallest
            // singular value is within one cell-step of vanishing. Near a
            // sphere the pencil factors as (distance) * (distance + 2y), so
            // the threshold is linear in y and quadratic at the real axis.
            const double step = 2.0 * r_max / static_cast<double>(grid - 1);
            const double lipschitz = std::max(1.0, a_norm + r_max);
            json hits = json::array();
            struct Hit {
                double x, y, sigma;
            };
            std::vector<Hit> found;
            double max_detect = 0.0;
            for (std::size_t iy = 0; iy < grid; ++iy)
                for (std::size_t ix = 0; ix < grid; ++ix) {
                    const double x =
                        -r_max + 2.0 * r_max * static_cast<double>(ix) / static_cast<double>(grid - 1);
                    const double y = r_max * static_cast<double>(iy) / static_cast<double>(grid - 1);
                    const double detect =
                        std::max(1.5 * step * (2.0 * y + 2.2 * step) * lipschitz, tol);
                    max_detect = std::max(max_detect, detect);
                    const double sigma = probe_spectrum(a, Quaternion{x, y, 0, 0}).min_singular;
                    if (sigma <= detect) {
                        hits.push_back(json::array({x, y}));
                        found.push_back({x, y, sigma});
                    }
                }
            // cluster adjacent hits into spheres; each cluster is represented
            // by its best grid point (smallest pencil singular value):
            // center = real part, radius = imaginary modulus
            json spheres = json::array();
            const double cell = 2.0 * r_max / static_cast<double>(grid - 1);
            std::vector<bool> used(found.size(), false);
            for (std::size_t i = 0; i < found.size(); ++i) {
                if (used[i]) continue;
                std::size_t best = i, count = 0;
                std::vector<std::size_t> stack{i};
                used[i] = true;
                while (!stack.empty()) {
                    const std::size_t c = stack.back();
                    stack.pop_back();
                    if (found[c].sigma < found[best].sigma) best = c;
                    ++count;
                    for (std::size_t j = 0; j < found.size(); ++j)
                        if (!used[j] && std::abs(found[j].x - found[c].x) <= 1.5 * cell &&
                            std::abs(found[j].y - found[c].y) <= 1.5 * cell) {
                            used[j] = true;
                            stack.push_back(j);
                        }
                }
                spheres.push_back(json{{"re", found[best].x},
                                       {"im_radius", found[best].y},
                                       {"pencil_min_singular", found[best].sigma},
                                       {"grid_hits", count}});
            }
            rep.extra["grid"] = grid;
            rep.extra["range"] = r_max;
            rep.extra["max_detection_threshold"] = max_detect;
            rep.result = json{{"hits", hits}, {"spheres", spheres}};
        } else if (app.got_subcommand(cmd_realize)) {
            rep.command = "realize";
            const json sj = load_json_file(s_path);
            rep.note_input(sj);
            const MatrixQSeries coeffs = matrix_qseries_from_json(sj);
            const Realization r = minimal_realization(coeffs.coeffs(), tol);
            double err = 0.0, scale = 1.0;
            for (std::size_t n = 0; n <= coeffs.trunc(); ++n) {
                err = std::max(err, (markov(r, n) - coeffs[n]).max_abs());
                scale = std::max(scale, coeffs[n].max_abs());
            }
            rep.check("coefficient reproduction", err, 1e-8 * scale);
            rep.extra["state_dim"] = r.state_dim();
            rep.result = to_json(r);
        } else if (app.got_subcommand(cmd_transfer)) {
            rep.command = "transfer";
            const json rj = load_json_file(r_path);
            rep.note_input(rj);
            const Realization r = realization_from_json(rj);
            rep.result = to_json(transfer_series(r, n_opt ? n_opt : trunc));
        } else if (app.got_subcommand(cmd_tcheck)) {
            rep.command = "transfer-check";
            const json rj = load_json_file(r_path), u1j = load_json_file(u_path),
                       u2j = load_json_file(u2_path);
            rep.note_input(rj);
            rep.note_input(u1j);
            rep.note_input(u2j);
            rep.note_input(json(p_text));
            const Realization r = realization_from_json(rj);
            const auto rep_tc = transfer_consistency(r, input_sequence_from_json(u1j),
                                                     input_sequence_from_json(u2j),
                                                     n_opt ? n_opt : trunc, quat_arg(p_text, "--p"));
            rep.check("star quotient input independence", rep_tc.star_gap12, rep_tc.star_tol);
            rep.check("star quotient vs transfer series", rep_tc.star_gap_transfer, rep_tc.star_tol);
            rep.extra["pointwise_gap"] = rep_tc.pointwise_gap;
            rep.extra["pointwise_quotients"] = rep_tc.pointwise_unequal ? "UNEQUAL" : "EQUAL";
            rep.result = json{{"star_quotient1", to_json(rep_tc.star_quotient1)},
                              {"star_quotient2", to_json(rep_tc.star_quotient2)},
                              {"pointwise1", to_json(rep_tc.pointwise1)},
                              {"pointwise2", to_json(rep_tc.pointwise2)},
                              {"compare_degree", rep_tc.compare_degree}};
        } else if (app.got_subcommand(cmd_sim)) {
            rep.command = "simulate";
            const json rj = load_json_file(r_path), uj = load_json_file(u_path);
            rep.note_input(rj);
            rep.note_input(uj);
            const Realization r = realization_from_json(rj);
            const auto u = input_sequence_from_json(uj);
            SystemTrace trace;
            if (!x0_path.empty()) {
                const json xj = load_json_file(x0_path);
                rep.note_input(xj);
                const QMatrix x0 = qmatrix_from_json(xj);
                trace = simulate(r, u, horizon, &x0);
            } else {
                trace = simulate(r, u, horizon);
            }
            rep.result = trace_to_json(trace);
        } else if (app.got_subcommand(cmd_certify)) {
            rep.command = "certify";
            const json sj = load_json_file(s_path);
            rep.note_input(sj);
            const QSeries s = qseries_from_json(sj);
            std::vector<Quaternion> points;
            if (!points_path.empty()) {
                const json pj = load_json_file(points_path);
                rep.note_input(pj);
                points = points_from_json(pj);
            } else {
                Sampler rng(seed);
                points = rng.ball_points(8, 0.8);
            }
            const std::size_t n = n_opt ? n_opt : 24;
            const auto cert = certify_multiplier(s, points, n, cert_tol);
            rep.check("toeplitz norm", cert.toeplitz_norm, 1.0 + cert_tol);
            rep.check("gram eigenvalue defect", std::max(0.0, -cert.gram_min_eigenvalue),
                      cert.psd_margin);
            rep.extra["certified"] = cert.certified;
            rep.result = certificate_to_json(cert);
        } else if (app.got_subcommand(cmd_coeffs)) {
            rep.command = "schur-coeffs";
            const json sj = load_json_file(s_path);
            rep.note_input(sj);
            const auto seq = schur_algorithm(qseries_from_json(sj), kmax);
            json rho = json::array();
            for (const auto& q : seq.coefficients) rho.push_back(to_json(q));
            rep.result = json{{"rho", rho}, {"termination", stop_name(seq.reason)}};
        } else if (app.got_subcommand(cmd_blaschke)) {
            rep.command = "blaschke";
            rep.note_input(json(quat_text));
            const Quaternion a = quat_arg(quat_text, "--a");
            const auto b = blaschke(a, trunc);
            const QMatrix u = b.realization.block_matrix();
            rep.check("block unitarity", operator_norm(u * u.adjoint() - QMatrix::identity(2)), 1e-12);
            double markov_gap = 0.0;
            for (std::size_t n = 0; n <= trunc; ++n)
                markov_gap = std::max(markov_gap,
                                      norm(markov(b.realization, n)(0, 0) - b.multiplier.series[n]));
            rep.check("markov vs series", markov_gap, 1e-12);
            rep.result = json{{"series", to_json(b.multiplier.series)},
                              {"realization", to_json(b.realization)}};
        } else if (app.got_subcommand(cmd_gram)) {
            rep.command = "kernel-gram";
            const json sj = load_json_file(s_path);
            rep.note_input(sj);
            const QSeries s = qseries_from_json(sj);
            std::vector<Quaternion> points;
            if (!points_path.empty()) {
                const json pj = load_json_file(points_path);
                rep.note_input(pj);
                points = points_from_json(pj);
            } else {
                Sampler rng(seed);
                points = rng.ball_points(8, 0.8);
            }
            const std::size_t n = n_opt ? n_opt : trunc;
            const std::size_t m = points.size();
            QMatrix gram(m, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) gram(i, j) = ks_kernel(s, points[i], points[j], n);
            double herm = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    herm = std::max(herm, norm(gram(i, j) - conj(gram(j, i))));
            // Hermitian up to the truncation tail of the kernel series
            double tail = 1e-10;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    const double pq = norm(points[i]) * norm(points[j]);
                    const double mid = norm(Quaternion{1.0} -
                                            evaluate(s, points[i]) * conj(evaluate(s, points[j])));
                    tail = std::max(tail, 2.0 * mid * std::pow(pq, static_cast<double>(n + 1)) /
                                              (1.0 - pq));
                }
            rep.check("hermitian defect", herm, tail);
            json pts = json::array();
            for (const auto& p : points) pts.push_back(to_json(p));
            rep.extra["trunc"] = n;
            rep.result = json{{"gram", to_json(gram)}, {"points", pts}};
        }
    } catch (const Error& e) {
        if (e.code() == Errc::ParseError) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        rep.forced_fail = true;
        rep.extra["error"] = e.what();
        rep.extra["error_code"] = errc_name(e.code());
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        rep.emit(timing, ms);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }

    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep.emit(timing, ms);
}
