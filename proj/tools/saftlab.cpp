// saftlab command line tool.
//
// Exit codes: 0 success, 1 numeric/validation failure, 2 usage or IO error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saftlab/saftlab.hpp"

namespace {

using namespace saftlab;

// thrown for failures of numeric checks (exit code 1)
struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MatrixOpts {
    std::string preset;
    std::string matrix_json;
    double theta = 0.0;

    ParameterMatrix resolve() const {
        if (!matrix_json.empty()) {
            const json j = json::parse(matrix_json, nullptr, false);
            if (j.is_discarded())
                throw std::invalid_argument("--matrix: malformed JSON: " + matrix_json);
            return matrix_from_json(j);
        }
        if (preset.empty() || preset == "fourier") return fourier_preset();
        if (preset == "fractional") return fractional_preset(theta);
        if (preset == "paper") return ParameterMatrix{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        throw std::invalid_argument("--preset: unknown preset: " + preset);
    }
};

void add_matrix_opts(CLI::App* cmd, MatrixOpts& mo) {
    cmd->add_option("--preset", mo.preset, "matrix preset: fourier, fractional, paper");
    cmd->add_option("--matrix", mo.matrix_json, R"(matrix JSON {"A":..,"B":..,"C":..,"D":..,"p":..,"q":..})");
    cmd->add_option("--theta", mo.theta, "angle for the fractional preset");
}

struct TimeGrid {
    double lo = -8.0, hi = 8.0;
    std::size_t n = 1024;
};

TimeGrid parse_time_grid(const std::string& spec) {
    TimeGrid g;
    if (spec.empty()) return g;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || !ss.eof() ||
        g.n < 2 || !(g.hi > g.lo))
        throw std::invalid_argument("--grid: expected t0:t1:n, got: " + spec);
    return g;
}

struct BaGrid {
    std::vector<double> b, a;
};

// b0:b1:nb,log(a0):log(a1):na
BaGrid parse_ba_grid(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--grid: expected b0:b1:nb,log(a0):log(a1):na");
    const TimeGrid bg = parse_time_grid(spec.substr(0, comma));
    std::string as = spec.substr(comma + 1);
    // the scale triple is written log(a0):log(a1):na
    auto strip_log = [](std::string& s, std::size_t pos) {
        if (s.compare(pos, 4, "log(") != 0) throw std::invalid_argument("--grid: scale bounds must be log(..)");
        const auto close = s.find(')', pos);
        if (close == std::string::npos) throw std::invalid_argument("--grid: unbalanced log(..)");
        s.erase(close, 1);
        s.erase(pos, 4);
    };
    try {
        strip_log(as, 0);
        strip_log(as, as.find(':') + 1);
        const TimeGrid ag = parse_time_grid(as);
        BaGrid g;
        g.b = linspace(bg.lo, bg.hi, bg.n);
        g.a = logspace(ag.lo, ag.hi, ag.n);
        return g;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("--grid: expected b0:b1:nb,log(a0):log(a1):na, got: " + spec);
    }
}

void emit_report(const std::string& path, const json& rep) {
    if (path.empty()) {
        std::cout << rep.dump(2) << '\n';
    } else {
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot open report file: " + path);
        f << rep.dump(2) << '\n';
    }
}

// t,re,im,abs rows for plot export
void write_profile_csv(const std::string& path, const SampledSignal& s) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    f << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i)
        f << s.time(i) << ',' << s.samples[i].real() << ',' << s.samples[i].imag() << ','
          << std::abs(s.samples[i]) << '\n';
}

std::vector<double> default_probes(const ParameterMatrix& m) {
    std::vector<double> nu = logspace(0.5, 64.0, 8);
    for (double& x : nu) x = m.p + m.B * x;
    return nu;
}

json pyramid_to_json(const DwtPyramid& p, double t0, double dt) {
    auto seq = [](const std::vector<cd>& v) {
        json arr = json::array();
        for (const cd& x : v) arr.push_back({x.real(), x.imag()});
        return arr;
    };
    json details = json::array();
    for (const auto& lvl : p.details) details.push_back(seq(lvl));
    return json{{"filter", filter_to_json(p.filter)}, {"levels", p.levels},
                {"t0", t0},       {"dt", dt},
                {"approx", seq(p.approx)},            {"details", details}};
}

DwtPyramid pyramid_from_json(const json& j, double& t0, double& dt) {
    auto seq = [](const json& arr) {
        std::vector<cd> v;
        for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        return v;
    };
    DwtPyramid p;
    p.filter = filter_from_json(j.at("filter"));
    p.levels = j.at("levels");
    p.approx = seq(j.at("approx"));
    for (const auto& lvl : j.at("details")) p.details.push_back(seq(lvl));
    t0 = j.at("t0");
    dt = j.at("dt");
    return p;
}

int run(int argc, char** argv) {
    CLI::App app{"special affine Fourier / wavelet / multi-resolution toolbox"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a test signal");
    std::string gen_kind = "gaussian", gen_grid, gen_out;
    double alpha = 1.0, beta = 1.0, f0 = 3.0, rate = 1.0, gamma = 5.0;
    std::uint64_t seed = 42;
    gen->add_option("--kind", gen_kind, "gaussian, chirp, morlet, impulse, noise");
    gen->add_option("--grid", gen_grid, "time grid t0:t1:n");
    gen->add_option("--alpha", alpha);
    gen->add_option("--beta", beta);
    gen->add_option("--f0", f0);
    gen->add_option("--rate", rate);
    gen->add_option("--gamma", gamma);
    gen->add_option("--seed", seed);
    gen->add_option("--out", gen_out)->required();

    // ---- saft / isaft ---------------------------------------------------------
    auto* saft = app.add_subcommand("saft", "forward transform of a sampled signal");
    MatrixOpts saft_m;
    std::string saft_in, saft_out, saft_report;
    add_matrix_opts(saft, saft_m);
    saft->add_option("--in", saft_in)->required();
    saft->add_option("--out", saft_out)->required();
    saft->add_option("--report", saft_report);

    auto* isaft = app.add_subcommand("isaft", "inverse transform of a spectrum file");
    std::string isaft_in, isaft_out;
    isaft->add_option("--in", isaft_in)->required();
    isaft->add_option("--out", isaft_out)->required();

    // ---- cwt / icwt / admissibility -------------------------------------------
    auto* cwt = app.add_subcommand("cwt", "wavelet scalogram of a sampled signal");
    MatrixOpts cwt_m;
    std::string cwt_in, cwt_out, cwt_data, cwt_grid, cwt_wavelet;
    double cwt_gamma = 5.0;
    add_matrix_opts(cwt, cwt_m);
    cwt->add_option("--in", cwt_in)->required();
    cwt->add_option("--out", cwt_out, "scalogram envelope JSON")->required();
    cwt->add_option("--data", cwt_data, "scalogram CSV (default: out with .csv)");
    cwt->add_option("--grid", cwt_grid, "b0:b1:nb,log(a0):log(a1):na")->required();
    cwt->add_option("--wavelet", cwt_wavelet, "mother wavelet CSV (default: Morlet)");
    cwt->add_option("--gamma", cwt_gamma, "Morlet frequency");

    auto* icwt = app.add_subcommand("icwt", "reconstruct a signal from a scalogram");
    std::string icwt_in, icwt_out, icwt_grid, icwt_wavelet, icwt_ref, icwt_report;
    double icwt_gamma = 5.0;
    icwt->add_option("--in", icwt_in, "scalogram envelope JSON")->required();
    icwt->add_option("--out", icwt_out)->required();
    icwt->add_option("--grid", icwt_grid, "output time grid t0:t1:n")->required();
    icwt->add_option("--wavelet", icwt_wavelet);
    icwt->add_option("--gamma", icwt_gamma);
    icwt->add_option("--ref", icwt_ref, "reference signal for the residual report");
    icwt->add_option("--report", icwt_report);

    auto* adm = app.add_subcommand("admissibility", "admissibility constant of a wavelet");
    MatrixOpts adm_m;
    std::string adm_wavelet, adm_report;
    double adm_gamma = 5.0, a_min = 1e-3, a_max = 1e3;
    std::size_t n_a = 256;
    add_matrix_opts(adm, adm_m);
    adm->add_option("--wavelet", adm_wavelet);
    adm->add_option("--gamma", adm_gamma);
    adm->add_option("--amin", a_min);
    adm->add_option("--amax", a_max);
    adm->add_option("--na", n_a);
    adm->add_option("--report", adm_report);

    // ---- mra -------------------------------------------------------------------
    auto* mra = app.add_subcommand("mra", "multi-resolution analysis tools");
    mra->require_subcommand(1);
    mra->fallthrough();  // matrix flags may follow the subcommand name
    MatrixOpts mra_m;
    add_matrix_opts(mra, mra_m);

    auto* riesz = mra->add_subcommand("riesz", "Riesz bounds of integer translates");
    std::string riesz_in, riesz_report;
    std::size_t n_omega = 512, n_k = 128;
    riesz->add_option("--in", riesz_in)->required();
    riesz->add_option("--nomega", n_omega);
    riesz->add_option("--nk", n_k);
    riesz->add_option("--report", riesz_report);

    auto* ortho = mra->add_subcommand("orthonormalize", "orthonormalize integer translates");
    std::string ortho_in, ortho_out;
    ortho->add_option("--in", ortho_in)->required();
    ortho->add_option("--out", ortho_out)->required();

    auto* filters = mra->add_subcommand("filters", "two-scale filter pair");
    std::string filters_in, filters_out, filters_report;
    std::size_t filters_taps = 8;
    filters->add_option("--in", filters_in, "scaling function CSV (default: unit indicator)");
    filters->add_option("--taps", filters_taps);
    filters->add_option("--out", filters_out)->required();
    filters->add_option("--report", filters_report);

    auto* haar = mra->add_subcommand("haar", "piecewise-chirp Haar wavelet");
    std::string haar_out, haar_filter, haar_report;
    std::size_t haar_spu = 1024;
    haar->add_option("--out", haar_out, "wavelet CSV t,re,im,abs")->required();
    haar->add_option("--filter", haar_filter, "also write the filter JSON here");
    haar->add_option("--spu", haar_spu, "samples per unit");
    haar->add_option("--report", haar_report);

    auto* dwt_cmd = mra->add_subcommand("dwt", "discrete wavelet analysis");
    std::string dwt_in, dwt_out, dwt_filter, dwt_report;
    int dwt_levels = 3;
    dwt_cmd->add_option("--in", dwt_in)->required();
    dwt_cmd->add_option("--out", dwt_out, "pyramid JSON")->required();
    dwt_cmd->add_option("--filter", dwt_filter, "filter JSON (default: Haar pair for the matrix)");
    dwt_cmd->add_option("--levels", dwt_levels);
    dwt_cmd->add_option("--report", dwt_report);

    auto* idwt_cmd = mra->add_subcommand("idwt", "discrete wavelet synthesis");
    std::string idwt_in, idwt_out;
    idwt_cmd->add_option("--in", idwt_in, "pyramid JSON")->required();
    idwt_cmd->add_option("--out", idwt_out)->required();

    auto* density = mra->add_subcommand("density", "projection density ladder");
    std::string density_in, density_report;
    int density_levels = 8;
    std::size_t density_spu = 0;  // 0: match the input grid
    density->add_option("--in", density_in)->required();
    density->add_option("--levels", density_levels);
    density->add_option("--spu", density_spu);
    density->add_option("--report", density_report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*gen) {
        const TimeGrid g = parse_time_grid(gen_grid);
        SampledSignal s;
        if (gen_kind == "gaussian")
            s = gen_gaussian(alpha, beta, g.lo, g.hi, g.n);
        else if (gen_kind == "chirp")
            s = gen_chirp(f0, rate, g.lo, g.hi, g.n);
        else if (gen_kind == "morlet")
            s = gen_morlet(gamma, g.lo, g.hi, g.n);
        else if (gen_kind == "impulse")
            s = gen_impulse(g.lo, g.hi, g.n);
        else if (gen_kind == "noise")
            s = gen_noise(seed, g.lo, g.hi, g.n);
        else
            throw std::invalid_argument("--kind: unknown generator: " + gen_kind);
        write_signal(gen_out, s);
        return 0;
    }

    if (*saft) {
        const ParameterMatrix m = saft_m.resolve();
        const SampledSignal f = read_signal(saft_in);
        const SpectrumSignal F = saft_forward(f, m);
        write_spectrum_csv(saft_out, F);
        const double parseval = std::abs(energy(F) - energy(f)) / energy(f);
        emit_report(saft_report,
                    json{{"parseval_residual", parseval},
                         {"truncation_warning", F.truncation_warning},
                         {"grid", {{"omega0", F.omega0}, {"domega", F.domega}, {"n", F.samples.size()}}}});
        if (parseval > 1e-6)
            throw NumericFailure("parseval residual above 1e-6; input may leak off the grid");
        return 0;
    }

    if (*isaft) {
        write_signal(isaft_out, saft_inverse(read_spectrum_csv(isaft_in)));
        return 0;
    }

    if (*cwt) {
        const ParameterMatrix m = cwt_m.resolve();
        const SampledSignal f = read_signal(cwt_in);
        const SampledSignal psi = cwt_wavelet.empty()
                                      ? gen_morlet(cwt_gamma, -8.0, 8.0, 512)
                                      : read_signal(cwt_wavelet);
        const BaGrid g = parse_ba_grid(cwt_grid);
        const ScalogramMap map = sawt_forward(f, psi, g.b, g.a, m);
        const std::string data = cwt_data.empty() ? cwt_out + ".csv" : cwt_data;
        write_scalogram(cwt_out, data, map);
        return 0;
    }

    if (*icwt) {
        const ScalogramMap map = read_scalogram(icwt_in);
        const SampledSignal psi = icwt_wavelet.empty()
                                      ? gen_morlet(icwt_gamma, -8.0, 8.0, 512)
                                      : read_signal(icwt_wavelet);
        // C_psi is the full-range constant, independent of the map's scale window
        const AdmissibilityResult res = admissibility(psi, map.matrix, 1e-3, 1e3, 256,
                                                      default_probes(map.matrix));
        if (res.divergent || !(res.c_psi > 0.0))
            throw NumericFailure("wavelet is not admissible on this scale range");
        const TimeGrid g = parse_time_grid(icwt_grid);
        const SampledSignal back = sawt_inverse(map, psi, res, g.lo,
                                                (g.hi - g.lo) / static_cast<double>(g.n), g.n);
        write_signal(icwt_out, back);
        json rep{{"c_psi", res.c_psi}};
        if (!icwt_ref.empty()) {
            const SampledSignal ref = read_signal(icwt_ref);
            if (ref.size() != back.size())
                throw std::invalid_argument("--ref: grid does not match the output grid");
            rep["relative_rms"] = rel_rms(back.samples, ref.samples);
        }
        emit_report(icwt_report, rep);
        return 0;
    }

    if (*adm) {
        const ParameterMatrix m = adm_m.resolve();
        const SampledSignal psi = adm_wavelet.empty() ? gen_morlet(adm_gamma, -8.0, 8.0, 512)
                                                      : read_signal(adm_wavelet);
        const AdmissibilityResult res =
            admissibility(psi, m, a_min, a_max, n_a, default_probes(m));
        emit_report(adm_report, json{{"c_psi", res.c_psi},
                                     {"divergent", res.divergent},
                                     {"omega_probes", res.omega_probes},
                                     {"per_probe", res.per_probe},
                                     {"spread", res.spread()}});
        if (res.divergent) throw NumericFailure("admissibility integral diverges");
        return 0;
    }

    if (*mra) {
        const ParameterMatrix m = mra_m.resolve();
        if (*riesz) {
            const RieszReport rep = riesz_check(read_signal(riesz_in), m, n_omega, n_k);
            emit_report(riesz_report, json{{"a1", rep.a1},
                                           {"a2", rep.a2},
                                           {"n_omega", rep.n_omega},
                                           {"n_k", rep.n_k},
                                           {"riesz_ok", rep.riesz_ok()}});
            if (!rep.riesz_ok()) throw NumericFailure("no positive lower Riesz bound");
            return 0;
        }
        if (*ortho) {
            write_signal(ortho_out, orthonormalize(read_signal(ortho_in), m));
            return 0;
        }
        if (*filters) {
            HaarSystem sys;
            FilterPair fp;
            if (filters_in.empty()) {
                sys = build_haar_system(m);
                fp = sys.filters;
            } else {
                fp = make_filter_pair(lowpass_filter(read_signal(filters_in), m, filters_taps), m);
            }
            std::ofstream(filters_out) << filter_to_json(fp).dump(2) << '\n';
            const QmfReport q = qmf_identity_check(fp, 512);
            emit_report(filters_report, json{{"qmf_c0", q.c0_dev},
                                             {"qmf_c1", q.c1_dev},
                                             {"alternation", q.alternation_dev},
                                             {"mm_identity", q.mm_dev}});
            if (q.worst() > 1e-6) throw NumericFailure("filter pair fails the QMF identities");
            return 0;
        }
        if (*haar) {
            const HaarSystem sys = build_haar_system(m, haar_spu);
            write_profile_csv(haar_out, sys.psi);
            if (!haar_filter.empty())
                std::ofstream(haar_filter) << filter_to_json(sys.filters).dump(2) << '\n';
            const QmfReport q = qmf_identity_check(sys.filters, 512);
            emit_report(haar_report,
                        json{{"filter", filter_to_json(sys.filters)},
                             {"qmf_worst", q.worst()},
                             {"biorthogonality",
                              biorthogonality_check(sys.scaling.phi, sys.psi_profile, m, 256, 8)}});
            return 0;
        }
        if (*dwt_cmd) {
            const SampledSignal x = read_signal(dwt_in);
            FilterPair fp;
            if (dwt_filter.empty()) {
                fp = build_haar_system(m, 256).filters;
            } else {
                json j;
                std::ifstream f(dwt_filter);
                if (!f) throw std::invalid_argument("cannot open filter file: " + dwt_filter);
                f >> j;
                fp = filter_from_json(j);
            }
            DwtPyramid p;
            try {
                p = dwt(x.samples, fp, dwt_levels);
            } catch (const std::invalid_argument& e) {
                throw NumericFailure(e.what());
            }
            std::ofstream(dwt_out) << pyramid_to_json(p, x.t0, x.dt).dump() << '\n';
            const std::vector<cd> back = idwt(p);
            double pr = 0.0;
            for (std::size_t i = 0; i < back.size(); ++i)
                pr = std::max(pr, std::abs(back[i] - x.samples[i]));
            emit_report(dwt_report, json{{"levels", dwt_levels},
                                         {"perfect_reconstruction_residual", pr}});
            if (pr > 1e-10) throw NumericFailure("perfect reconstruction residual above 1e-10");
            return 0;
        }
        if (*idwt_cmd) {
            json j;
            std::ifstream f(idwt_in);
            if (!f) throw std::invalid_argument("cannot open pyramid file: " + idwt_in);
            f >> j;
            double t0 = 0.0, dt = 1.0;
            const DwtPyramid p = pyramid_from_json(j, t0, dt);
            SampledSignal s;
            s.t0 = t0;
            s.dt = dt;
            s.samples = idwt(p);
            write_signal(idwt_out, s);
            return 0;
        }
        if (*density) {
            const SampledSignal f = read_signal(density_in);
            const std::size_t spu =
                density_spu ? density_spu
                            : static_cast<std::size_t>(std::lround(1.0 / f.dt));
            const HaarSystem sys = build_haar_system(m, spu);
            const std::vector<double> ratios =
                density_diagnostic(sys.scaling.phi, m, f, density_levels);
            emit_report(density_report, json{{"ratios", ratios}});
            return 0;
        }
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
