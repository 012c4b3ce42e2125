// Command-line frontend: zero-based detection and filtering of signal
// components in white noise via the analytic wavelet transform.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zerotf/convergence.hpp"
#include "zerotf/io.hpp"
#include "zerotf/tables.hpp"
#include "zerotf/zerotf.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    zerotf::PipelineConfig cfg;
    std::uint64_t seed = 1;
    std::string noise_kind = "complex";
    std::string out_prefix = "zerotf_out";
    bool refine = false;
};

zerotf::NoiseKind parse_kind(const std::string& s) {
    if (s == "real") return zerotf::NoiseKind::real;
    if (s == "complex") return zerotf::NoiseKind::complex_;
    throw CLI::ValidationError("noise kind must be 'real' or 'complex'");
}

void add_grid_options(CLI::App* app, CommonOpts& o) {
    app->add_option("--alpha", o.cfg.alpha, "wavelet order (> 1)")->capture_default_str();
    app->add_option("--sample-rate", o.cfg.sample_rate, "samples per second")->capture_default_str();
    app->add_option("--duration", [&o](const std::vector<std::string>& v) {
            o.cfg.n_samples = static_cast<std::size_t>(std::stod(v[0]) * o.cfg.sample_rate + 0.5);
            return true;
        }, "signal length in seconds (default 2)");
    app->add_option("--fmin", o.cfg.f_min, "lowest analysis frequency, Hz")->capture_default_str();
    app->add_option("--fmax", o.cfg.f_max, "highest analysis frequency, Hz")->capture_default_str();
    app->add_option("--voices", o.cfg.voices_per_octave, "scales per octave")->capture_default_str();
    app->add_option("--stride", o.cfg.mask_time_stride, "statistic grid time decimation")
        ->capture_default_str();
    app->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    app->add_option("--kind", o.noise_kind, "noise kind: real|complex")->capture_default_str();
    app->add_option("-o,--out-prefix", o.out_prefix, "output path prefix")->capture_default_str();
    app->add_flag("--refine", o.refine, "sub-grid quadratic refinement of zero positions");
}

json config_json(const CommonOpts& o) {
    json j;
    zerotf::to_json(j, o.cfg);
    j["seed"] = o.seed;
    j["noise_kind"] = o.noise_kind;
    j["refine"] = o.refine;
    return j;
}

void write_sidecar(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw zerotf::data_error("cannot write sidecar '" + path + "'");
    f << j.dump(2) << '\n';
}

zerotf::SignalBuffer load_input(const std::string& path, zerotf::PipelineConfig& cfg) {
    zerotf::SignalBuffer sig;
    if (path.size() > 4 && path.substr(path.size() - 4) == ".wav") {
        zerotf::AudioData a = zerotf::read_wav(path);
        if (a.source_channels > 1)
            std::cerr << "warning: downmixed " << a.source_channels << " channels to mono\n";
        cfg.sample_rate = a.sample_rate;
        cfg.n_samples = a.samples.size();
        sig.sample_interval = 1.0 / a.sample_rate;
        sig.samples.reserve(a.samples.size());
        for (double v : a.samples) sig.samples.emplace_back(v, 0.0);
    } else {
        auto v = zerotf::read_raw_f64(path);
        cfg.n_samples = v.size();
        sig.sample_interval = 1.0 / cfg.sample_rate;
        sig.samples.reserve(v.size());
        for (double x : v) sig.samples.emplace_back(x, 0.0);
    }
    return sig;
}

int cmd_simulate_gaf(const CommonOpts& o) {
    const auto kind = parse_kind(o.noise_kind);
    const zerotf::ZeroSet zs = zerotf::zeros_from_noise(o.cfg, kind, o.seed, o.refine);
    zerotf::write_zeros_csv(o.out_prefix + "_zeros.csv", zs);
    zerotf::write_zeros_svg(o.out_prefix + "_zeros.svg", zs);
    json rep = config_json(o);
    rep["n_zeros"] = zs.size();
    const auto& g = zs.source_grid;
    // interior rows stand for a band extending half a cell beyond them
    const double half = std::sqrt(g.scales[1] / g.scales[0]);
    const double expected = o.cfg.alpha / (4.0 * zerotf::pi) *
                            (g.times[g.times.size() - 2] - g.times[1]) *
                            (half / g.scales[1] - 1.0 / (half * g.scales[g.scales.size() - 2]));
    rep["expected_zeros_detectable_region"] = expected;
    write_sidecar(o.out_prefix + "_config.json", rep);
    std::cout << "zeros: " << zs.size() << " (expected about " << expected << ")\n"
              << "wrote " << o.out_prefix << "_zeros.csv, _zeros.svg, _config.json\n";
    return 0;
}

int cmd_analyze(const CommonOpts& o, const std::string& input) {
    CommonOpts opts = o;
    zerotf::SignalBuffer sig = load_input(input, opts.cfg);
    const auto params = zerotf::wavelet_of(opts.cfg);
    const auto grid = zerotf::full_grid(opts.cfg);
    const zerotf::Scalogram sc = zerotf::forward_cwt(sig, params, grid, opts.cfg.max_support_fraction);
    const zerotf::ZeroSet zs = zerotf::extract_zeros(sc, opts.refine);
    zerotf::write_scalogram_pgm(opts.out_prefix + "_scalogram.pgm", sc);
    zerotf::write_zeros_csv(opts.out_prefix + "_zeros.csv", zs);
    zerotf::write_zeros_svg(opts.out_prefix + "_zeros.svg", zs);
    json rep = config_json(opts);
    rep["input"] = input;
    rep["n_zeros"] = zs.size();
    write_sidecar(opts.out_prefix + "_report.json", rep);
    std::cout << "zeros: " << zs.size() << "\nwrote " << opts.out_prefix
              << "_scalogram.pgm, _zeros.csv, _zeros.svg, _report.json\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& o, std::size_t n_seeds, double quantile,
                  const std::string& out) {
    auto mask_cfg = zerotf::default_mask_config(o.cfg.alpha);
    const auto prof =
        zerotf::calibrate(o.cfg, mask_cfg, n_seeds, quantile, o.seed, parse_kind(o.noise_kind));
    json j;
    zerotf::to_json(j, prof);
    std::ofstream f(out);
    if (!f) throw zerotf::data_error("cannot write profile '" + out + "'");
    f << j.dump(2) << '\n';
    std::cout << "thresholds: b_intensity=" << prof.config.b_intensity
              << " b_pcf=" << prof.config.b_pcf << " b_combined=" << prof.config.b_combined
              << " (pooled centers: " << prof.n_centers_pooled << ")\nwrote " << out << '\n';
    return 0;
}

int cmd_filter(const CommonOpts& o, const std::string& input, const std::string& profile_path,
               const std::string& kind_name, double snr_db, bool have_snr,
               std::size_t dilate_scale, std::size_t dilate_time) {
    CommonOpts opts = o;
    zerotf::SignalBuffer sig = load_input(input, opts.cfg);

    zerotf::CalibrationProfile prof;
    if (!profile_path.empty()) {
        std::ifstream f(profile_path);
        if (!f) throw zerotf::data_error("cannot read profile '" + profile_path + "'");
        json j;
        f >> j;
        zerotf::from_json(j, prof);
        if (prof.grid.sample_rate != opts.cfg.sample_rate)
            throw zerotf::data_error("profile sample rate does not match the input");
        if (prof.grid.n_samples != opts.cfg.n_samples)
            throw zerotf::data_error("profile length does not match the input");
        opts.cfg = prof.grid;
    } else {
        std::cerr << "warning: no profile given, calibrating (8 seeds) before filtering\n";
        prof = zerotf::calibrate(opts.cfg, zerotf::default_mask_config(opts.cfg.alpha), 8, 0.999,
                                 opts.seed + 17, zerotf::NoiseKind::real);
    }

    if (have_snr) sig = zerotf::mix_noise_at_snr(sig, snr_db, zerotf::NoiseKind::real, opts.seed);

    zerotf::MaskKind kind = zerotf::MaskKind::combined;
    if (kind_name == "intensity") kind = zerotf::MaskKind::intensity;
    else if (kind_name == "pcf") kind = zerotf::MaskKind::pcf;
    else if (kind_name != "combined") throw CLI::ValidationError("mask kind must be intensity|pcf|combined");

    const auto params = zerotf::wavelet_of(opts.cfg);
    const auto grid = zerotf::full_grid(opts.cfg);
    const auto sc = zerotf::forward_cwt(sig, params, grid, opts.cfg.max_support_fraction);
    const auto zs = zerotf::extract_zeros(sc, opts.refine);
    const auto mgrid = zerotf::mask_grid(opts.cfg);
    zerotf::Mask mask = zerotf::build_mask(zs, mgrid, kind, prof);
    if (dilate_scale > 0 || dilate_time > 0)
        mask = zerotf::dilate_mask(mask, dilate_scale, dilate_time);
    const auto filtered = zerotf::apply_mask(sc, mask);
    const auto recon = zerotf::inverse_cwt(filtered);
    const auto out_samples = zerotf::to_real_signal(recon);

    zerotf::write_wav(opts.out_prefix + "_filtered.wav", out_samples, opts.cfg.sample_rate);
    zerotf::write_scalogram_pgm(opts.out_prefix + "_scalogram.pgm", sc);
    zerotf::write_scalogram_pgm(opts.out_prefix + "_scalogram_filtered.pgm", filtered);
    zerotf::write_mask_pgm(opts.out_prefix + "_mask.pgm", mask);
    zerotf::write_zeros_csv(opts.out_prefix + "_zeros.csv", zs);

    std::size_t roi_px = 0, on_px = 0;
    const auto roi = zerotf::roi_for(opts.cfg, grid, prof.config);
    for (std::size_t j = 0; j < mask.grid.n_scales(); ++j)
        for (std::size_t k = 0; k < mask.grid.n_times(); ++k) {
            if (!zerotf::roi_contains(roi, {mask.grid.times[k], mask.grid.scales[j]})) continue;
            ++roi_px;
            if (mask.values[j][k] > 0.0) ++on_px;
        }
    json rep = config_json(opts);
    rep["input"] = input;
    rep["mask_kind"] = kind_name;
    rep["n_zeros"] = zs.size();
    rep["thresholds"] = {{"b_intensity", prof.config.b_intensity},
                         {"b_pcf", prof.config.b_pcf},
                         {"b_combined", prof.config.b_combined}};
    rep["roi"] = {{"t_min", roi.window.t_min},
                  {"t_max", roi.window.t_max},
                  {"y_min", roi.window.y_min},
                  {"y_max", roi.window.y_max},
                  {"margin", roi.margin}};
    rep["mask_coverage_of_roi"] = roi_px ? static_cast<double>(on_px) / roi_px : 0.0;
    rep["dilate_scale"] = dilate_scale;
    rep["dilate_time"] = dilate_time;
    if (have_snr) rep["mixed_snr_db"] = snr_db;
    write_sidecar(opts.out_prefix + "_report.json", rep);
    std::cout << "mask coverage of ROI: " << (roi_px ? 100.0 * on_px / roi_px : 0.0) << "%\nwrote "
              << opts.out_prefix << "_filtered.wav, _mask.pgm, _scalogram*.pgm, _report.json\n";
    return 0;
}

int cmd_tables(const CommonOpts& o, std::size_t n_seeds) {
    const auto mask_cfg = zerotf::default_mask_config(o.cfg.alpha);
    const auto t = zerotf::compute_tables(o.cfg, mask_cfg, n_seeds, o.seed, parse_kind(o.noise_kind));
    std::vector<std::vector<double>> t1;
    for (std::size_t l = 0; l < t.radii_r1.size(); ++l)
        t1.push_back({t.radii_r1[l], t.mu[l], t.mu_hat[l], t.sigma2[l], t.sigma2_hat[l]});
    zerotf::write_csv(o.out_prefix + "_table1.csv", {"r1", "mu", "mu_hat", "sigma2", "sigma2_hat"}, t1);
    std::vector<std::string> h2 = {"r0", "g", "g_tilde"};
    for (double r : t.radii_r1) h2.push_back("ghat_mean_r1_" + std::to_string(r));
    std::vector<std::vector<double>> t2;
    for (std::size_t k = 0; k < t.radii_r0.size(); ++k) {
        std::vector<double> row = {t.radii_r0[k], t.g[k], t.g_tilde[k]};
        for (std::size_t l = 0; l < t.radii_r1.size(); ++l) row.push_back(t.ghat_mean[k][l]);
        t2.push_back(row);
    }
    zerotf::write_csv(o.out_prefix + "_table2.csv", h2, t2);
    std::vector<std::string> h3 = {"r0"};
    for (double r : t.radii_r1) h3.push_back("ghat_std_r1_" + std::to_string(r));
    std::vector<std::vector<double>> t3;
    for (std::size_t k = 0; k < t.radii_r0.size(); ++k) {
        std::vector<double> row = {t.radii_r0[k]};
        for (std::size_t l = 0; l < t.radii_r1.size(); ++l) row.push_back(t.ghat_std[k][l]);
        t3.push_back(row);
    }
    zerotf::write_csv(o.out_prefix + "_table3.csv", h3, t3);
    json rep = config_json(o);
    rep["n_seeds"] = n_seeds;
    rep["n_centers"] = t.n_centers;
    write_sidecar(o.out_prefix + "_config.json", rep);
    std::cout << "wrote " << o.out_prefix << "_table{1,2,3}.csv (pooled centers: " << t.n_centers
              << ")\n";
    return 0;
}

int cmd_synth(const CommonOpts& o, const std::string& kind, const std::string& out) {
    zerotf::SignalBuffer sig;
    if (kind == "harmonic")
        sig = zerotf::make_harmonic_voice(o.cfg.n_samples, o.cfg.sample_interval());
    else if (kind == "clicks")
        sig = zerotf::make_click_train(o.cfg.n_samples, o.cfg.sample_interval(), 8.0, 0.01,
                                       o.seed);
    else
        throw CLI::ValidationError("synth kind must be 'harmonic' or 'clicks'");
    std::vector<double> samples(sig.size());
    double peak = 1e-9;
    for (std::size_t l = 0; l < sig.size(); ++l) peak = std::max(peak, std::abs(sig.samples[l].real()));
    for (std::size_t l = 0; l < sig.size(); ++l) samples[l] = 0.7 * sig.samples[l].real() / peak;
    zerotf::write_wav(out, samples, o.cfg.sample_rate);
    std::cout << "wrote " << out << " (" << kind << ", " << sig.duration() << " s)\n";
    return 0;
}

int cmd_convergence(const CommonOpts& o, std::size_t levels, std::size_t n_seeds) {
    zerotf::ConvergenceConfig cc;
    cc.alpha = o.cfg.alpha;
    cc.levels = levels;
    cc.kind = parse_kind(o.noise_kind);
    const auto res = zerotf::run_convergence_check(cc, n_seeds, o.seed);
    std::vector<std::vector<double>> rows;
    for (std::size_t d = 0; d < res.mean_sup_diff.size(); ++d) {
        const double ts = cc.base_interval * std::pow(2.0, static_cast<double>(d));
        rows.push_back({ts, res.mean_sup_diff[d]});
    }
    zerotf::write_csv(o.out_prefix + "_convergence.csv", {"fine_interval", "mean_sup_diff"}, rows);
    json rep = config_json(o);
    rep["levels"] = levels;
    rep["n_seeds"] = n_seeds;
    write_sidecar(o.out_prefix + "_config.json", rep);
    std::cout << "mean sup-differences (finest pair first):";
    for (double v : res.mean_sup_diff) std::cout << ' ' << v;
    std::cout << "\nwrote " << o.out_prefix << "_convergence.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-based time-frequency detection and filtering"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string input, profile_path, kind_name = "combined", profile_out = "profile.json";
    std::size_t n_seeds = 1, cal_seeds = 20, levels = 4, conv_seeds = 20;
    std::size_t dilate_scale = 0, dilate_time = 0;
    double quantile = 0.999, snr_db = 0.0;

    auto* sim = app.add_subcommand("simulate-gaf", "white-noise zero pattern (CSV + SVG)");
    add_grid_options(sim, o);

    auto* ana = app.add_subcommand("analyze", "scalogram and zeros of an input file");
    add_grid_options(ana, o);
    ana->add_option("input", input, "WAV or raw float64 file")->required();

    auto* cal = app.add_subcommand("calibrate", "Monte-Carlo mask thresholds -> JSON profile");
    add_grid_options(cal, o);
    cal->add_option("--seeds", cal_seeds, "number of noise seeds")->capture_default_str();
    cal->add_option("--quantile", quantile, "threshold quantile level")->capture_default_str();
    cal->add_option("--profile-out", profile_out, "output profile path")->capture_default_str();

    auto* fil = app.add_subcommand("filter", "mask-filter an input file");
    add_grid_options(fil, o);
    fil->add_option("input", input, "WAV or raw float64 file")->required();
    fil->add_option("--profile", profile_path, "calibration profile JSON");
    fil->add_option("--mask-kind", kind_name, "intensity|pcf|combined")->capture_default_str();
    auto* snr_opt = fil->add_option("--snr-db", snr_db, "mix synthetic white noise at this SNR");
    fil->add_option("--dilate-scale", dilate_scale, "dilate mask by +-N scale rows")
        ->capture_default_str();
    fil->add_option("--dilate-time", dilate_time, "dilate mask by +-N time columns")
        ->capture_default_str();

    auto* tab = app.add_subcommand("tables", "empirical vs closed-form zero statistics (CSV)");
    add_grid_options(tab, o);
    tab->add_option("--seeds", n_seeds, "number of noise realizations")->capture_default_str();

    auto* con = app.add_subcommand("convergence-check", "dyadic refinement sup-differences (CSV)");
    add_grid_options(con, o);
    con->add_option("--levels", levels, "dyadic resolutions")->capture_default_str();
    con->add_option("--seeds", conv_seeds, "number of noise seeds")->capture_default_str();

    std::string synth_kind = "harmonic", synth_out = "synth.wav";
    auto* syn = app.add_subcommand("synth", "write a synthetic test WAV (harmonic voice, clicks)");
    add_grid_options(syn, o);
    syn->add_option("--synth-kind", synth_kind, "harmonic|clicks")->capture_default_str();
    syn->add_option("--wav-out", synth_out, "output WAV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate_gaf(o);
        if (ana->parsed()) return cmd_analyze(o, input);
        if (cal->parsed()) return cmd_calibrate(o, cal_seeds, quantile, profile_out);
        if (fil->parsed()) return cmd_filter(o, input, profile_path, kind_name, snr_db,
                                             snr_opt->count() > 0, dilate_scale, dilate_time);
        if (tab->parsed()) return cmd_tables(o, n_seeds);
        if (con->parsed()) return cmd_convergence(o, levels, conv_seeds);
        if (syn->parsed()) return cmd_synth(o, synth_kind, synth_out);
    } catch (const zerotf::data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const zerotf::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
