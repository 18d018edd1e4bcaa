// invmed: forward simulation, measurement synthesis, inversion and metrics
// for the 2-D acoustic inverse medium problem, plus preset experiments.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invmed/grid.hpp"
#include "invmed/inversion.hpp"
#include "invmed/lippmann.hpp"
#include "invmed/measurement.hpp"
#include "invmed/metrics.hpp"
#include "invmed/phantoms.hpp"
#include "invmed/pml.hpp"

using namespace invmed;
using nlohmann::json;

namespace {

RealField make_phantom_by_name(const std::string& name, const Grid& g, double magnitude,
                               unsigned long long seed, bool seed_given) {
    if (name == "two_gauss") return two_gauss_test(g, magnitude);
    if (name == "mixture") {
        if (!seed_given)
            throw CLI::ValidationError("--seed", "required for the randomized mixture phantom");
        RealField q = sample_gaussian_mixture(g, seed).second;
        return normalize_max(q, magnitude);
    }
    GeometricPhantom ph;
    ph.kind = phantom_kind_from_name(name);  // throws on unknown names
    ph.magnitude = magnitude;
    return make_geometric(g, ph);
}

ReceiverLayout make_layout_by_name(const std::string& kind, int M, int N, double r_c,
                                   double center_angle, double aperture) {
    if (kind == "full_circle") return make_layout_full_circle(M, N, r_c);
    if (kind == "arc") return make_layout_arc(M, N, center_angle, aperture, r_c);
    throw std::invalid_argument("unknown layout kind: " + kind);
}

void write_pgm_heatmap(const std::string& field_path, const std::string& out_path,
                       const std::string& part, bool part_given) {
    const LoadedField lf = read_field(field_path);
    std::string used_part = part;
    Grid g;
    std::vector<double> vals;
    if (lf.is_complex) {
        if (!part_given)
            throw CLI::ValidationError("--part", "required for complex fields (real|imag|abs)");
        g = lf.complex.grid;
        vals.reserve(g.size());
        for (const cplx& v : lf.complex.values) {
            if (part == "real")
                vals.push_back(v.real());
            else if (part == "imag")
                vals.push_back(v.imag());
            else if (part == "abs")
                vals.push_back(std::abs(v));
            else
                throw CLI::ValidationError("--part", "must be real, imag or abs");
        }
    } else {
        g = lf.real.grid;
        vals = lf.real.values;
        if (!part_given) used_part = "real";
    }

    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output: " + out_path);
    out << "P5\n" << g.n << " " << g.n << "\n255\n";
    for (double v : vals) {
        unsigned char px;
        if (hi == lo)
            px = (hi == 0.0) ? 0 : 128;
        else
            px = (unsigned char)std::lround(255.0 * (v - lo) / (hi - lo));
        out.put(char(px));
    }
    out.close();

    json side;
    side["min"] = lo;
    side["max"] = hi;
    side["part"] = used_part;
    std::ofstream js(out_path + ".json");
    js << side.dump(2) << "\n";
}

struct ExperimentPreset {
    std::string phantom = "two_gauss";
    double magnitude = 0.1;
    double k = 40.0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::string layout = "full_circle";
    double aperture = 2.0 * M_PI;
};

ExperimentPreset preset_for(const std::string& name) {
    ExperimentPreset p;
    if (name == "simple") {
        // two_gauss at 0.1, k = 40, noiseless
    } else if (name == "magnitude") {
        p.magnitude = 0.4;
    } else if (name == "geometry") {
        p.phantom = "discs";
        p.magnitude = 0.5;
    } else if (name == "noise") {
        p.phantom = "austria";
        p.magnitude = 0.5;
        p.snr_db = 5.0;
    } else if (name == "layout") {
        p.layout = "arc";
        p.aperture = M_PI;
    } else if (name == "wavenumber") {
        p.phantom = "small_cluster";
        p.magnitude = 0.5;
        p.snr_db = 5.0;
        p.k = 60.0;
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }
    return p;
}

int run_all(int argc, char** argv) {
    CLI::App app{"2-D acoustic inverse medium toolbox"};
    app.require_subcommand(1);

    // ---- phantom ----
    auto* ph = app.add_subcommand("phantom", "Generate a scatterer field (.fld)");
    std::string ph_kind = "two_gauss", ph_out;
    double ph_mag = 0.1;
    int ph_n = 129;
    unsigned long long ph_seed = 0;
    bool ph_seed_set = false;
    ph->add_option("--kind", ph_kind,
                   "two_gauss|mixture|discs|rectangle_robot|austria|small_cluster");
    ph->add_option("--magnitude", ph_mag, "target L-inf magnitude");
    ph->add_option("--n", ph_n, "grid points per side");
    ph->add_option("--seed", ph_seed)->each([&](const std::string&) { ph_seed_set = true; });
    ph->add_option("--out", ph_out, "output .fld path")->required();
    ph->callback([&] {
        const RealField q =
            make_phantom_by_name(ph_kind, Grid::unit(ph_n), ph_mag, ph_seed, ph_seed_set);
        write_field(ph_out, q);
    });

    // ---- forward ----
    auto* fw = app.add_subcommand("forward", "Solve the forward scattering problem");
    std::string fw_q, fw_out, fw_solver = "pml";
    double fw_k = 40.0, fw_angle = 0.0;
    int fw_L = 3;
    fw->add_option("--q", fw_q, "scatterer .fld")->required();
    fw->add_option("--k", fw_k, "wavenumber");
    fw->add_option("--solver", fw_solver, "pml|neumann");
    fw->add_option("--L", fw_L, "Neumann truncation order");
    fw->add_option("--angle", fw_angle, "incident plane-wave angle");
    fw->add_option("--out", fw_out, "scattered field .fld")->required();
    fw->callback([&] {
        const LoadedField lf = read_field(fw_q);
        if (lf.is_complex) throw std::invalid_argument("forward: --q must be a real field");
        const RealField& q = lf.real;
        const ComplexField ui = plane_wave(q.grid, fw_k, fw_angle);
        ComplexField us;
        if (fw_solver == "pml") {
            PmlConfig cfg;
            cfg.k = fw_k;
            cfg.n = q.grid.n;
            us = forward_scatter(q, {ui}, cfg).front();
        } else if (fw_solver == "neumann") {
            const GreenKernel ker(fw_k, q.grid);
            auto [u, diag] = neumann_forward(q, ui, ker, fw_L);
            us = std::move(u);
            if (!diag.converged)
                std::cerr << "warning: neumann series not converged (contraction ~ "
                          << diag.contraction_estimate << ")\n";
        } else {
            throw std::invalid_argument("unknown solver: " + fw_solver);
        }
        write_field(fw_out, us, fw_k, true);
    });

    // ---- measure ----
    auto* ms = app.add_subcommand("measure", "Synthesize measurements (.msr)");
    std::string ms_phantom = "two_gauss", ms_layout = "full_circle", ms_out;
    double ms_k = 40.0, ms_snr = std::numeric_limits<double>::infinity();
    double ms_rc = 0.45, ms_mag = 0.1, ms_center = 0.0, ms_aperture = 2.0 * M_PI;
    int ms_fine = 513, ms_coarse = 129, ms_M = 64, ms_N = 64;
    unsigned long long ms_seed = 0;
    bool ms_seed_set = false;
    ms->add_option("--phantom", ms_phantom, "phantom name or a .fld path");
    ms->add_option("--magnitude", ms_mag);
    ms->add_option("--k", ms_k);
    ms->add_option("--fine-n", ms_fine);
    ms->add_option("--coarse-n", ms_coarse);
    ms->add_option("--snr-db", ms_snr);
    ms->add_option("--layout", ms_layout, "full_circle|arc");
    ms->add_option("--M", ms_M);
    ms->add_option("--N", ms_N);
    ms->add_option("--rc", ms_rc);
    ms->add_option("--center-angle", ms_center);
    ms->add_option("--aperture", ms_aperture);
    ms->add_option("--seed", ms_seed)->each([&](const std::string&) { ms_seed_set = true; });
    ms->add_option("--out", ms_out)->required();
    ms->callback([&] {
        if (std::isfinite(ms_snr) && !ms_seed_set)
            throw CLI::ValidationError("--seed", "required when injecting noise");
        RealField q_true(Grid::unit(ms_fine));
        if (ms_phantom.size() > 4 && ms_phantom.substr(ms_phantom.size() - 4) == ".fld") {
            const LoadedField lf = read_field(ms_phantom);
            if (lf.is_complex)
                throw std::invalid_argument("measure: phantom must be a real field");
            if (lf.real.grid.n != ms_fine)
                throw std::invalid_argument("measure: phantom file must match --fine-n");
            q_true = lf.real;
        } else {
            q_true = make_phantom_by_name(ms_phantom, Grid::unit(ms_fine), ms_mag, ms_seed,
                                          ms_seed_set);
        }
        const ReceiverLayout lay =
            make_layout_by_name(ms_layout, ms_M, ms_N, ms_rc, ms_center, ms_aperture);
        const MeasurementSet data =
            synthesize(q_true, lay, ms_k, ms_fine, ms_coarse, ms_snr, ms_seed);
        write_measurements(ms_out, data);
    });

    // ---- invert ----
    auto* iv = app.add_subcommand("invert", "L-BFGS inversion from measurements");
    std::string iv_data, iv_truth, iv_prefix;
    double iv_k = 0.0;
    int iv_n = 129, iv_maxit = 15, iv_maxls = 20;
    bool iv_k_set = false;
    iv->add_option("--data", iv_data, "measurement .msr")->required();
    iv->add_option("--k", iv_k)->each([&](const std::string&) { iv_k_set = true; });
    iv->add_option("--n", iv_n, "inversion grid points per side");
    iv->add_option("--max-iter", iv_maxit);
    iv->add_option("--max-ls", iv_maxls);
    iv->add_option("--truth", iv_truth, "optional truth .fld for rel-err logging");
    iv->add_option("--out-prefix", iv_prefix)->required();
    iv->callback([&] {
        const MeasurementSet data = read_measurements(iv_data);
        if (iv_k_set && iv_k != data.k)
            throw std::invalid_argument("invert: --k disagrees with the data file");
        InversionConfig cfg;
        cfg.k = data.k;
        cfg.n = iv_n;
        cfg.max_iter = iv_maxit;
        cfg.max_linesearch = iv_maxls;
        std::optional<RealField> truth;
        if (!iv_truth.empty()) {
            const LoadedField lf = read_field(iv_truth);
            if (lf.is_complex) throw std::invalid_argument("invert: truth must be real");
            truth = lf.real.grid.n == iv_n ? lf.real : restrict_field(lf.real, iv_n);
        }
        const InversionState st = lbfgs_minimize(data, cfg, std::nullopt, truth);
        write_field(iv_prefix + ".fld", st.q);
        write_iteration_log(iv_prefix + "_log.csv", st.history);
    });

    // ---- metrics ----
    auto* mt = app.add_subcommand("metrics", "Compare reconstruction with the truth");
    std::string mt_rec, mt_truth;
    mt->add_option("--rec", mt_rec)->required();
    mt->add_option("--truth", mt_truth)->required();
    mt->callback([&] {
        const LoadedField rec = read_field(mt_rec);
        const LoadedField tru = read_field(mt_truth);
        if (rec.is_complex || tru.is_complex)
            throw std::invalid_argument("metrics: fields must be real");
        RealField truth = tru.real.grid.n == rec.real.grid.n
                              ? tru.real
                              : restrict_field(tru.real, rec.real.grid.n);
        json out;
        out["rel_err"] = relative_error(rec.real, truth);
        out["ssim"] = ssim(rec.real, truth);
        std::cout << out.dump() << "\n";
    });

    // ---- heatmap ----
    auto* hm = app.add_subcommand("heatmap", "Export a field as an 8-bit PGM image");
    std::string hm_field, hm_out, hm_part;
    bool hm_part_set = false;
    hm->add_option("--field", hm_field)->required();
    hm->add_option("--part", hm_part, "real|imag|abs")
        ->each([&](const std::string&) { hm_part_set = true; });
    hm->add_option("--out", hm_out)->required();
    hm->callback([&] { write_pgm_heatmap(hm_field, hm_out, hm_part, hm_part_set); });

    // ---- experiment ----
    auto* ex = app.add_subcommand("experiment", "Run a preset synthesize-invert-metrics study");
    std::string ex_name, ex_out = "experiment_out", ex_phantom, ex_layout;
    double ex_k = -1.0, ex_snr = std::nan(""), ex_mag = -1.0, ex_rc = 0.45;
    double ex_aperture = -1.0;
    int ex_n = 129, ex_fine = 513, ex_M = 64, ex_N = 64, ex_maxit = 15, ex_maxls = 20;
    unsigned long long ex_seed = 0;
    bool ex_seed_set = false, ex_snr_set = false;
    ex->add_option("name", ex_name, "simple|magnitude|geometry|noise|layout|wavenumber")
        ->required();
    ex->add_option("--phantom", ex_phantom);
    ex->add_option("--magnitude", ex_mag);
    ex->add_option("--k", ex_k);
    ex->add_option("--snr-db", ex_snr)->each([&](const std::string&) { ex_snr_set = true; });
    ex->add_option("--layout", ex_layout);
    ex->add_option("--aperture", ex_aperture);
    ex->add_option("--rc", ex_rc);
    ex->add_option("--n", ex_n);
    ex->add_option("--fine-n", ex_fine);
    ex->add_option("--M", ex_M);
    ex->add_option("--N", ex_N);
    ex->add_option("--max-iter", ex_maxit);
    ex->add_option("--max-ls", ex_maxls);
    ex->add_option("--seed", ex_seed)->each([&](const std::string&) { ex_seed_set = true; });
    ex->add_option("--out", ex_out, "output directory");
    ex->callback([&] {
        ExperimentPreset p = preset_for(ex_name);
        if (!ex_phantom.empty()) p.phantom = ex_phantom;
        if (ex_mag >= 0.0) p.magnitude = ex_mag;
        if (ex_k > 0.0) p.k = ex_k;
        if (ex_snr_set) p.snr_db = ex_snr;
        if (!ex_layout.empty()) p.layout = ex_layout;
        if (ex_aperture > 0.0) p.aperture = ex_aperture;
        if (std::isfinite(p.snr_db) && !ex_seed_set)
            throw CLI::ValidationError("--seed", "required for noisy experiments");

        std::filesystem::create_directories(ex_out);
        const auto t0 = std::chrono::steady_clock::now();

        const RealField q_true = make_phantom_by_name(p.phantom, Grid::unit(ex_fine),
                                                      p.magnitude, ex_seed, ex_seed_set);
        write_field(ex_out + "/truth.fld", q_true);
        const ReceiverLayout lay =
            make_layout_by_name(p.layout, ex_M, ex_N, ex_rc, 0.0, p.aperture);
        const MeasurementSet data =
            synthesize(q_true, lay, p.k, ex_fine, ex_n, p.snr_db, ex_seed);
        write_measurements(ex_out + "/data.msr", data);

        InversionConfig cfg;
        cfg.k = p.k;
        cfg.n = ex_n;
        cfg.max_iter = ex_maxit;
        cfg.max_linesearch = ex_maxls;
        const RealField truth_coarse = restrict_field(q_true, ex_n);
        const InversionState st = lbfgs_minimize(data, cfg, std::nullopt, truth_coarse);
        write_field(ex_out + "/rec.fld", st.q);
        write_iteration_log(ex_out + "/log.csv", st.history);
        write_pgm_heatmap(ex_out + "/rec.fld", ex_out + "/rec.pgm", "real", true);
        write_pgm_heatmap(ex_out + "/truth.fld", ex_out + "/truth.pgm", "real", true);

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json config;
        config["experiment"] = ex_name;
        config["phantom"] = p.phantom;
        config["magnitude"] = p.magnitude;
        config["k"] = p.k;
        config["snr_db"] = std::isfinite(p.snr_db) ? json(p.snr_db) : json(nullptr);
        config["layout"] = p.layout;
        config["aperture"] = p.aperture;
        config["r_c"] = ex_rc;
        config["n"] = ex_n;
        config["fine_n"] = ex_fine;
        config["M"] = ex_M;
        config["N"] = ex_N;
        config["max_iter"] = ex_maxit;
        config["max_linesearch"] = ex_maxls;
        config["seed"] = ex_seed;
        std::ofstream(ex_out + "/config.json") << config.dump(2) << "\n";

        json summary;
        summary["phantom"] = p.phantom;
        summary["k"] = p.k;
        summary["snr_db"] = std::isfinite(p.snr_db) ? json(p.snr_db) : json(nullptr);
        summary["rel_err"] = relative_error(st.q, truth_coarse);
        summary["ssim"] = ssim(st.q, truth_coarse);
        summary["n_fev"] = st.n_fev;
        summary["elapsed_s"] = elapsed;
        std::ofstream(ex_out + "/summary.json") << summary.dump(2) << "\n";
        std::cout << summary.dump() << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_all(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
