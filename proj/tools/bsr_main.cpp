// Command-line front end: thresholds, curve sweeps, instance generation,
// recovery, certification and phase-transition experiments. Machine-readable
// payloads go to stdout (or --out), human summaries to stderr.
//
// Exit codes: 0 success / recovered / SUCCESS verdict, 2 definite negative
// (not recovered, FAILURE verdict), 3 undecided (including a solve that hit
// its iteration cap), 1 usage or runtime error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bsr/certify.hpp"
#include "bsr/experiments.hpp"
#include "bsr/gbar.hpp"
#include "bsr/instance.hpp"
#include "bsr/instance_io.hpp"
#include "bsr/recovery.hpp"
#include "bsr/thresholds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNegative = 2;
constexpr int kExitUndecided = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_payload(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
    if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
}

struct ThresholdArgs {
    std::size_t d = 1;
    double beta = 0.0;
};

struct CurveArgs {
    std::size_t d = 1;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::size_t steps = 0;
    std::string out;
};

struct GenArgs {
    std::size_t n = 0, d = 1, m = 0, k = 0;
    std::uint64_t seed = 0;
    double mag_low = 1.0, mag_high = 2.0;
    std::string out;
};

struct RecoverArgs {
    std::string in;
    double tol = 1e-4;
    double feas_tol = 1e-9;
    std::size_t max_iters = 200000;
};

struct CertifyArgs {
    std::string in;
};

struct PhaseArgs {
    std::size_t d = 1, n = 0;
    double beta = 0.0;
    double alpha_min = 0.0, alpha_max = 0.0;
    std::size_t alpha_steps = 0, trials = 0;
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    std::string out;
};

struct FgArgs {
    std::size_t n = 0, d = 1, samples = 0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

int run_threshold(const ThresholdArgs& a) {
    const bsr::thresholds::ThresholdPoint pt = bsr::thresholds::alpha_weak(a.beta, a.d);
    std::cerr << "alpha_w(beta=" << a.beta << ", d=" << a.d << ") = " << pt.alpha_w
              << "  (theta_hat = " << pt.theta_hat << ")\n";
    std::cout << bsr::thresholds::curve_to_csv({pt});
    return kExitOk;
}

int run_curve(const CurveArgs& a) {
    if (a.steps > 1 && !(a.beta_min < a.beta_max)) {
        std::cerr << "bsr curve: --beta-min must be below --beta-max when --steps > 1\n";
        return kExitUsage;
    }
    const std::vector<double> grid =
        bsr::thresholds::make_beta_grid(a.beta_min, a.beta_max, a.steps);
    const auto curve = bsr::thresholds::threshold_curve(a.d, grid);
    write_payload(a.out, bsr::thresholds::curve_to_csv(curve));
    std::cerr << "curve: " << curve.size() << " points for d = " << a.d << "\n";
    return kExitOk;
}

int run_gen(const GenArgs& a) {
    bsr::BlockStructure st;
    st.n = a.n;
    st.d = a.d;
    st.m = a.m;
    st.k = a.k;
    const bsr::ProblemInstance inst =
        bsr::generate_instance(st, a.mag_low, a.mag_high, bsr::RngSpec{a.seed, 0});
    write_payload(a.out, bsr::serialize_instance(inst));
    std::cerr << "gen: n=" << a.n << " d=" << a.d << " m=" << a.m << " k=" << a.k
              << " seed=" << a.seed << "\n";
    return kExitOk;
}

int run_recover(const RecoverArgs& a) {
    const bsr::ProblemInstance inst = bsr::deserialize_instance(read_file(a.in));
    bsr::recovery::SolveOptions opts;
    opts.feas_tol = a.feas_tol;
    opts.max_iters = a.max_iters;
    bsr::recovery::RecoveryResult res =
        bsr::recovery::solve_group_bp(inst.A, inst.y, inst.structure.d, opts);
    res.recovered = res.converged && bsr::recovery::check_recovery(res, inst.x_true, a.tol);
    std::cout << bsr::recovery::result_to_document(res) << "\n";
    if (!res.converged) {
        std::cerr << "recover: solve hit the iteration cap after " << res.iterations
                  << " iterations\n";
        return kExitUndecided;
    }
    const double rel = (res.x_hat - inst.x_true).norm() / std::max(1e-300, inst.x_true.norm());
    std::cerr << "recover: " << (res.recovered ? "recovered" : "did not recover")
              << " (relative error " << rel << ")\n";
    return res.recovered ? kExitOk : kExitNegative;
}

int run_certify(const CertifyArgs& a) {
    const bsr::ProblemInstance inst = bsr::deserialize_instance(read_file(a.in));
    const bsr::certify::Certificate cert =
        bsr::certify::certify(inst.A, inst.structure.d, inst.support, inst.directions);
    std::cout << bsr::certify::certificate_to_document(cert) << "\n";
    std::cerr << "certify: " << bsr::certify::verdict_name(cert.verdict)
              << " (tau estimate " << cert.tau_estimate << ")\n";
    switch (cert.verdict) {
        case bsr::certify::Verdict::SUCCESS: return kExitOk;
        case bsr::certify::Verdict::FAILURE: return kExitNegative;
        case bsr::certify::Verdict::UNDECIDED: break;
    }
    return kExitUndecided;
}

int run_phase(const PhaseArgs& a) {
    if (a.alpha_steps > 1 && !(a.alpha_min < a.alpha_max)) {
        std::cerr << "bsr phase: --alpha-min must be below --alpha-max when --alpha-steps > 1\n";
        return kExitUsage;
    }
    bsr::experiments::ExperimentConfig cfg;
    cfg.d = a.d;
    cfg.n = a.n;
    cfg.beta = a.beta;
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.alpha_grid.reserve(a.alpha_steps);
    for (std::size_t i = 0; i < a.alpha_steps; ++i) {
        const double t = a.alpha_steps == 1
                             ? 0.0
                             : static_cast<double>(i) / static_cast<double>(a.alpha_steps - 1);
        cfg.alpha_grid.push_back(a.alpha_min + t * (a.alpha_max - a.alpha_min));
    }
    const bsr::experiments::PhaseResult result = bsr::experiments::run_phase(cfg);
    write_payload(a.out, bsr::experiments::phase_to_csv(result));
    if (!a.out.empty())
        write_payload(a.out + ".meta.json", bsr::experiments::phase_metadata_document(cfg));
    try {
        std::cerr << "phase: rate crosses 1/2 near alpha = "
                  << bsr::experiments::estimate_crossing(result.cells) << "\n";
    } catch (const std::exception& ex) {
        std::cerr << "phase: " << ex.what() << "\n";
    }
    return kExitOk;
}

int run_fgsample(const FgArgs& a) {
    const std::size_t k = static_cast<std::size_t>(
        std::llround(a.beta * static_cast<double>(a.n)));
    const bsr::thresholds::FiniteNStats stats =
        bsr::thresholds::finite_n_alpha_estimate(a.n, k, a.d, a.samples, bsr::RngSpec{a.seed, 0});
    std::string csv = "sample,f_over_dn\n";
    for (std::size_t i = 0; i < stats.ratios.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, stats.ratios[i]);
        csv += buf;
    }
    std::cout << csv;
    std::cerr << "fgsample: n=" << a.n << " k=" << k << " d=" << a.d << " mean=" << stats.mean
              << " stddev=" << stats.stddev << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-sparse recovery toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("bsr ") + bsr::experiments::kLibraryVersion);

    ThresholdArgs th;
    auto* c_th = app.add_subcommand("threshold", "exact weak threshold at one (beta, d)");
    c_th->add_option("--d", th.d, "block length")->required()->check(CLI::PositiveNumber);
    c_th->add_option("--beta", th.beta, "sparsity fraction k/n in (0, 1]")->required();

    CurveArgs cv;
    auto* c_cv = app.add_subcommand("curve", "weak-threshold curve over a beta grid");
    c_cv->add_option("--d", cv.d, "block length")->required()->check(CLI::PositiveNumber);
    c_cv->add_option("--beta-min", cv.beta_min, "smallest beta")->required();
    c_cv->add_option("--beta-max", cv.beta_max, "largest beta")->required();
    c_cv->add_option("--steps", cv.steps, "number of grid points")
        ->required()
        ->check(CLI::PositiveNumber);
    c_cv->add_option("--out", cv.out, "CSV destination (stdout when omitted)");

    GenArgs gn;
    auto* c_gn = app.add_subcommand("gen", "generate a random problem instance");
    c_gn->add_option("--n", gn.n, "number of blocks")->required()->check(CLI::PositiveNumber);
    c_gn->add_option("--d", gn.d, "block length")->required()->check(CLI::PositiveNumber);
    c_gn->add_option("--m", gn.m, "number of measurement blocks")
        ->required()
        ->check(CLI::PositiveNumber);
    c_gn->add_option("--k", gn.k, "number of nonzero blocks")->required();
    c_gn->add_option("--seed", gn.seed, "master seed")->required();
    c_gn->add_option("--mag-low", gn.mag_low, "smallest block magnitude");
    c_gn->add_option("--mag-high", gn.mag_high, "largest block magnitude");
    c_gn->add_option("--out", gn.out, "instance destination (stdout when omitted)");

    RecoverArgs rc;
    auto* c_rc = app.add_subcommand("recover", "solve the recovery program on an instance");
    c_rc->add_option("--in", rc.in, "instance document")->required();
    c_rc->add_option("--tol", rc.tol, "relative recovery tolerance");
    c_rc->add_option("--feas-tol", rc.feas_tol, "solver residual tolerance");
    c_rc->add_option("--max-iters", rc.max_iters, "solver iteration cap");

    CertifyArgs ct;
    auto* c_ct = app.add_subcommand("certify", "success/failure certificate for an instance");
    c_ct->add_option("--in", ct.in, "instance document")->required();

    PhaseArgs ph;
    auto* c_ph = app.add_subcommand("phase", "empirical phase-transition sweep");
    c_ph->add_option("--d", ph.d, "block length")->required()->check(CLI::PositiveNumber);
    c_ph->add_option("--n", ph.n, "number of blocks")->required()->check(CLI::PositiveNumber);
    c_ph->add_option("--beta", ph.beta, "sparsity fraction k/n")->required();
    c_ph->add_option("--alpha-min", ph.alpha_min, "smallest alpha")->required();
    c_ph->add_option("--alpha-max", ph.alpha_max, "largest alpha")->required();
    c_ph->add_option("--alpha-steps", ph.alpha_steps, "alpha grid size")
        ->required()
        ->check(CLI::PositiveNumber);
    c_ph->add_option("--trials", ph.trials, "trials per cell")
        ->required()
        ->check(CLI::PositiveNumber);
    c_ph->add_option("--seed", ph.seed, "master seed")->required();
    c_ph->add_option("--jobs", ph.jobs, "worker threads (0: all hardware threads)");
    c_ph->add_option("--out", ph.out, "CSV destination; also writes <out>.meta.json");

    FgArgs fg;
    auto* c_fg = app.add_subcommand("fgsample", "finite-n estimates of the threshold ratio");
    c_fg->add_option("--n", fg.n, "number of blocks")->required()->check(CLI::PositiveNumber);
    c_fg->add_option("--d", fg.d, "block length")->required()->check(CLI::PositiveNumber);
    c_fg->add_option("--beta", fg.beta, "sparsity fraction k/n")->required();
    c_fg->add_option("--samples", fg.samples, "number of draws")
        ->required()
        ->check(CLI::PositiveNumber);
    c_fg->add_option("--seed", fg.seed, "master seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage message; the exit code is ours
        return kExitUsage;
    }

    try {
        if (c_th->parsed()) return run_threshold(th);
        if (c_cv->parsed()) return run_curve(cv);
        if (c_gn->parsed()) return run_gen(gn);
        if (c_rc->parsed()) return run_recover(rc);
        if (c_ct->parsed()) return run_certify(ct);
        if (c_ph->parsed()) return run_phase(ph);
        if (c_fg->parsed()) return run_fgsample(fg);
    } catch (const std::exception& ex) {
        std::cerr << "bsr: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
