#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ptscatter/center_io.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/features.hpp"
#include "ptscatter/pt_symmetry.hpp"
#include "ptscatter/rhombic.hpp"
#include "ptscatter/solver.hpp"
#include "ptscatter/verification.hpp"
#include "ptscatter/wavepacket.hpp"

namespace ptscatter::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string g12(double v) { return fmt("%.12g", v); }

// Model source shared by every subcommand.
struct ModelOptions {
    std::string model;
    std::string center;
    double flux = 0.0;
    double flux_pi = 0.0;
    double gamma = 0.0;
    CLI::Option* model_opt = nullptr;
    CLI::Option* center_opt = nullptr;
    CLI::Option* flux_opt = nullptr;
    CLI::Option* flux_pi_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;

    void attach(CLI::App& app, bool allow_center = true) {
        model_opt = app.add_option("--model", model, "Built-in ring: axial or reflection")
                        ->check(CLI::IsMember({"axial", "reflection"}));
        if (allow_center) {
            center_opt = app.add_option("--center", center, "Centre definition JSON file")->excludes(model_opt);
        }
        flux_opt = app.add_option("--flux", flux, "Synthetic flux Phi in radians");
        flux_pi_opt = app.add_option("--flux-pi", flux_pi, "Flux in units of pi")->excludes(flux_opt);
        gamma_opt = app.add_option("--gamma", gamma, "Gain/loss rate");
    }

    bool is_center() const { return center_opt && center_opt->count() > 0; }

    void require_source() const {
        if (model_opt->count() == 0 && !is_center()) throw UsageError("one of --model or --center is required");
        if (is_center() && (flux_opt->count() || flux_pi_opt->count() || gamma_opt->count())) {
            throw UsageError("--flux/--flux-pi/--gamma apply only to --model");
        }
    }

    std::optional<double> fixed_flux() const {
        if (flux_pi_opt->count()) return flux_pi * kPi;
        if (flux_opt->count()) return flux;
        return std::nullopt;
    }

    std::optional<double> fixed_gamma() const {
        return gamma_opt->count() ? std::optional<double>(gamma) : std::nullopt;
    }

    RhombicConfig config() const {
        RhombicConfig c;
        c.kind = parse_ring_kind(model);
        c.params.flux = fixed_flux().value_or(0.0);
        c.params.gamma = gamma;
        return c;
    }

    ScatteringCenter center_model() const { return is_center() ? load_center(center) : build(config()); }

    void describe(std::ostream& os) const {
        if (is_center()) {
            os << "centre " << center << '\n';
        } else {
            const RhombicConfig c = config();
            os << "model  " << to_string(c.kind) << '\n'
               << "flux   " << g12(c.params.flux) << '\n'
               << "gamma  " << g12(c.params.gamma) << '\n';
        }
    }
};

// Data goes to --out when given, otherwise to the command's output stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error("cannot open output file '" + path + "'");
        }
        stream_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& stream() { return *stream_; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string check_format(const std::string& format) {
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    return format;
}

std::pair<double, double> range_or(const std::vector<double>& given, double lo, double hi) {
    if (given.empty()) return {lo, hi};
    if (given.size() != 2) throw UsageError("ranges take two comma-separated values lo,hi");
    return {given[0], given[1]};
}

unsigned thread_setting(CLI::Option* opt, unsigned value) {
    if (opt->count()) return value;
    if (const char* env = std::getenv("PTSCATTER_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("PTSCATTER_THREADS must be a non-negative integer, got '") + env + "'");
    }
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveCmd {
    ModelOptions model;
    double k = 0.0;
    double k_pi = 0.0;
    std::string engine = "closed";
    std::string format = "text";
    CLI::Option* k_opt = nullptr;
    CLI::Option* k_pi_opt = nullptr;

    void attach(CLI::App& sub) {
        model.attach(sub);
        k_opt = sub.add_option("--k", k, "Wave vector in (0, pi)");
        k_pi_opt = sub.add_option("--k-pi", k_pi, "Wave vector in units of pi")->excludes(k_opt);
        sub.add_option("--engine", engine, "closed (closed form) or solver; centre files always use the solver")
            ->check(CLI::IsMember({"closed", "solver"}));
        sub.add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    }

    int run(std::ostream& out, std::ostream& err) const {
        model.require_source();
        if (!k_opt->count() && !k_pi_opt->count()) throw UsageError("solve requires --k (or --k-pi)");
        const WaveVector wk(k_pi_opt->count() ? k_pi * kPi : k);

        ScatteringCoefficients sc;
        if (model.is_center() || engine == "solver") {
            sc = coefficients_with_limits(model.center_model(), wk);
        } else {
            const RhombicConfig c = model.config();
            sc = c.kind == RingKind::Axial ? axial_coefficients(c.params, wk) : reflection_coefficients(c.params, wk);
        }
        const RelationResiduals ax = verify_axial_relations(sc);
        const RelationResiduals re = verify_reflection_relations(sc);
        const std::pair<const char*, cplx> amps[] = {
            {"r_L", sc.r_left}, {"t_L", sc.t_left}, {"r_R", sc.r_right}, {"t_R", sc.t_right}};

        if (format == "json") {
            nlohmann::json doc;
            doc["k"] = wk.value();
            doc["flags"] = flags_to_string(sc.flags);
            for (const auto& [name, v] : amps) {
                doc["coefficients"][name] = {{"re", v.real()}, {"im", v.imag()}, {"abs2", std::norm(v)}};
            }
            doc["residuals"]["axial"] = {ax.first, ax.second, ax.aux_first, ax.aux_second};
            doc["residuals"]["reflection"] = {re.first, re.second, re.aux_first, re.aux_second};
            out << doc.dump(1) << '\n';
        } else if (format == "csv") {
            out << "quantity,re,im,abs2\n";
            for (const auto& [name, v] : amps) {
                out << name << ',' << g12(v.real()) << ',' << g12(v.imag()) << ',' << g12(std::norm(v)) << '\n';
            }
        } else {
            model.describe(out);
            out << "k      " << g12(wk.value()) << " (" << g12(wk.value() / kPi) << " pi)\n"
                << "flags  " << flags_to_string(sc.flags) << "\n\n";
            char line[160];
            std::snprintf(line, sizeof line, "%-5s %20s %20s %20s\n", "", "re", "im", "|.|^2");
            out << line;
            for (const auto& [name, v] : amps) {
                std::snprintf(line, sizeof line, "%-5s %20.12g %20.12g %20.12g\n", name, v.real(), v.imag(),
                              std::norm(v));
                out << line;
            }
            out << "\nPT relation residuals (first, second, aux first, aux second)\n";
            std::snprintf(line, sizeof line, "  axial       %.3e %.3e %.3e %.3e\n", ax.first, ax.second, ax.aux_first,
                          ax.aux_second);
            out << line;
            std::snprintf(line, sizeof line, "  reflection  %.3e %.3e %.3e %.3e\n", re.first, re.second, re.aux_first,
                          re.aux_second);
            out << line;
            std::snprintf(line, sizeof line, "reciprocity  ||r_L|^2-|r_R|^2| = %.3e  ||t_L|^2-|t_R|^2| = %.3e\n",
                          std::abs(sc.reflectance_left() - sc.reflectance_right()),
                          std::abs(sc.transmittance_left() - sc.transmittance_right()));
            out << line;
        }
        if (has_flag(sc.flags, CoefficientFlags::NearSingular)) {
            err << "spectral singularity: coefficients diverge at k = " << g12(wk.value()) << '\n';
            return kExitSingular;
        }
        return kExitOk;
    }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
    ModelOptions model;
    std::string grid = "101x101";
    std::string axes = "phi,k";
    std::vector<double> range_phi, range_gamma, range_k;
    std::string engine = "closed";
    std::string format = "csv";
    std::string out_path;
    unsigned threads = 0;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App& sub) {
        model.attach(sub);
        sub.add_option("--grid", grid, "Points per axis, OUTERxINNER (centre files: N)");
        sub.add_option("--axes", axes, "Outer,inner axis among phi, gamma, k (one must be k)");
        sub.add_option("--range-phi", range_phi, "lo,hi for the phi axis")->delimiter(',')->expected(2);
        sub.add_option("--range-gamma", range_gamma, "lo,hi for the gamma axis")->delimiter(',')->expected(2);
        sub.add_option("--range-k", range_k, "lo,hi for the k axis")->delimiter(',')->expected(2);
        sub.add_option("--engine", engine, "closed or solver")->check(CLI::IsMember({"closed", "solver"}));
        sub.add_option("--format", format, "csv or json");
        sub.add_option("--out", out_path, "Output file (default stdout)");
        threads_opt = sub.add_option("--threads", threads, "Worker threads (0 = auto; env PTSCATTER_THREADS)");
    }

    AxisRange axis_range(Axis axis, std::size_t count) const {
        std::pair<double, double> r;
        switch (axis) {
        case Axis::Flux: r = range_or(range_phi, 0.0, kTwoPi); break;
        case Axis::Gamma: r = range_or(range_gamma, -2.0, 2.0); break;
        case Axis::K: r = range_or(range_k, kBandInset, kPi - kBandInset); break;
        }
        return {axis, r.first, r.second, count};
    }

    static std::size_t parse_count(const std::string& text) {
        try {
            std::size_t used = 0;
            const long v = std::stol(text, &used);
            if (used == text.size() && v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw UsageError("invalid grid size '" + text + "'");
    }

    int run(std::ostream& out, std::ostream& err) const {
        model.require_source();
        check_format(format);
        SweepOptions options;
        options.engine = engine == "solver" ? SweepEngine::Solver : SweepEngine::ClosedForm;
        options.threads = thread_setting(threads_opt, threads);

        SweepTable table;
        const auto x = grid.find('x');
        if (model.is_center()) {
            if (x != std::string::npos) throw UsageError("centre sweeps take a single --grid N over k");
            table = sweep(model.center_model(), axis_range(Axis::K, parse_count(grid)), options);
        } else {
            if (x == std::string::npos) throw UsageError("--grid must look like 101x101");
            const auto comma = axes.find(',');
            if (comma == std::string::npos) throw UsageError("--axes must look like phi,k");
            const Axis outer = parse_axis(axes.substr(0, comma));
            const Axis inner = parse_axis(axes.substr(comma + 1));
            table = sweep(model.config(), axis_range(outer, parse_count(grid.substr(0, x))),
                          axis_range(inner, parse_count(grid.substr(x + 1))), options);
        }

        Sink sink(out_path, out);
        format == "json" ? write_json(table, sink.stream()) : write_csv(table, sink.stream());
        (sink.to_file() ? out : err) << "sweep: " << table.rows.size() << " rows"
                                     << (sink.to_file() ? " written to " + out_path : std::string()) << '\n';
        return kExitOk;
    }
};

// ---------------------------------------------------------------- zeros

void write_loci(const std::vector<FeatureLocus>& loci, const std::string& format, std::ostream& os) {
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& locus : loci) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : locus.points) {
                pts.push_back({{"phi", p.flux},
                               {"gamma", p.gamma},
                               {"k", p.k},
                               {"k_over_pi", p.k / kPi},
                               {"check", p.check},
                               {"flags", flags_to_string(p.flags)}});
            }
            doc.push_back({{"feature", to_string(locus.kind)},
                           {"vanishes_identically", locus.vanishes_identically},
                           {"empty_by_theorem", locus.empty_by_theorem},
                           {"points", pts}});
        }
        os << doc.dump(1) << '\n';
        return;
    }
    os << "feature,phi,gamma,k,k_over_pi,check,flags\n";
    for (const auto& locus : loci) {
        for (const auto& p : locus.points) {
            os << to_string(locus.kind) << ',' << g12(p.flux) << ',' << g12(p.gamma) << ',' << g12(p.k) << ','
               << g12(p.k / kPi) << ',' << g12(p.check) << ',' << flags_to_string(p.flags) << '\n';
        }
    }
}

void summarize_loci(const std::vector<FeatureLocus>& loci, std::ostream& os) {
    for (const auto& locus : loci) {
        os << to_string(locus.kind) << ": ";
        if (locus.vanishes_identically) {
            os << "coefficient vanishes for every k\n";
            continue;
        }
        if (locus.points.empty()) {
            os << (locus.empty_by_theorem ? "none (excluded by symmetry)" : "none") << '\n';
            continue;
        }
        for (std::size_t i = 0; i < locus.points.size(); ++i) {
            os << (i ? ", " : "") << "k = " << fmt("%.6f", locus.points[i].k / kPi) << " pi";
        }
        os << '\n';
    }
}

struct ZerosCmd {
    ModelOptions model;
    std::string channel;
    std::string format = "csv";
    std::string out_path;
    std::size_t resolution = kZeroScanResolution;

    void attach(CLI::App& sub) {
        model.attach(sub);
        sub.add_option("--channel", channel,
                       "transmission or reflection (default: transmission for axial and centres, "
                       "reflection for the reflection ring)")
            ->check(CLI::IsMember({"transmission", "reflection"}));
        sub.add_option("--resolution", resolution, "Scan points for centre files");
        sub.add_option("--format", format, "csv or json");
        sub.add_option("--out", out_path, "Output file (default stdout)");
    }

    int run(std::ostream& out, std::ostream& err) const {
        model.require_source();
        check_format(format);
        std::vector<FeatureLocus> loci;
        if (model.is_center()) {
            const ScatteringCenter c = model.center_model();
            const bool reflection = channel == "reflection";
            for (Channel ch : reflection ? std::vector{Channel::ReflectionLeft, Channel::ReflectionRight}
                                         : std::vector{Channel::TransmissionLeft, Channel::TransmissionRight}) {
                loci.push_back(find_zeros_numeric(c, ch, resolution));
            }
        } else {
            const RhombicConfig c = model.config();
            const bool reflection =
                channel.empty() ? c.kind == RingKind::Reflection : channel == "reflection";
            loci = reflection ? find_reflection_zeros(c) : find_transmission_zeros(c);
        }
        Sink sink(out_path, out);
        write_loci(loci, format, sink.stream());
        summarize_loci(loci, sink.to_file() ? out : err);
        return kExitOk;
    }
};

// ---------------------------------------------------------- singularities

struct SingularitiesCmd {
    ModelOptions model;
    double k = 0.0;
    CLI::Option* k_opt = nullptr;
    std::vector<double> range_phi, range_gamma, range_k;
    std::size_t resolution = 51;
    bool states = false;
    std::string format = "csv";
    std::string out_path;

    void attach(CLI::App& sub) {
        model.attach(sub, false);
        k_opt = sub.add_option("--k", k, "Fix k (otherwise scanned)");
        sub.add_option("--range-phi", range_phi, "lo,hi when phi is scanned")->delimiter(',')->expected(2);
        sub.add_option("--range-gamma", range_gamma, "lo,hi when gamma is scanned")->delimiter(',')->expected(2);
        sub.add_option("--range-k", range_k, "lo,hi when k is scanned")->delimiter(',')->expected(2);
        sub.add_option("--resolution", resolution, "Grid points per scanned axis");
        sub.add_flag("--states", states, "Also construct the emission and absorption states");
        sub.add_option("--format", format, "csv or json");
        sub.add_option("--out", out_path, "Output file (default stdout)");
    }

    int run(std::ostream& out, std::ostream& err) const {
        model.require_source();
        check_format(format);
        const RingKind kind = parse_ring_kind(model.model);
        SingularityScan scan;
        scan.flux = model.fixed_flux();
        scan.gamma = model.fixed_gamma();
        if (k_opt->count()) scan.k = k;
        std::tie(scan.flux_lo, scan.flux_hi) = range_or(range_phi, 0.0, kTwoPi);
        std::tie(scan.gamma_lo, scan.gamma_hi) = range_or(range_gamma, -3.0, 3.0);
        std::tie(scan.k_lo, scan.k_hi) = range_or(range_k, kBandInset, kPi - kBandInset);
        scan.resolution = resolution;
        const FeatureLocus locus = find_spectral_singularities(kind, scan);

        Sink sink(out_path, out);
        std::ostream& os = sink.stream();
        auto state_of = [kind](const FeaturePoint& p, SingularBranch branch) {
            return singular_state(build({kind, {p.flux, p.gamma}}), WaveVector(p.k), branch);
        };
        if (format == "json") {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : locus.points) {
                nlohmann::json e{{"phi", p.flux}, {"gamma", p.gamma}, {"k", p.k}, {"abs_denominator", p.check}};
                if (states) {
                    for (auto [name, branch] : {std::pair{"emission", SingularBranch::Emission},
                                                std::pair{"absorption", SingularBranch::Absorption}}) {
                        const SingularState s = state_of(p, branch);
                        e[name] = {{"residual", s.residual}, {"sign", s.sign}};
                    }
                }
                pts.push_back(e);
            }
            os << nlohmann::json{{"feature", "SpectralSingularity"},
                                 {"empty_by_theorem", locus.empty_by_theorem},
                                 {"points", pts}}
                      .dump(1)
               << '\n';
        } else {
            os << "feature,phi,gamma,k,abs_denominator"
               << (states ? ",emission_residual,emission_sign,absorption_residual,absorption_sign" : "") << '\n';
            for (const auto& p : locus.points) {
                os << "SpectralSingularity," << g12(p.flux) << ',' << g12(p.gamma) << ',' << g12(p.k) << ','
                   << g12(p.check);
                if (states) {
                    const SingularState em = state_of(p, SingularBranch::Emission);
                    const SingularState ab = state_of(p, SingularBranch::Absorption);
                    os << ',' << g12(em.residual) << ',' << em.sign << ',' << g12(ab.residual) << ',' << ab.sign;
                }
                os << '\n';
            }
        }
        std::ostream& summary = sink.to_file() ? out : err;
        summary << "spectral singularities: " << locus.points.size();
        if (locus.empty_by_theorem) summary << " (reflection-PT ring: none expected)";
        summary << '\n';
        return kExitOk;
    }
};

// ---------------------------------------------------------------- verify

struct VerifyCmd {
    ModelOptions model;
    std::size_t samples = 1000;
    std::uint64_t seed = 7;
    double tolerance = 1e-10;

    void attach(CLI::App& sub) {
        model.attach(sub);
        sub.add_option("--samples", samples, "Random samples");
        sub.add_option("--seed", seed, "Sampling seed");
        sub.add_option("--tolerance", tolerance, "Pass threshold for every residual");
    }

    int run(std::ostream& out, std::ostream& err) const {
        model.require_source();
        if (!model.is_center() && (model.flux_opt->count() || model.flux_pi_opt->count() || model.gamma_opt->count())) {
            throw UsageError("verify samples flux and gamma itself; drop --flux/--gamma");
        }
        const VerificationReport report =
            model.is_center() ? verify_center_relations(model.center_model(), samples, seed, tolerance)
                              : verify_relations(parse_ring_kind(model.model), samples, seed, tolerance);
        out << "relations " << to_string(report.kind) << ", samples " << report.requested << ", evaluated "
            << report.evaluated << ", seed " << seed << '\n';
        char line[256];
        for (const auto& c : report.checks) {
            std::snprintf(line, sizeof line, "%-48s worst %.3e  threshold %.1e  %s\n", c.name.c_str(), c.worst,
                          c.threshold, c.passed() ? "pass" : "FAIL");
            out << line;
        }
        if (auto failed = report.first_failure()) {
            err << "verification failed: " << *failed << '\n';
            return kExitVerificationFailure;
        }
        return kExitOk;
    }
};

// ------------------------------------------------------------ wavepacket

struct WavepacketCmd {
    ModelOptions model;
    double k0 = 0.0;
    CLI::Option* k_opt = nullptr;
    double sigma = 15.0;
    int half_length = 400;
    double dt = 0.02;
    std::string side = "left";
    double tolerance = kDefaultOracleTolerance;
    std::string trace_path;

    void attach(CLI::App& sub) {
        model.attach(sub);
        k_opt = sub.add_option("--k", k0, "Carrier wave vector");
        sub.add_option("--sigma", sigma, "Packet width in sites");
        sub.add_option("-N,--half-length", half_length, "Lead sites per side");
        sub.add_option("--dt", dt, "RK4 step (<= 0.02)");
        sub.add_option("--side", side, "Incidence side")->check(CLI::IsMember({"left", "right"}));
        sub.add_option("--tolerance", tolerance, "Agreement tolerance");
        sub.add_option("--trace", trace_path, "Write the norm trace CSV here");
    }

    int run(std::ostream& out, std::ostream&) const {
        model.require_source();
        if (!k_opt->count()) throw UsageError("wavepacket requires --k");
        const ScatteringCenter center = model.center_model();
        WavepacketSpec spec = WavepacketSpec::standard(k0, sigma, half_length);
        spec.dt = dt;
        const Side s = side == "left" ? Side::Left : Side::Right;
        const WavepacketResult result = evolve(center, spec, s);
        if (!trace_path.empty()) {
            Sink sink(trace_path, out);
            write_trace_csv(result, sink.stream());
        }

        const ScatteringCoefficients sc = coefficients_with_limits(center, WaveVector(k0));
        std::vector<ScatteringCoefficients> probe;
        const double dk = 1.0 / (2.0 * sigma);
        for (double kk : {k0 - dk, k0 + dk}) {
            if (kk > 0.0 && kk < kPi) probe.push_back(coefficients_with_limits(center, WaveVector(kk)));
        }
        const ComparisonReport report = compare(result, sc, s, tolerance, probe);
        const double r2 = s == Side::Left ? sc.reflectance_left() : sc.reflectance_right();
        const double t2 = s == Side::Left ? sc.transmittance_left() : sc.transmittance_right();

        model.describe(out);
        out << "k0     " << g12(k0) << "  sigma " << g12(sigma) << "  N " << half_length << "  horizon "
            << g12(spec.horizon) << "  side " << side << '\n'
            << "R_est  " << fmt("%.6f", result.reflectance) << "   |r|^2 " << fmt("%.6f", r2) << "   error "
            << fmt("%.2e", report.reflectance_error) << '\n'
            << "T_est  " << fmt("%.6f", result.transmittance) << "   |t|^2 " << fmt("%.6f", t2) << "   error "
            << fmt("%.2e", report.transmittance_error) << '\n'
            << "tolerance " << g12(report.tolerance) << (report.widened ? " (widened)" : "") << "  "
            << (report.passed ? "pass" : "FAIL") << '\n'
            << "note: " << report.note << '\n';
        return report.passed ? kExitOk : kExitVerificationFailure;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scattering of PT-symmetric tight-binding centres with synthetic flux", "ptscatter"};
    app.require_subcommand(1);

    SolveCmd solve;
    SweepCmd sweep_cmd;
    ZerosCmd zeros;
    SingularitiesCmd singularities;
    VerifyCmd verify;
    WavepacketCmd wavepacket;

    CLI::App* solve_app = app.add_subcommand("solve", "Coefficients at one wave vector");
    CLI::App* sweep_app = app.add_subcommand("sweep", "Probability grid over two parameters");
    CLI::App* zeros_app = app.add_subcommand("zeros", "Transmission or reflection zeros in k");
    CLI::App* sing_app = app.add_subcommand("singularities", "Spectral-singularity locus of a ring");
    CLI::App* verify_app = app.add_subcommand("verify", "Randomized PT relation suite");
    CLI::App* wave_app = app.add_subcommand("wavepacket", "Time-domain wavepacket cross-check");
    solve.attach(*solve_app);
    sweep_cmd.attach(*sweep_app);
    zeros.attach(*zeros_app);
    singularities.attach(*sing_app);
    verify.attach(*verify_app);
    wavepacket.attach(*wave_app);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_app) return solve.run(out, err);
        if (*sweep_app) return sweep_cmd.run(out, err);
        if (*zeros_app) return zeros.run(out, err);
        if (*sing_app) return singularities.run(out, err);
        if (*verify_app) return verify.run(out, err);
        if (*wave_app) return wavepacket.run(out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SpectralSingularity& e) {
        err << "spectral singularity: " << e.what() << '\n';
        return kExitSingular;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerificationFailure;
    }
    return kExitUsage;
}

} // namespace ptscatter::cli
