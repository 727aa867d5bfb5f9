// gchain: validate chain specs and run entropy/rate/spectrum/entanglement
// analyses on their finite sections.
//
// Exit codes: 0 success (validate: chain valid); 1 parse, configuration or
// operational failure; 2 chain or section invalid; 3 validity unknown
// (mixtures: sufficient test failed, sections clean); 4 entropy
// monotonicity violated.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gchain/chains.hpp"
#include "gchain/entanglement.hpp"
#include "gchain/entropy_rate.hpp"
#include "gchain/errors.hpp"
#include "gchain/gmatrix.hpp"
#include "gchain/spec_io.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitNonMonotone = 4;

struct Options {
    std::string spec_path;
    int n_max = 0;
    int quad_points = 1024;
    std::string out_path;
    std::string format; // empty = per-command default
    double sym_tol = gchain::kDefaultSymTol;
    double psd_tol = gchain::kDefaultPsdTol;
    double mono_tol = gchain::kDefaultMonoTol;
    double tol = gchain::kDefaultPsdTol;
};

Eigen::Index row_cap_from_env() {
    const char* raw = std::getenv("GCHAIN_SIZE_CAP");
    if (raw == nullptr || *raw == '\0') return gchain::kDefaultRowCap;
    char* end = nullptr;
    const long value = std::strtol(raw, &end, 10);
    if (end == nullptr || *end != '\0' || value < 2)
        throw std::invalid_argument(std::string("GCHAIN_SIZE_CAP: expected a positive row count, got \"") +
                                    raw + "\"");
    return static_cast<Eigen::Index>(value);
}

void emit(const Options& opt, const std::string& payload) {
    if (opt.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot open output file " + opt.out_path);
    out << payload;
}

std::string pick_format(const Options& opt, const std::string& fallback) {
    return opt.format.empty() ? fallback : opt.format;
}

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ordered_json check_json(const gchain::GMatrixCheck& check) {
    ordered_json j;
    j["ok"] = check.ok;
    j["min_eigenvalue"] = check.min_eigenvalue;
    j["threshold"] = check.threshold;
    return j;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt) {
    if (pick_format(opt, "json") != "json")
        throw std::invalid_argument("validate supports only --format json");
    const gchain::ChainSpec spec = gchain::load_chain_spec(opt.spec_path);
    const Eigen::Index cap = row_cap_from_env();

    ordered_json report;
    report["kind"] = to_string(spec.kind());
    report["k"] = spec.site_modes();
    report["n_max"] = opt.n_max;

    std::string status;
    if (const auto* ex = spec.as_exchangeable()) {
        const gchain::ExchangeableCheck c =
            gchain::exchangeable_criterion(ex->site, ex->coupling, opt.tol, opt.sym_tol);
        ordered_json cj;
        cj["ok"] = c.ok;
        cj["coupling_asymmetry"] = c.coupling_asymmetry;
        cj["coupling_min_eigenvalue"] = c.coupling_min_eigenvalue;
        cj["gap"] = check_json(c.gap);
        cj["reasons"] = c.failures;
        report["criterion"] = std::move(cj);
        status = c.ok ? "valid" : "invalid";
    } else if (const auto* bd = spec.as_banded()) {
        const gchain::BandedCheck c =
            gchain::banded_criterion(bd->site, bd->coupling, opt.tol, opt.sym_tol);
        ordered_json cj;
        cj["ok"] = c.ok;
        cj["sum_edge"] = check_json(c.sum_edge);
        cj["diff_edge"] = check_json(c.diff_edge);
        report["criterion"] = std::move(cj);
        status = c.ok ? "valid" : "invalid";
    } else {
        const gchain::MixtureCheck c =
            gchain::mixture_criterion(*spec.as_mixture(), opt.tol, opt.sym_tol);
        ordered_json cj;
        cj["status"] =
            c.status == gchain::MixtureStatus::Valid ? "sufficient-pass" : "unknown";
        cj["failing_bands"] = c.failing_bands;
        ordered_json comps = ordered_json::array();
        for (const gchain::BandedCheck& b : c.component_checks) {
            ordered_json bj;
            bj["ok"] = b.ok;
            bj["sum_edge"] = check_json(b.sum_edge);
            bj["diff_edge"] = check_json(b.diff_edge);
            comps.push_back(std::move(bj));
        }
        cj["components"] = std::move(comps);
        report["criterion"] = std::move(cj);
        status = c.status == gchain::MixtureStatus::Valid ? "valid" : "unknown";
    }

    ordered_json sections = ordered_json::array();
    bool all_sections_ok = true;
    for (const gchain::SectionCheck& s :
         gchain::check_sections(spec, opt.n_max, opt.tol, cap)) {
        ordered_json sj;
        sj["n"] = s.sites;
        sj["ok"] = s.check.ok;
        sj["min_eigenvalue"] = s.check.min_eigenvalue;
        sections.push_back(std::move(sj));
        all_sections_ok = all_sections_ok && s.check.ok;
    }
    report["sections"] = std::move(sections);

    // A failing section is conclusive regardless of what the closed-form
    // criterion could say.
    if (!all_sections_ok) status = "section-invalid";
    report["status"] = status;

    emit(opt, report.dump(2) + "\n");
    if (status == "valid") return kExitOk;
    if (status == "unknown") return kExitUnknown;
    return kExitInvalid;
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

int cmd_entropy(const Options& opt) {
    const std::string format = pick_format(opt, "csv");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("entropy supports --format csv or json");
    const gchain::ChainSpec spec = gchain::load_chain_spec(opt.spec_path);

    const Eigen::Index cap = row_cap_from_env(); // config errors exit 1, not 2
    gchain::EntropyTrace trace;
    try {
        trace = gchain::entropy_trace(spec, opt.n_max, opt.psd_tol, opt.mono_tol, cap);
    } catch (const std::invalid_argument& err) {
        std::cerr << "gchain: " << err.what() << "\n";
        return kExitInvalid;
    }

    if (format == "csv") {
        emit(opt, gchain::entropy_trace_csv(trace));
    } else {
        ordered_json j;
        ordered_json points = ordered_json::array();
        for (const gchain::EntropyPoint& p : trace.points) {
            ordered_json pj;
            pj["n"] = p.n;
            pj["S_n"] = p.entropy;
            pj["rate"] = p.rate;
            pj["delta"] = p.delta;
            points.push_back(std::move(pj));
        }
        j["points"] = std::move(points);
        j["violations"] = trace.violations;
        emit(opt, j.dump(2) + "\n");
    }
    for (const std::string& v : trace.violations) std::cerr << "gchain: " << v << "\n";
    return trace.monotone() ? kExitOk : kExitNonMonotone;
}

// ---------------------------------------------------------------------------
// rate
// ---------------------------------------------------------------------------

std::vector<gchain::BandWeight> chain_band_weights(const gchain::ChainSpec& spec) {
    if (const auto* bd = spec.as_banded()) return {gchain::BandWeight{bd->band, 1.0}};
    const auto* mx = spec.as_mixture();
    std::vector<gchain::BandWeight> weights;
    weights.reserve(mx->bands.size());
    for (const gchain::MixtureBand& b : mx->bands)
        weights.push_back(gchain::BandWeight{b.band, b.weight});
    return weights;
}

int cmd_rate(const Options& opt) {
    if (pick_format(opt, "json") != "json")
        throw std::invalid_argument("rate supports only --format json");
    const gchain::ChainSpec spec = gchain::load_chain_spec(opt.spec_path);
    const Eigen::Index cap = row_cap_from_env();

    ordered_json report;
    if (const auto* ex = spec.as_exchangeable()) {
        const gchain::ExchangeableCheck c =
            gchain::exchangeable_criterion(ex->site, ex->coupling, opt.tol, opt.sym_tol);
        if (!c.ok) {
            std::cerr << "gchain: chain is not a valid exchangeable chain:\n";
            for (const std::string& f : c.failures) std::cerr << "  " << f << "\n";
            return kExitInvalid;
        }
        report["method"] = "exact";
        report["rate"] = gchain::exchangeable_rate(ex->site, ex->coupling, opt.psd_tol);
    } else {
        const gchain::SymBlock* site = nullptr;
        const gchain::SymBlock* coupling = nullptr;
        if (const auto* bd = spec.as_banded()) {
            site = &bd->site;
            coupling = &bd->coupling;
        } else {
            const auto* mx = spec.as_mixture();
            if (mx->bands.empty())
                throw std::invalid_argument("rate: mixture has no bands; add at least one");
            site = &mx->site;
            coupling = &mx->bands.front().coupling;
            for (const gchain::MixtureBand& b : mx->bands) {
                const double dev =
                    (b.coupling.matrix() - coupling->matrix()).cwiseAbs().maxCoeff();
                if (dev > opt.sym_tol * (1.0 + coupling->matrix().cwiseAbs().maxCoeff()))
                    throw std::invalid_argument(
                        "rate: the integral form needs one common coupling block across "
                        "bands; band " + std::to_string(b.band) + " differs by " + g17(dev));
            }
        }
        const gchain::QuadratureReport q =
            gchain::mixture_rate(*site, *coupling, chain_band_weights(spec),
                                 opt.quad_points, opt.psd_tol);
        report["method"] = "kms_quadrature";
        report["rate"] = q.estimate;
        report["error_indicator"] = q.error_indicator;
        report["quad_points"] = q.quad_points;
        report["truncated_tail_mass"] = q.truncated_tail_mass;
    }

    const gchain::EntropyTrace trace =
        gchain::entropy_trace(spec, opt.n_max, opt.psd_tol, opt.mono_tol, cap);
    report["n_max"] = opt.n_max;
    report["finite_n_rate"] = trace.points.back().rate;

    emit(opt, report.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

int cmd_spectrum(const Options& opt) {
    const std::string format = pick_format(opt, "csv");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("spectrum supports --format csv or json");
    const gchain::ChainSpec spec = gchain::load_chain_spec(opt.spec_path);
    if (spec.as_exchangeable() != nullptr)
        throw std::invalid_argument("spectrum requires a banded or mixture chain");
    const std::vector<gchain::BandWeight> weights = chain_band_weights(spec);

    const std::vector<double> lambda = gchain::toeplitz_spectrum(weights, opt.n_max);
    std::vector<int> schedule;
    for (int n = 32; n <= opt.n_max; n *= 2) schedule.push_back(n);
    if (schedule.empty()) schedule.push_back(opt.n_max);

    std::vector<double> distances;
    distances.reserve(schedule.size());
    for (int n : schedule)
        distances.push_back(gchain::spectral_measure_distance(weights, n));

    if (format == "csv") {
        std::string payload = "r,lambda\n";
        for (std::size_t r = 0; r < lambda.size(); ++r)
            payload += std::to_string(r + 1) + "," + g17(lambda[r]) + "\n";
        payload += "\nn,ks_distance\n";
        for (std::size_t i = 0; i < schedule.size(); ++i)
            payload += std::to_string(schedule[i]) + "," + g17(distances[i]) + "\n";
        emit(opt, payload);
    } else {
        ordered_json j;
        j["n"] = opt.n_max;
        j["eigenvalues"] = lambda;
        ordered_json trend = ordered_json::array();
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            ordered_json tj;
            tj["n"] = schedule[i];
            tj["ks_distance"] = distances[i];
            trend.push_back(std::move(tj));
        }
        j["trend"] = std::move(trend);
        emit(opt, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// entangle
// ---------------------------------------------------------------------------

int cmd_entangle(const Options& opt) {
    if (pick_format(opt, "json") != "json")
        throw std::invalid_argument("entangle supports only --format json");
    const gchain::ChainSpec spec = gchain::load_chain_spec(opt.spec_path);
    const gchain::StationaryPairFamily family =
        gchain::family_from_chain(spec, opt.sym_tol);

    std::vector<int> partners;
    for (int j = 2; j <= std::max(2, opt.n_max); ++j) partners.push_back(j);
    const std::vector<gchain::PairVerdict> verdicts =
        gchain::pair_verdicts(family, partners, opt.tol);

    ordered_json report = ordered_json::array();
    for (const gchain::PairVerdict& v : verdicts) {
        ordered_json vj;
        vj["pair"] = {1, v.partner};
        vj["c"] = v.correlation;
        vj["window"] = {v.window.lower, v.window.upper};
        vj["verdict"] = to_string(v.simon.verdict);
        vj["margin"] = v.simon.margin;
        vj["strong_coupling"] = v.strong_coupling;
        report.push_back(std::move(vj));
    }
    emit(opt, report.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian chain sections: validity, entropy, spectra, entanglement"};
    app.require_subcommand(1);

    Options opt;
    struct Command {
        CLI::App* sub;
        int default_n_max;
        int (*run)(const Options&);
    };
    const std::vector<Command> commands = {
        {app.add_subcommand("validate", "Check chain validity (criterion + sections)"), 8,
         cmd_validate},
        {app.add_subcommand("entropy", "Entropy trace S_n, rate and increments"), 64,
         cmd_entropy},
        {app.add_subcommand("rate", "Entropy rate (exact or quadrature)"), 64, cmd_rate},
        {app.add_subcommand("spectrum", "Toeplitz band spectra and their limit law"), 256,
         cmd_spectrum},
        {app.add_subcommand("entangle", "Pair entanglement verdicts (1, j)"), 8,
         cmd_entangle},
    };

    for (const Command& c : commands) {
        c.sub->add_option("--spec", opt.spec_path, "Chain spec JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        c.sub->add_option("--n-max", opt.n_max, "Largest section size / partner site")
            ->default_val(c.default_n_max)
            ->check(CLI::Range(1, 1 << 20));
        c.sub->add_option("--quad-points", opt.quad_points, "Quadrature nodes (>= 64)")
            ->default_val(1024)
            ->check(CLI::Range(64, 1 << 24));
        c.sub->add_option("--out", opt.out_path, "Write the report here instead of stdout");
        c.sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        c.sub->add_option("--sym-tol", opt.sym_tol, "Symmetry tolerance")
            ->default_val(gchain::kDefaultSymTol)
            ->check(CLI::PositiveNumber);
        c.sub->add_option("--psd-tol", opt.psd_tol, "Positive-definiteness tolerance")
            ->default_val(gchain::kDefaultPsdTol)
            ->check(CLI::PositiveNumber);
        c.sub->add_option("--mono-tol", opt.mono_tol, "Monotonicity tolerance")
            ->default_val(gchain::kDefaultMonoTol)
            ->check(CLI::PositiveNumber);
        c.sub->add_option("--tol", opt.tol, "Criterion / verdict tolerance")
            ->default_val(gchain::kDefaultPsdTol)
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        // Collapse the library's assorted nonzero codes onto the single
        // operational-error exit so callers see a stable contract.
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        for (const Command& c : commands)
            if (c.sub->parsed()) return c.run(opt);
        return kExitError;
    } catch (const std::invalid_argument& err) {
        std::cerr << "gchain: " << err.what() << "\n";
        return kExitError;
    } catch (const gchain::NumericFailure& err) {
        std::cerr << "gchain: numeric failure: " << err.what() << "\n";
        return kExitError;
    } catch (const gchain::ResourceLimit& err) {
        std::cerr << "gchain: " << err.what() << "\n";
        return kExitError;
    }
}
