#pragma once

// Experiment driver: JSON run configuration, single-step runs, long-time drift
// series, resolution sweeps, and JSON/CSV emitters.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmx/analytic.hpp"
#include "fmx/diagnostics.hpp"
#include "fmx/errors.hpp"
#include "fmx/grid.hpp"
#include "fmx/propagator.hpp"

namespace fmx {

struct RunConfig {
    WaveKind kind = WaveKind::standing;
    std::optional<DomainSpec> domain;  // defaults per case
    int n_x = 8, n_y = 8, n_z = 8;
    double mu = 1.0, eps = 1.0;
    int k_x = 1, k_y = 2, k_z = -3;
    std::vector<double> t_end{1.0};
    int report_axis = 1;

    AnalyticCase analytic_case() const {
        return kind == WaveKind::standing ? AnalyticCase::standing(k_x, k_y, k_z, MediumParams{mu, eps})
                                          : AnalyticCase::traveling();
    }

    DomainSpec resolved_domain() const { return domain ? *domain : analytic_case().default_domain(); }

    Axis axis() const { return static_cast<Axis>(report_axis - 1); }

    /// Throws ConfigError naming the offending field.
    void validate() const {
        for (auto [name, n] : {std::pair{"n_x", n_x}, std::pair{"n_y", n_y}, std::pair{"n_z", n_z}})
            if (n < 2 || n % 2 != 0) throw ConfigError(std::string(name) + ": must be even and >= 2, got " + std::to_string(n));
        if (!(std::isfinite(mu) && mu > 0)) throw ConfigError("mu: must be finite and positive");
        if (!(std::isfinite(eps) && eps > 0)) throw ConfigError("eps: must be finite and positive");
        if (report_axis < 1 || report_axis > 3) throw ConfigError("report_axis: must be 1, 2 or 3");
        if (t_end.empty()) throw ConfigError("t_end: needs at least one value");
        for (double t : t_end)
            if (!std::isfinite(t)) throw ConfigError("t_end: values must be finite");
        if (kind == WaveKind::standing) {
            if (k_x == 0 && k_y == 0 && k_z == 0) throw ConfigError("k_x: k must be nonzero");
            if (k_x + k_y + k_z != 0) throw ConfigError("k_x: standing wave requires k_x + k_y + k_z = 0");
        } else if (mu != 1.0 || eps != 1.0) {
            throw ConfigError(std::string(mu != 1.0 ? "mu" : "eps") + ": traveling wave is defined for mu = eps = 1");
        }
        if (domain) {
            try {
                GridSpec(*domain, n_x, n_y, n_z);
            } catch (const Error& e) {
                throw ConfigError(std::string("domain: ") + e.what());
            }
        }
    }

    static RunConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
        static const std::set<std::string> known{"case", "x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi",
                                                 "n_x",  "n_y",  "n_z",  "mu",   "eps",  "k_x",  "k_y",
                                                 "k_z",  "t_end", "report_axis"};
        for (const auto& item : j.items())
            if (!known.count(item.key())) throw ConfigError(item.key() + ": unknown field");

        RunConfig c;
        auto number = [&](const char* key, auto& out) {
            if (!j.contains(key)) return false;
            const auto& v = j.at(key);
            using T = std::remove_reference_t<decltype(out)>;
            if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": must be an integer");
            } else {
                if (!v.is_number()) throw ConfigError(std::string(key) + ": must be a number");
            }
            out = v.get<T>();
            return true;
        };

        if (!j.contains("case")) throw ConfigError("case: missing (standing or traveling)");
        const auto& kc = j.at("case");
        if (!kc.is_string()) throw ConfigError("case: must be a string");
        const auto name = kc.get<std::string>();
        if (name == "standing")
            c.kind = WaveKind::standing;
        else if (name == "traveling")
            c.kind = WaveKind::traveling;
        else
            throw ConfigError("case: unknown case '" + name + "'");

        const char* bounds[6] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
        int present = 0;
        for (const char* b : bounds) present += j.contains(b) ? 1 : 0;
        if (present != 0) {
            if (present != 6) throw ConfigError("x_lo: domain bounds must be given all together or not at all");
            DomainSpec d{};
            number("x_lo", d.x_lo);
            number("x_hi", d.x_hi);
            number("y_lo", d.y_lo);
            number("y_hi", d.y_hi);
            number("z_lo", d.z_lo);
            number("z_hi", d.z_hi);
            c.domain = d;
        }
        number("n_x", c.n_x);
        number("n_y", c.n_y);
        number("n_z", c.n_z);
        number("mu", c.mu);
        number("eps", c.eps);
        bool has_k = false;
        has_k |= number("k_x", c.k_x);
        has_k |= number("k_y", c.k_y);
        has_k |= number("k_z", c.k_z);
        if (has_k && c.kind == WaveKind::traveling) throw ConfigError("k_x: wave numbers apply to the standing case only");
        number("report_axis", c.report_axis);

        if (j.contains("t_end")) {
            const auto& t = j.at("t_end");
            c.t_end.clear();
            if (t.is_number()) {
                c.t_end.push_back(t.get<double>());
            } else if (t.is_array()) {
                for (const auto& v : t) {
                    if (!v.is_number()) throw ConfigError("t_end: list entries must be numbers");
                    c.t_end.push_back(v.get<double>());
                }
            } else {
                throw ConfigError("t_end: must be a number or a list of numbers");
            }
        }
        c.validate();
        return c;
    }

    static RunConfig from_text(const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return from_json(j);
    }
};

/// One row of output: a single propagation from t = 0 to t_end on one grid.
struct Record {
    WaveKind kind = WaveKind::standing;
    int nx = 0, ny = 0, nz = 0;
    double t_end = 0.0;
    ErrorReport error;
    DriftReport drift;
    int report_axis = 1;
    double max_imag = 0.0;
};

namespace detail {

struct Prepared {
    AnalyticCase ac;
    GridPtr grid;
    PhysicalState initial;
    SpectralState initial_hat;
    InvariantReport initial_report;
};

inline Prepared prepare(const RunConfig& cfg) {
    cfg.validate();
    Prepared p{cfg.analytic_case(), build_grid(cfg.resolved_domain(), cfg.n_x, cfg.n_y, cfg.n_z), {}, {}, {}};
    p.initial = sample_initial(p.ac, p.grid);
    p.initial_hat = to_spectral(p.initial);
    p.initial_report = invariants(p.initial);
    return p;
}

// Propagates the prepared initial state to t. The timed section is the full
// propagate call: coefficients, step and the inverse transform.
inline Record evaluate(const RunConfig& cfg, const Prepared& p, double t, bool reuse_forward) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    PhysicalState final_state;
    double max_imag = 0.0;
    if (t == 0.0) {
        final_state = propagate(p.initial, 0.0);
    } else {
        const auto pc = build_coefficients(p.grid, p.ac.medium, t);
        const SpectralState hat = reuse_forward ? step(p.initial_hat, pc) : step(to_spectral(p.initial), pc);
        auto realized = realize_state(hat);
        max_imag = realized.max_imag;
        if (!realized.ok)
            throw ImaginaryResidueError("imaginary residue " + std::to_string(realized.max_imag) + " at t = " +
                                            std::to_string(t),
                                        realized.max_imag, kImagResidueTolerance * max_abs(realized.state));
        final_state = std::move(realized.state);
    }
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();

    Record r;
    r.kind = p.ac.kind;
    r.nx = p.grid->nx();
    r.ny = p.grid->ny();
    r.nz = p.grid->nz();
    r.t_end = t;
    r.error = error_norms(final_state, p.ac);
    r.error.cpu_seconds = seconds;
    r.drift = relative_change(p.initial_report, invariants(final_state));
    r.report_axis = cfg.report_axis;
    r.max_imag = max_imag;
    return r;
}

}  // namespace detail

/// One record per t_end, each a single propagation from the sampled initial state.
inline std::vector<Record> run(const RunConfig& cfg) {
    const auto p = detail::prepare(cfg);
    std::vector<Record> out;
    for (double t : cfg.t_end) out.push_back(detail::evaluate(cfg, p, t, false));
    return out;
}

/// Records at t_i = i * t_max / samples for i = 1..samples, each one step from t = 0.
inline std::vector<Record> drift(const RunConfig& cfg, double t_max, int samples) {
    if (samples < 2) throw ConfigError("samples: must be >= 2");
    if (!std::isfinite(t_max)) throw ConfigError("t_max: must be finite");
    const auto p = detail::prepare(cfg);
    std::vector<Record> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 1; i <= samples; ++i) out.push_back(detail::evaluate(cfg, p, i * t_max / samples, true));
    return out;
}

/// run() repeated with n_x = n_y = n_z = N for every N in the list.
inline std::vector<Record> convergence(const RunConfig& cfg, const std::vector<int>& n_list) {
    if (n_list.empty()) throw ConfigError("n-list: needs at least one value");
    std::vector<Record> out;
    for (int n : n_list) {
        RunConfig c = cfg;
        c.n_x = c.n_y = c.n_z = n;
        for (auto& r : run(c)) out.push_back(std::move(r));
    }
    return out;
}

inline constexpr const char* kConvergenceNote =
    "analytic cases are band limited: once resolved the error sits at the roundoff floor, "
    "so no algebraic rate is fitted";

/// %.16g, with non-finite values as null.
inline std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "case",  "nx",    "ny",    "nz",    "t_end", "l2",    "linf",  "re_e1", "re_e2",
        "re_e3", "re_e4", "re_e5", "re_e6", "re_h1", "re_h2", "re_m1", "re_m2", "div_e",
        "div_h", "cpu_seconds"};
    return cols;
}

namespace detail {

// Scalar drifts in CSV column order, axis-indexed ones taken at the report axis.
inline std::vector<std::pair<std::string, Drift>> reported_drifts(const Record& r) {
    const auto k = static_cast<std::size_t>(r.report_axis - 1);
    const auto& d = r.drift.drift;
    return {{"re_e1", d.e1},    {"re_e2", d.e2},    {"re_e3", d.e3[k]}, {"re_e4", d.e4[k]},
            {"re_e5", d.e5[k]}, {"re_e6", d.e6[k]}, {"re_h1", d.h1},    {"re_h2", d.h2},
            {"re_m1", d.m1[k]}, {"re_m2", d.m2[k]}};
}

inline std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<Record>& records) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : records) {
        os << wave_kind_name(r.kind) << ',' << r.nx << ',' << r.ny << ',' << r.nz << ',' << format_number(r.t_end)
           << ',' << format_number(r.error.l2) << ',' << format_number(r.error.linf);
        for (const auto& [name, d] : detail::reported_drifts(r)) os << ',' << format_number(d.value);
        os << ',' << format_number(r.drift.div_e) << ',' << format_number(r.drift.div_h) << ','
           << format_number(r.error.cpu_seconds) << '\n';
    }
}

/// {"command": ..., "records": [...]} with the CSV fields plus per-record detail.
/// `near_zero` lists drifts reported as absolute change.
inline void write_json(std::ostream& os, const std::string& command, const std::vector<Record>& records,
                       const std::string& note = {}) {
    os << "{\n  \"command\": " << detail::quoted(command) << ",\n";
    if (!note.empty()) os << "  \"note\": " << detail::quoted(note) << ",\n";
    os << "  \"records\": [";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << (i ? ",\n" : "\n") << "    {";
        os << "\"case\": " << detail::quoted(wave_kind_name(r.kind)) << ", \"nx\": " << r.nx << ", \"ny\": " << r.ny
           << ", \"nz\": " << r.nz << ", \"t_end\": " << format_number(r.t_end)
           << ", \"l2\": " << format_number(r.error.l2) << ", \"linf\": " << format_number(r.error.linf);
        std::vector<std::string> near_zero;
        for (const auto& [name, d] : detail::reported_drifts(r)) {
            os << ", \"" << name << "\": " << format_number(d.value);
            if (d.absolute) near_zero.push_back(name);
        }
        os << ", \"div_e\": " << format_number(r.drift.div_e) << ", \"div_h\": " << format_number(r.drift.div_h)
           << ", \"cpu_seconds\": " << format_number(r.error.cpu_seconds) << ", \"report_axis\": " << r.report_axis
           << ", \"max_imag\": " << format_number(r.max_imag) << ", \"near_zero\": [";
        for (std::size_t n = 0; n < near_zero.size(); ++n) os << (n ? ", " : "") << detail::quoted(near_zero[n]);
        os << "]}";
    }
    os << "\n  ]\n}\n";
}

}  // namespace fmx
