// fmx: run the analytic Maxwell test cases through the exponential propagator.
//
//   fmx run --config standing.json [--out report.json] [--csv]
//   fmx drift --config standing.json --t-max 10000 --samples 100
//   fmx convergence --config standing.json --n-list 8,16,32
//
// Exit codes: 0 success, 2 configuration error, 3 numerical flag.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmx/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
    std::string config_path;
    std::string out_path;
    bool csv = false;
    std::string case_name;
    int n = 0;
    std::vector<double> t_end;
};

fmx::RunConfig load(const Overrides& o) {
    std::ifstream in(o.config_path);
    if (!in) throw fmx::ConfigError("config: cannot open '" + o.config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    auto j = nlohmann::json::parse(text.str(), nullptr, false);
    if (j.is_discarded()) throw fmx::ConfigError("config: '" + o.config_path + "' is not valid JSON");
    if (!o.case_name.empty()) {
        if (j.is_object() && j.value("case", "") != o.case_name) {
            // a different case invalidates case-specific fields of the file
            for (const char* key : {"k_x", "k_y", "k_z", "x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"}) j.erase(key);
        }
        j["case"] = o.case_name;
    }
    if (o.n != 0) j["n_x"] = j["n_y"] = j["n_z"] = o.n;
    if (!o.t_end.empty()) j["t_end"] = o.t_end;
    return fmx::RunConfig::from_json(j);
}

void emit(const Overrides& o, const std::string& command, const std::vector<fmx::Record>& records,
          const std::string& note = {}) {
    std::ofstream file;
    if (!o.out_path.empty()) {
        file.open(o.out_path);
        if (!file) throw fmx::ConfigError("out: cannot write '" + o.out_path + "'");
    }
    std::ostream& os = o.out_path.empty() ? std::cout : file;
    if (o.csv)
        fmx::write_csv(os, records);
    else
        fmx::write_json(os, command, records, note);
}

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw fmx::ConfigError("n-list: '" + item + "' is not an integer");
        }
    }
    return out;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
    cmd->add_flag("--csv", o.csv, "emit the flat CSV schema instead of JSON");
    cmd->add_option("--case", o.case_name, "override the case")->check(CLI::IsMember({"standing", "traveling"}));
    cmd->add_option("--n", o.n, "override n_x = n_y = n_z");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential Fourier pseudospectral Maxwell propagator"};
    app.require_subcommand(1);

    Overrides o;
    auto* run = app.add_subcommand("run", "propagate to each t_end and report errors and invariant drifts");
    add_common(run, o);
    run->add_option("--t-end", o.t_end, "override t_end (repeatable)");

    double t_max = 0.0;
    int samples = 0;
    auto* drift = app.add_subcommand("drift", "invariant drift at evenly spaced times up to t_max");
    add_common(drift, o);
    drift->add_option("--t-max", t_max, "final time")->required();
    drift->add_option("--samples", samples, "number of sample times (>= 2)")->required();

    std::string n_list;
    auto* conv = app.add_subcommand("convergence", "repeat the run for several grid sizes");
    add_common(conv, o);
    conv->add_option("--t-end", o.t_end, "override t_end (repeatable)");
    conv->add_option("--n-list", n_list, "comma separated grid sizes, e.g. 8,16,32")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const auto cfg = load(o);
        if (*run) {
            emit(o, "run", fmx::run(cfg));
        } else if (*drift) {
            emit(o, "drift", fmx::drift(cfg, t_max, samples));
        } else {
            emit(o, "convergence", fmx::convergence(cfg, parse_n_list(n_list)), fmx::kConvergenceNote);
        }
    } catch (const fmx::ImaginaryResidueError& e) {
        std::cerr << "fmx: numerical flag: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const fmx::Error& e) {
        std::cerr << "fmx: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
