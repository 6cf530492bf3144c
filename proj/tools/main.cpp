// blindssr: blinded sample-size re-estimation for two-arm normal-outcome
// trials. Subcommands: design | calibrate | reestimate | power | simulate |
// casebook.

#include "blindssr/io/commands.hpp"
#include "blindssr/io/config.hpp"
#include "blindssr/version.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct CliState {
    blindssr::io::RunConfig config;
    std::string config_path;
    // CLI11 needs concrete storage; moved into optionals after parsing.
    double alpha = 0, power = 0, delta = 0, pi = 0, sigma2 = 0, confidence = 0;
    double effect_size = 0, delta_true = 0, n_fin = 0, perturb_os = 0;
    std::vector<int> n_int;
    int n1_int = 0, n0_int = 0, threads = 0;
    std::uint64_t replicates = 0, seed = 0;
    std::string method, data, grid, out_path, format;
};

void add_common_options(CLI::App* cmd, CliState& s) {
    cmd->add_option("--alpha", s.alpha, "Significance level (one-sided unless --two-sided)");
    cmd->add_flag("--two-sided", s.config.two_sided,
                  "Interpret --alpha as two-sided and halve it");
    cmd->add_option("--power", s.power, "Target power 1-beta");
    cmd->add_option("--delta", s.delta, "Target treatment effect");
    cmd->add_option("--pi", s.pi, "Allocation probability P(Z=1), default 0.5");
    cmd->add_option("--sigma2", s.sigma2,
                    "Variance: planning value (design/power/simulate) or one-sample "
                    "variance (reestimate)");
    cmd->add_option("--n-int", s.n_int, "Interim total(s); repeatable for calibrate");
    cmd->add_option("--n1-int", s.n1_int, "Interim count, group 1");
    cmd->add_option("--n0-int", s.n0_int, "Interim count, group 0");
    cmd->add_option("--method", s.method,
                    "one-sample|adjusted|if|proposed|theoretical (comma list for reestimate)");
    cmd->add_option("--confidence", s.confidence, "Confidence level 1-gamma");
    cmd->add_option("--effect-size", s.effect_size, "True Delta/sigma (theoretical only)");
    cmd->add_option("--delta-true", s.delta_true, "True effect for scenarios, default delta");
    cmd->add_option("--n-fin", s.n_fin, "Final total for conditional power");
    cmd->add_option("--replicates", s.replicates, "Monte Carlo replicates");
    cmd->add_option("--seed", s.seed, "RNG seed (64-bit)");
    cmd->add_option("--data", s.data, "CSV of blinded outcomes (single column y)");
    cmd->add_option("--grid", s.grid, "Grid sweep JSON (simulate)");
    cmd->add_option("--out", s.out_path, "Write the report to a file");
    cmd->add_option("--format", s.format, "table|json|csv (default table)");
    cmd->add_flag("--full-precision", s.config.full_precision,
                  "Render variances at full precision instead of 3 significant digits");
    cmd->add_flag("--floor", s.config.floor_at_pilot,
                  "Floor re-estimated totals at n_int");
    cmd->add_flag("--nfin-only", s.config.nfin_only,
                  "Simulate the sample-size distribution only (no trial outcomes)");
    cmd->add_option("--perturb-os", s.perturb_os,
                    "Casebook self-check: scale fixture variances")
        ->group(""); // hidden
    cmd->add_option("--threads", s.threads,
                    "Worker threads (default: BLINDSSR_THREADS or hardware)");
    cmd->add_option("--config", s.config_path, "JSON config file mirroring the flags");
}

void collect(CLI::App* cmd, CliState& s) {
    const auto took = [&](const char* name) { return cmd->count(name) > 0; };
    if (took("--alpha")) s.config.alpha = s.alpha;
    if (took("--power")) s.config.power = s.power;
    if (took("--delta")) s.config.delta = s.delta;
    if (took("--pi")) s.config.pi = s.pi;
    if (took("--sigma2")) s.config.sigma2 = s.sigma2;
    if (took("--n-int")) s.config.n_int = s.n_int;
    if (took("--n1-int")) s.config.n1_int = s.n1_int;
    if (took("--n0-int")) s.config.n0_int = s.n0_int;
    if (took("--method")) s.config.method = s.method;
    if (took("--confidence")) s.config.confidence = s.confidence;
    if (took("--effect-size")) s.config.effect_size = s.effect_size;
    if (took("--delta-true")) s.config.delta_true = s.delta_true;
    if (took("--n-fin")) s.config.n_fin = s.n_fin;
    if (took("--replicates")) s.config.replicates = s.replicates;
    if (took("--seed")) s.config.seed = s.seed;
    if (took("--data")) s.config.data_path = s.data;
    if (took("--grid")) s.config.grid_path = s.grid;
    if (took("--out")) s.config.out_path = s.out_path;
    if (took("--format")) s.config.format = s.format;
    if (took("--perturb-os")) s.config.perturb_os = s.perturb_os;
    if (took("--threads")) s.config.threads = s.threads;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blinded sample-size re-estimation for two-arm normal-outcome trials"};
    app.set_version_flag("--version", blindssr::version_string());
    app.require_subcommand(1);

    CliState state;
    const char* commands[] = {"design", "calibrate", "reestimate", "power", "simulate",
                              "casebook"};
    const char* descriptions[] = {
        "Design-stage sample size for a postulated variance",
        "Solve the confidence level 1-gamma attaining the target power",
        "Blinded interim re-estimation from outcomes or a supplied variance",
        "Closed-form asymptotic power quantities",
        "Monte Carlo operating characteristics (single cell or --grid sweep)",
        "Run the built-in clinical case studies and diff against published values"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        add_common_options(sub, state);
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (int i = 0; i < 6; ++i) {
        if (subs[i]->parsed()) {
            state.config.command = commands[i];
            collect(subs[i], state);
            break;
        }
    }

    if (!state.config_path.empty()) {
        std::ifstream f(state.config_path);
        if (!f) {
            std::cerr << "error: cannot open config file: " << state.config_path << '\n';
            return blindssr::io::kExitValidation;
        }
        std::ostringstream buf;
        buf << f.rdbuf();
        try {
            const blindssr::io::RunConfig file_config =
                blindssr::io::run_config_from_json_string(buf.str());
            blindssr::io::merge_missing(state.config, file_config);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return blindssr::io::kExitValidation;
        }
    }

    return blindssr::io::run_command(state.config, std::cout, std::cerr);
}
