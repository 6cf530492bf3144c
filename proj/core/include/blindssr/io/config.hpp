#ifndef BLINDSSR_IO_CONFIG_HPP
#define BLINDSSR_IO_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blindssr::io {

/// Every validation problem found, aggregated into one failure.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::vector<std::string>& problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems);
    std::vector<std::string> problems_;
};

/// Flat parameter set shared by all subcommands; the JSON config file mirrors
/// this struct field-for-field. Unset CLI fields inherit config-file values.
struct RunConfig {
    std::string command;

    std::optional<double> alpha;
    bool two_sided = false;
    std::optional<double> power;
    std::optional<double> delta;
    std::optional<double> pi;
    std::optional<double> sigma2; // design/scenario variance, or supplied os-variance for reestimate
    std::vector<int> n_int;       // repeatable for calibrate
    std::optional<int> n1_int;
    std::optional<int> n0_int;
    std::optional<std::string> method; // comma-separated list accepted by reestimate
    std::optional<double> confidence;
    std::optional<double> effect_size;
    std::optional<double> delta_true; // scenario effect; defaults to delta
    std::optional<double> n_fin;      // conditional power input
    std::optional<std::uint64_t> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> data_path;
    std::optional<std::string> grid_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format; // table|json|csv, default table
    bool full_precision = false;
    bool floor_at_pilot = false;
    bool nfin_only = false;           // simulate: sample-size distribution mode
    std::optional<double> perturb_os; // casebook self-check: multiply fixture os-variance
    int threads = 0;
};

/// Parse a JSON config file into a RunConfig (command may stay empty).
RunConfig run_config_from_json_string(const std::string& text);
/// Serialize (only set fields are emitted).
std::string run_config_to_json_string(const RunConfig& config);

/// Fill unset fields of `base` from `fallback` (CLI wins over config file).
void merge_missing(RunConfig& base, const RunConfig& fallback);

/// Effective one-sided alpha (halved when two_sided is set).
double effective_alpha(const RunConfig& config);

} // namespace blindssr::io

#endif
