#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ekfrac::cli {

enum class Command { Eval, MellinCheck, McVerify, SweepQ, ReduceCheck, List };

/// "min:max:count" or "min:max:count:log".
struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;
    bool log = false;

    static GridSpec parse(const std::string& text);
    std::vector<double> points() const;
};

/// "start:step:stop", stop included when hit up to rounding.
struct RangeSpec {
    double start = 0.0;
    double step = 1.0;
    double stop = 0.0;

    static RangeSpec parse(const std::string& text);
    std::vector<double> points() const;
};

struct RunConfig {
    Command command = Command::List;
    std::string target;  ///< operator, multiplier tag or theorem
    std::string f = "exp1";
    std::string f1;      ///< kernel density for product / ratio / RATIO

    double zeta = 1.0;
    double alpha = 1.0;
    // pathway
    double gamma = 0.0;
    double delta = 1.0;
    double eta = 1.0;
    double a = 1.0;
    double q = 0.0;
    // hypergeometric kernel
    std::vector<double> upper;
    std::vector<double> lower;
    double scale = 0.0;
    std::string mode = "x";
    std::vector<double> exponents;

    std::optional<GridSpec> grid;
    std::vector<double> us;
    std::optional<RangeSpec> q_range;
    std::vector<std::string> probes;

    std::size_t n = 100000;
    std::uint64_t seed = 42;
    std::string constant = "theorem";

    bool bare = false;
    double tol = 0.0;  ///< 0: command default
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::string output;  ///< empty: stdout

    /// Throws ekfrac::DomainError on inconsistent settings.
    void validate() const;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kValidationError = 2;
inline constexpr int kNumericalError = 3;

/// Runs one command; artifacts go to cfg.output or out, diagnostics to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ekfrac::cli
