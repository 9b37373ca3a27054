#ifndef MAP2FIT_TOOLS_CLI_HPP
#define MAP2FIT_TOOLS_CLI_HPP

#include "map2fit/map2fit.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace map2fit::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numerical = 1;
inline constexpr int exit_usage = 2;

// Bad flags, unreadable files, malformed input: exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class SpecKind { Canonical, Redundant, Matrices };

struct ModelSpec {
  SpecKind kind = SpecKind::Matrices;
  std::string label;
  std::optional<CanonicalMap2> canonical;
  std::optional<RedundantMap2> redundant;
  RateMatrixPair matrices{};
};

// key = value lines, '#' comments. Keys: representation, label; canonical
// form x y u v; redundant lambda1 lambda2 p120 p111 p210 p211; matrices
// d0 and d1 as four comma-separated row-major entries.
ModelSpec parse_model_spec(std::string_view text);
ModelSpec read_model_spec(const std::filesystem::path &path);
std::string format_model_spec(const ModelSpec &spec);

// One positive decimal per line; blank lines and '#' comments skipped.
std::vector<double> parse_sample(std::string_view text);
std::vector<double> read_sample(const std::filesystem::path &path);

// key = value overrides of EstimationConfig: tau, rate_lower, rate_upper,
// jump_lower, jump_upper, multistarts, seed, step_tolerance,
// objective_tolerance, max_iterations, initial_step, restarts.
void apply_config(EstimationConfig &config, std::string_view text);

nlohmann::json to_json(const MomentSummary &m);
nlohmann::json to_json(const CanonicalMap2 &c);
nlohmann::json to_json(const RedundantMap2 &r);
nlohmann::json to_json(const RateMatrixPair &m);
nlohmann::json to_json(const LogLikelihood &ll);
nlohmann::json to_json(const KlEstimate &k);
nlohmann::json to_json(const FitResult &f);
nlohmann::json to_json(const EstimationConfig &c);

// All three representations of a fitted model; a representation that
// cannot be produced is null with a note.
nlohmann::json representations(const RateMatrixPair &m);

// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace map2fit::cli

#endif
