///
/// \file run_config.hpp
///
/// Experiment orchestration behind the `prolate` executable. A config is a
/// JSON object
///
///   {"task": "...", "problem": {...}, "symbol": {...}, "sizes": [...],
///    "tolerances": {"name": value}, "out": "DIR", "seed": int, "params": {...}}
///
/// and run_config() writes the task's artifacts into `out` (or to the given
/// stream when `out` is empty). Every task is deterministic given the config.
///
#ifndef PROLATE_RUN_CONFIG_HPP
#define PROLATE_RUN_CONFIG_HPP

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prolate/io.hpp"

namespace prolate
{

namespace exit_code
{
inline constexpr int ok      = 0;
inline constexpr int usage   = 2;
inline constexpr int numeric = 3;
inline constexpr int io      = 4;
} // namespace exit_code

enum class Task
{
    Build,
    Eigs,
    Szego,
    Dof,
    Approx,
    Solve,
    Multitaper,
    Estimate,
    Study,
};

Task parse_task(const std::string& name);
std::string to_string(Task t);

struct ExperimentConfig
{
    Task task = Task::Eigs;
    std::optional<io::ProblemSpec> problem;
    std::optional<io::SymbolSource> symbol;
    std::vector<Index> sizes;                 ///< strictly increasing
    std::map<std::string, double> tolerances; ///< all positive
    std::filesystem::path out;                ///< empty: primary artifact to the stream
    std::uint64_t seed = 20170523;
    io::json params = io::json::object();
};

/// Validate and convert a config object; ConfigError names the offending field.
ExperimentConfig parse_config(const io::json& j);

struct StudyRow
{
    Index n = 0;
    std::string metric;
    double lhs     = 0;
    double rhs     = 0;
    double abs_gap = 0; ///< |lhs - rhs|
    bool violated  = false;
};

/// Rows of a `study` task, without writing anything.
std::vector<StudyRow> run_study(const ExperimentConfig& cfg);

/// Run a task. Returns an exit code; tolerance violations are listed on `err`.
int run_config(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Exit code for an exception escaping a task.
int exit_code_for(const std::exception& e);

} // namespace prolate

#endif // PROLATE_RUN_CONFIG_HPP
