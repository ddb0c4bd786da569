#ifndef DIVEVO_HARNESS_HPP
#define DIVEVO_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <divevo/config.hpp>
#include <divevo/evolution.hpp>
#include <divevo/stats.hpp>

namespace divevo {

    inline constexpr const char* csv_schema_line = "# divergent-evo v1";

    /// Seed of run `i` in an experiment.
    inline std::uint64_t run_seed(std::uint64_t seed_base, std::size_t i) { return seed_base + i; }

    /// Calls fn(i) for i in [0, n) on up to `workers` threads.
    void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

    /// Runs a single configured run (maze or game) with the config's seed.
    RunRecord execute_run(const RunConfig& cfg);

    void write_run_csv(std::ostream& out, const RunRecord& record);
    std::string run_csv(const RunRecord& record);

    /// Header fields and rows read back from a run CSV.
    struct RunCsv {
        std::uint64_t seed = 0;
        std::string strategy;
        std::string environment;
        std::optional<std::size_t> generations_to_solve;
        std::vector<std::vector<std::string>> rows;
    };
    RunCsv read_run_csv(std::istream& in);

    struct Arm {
        std::string label;
        RunConfig config;
    };

    struct ArmResult {
        std::string label;
        std::vector<RunRecord> records; // champion traces dropped except the final generation's
        RunSummary summary;
        std::vector<double> game_scores; // per run, grid games only
    };

    struct ExperimentResult {
        std::vector<ArmResult> arms;
        /// p_values[i][j]: t-test between arms i and j; nullopt when either side has < 2 successes.
        std::vector<std::vector<std::optional<TTestResult>>> p_values;
    };

    struct ExperimentSpec {
        std::vector<Arm> arms;
        std::size_t runs = 10;
        std::uint64_t seed_base = 1;
        std::string out_dir; // empty: write nothing
        std::size_t workers = 1;
        bool welch = false;
        std::function<void(const std::string& label, const RunRecord&)> on_run; // progress hook
    };

    /// Runs every arm `runs` times with seeds seed_base + i, writes per-run CSVs under
    /// <out>/<label>/run_<seed>.csv and <out>/summary.csv.
    ExperimentResult run_experiment(const ExperimentSpec& spec);

    void write_summary_csv(std::ostream& out, const ExperimentResult& result);

    /// Arms that differ only in sugar density; also writes <out>/density_sweep.csv.
    ExperimentResult run_density_sweep(ExperimentSpec spec, const RunConfig& base, const std::vector<double>& densities);
    void write_density_csv(std::ostream& out, const std::vector<double>& densities, const ExperimentResult& result);

    /// Sugar strategy with the input mode varied across arms.
    ExperimentResult run_ablation(ExperimentSpec spec, const RunConfig& base, const std::vector<InputMode>& modes);

    /// SVG of walls, start (red), goal (green), sugar layout (gray) and the champion path.
    std::string trajectory_svg(const MazeMap& map, const AgentTrace& trace, const SugarField* sugar = nullptr);
    /// Writes <out_dir>/trajectory_<gen>.svg for the given generation of a record.
    std::string export_trajectory(const RunRecord& record, std::size_t generation, const MazeMap& map, const SugarField* sugar,
        const std::string& out_dir);

} // namespace divevo

#endif
