#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtsec/optimizer.hpp"
#include "rtsec/taskmodel.hpp"

namespace rtsec::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kUnschedulable = 3,
    kSolverFailure = 4,
};

/// Entry point of the `rtsec` tool. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON emitted by `optimize` in server mode.
std::string solution_json(const TaskSet& ts, const opt::JointSolution& sol, int indent = 2);
/// JSON emitted by `optimize` in noserver mode.
std::string solution_json(const TaskSet& ts, const opt::PeriodSolution& sol, int indent = 2);

/// The parts of a solution document that `simulate` replays.
struct LoadedSolution {
    std::string mode;  // "server" or "noserver"
    bool schedulable = false;
    std::vector<Millis> periods;  // in security-task order of `ts`
    std::optional<ServerParams> server;
};

/// Throws InputError when the document is malformed or does not name exactly
/// the security tasks of `ts`.
LoadedSolution parse_solution(const TaskSet& ts, std::string_view json_text);

}  // namespace rtsec::cli
