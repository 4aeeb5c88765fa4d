#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "iterboot/cli/selftest.hpp"

namespace iterboot::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitConfigError = 2,
  kExitExperimentFailure = 3,
  kExitIoError = 4,
};

/// Environment variable consulted for the worker count when --threads is absent.
inline constexpr const char* kThreadsEnv = "ITERBOOT_THREADS";

/// --threads value if given, else $ITERBOOT_THREADS, else 1.
unsigned resolve_threads(std::optional<unsigned> flag);

int cmd_run(const std::filesystem::path& config, const std::filesystem::path& out_dir, unsigned threads,
            std::ostream& out, std::ostream& err);

int cmd_report(const std::filesystem::path& csv, const std::filesystem::path& svg, std::ostream& out,
               std::ostream& err);

int cmd_selftest(std::ostream& out, const SelftestOptions& options = {});

}  // namespace iterboot::cli
