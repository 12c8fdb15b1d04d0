#pragma once

#include "config.hpp"

namespace cli {

/// Each command writes its output and returns 0 when every check passes or
/// 3 when some check fails. Configuration problems throw ConfigError and
/// output problems IoError.
int run_leggett_scan(const RunConfig& cfg);
int run_verify_lemmas(const RunConfig& cfg);
int run_nogo(const RunConfig& cfg);
int run_model_check(const RunConfig& cfg);

} // namespace cli
