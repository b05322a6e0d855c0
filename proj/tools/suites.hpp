#pragma once

#include <filesystem>
#include <string>

#include "lptrans/group.hpp"
#include "lptrans/transference.hpp"
#include "report.hpp"

namespace cli {

SuiteReport run_kernels(Config& cfg);
SuiteReport run_lp_verify(Config& cfg);
SuiteReport run_transfer_verify(Config& cfg);
SuiteReport run_analytic_demo(Config& cfg);
/// which: "gaussian", "cocountable" or "both".
SuiteReport run_counterexample(Config& cfg, const std::string& which);
/// Every suite on a fresh copy of cfg; assertion ids are prefixed by suite.
SuiteReport run_all(const Config& cfg);

/// "Z8", "Z2xZ4", ...
lpt::FiniteAbelianGroup parse_group(const std::string& text);

/// {"factors": [...], "generators": [matrix, ...]}; a matrix is a list of
/// rows, an entry a number or [re, im].
lpt::RepresentationModel load_representation(const std::filesystem::path& path);

}  // namespace cli
