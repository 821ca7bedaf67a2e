#pragma once

#include <besovlab/config.hpp>
#include <besovlab/field.hpp>

namespace besovlab::cli {

/// Rejects configurations before any file is written: validation, grid
/// sizing against the cap and presence of the oracle file.
void preflight(const RunConfig& cfg);

/// Initial data of the `solve` command on its grid.
Field solve_initial_data(const RunConfig& cfg);

int run_cutoffs(const RunConfig& cfg);
int run_families(const RunConfig& cfg, bool export_fields);
int run_lemmas(const RunConfig& cfg);
int run_solve(const RunConfig& cfg);
int run_approx(const RunConfig& cfg);
int run_gap_command(const RunConfig& cfg);
int run_report(const RunConfig& cfg);

}  // namespace besovlab::cli
