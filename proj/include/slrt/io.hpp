#pragma once

#include "slrt/models.hpp"
#include "slrt/montecarlo.hpp"

#include <string>
#include <vector>

namespace slrt {

// One observation per line, d numeric comma-separated columns, no header
// unless skip_header is set. Malformed input raises std::runtime_error.
Dataset read_dataset_csv(const std::string& path, bool skip_header = false);

// JSON file with an "offset" array and a "basis" array of orthonormal rows.
LinearHypothesis read_hypothesis_json(const std::string& path);

// 1-based coordinate list: "none" (empty), "1..45", "2,5..7,9". Returns
// 0-based indices, validated against dim.
std::vector<Eigen::Index> parse_free_coords(const std::string& text, Eigen::Index dim);

// "start:stop:step" expands to start, start+step, ... including endpoints
// within half a step; a comma list or single number is passed through.
std::vector<double> parse_grid(const std::string& text);

// Fixed schema: kind,n,d,q,delta,gamma,alpha,reps,seed,statistic,reject_rate,stderr
// preceded by one comment line recording the gamma orientation.
std::string cells_to_csv(const std::vector<SimCell>& cells);

// Single-line key=value rendering of a test result.
std::string format_test_result(const TestResult& r, StatisticKind kind);

// Shortest round-trip-safe decimal rendering of a double.
std::string format_double(double v);

// Writes content to a temporary file in the target directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

// Throws std::runtime_error if path cannot be created for writing.
void ensure_writable(const std::string& path);

}  // namespace slrt
