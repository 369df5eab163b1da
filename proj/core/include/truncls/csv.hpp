#pragma once

#include <string>

#include "truncls/dataset.hpp"
#include "truncls/scenario.hpp"

namespace truncls {

/// Reads a dataset from CSV with header x1,...,xd,y (one observation per
/// line, decimal point, UTF-8). Throws std::runtime_error on malformed input.
Dataset read_dataset_csv(const std::string& path);

/// Writes a dataset in the same format.
void write_dataset_csv(const std::string& path, const Dataset& data);

std::string noise_label(const NoiseSpec& noise);

/// Fixed result-table schema.
std::string summary_csv_header();

/// One row in the schema of summary_csv_header(). Conditional columns are
/// left empty when no replication differed.
std::string summary_csv_row(const ScenarioConfig& config,
                            const ScenarioSummary& summary);

/// Appends `row` to `path`, writing the header first when the file is new or
/// empty.
void append_summary_csv(const std::string& path, const std::string& row);

}  // namespace truncls
