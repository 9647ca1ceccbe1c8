// Output files for the CLI: CSV table, JSON mirror and a metadata sidecar.
#pragma once

#include "pbundle/csv.hpp"

#include <json.hpp>

#include <string>

namespace pbundle::cli {

struct OutputPaths {
    std::string csv;
    std::string json;
    std::string meta;
};

// "run.csv" -> run.csv, run.json, run.meta.json; a path without ".csv" gains the suffixes.
OutputPaths output_paths(const std::string& out);

// Table as an array of row objects; numeric cells become numbers, "nan" becomes null.
nlohmann::json table_json(const CsvTable& t);

// Writes CSV and JSON (data files, no wall-clock content) plus the sidecar.
void write_outputs(const std::string& out, const CsvTable& table, const nlohmann::json& extra,
                   const nlohmann::json& meta);

std::string utc_now();

}  // namespace pbundle::cli
