#include "output.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pbundle::cli {

OutputPaths output_paths(const std::string& out) {
    std::string stem = out;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
    return {stem + ".csv", stem + ".json", stem + ".meta.json"};
}

nlohmann::json table_json(const CsvTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows()) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::string& cell = r[i];
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell == "nan" || cell == "inf" || cell == "-inf") {
                obj[t.header()[i]] = nullptr;
            } else if (!cell.empty() && res.ec == std::errc() && res.ptr == cell.data() + cell.size()) {
                obj[t.header()[i]] = v;
            } else {
                obj[t.header()[i]] = cell;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

namespace {
void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
}
}  // namespace

void write_outputs(const std::string& out, const CsvTable& table, const nlohmann::json& extra,
                   const nlohmann::json& meta) {
    const OutputPaths p = output_paths(out);
    const auto parent = std::filesystem::path(p.csv).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    table.write_file(p.csv);
    nlohmann::json mirror = extra;
    mirror["rows"] = table_json(table);
    write_json(p.json, mirror);
    write_json(p.meta, meta);
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace pbundle::cli
