#pragma once

// Tables, run manifests and content hashes for the CLI outputs.

#include "fracmin/serialize.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fracmin {

//! Git blob hash: SHA-1 of "blob <size>\0" followed by the content.
std::string content_hash(const std::string& content);

//! One table cell; doubles print with 17 significant digits.
using Cell = std::variant<double, long, std::string>;

std::string format_number(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }

    //! "# manifest <hash>", the header row, then the rows, '\n' endings.
    std::string str(const std::string& manifest_hash) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

struct RunManifest {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    Json resolved;  // the resolved config, hashed into config_hash
    std::string config_hash;
    double wall_time = 0;  // seconds; excluded from the hash

    static RunManifest make(std::string command, std::string config_path, std::uint64_t seed, std::string out_dir,
                            Json resolved);
    Json to_json() const;
};

//! {experiment}-{s}-{seed}.csv, with s printed compactly.
std::string output_stem(const std::string& experiment, const std::string& tag, std::uint64_t seed);
std::string s_tag(double s);
std::string s_tag(const std::vector<double>& s_list);

//! Writes the bytes to out_dir/name, creating out_dir if needed.
void write_file(const std::string& out_dir, const std::string& name, const std::string& bytes);

}  // namespace fracmin
