#include "fracmin/report.hpp"

#include <openssl/sha.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fracmin {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::corner: return "corner";
    case ErrorKind::classification: return "classification";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::fit: return "fit";
    case ErrorKind::unsupported: return "unsupported";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::unsupported: return 2;
    case ErrorKind::convergence:
    case ErrorKind::bracket:
    case ErrorKind::fit: return 3;
    case ErrorKind::singularity:
    case ErrorKind::corner:
    case ErrorKind::classification:
    case ErrorKind::degenerate:
    case ErrorKind::hypothesis: return 4;
    }
    return 1;
}

std::string content_hash(const std::string& content)
{
    std::string blob = "blob " + std::to_string(content.size());
    blob.push_back('\0');
    blob += content;
    unsigned char md[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), md);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned char b : md) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 15]);
    }
    return out;
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add(std::vector<Cell> row)
{
    require(row.size() == columns_.size(), ErrorKind::config, "table row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str(const std::string& manifest_hash) const
{
    std::string out = "# manifest " + manifest_hash + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out += format_number(v);
                    else if constexpr (std::is_same_v<T, long>) out += std::to_string(v);
                    else out += v;
                },
                row[i]);
        }
        out += '\n';
    }
    return out;
}

RunManifest RunManifest::make(std::string command, std::string config_path, std::uint64_t seed, std::string out_dir,
                              Json resolved)
{
    RunManifest m;
    m.command = std::move(command);
    m.config_path = std::move(config_path);
    m.seed = seed;
    m.out_dir = std::move(out_dir);
    m.resolved = std::move(resolved);
    Json keyed = {{"command", m.command}, {"seed", m.seed}, {"config", m.resolved}};
    m.config_hash = content_hash(keyed.dump());
    return m;
}

Json RunManifest::to_json() const
{
    return {{"command", command}, {"config_path", config_path}, {"seed", seed},          {"out_dir", out_dir},
            {"config_hash", config_hash}, {"wall_time", wall_time}, {"config", resolved}};
}

std::string s_tag(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", s);
    return buf;
}

std::string s_tag(const std::vector<double>& s_list)
{
    std::string out;
    for (std::size_t i = 0; i < s_list.size(); ++i) out += (i ? "_" : "") + s_tag(s_list[i]);
    return out.empty() ? "none" : out;
}

std::string output_stem(const std::string& experiment, const std::string& tag, std::uint64_t seed)
{
    return experiment + "-" + tag + "-" + std::to_string(seed);
}

void write_file(const std::string& out_dir, const std::string& name, const std::string& bytes)
{
    std::filesystem::create_directories(out_dir);
    auto path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::config, "cannot write " + path.string());
    out << bytes;
}

}  // namespace fracmin
