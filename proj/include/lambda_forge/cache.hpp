#pragma once

/**
 * @file cache.hpp
 * @brief On-disk cache of universal polynomials. One JSON file per key
 *        ("Pn/<n>", "Pnm/<n>/<m>", "nu/<k>") holding the polynomial and a
 *        crc32 of its serialization; writes go through a temp file and a
 *        rename so readers never see a partial entry.
 */

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>
#include <zlib.h>

#include <nlohmann/json.hpp>

#include "symfun.hpp"

namespace lambda_forge {

inline std::string crc32_hex(const std::string& data)
{
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(c));
    return buf;
}

class PolyCache {
public:
    explicit PolyCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /**
     * Directory precedence: explicit flag, then LAMBDA_FORGE_CACHE, then
     * $XDG_CACHE_HOME/lambda-forge, then ~/.cache/lambda-forge.
     */
    static std::filesystem::path resolve_dir(const std::string& flag)
    {
        if (!flag.empty()) {
            return flag;
        }
        if (const char* env = std::getenv("LAMBDA_FORGE_CACHE"); env && *env) {
            return env;
        }
        if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
            return std::filesystem::path(xdg) / "lambda-forge";
        }
        if (const char* home = std::getenv("HOME"); home && *home) {
            return std::filesystem::path(home) / ".cache" / "lambda-forge";
        }
        return std::filesystem::temp_directory_path() / "lambda-forge";
    }

    const std::filesystem::path& dir() const { return dir_; }

    static std::string file_name(const std::string& key)
    {
        std::string s = key;
        for (auto& ch : s) {
            if (ch == '/') {
                ch = '_';
            }
        }
        return s + ".json";
    }

    std::filesystem::path path_of(const std::string& key) const { return dir_ / file_name(key); }

    /// The stored polynomial, or nothing when absent or corrupt (corrupt keys are remembered).
    std::optional<MultiPoly> load(const std::string& key)
    {
        const auto p = path_of(key);
        std::error_code ec;
        if (!std::filesystem::exists(p, ec)) {
            ++misses_;
            return std::nullopt;
        }
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            auto j = nlohmann::json::parse(buf.str());
            const auto& poly = j.at("poly");
            if (j.at("key").get<std::string>() != key || j.at("checksum").get<std::string>() != crc32_hex(poly.dump())) {
                throw std::runtime_error("checksum mismatch");
            }
            auto result = MultiPoly::from_json(poly);
            ++hits_;
            return result;
        } catch (const std::exception&) {
            corrupt_.push_back(key);
            ++misses_;
            return std::nullopt;
        }
    }

    void store(const std::string& key, const MultiPoly& p)
    {
        std::filesystem::create_directories(dir_);
        nlohmann::ordered_json poly = p.to_json();
        nlohmann::ordered_json j;
        j["key"] = key;
        j["checksum"] = crc32_hex(nlohmann::json(poly).dump());
        j["poly"] = poly;
        static std::atomic<unsigned> counter{0};
        const auto final_path = path_of(key);
        const auto tmp = dir_ / (".tmp-" + file_name(key) + "-" + std::to_string(::getpid()) + "-" +
                                 std::to_string(counter++));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot write cache file " + tmp.string());
            }
            out << j.dump() << '\n';
            if (!out.flush()) {
                throw std::runtime_error("cannot write cache file " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, final_path);
    }

    struct Stats {
        std::size_t entries = 0;
        std::uintmax_t bytes = 0;
        std::vector<std::string> keys;
        std::vector<std::string> invalid;
    };

    Stats stats() const
    {
        Stats s;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) {
            return s;
        }
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(dir_)) {
            if (e.is_regular_file() && is_entry_file(e.path())) {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            ++s.entries;
            s.bytes += std::filesystem::file_size(f);
            std::ifstream in(f, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                auto j = nlohmann::json::parse(buf.str());
                if (j.at("checksum").get<std::string>() != crc32_hex(j.at("poly").dump())) {
                    throw std::runtime_error("checksum mismatch");
                }
                s.keys.push_back(j.at("key").get<std::string>());
            } catch (const std::exception&) {
                s.invalid.push_back(f.filename().string());
            }
        }
        return s;
    }

    /// Removes cache entries (and stray temp files); returns the number removed.
    std::size_t clear()
    {
        std::size_t n = 0;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) {
            return 0;
        }
        std::vector<std::filesystem::path> doomed;
        for (const auto& e : std::filesystem::directory_iterator(dir_)) {
            const auto name = e.path().filename().string();
            if (e.is_regular_file() && (is_entry_file(e.path()) || name.rfind(".tmp-", 0) == 0)) {
                doomed.push_back(e.path());
            }
        }
        for (const auto& p : doomed) {
            n += std::filesystem::remove(p) ? 1 : 0;
        }
        return n;
    }

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    const std::vector<std::string>& corrupt_keys() const { return corrupt_; }

private:
    static bool is_entry_file(const std::filesystem::path& p)
    {
        const auto name = p.filename().string();
        return p.extension() == ".json" &&
               (name.rfind("Pn_", 0) == 0 || name.rfind("Pnm_", 0) == 0 || name.rfind("nu_", 0) == 0);
    }

    std::filesystem::path dir_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    std::vector<std::string> corrupt_;
};

/**
 * Universal polynomial from the disk cache, then the in-memory table, then computed.
 * With a cache the directory is always consulted, so corrupt entries are noticed and
 * missing ones are written even when this process already knows the polynomial.
 */
inline UniversalPoly cached_universal(PolyCache* cache, UniversalKind kind, unsigned n, unsigned m = 0)
{
    UniversalPoly probe{kind, n, m, MultiPoly()};
    auto& table = UniversalTable::instance();
    if (cache) {
        if (auto p = cache->load(probe.key())) {
            probe.poly = std::move(*p);
            table.put(probe);
            return probe;
        }
    } else if (auto hit = table.find(kind, n, m)) {
        probe.poly = std::move(*hit);
        return probe;
    }
    UniversalPoly u{kind, n, m,
                    kind == UniversalKind::Pn    ? table.Pn(n)
                    : kind == UniversalKind::Pnm ? table.Pnm(n, m)
                                                 : table.nu(n)};
    if (cache) {
        cache->store(u.key(), u.poly);
    }
    return u;
}

/// Loads every P_n (n <= N) and P_{n,m} (nm <= N) used by the Witt operations at truncation N.
inline void preload_universal(PolyCache* cache, std::size_t N)
{
    for (unsigned n = 1; n <= N; ++n) {
        cached_universal(cache, UniversalKind::Pn, n);
        for (unsigned m = 1; n * m <= N; ++m) {
            cached_universal(cache, UniversalKind::Pnm, n, m);
        }
    }
}

} // namespace lambda_forge
