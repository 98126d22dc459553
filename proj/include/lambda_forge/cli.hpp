#pragma once

/**
 * @file cli.hpp
 * @brief The lambda-forge command line: univpoly, verify, model and cache
 *        commands. Exit status 0 means every check passed, 1 a check
 *        failure, 2 a usage error.
 */

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cache.hpp"
#include "suites.hpp"

namespace lambda_forge {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Everything a command needs, filled by the option parser.
struct RunConfig {
    std::string command;
    std::string model;
    std::string spec_path;
    std::vector<std::string> groups;
    std::size_t truncation = 6;
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    long n = 0;
    long m = 0;
    unsigned max_n = 0;
    unsigned max_m = 0;
    unsigned max_nm = 8;
    std::string cache_dir;
    std::string format;
};

/// A user input problem (bad model name, unreadable spec...): exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// Models named by --model (comma-separated) or --spec; the suite defaults otherwise.
inline std::vector<ModelPtr> resolve_models(const RunConfig& cfg, const std::vector<std::string>& defaults)
{
    std::vector<ModelPtr> out;
    try {
        if (!cfg.spec_path.empty()) {
            out.push_back(build_model(ModelSpec::from_json(read_json_file(cfg.spec_path))));
            return out;
        }
        for (const auto& name : cfg.model.empty() ? defaults : split_list(cfg.model)) {
            out.push_back(builtin_model(name));
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return out;
}

inline std::vector<CharacterGroup> resolve_groups(const RunConfig& cfg)
{
    std::vector<CharacterGroup> out;
    try {
        for (const auto& g : cfg.groups) {
            out.push_back(CharacterGroup::parse(g));
        }
        if (out.empty() && !cfg.spec_path.empty()) {
            auto j = read_json_file(cfg.spec_path);
            if (j.contains("group")) {
                out.push_back(CharacterGroup::from_json(j.at("group")));
            }
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return out.empty() ? default_groups() : out;
}

inline void report_cache_notes(const PolyCache& cache, std::ostream& err)
{
    for (const auto& k : cache.corrupt_keys()) {
        err << "note: cache entry " << k << " failed its checksum; recomputed and rewritten\n";
    }
}

inline void print_report_text(const AxiomReport& rep, std::ostream& out)
{
    out << "mode: " << rep.mode << "\n";
    out << "context: " << rep.context << "\n";
    out << "seed: " << rep.seed << "\n";
    out << "truncation: " << rep.truncation << "\n";
    for (const auto& c : rep.checks) {
        if (!c.pass) {
            out << "FAIL  " << c.axiom << "  [" << c.instance << "]\n      " << c.witness << "\n";
        }
    }
    out << rep.checks.size() << " checks, " << rep.failures() << " failed: " << (rep.all_passed() ? "PASS" : "FAIL")
        << "\n";
}

inline int cmd_univpoly(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    PolyCache cache(PolyCache::resolve_dir(cfg.cache_dir));
    std::vector<UniversalPoly> entries;
    const std::string& sub = cfg.command;
    if (sub == "pn") {
        if (cfg.n > 0) {
            entries.push_back(cached_universal(&cache, UniversalKind::Pn, static_cast<unsigned>(cfg.n)));
        } else {
            for (unsigned n = 1; n <= (cfg.max_n ? cfg.max_n : 5); ++n) {
                entries.push_back(cached_universal(&cache, UniversalKind::Pn, n));
            }
        }
    } else if (sub == "pnm") {
        if (cfg.n > 0 || cfg.m > 0) {
            if (cfg.n <= 0 || cfg.m <= 0) {
                throw UsageError("univpoly pnm needs both --n and --m");
            }
            entries.push_back(cached_universal(&cache, UniversalKind::Pnm, static_cast<unsigned>(cfg.n),
                                               static_cast<unsigned>(cfg.m)));
        } else {
            const unsigned mn = cfg.max_n ? cfg.max_n : 8;
            const unsigned mm = cfg.max_m ? cfg.max_m : 8;
            for (unsigned n = 1; n <= mn; ++n) {
                for (unsigned m = 1; m <= mm && n * m <= cfg.max_nm; ++m) {
                    entries.push_back(cached_universal(&cache, UniversalKind::Pnm, n, m));
                }
            }
        }
    } else {
        if (cfg.n > 0) {
            entries.push_back(cached_universal(&cache, UniversalKind::Nu, static_cast<unsigned>(cfg.n)));
        } else {
            for (unsigned k = 1; k <= (cfg.max_n ? cfg.max_n : 6); ++k) {
                entries.push_back(cached_universal(&cache, UniversalKind::Nu, k));
            }
        }
    }
    report_cache_notes(cache, err);
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "univpoly " + sub;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& u : entries) {
            nlohmann::ordered_json e;
            e["key"] = u.key();
            e["text"] = u.poly.to_string();
            e["poly"] = u.poly.to_json();
            arr.push_back(std::move(e));
        }
        j["entries"] = std::move(arr);
        nlohmann::ordered_json c;
        c["hits"] = cache.hits();
        c["misses"] = cache.misses();
        c["corrupt_recomputed"] = cache.corrupt_keys();
        j["cache"] = std::move(c);
        out << j.dump(2) << "\n";
    } else if (entries.size() == 1) {
        out << entries[0].poly.to_string() << "\n";
    } else {
        for (const auto& u : entries) {
            out << u.key() << ": " << u.poly.to_string() << "\n";
        }
    }
    return kExitPass;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    SuiteOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.truncation = cfg.truncation;
    opt.mul_order = std::min<std::size_t>(3, cfg.truncation);
    if (cfg.max_n > 0) {
        opt.max_rank = cfg.max_n;
    }
    PolyCache cache(PolyCache::resolve_dir(cfg.cache_dir));
    preload_universal(&cache, cfg.truncation);
    report_cache_notes(cache, err);

    AxiomReport rep;
    const std::string& s = cfg.command;
    if (s == "pre-lambda" || s == "lambda") {
        rep = run_diffk_axioms(parse_mode(s), resolve_models(cfg, default_diffk_models()), opt);
    } else if (s == "adams") {
        rep = run_adams_suite(resolve_models(cfg, default_diffk_models()), opt);
    } else if (s == "diffk") {
        rep = run_diffk_suite(resolve_models(cfg, default_diffk_models()), opt);
    } else if (s == "gamma") {
        rep = run_gamma_suite(resolve_models(cfg, default_gamma_models()), opt);
    } else if (s == "equivariant") {
        rep = run_equivariant_suite(resolve_models(cfg, default_equivariant_models()), resolve_groups(cfg), opt);
    } else {
        std::vector<std::string> bases = cfg.model.empty() ? default_splitting_bases() : split_list(cfg.model);
        try {
            for (const auto& b : bases) {
                if (!builtin_model(b)->is_formal()) {
                    throw std::invalid_argument("splitting needs a base with zero differential; '" + b +
                                                "' is not formal");
                }
            }
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        rep = run_splitting_suite(bases, opt);
    }
    if (cfg.format == "text") {
        print_report_text(rep, out);
    } else {
        out << rep.to_json().dump(2) << "\n";
    }
    return rep.all_passed() ? kExitPass : kExitFail;
}

inline int cmd_model(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.command == "list") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& name : builtin_model_names()) {
            auto m = builtin_model(name);
            if (cfg.format == "json") {
                nlohmann::ordered_json e;
                e["name"] = name;
                e["top_degree"] = m->top_degree();
                e["dimension"] = m->dim();
                e["formal"] = m->is_formal();
                arr.push_back(std::move(e));
            } else {
                out << name << "  (top degree " << m->top_degree() << ", dimension " << m->dim()
                    << (m->is_formal() ? ", d = 0" : "") << ")\n";
            }
        }
        if (cfg.format == "json") {
            out << arr.dump(2) << "\n";
        }
        return kExitPass;
    }
    // validate
    if (cfg.spec_path.empty() && cfg.model.empty()) {
        throw UsageError("model validate needs --spec <path> or --model <name>");
    }
    ModelSpec spec;
    if (!cfg.spec_path.empty()) {
        try {
            spec = ModelSpec::from_json(read_json_file(cfg.spec_path));
        } catch (const UsageError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            // malformed content is a validation failure, not a usage error
            err << "invalid: " << e.what() << "\n";
            if (cfg.format == "json") {
                out << nlohmann::ordered_json{{"valid", false}, {"error", e.what()}}.dump(2) << "\n";
            }
            return kExitFail;
        }
    } else {
        try {
            spec = builtin_spec(cfg.model);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    try {
        auto m = build_model(spec);
        std::vector<std::size_t> dims;
        for (unsigned k = 0; k <= m->top_degree(); ++k) {
            dims.push_back(m->dim(k));
        }
        if (cfg.format == "json") {
            nlohmann::ordered_json j;
            j["valid"] = true;
            j["name"] = m->name();
            j["top_degree"] = m->top_degree();
            j["dimensions"] = dims;
            j["formal"] = m->is_formal();
            out << j.dump(2) << "\n";
        } else {
            out << "valid: " << m->name() << ", top degree " << m->top_degree() << ", dimensions by degree [";
            for (std::size_t k = 0; k < dims.size(); ++k) {
                out << (k ? ", " : "") << dims[k];
            }
            out << "]\n";
        }
        return kExitPass;
    } catch (const std::invalid_argument& e) {
        if (cfg.format == "json") {
            out << nlohmann::ordered_json{{"valid", false}, {"error", e.what()}}.dump(2) << "\n";
        } else {
            err << "invalid: " << e.what() << "\n";
        }
        return kExitFail;
    }
}

inline int cmd_cache(const RunConfig& cfg, std::ostream& out)
{
    PolyCache cache(PolyCache::resolve_dir(cfg.cache_dir));
    if (cfg.command == "clear") {
        auto n = cache.clear();
        if (cfg.format == "json") {
            out << nlohmann::ordered_json{{"directory", cache.dir().string()}, {"removed", n}}.dump(2) << "\n";
        } else {
            out << "removed " << n << " entries from " << cache.dir().string() << "\n";
        }
        return kExitPass;
    }
    auto st = cache.stats();
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["directory"] = cache.dir().string();
        j["entries"] = st.entries;
        j["bytes"] = st.bytes;
        j["keys"] = st.keys;
        j["invalid"] = st.invalid;
        out << j.dump(2) << "\n";
    } else {
        out << "directory: " << cache.dir().string() << "\n";
        out << "entries: " << st.entries << " (" << st.bytes << " bytes)\n";
        for (const auto& k : st.keys) {
            out << "  " << k << "\n";
        }
        for (const auto& f : st.invalid) {
            out << "  " << f << " (checksum mismatch)\n";
        }
    }
    return kExitPass;
}

} // namespace detail

/// Runs one command line; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Exact λ-ring computations on CDGA models", "lambda-forge"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* c, bool verify) {
        c->add_option("--model", cfg.model, "built-in model name (comma-separated list allowed)");
        c->add_option("--spec", cfg.spec_path, "model specification JSON file")->check(CLI::ExistingFile);
        c->add_option("--trunc", cfg.truncation, "truncation order N")->check(CLI::PositiveNumber);
        c->add_option("--samples", cfg.samples, "number of seeded samples")->check(CLI::PositiveNumber);
        c->add_option("--seed", cfg.seed, "random seed");
        c->add_option("--max-n", cfg.max_n, "largest n (splitting: largest bundle rank)")->check(CLI::PositiveNumber);
        c->add_option("--max-m", cfg.max_m, "largest m")->check(CLI::PositiveNumber);
        c->add_option("--cache", cfg.cache_dir, "cache directory (default: $LAMBDA_FORGE_CACHE or ~/.cache)");
        c->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
        if (verify) {
            c->add_option("--group", cfg.groups, "character group, e.g. Z, Z/2, ZxZ/3 or JSON (repeatable)");
        }
    };

    auto* univ = app.add_subcommand("univpoly", "universal polynomials P_n, P_{n,m} and ν_k");
    univ->require_subcommand(1);
    for (const char* name : {"pn", "pnm", "nu"}) {
        auto* c = univ->add_subcommand(name, std::string("print ") + name);
        common(c, false);
        c->add_option("--n,--k", cfg.n, "index n (ν: k)")->check(CLI::PositiveNumber);
        c->add_option("--m", cfg.m, "index m")->check(CLI::PositiveNumber);
        c->add_option("--max-nm", cfg.max_nm, "table bound on n·m")->check(CLI::PositiveNumber);
    }
    auto* ver = app.add_subcommand("verify", "run a seeded verification suite");
    ver->require_subcommand(1);
    for (const char* name : {"pre-lambda", "lambda", "adams", "diffk", "gamma", "equivariant", "splitting"}) {
        common(ver->add_subcommand(name, std::string("verify ") + name), true);
    }
    auto* mod = app.add_subcommand("model", "list or validate CDGA models");
    mod->require_subcommand(1);
    for (const char* name : {"list", "validate"}) {
        common(mod->add_subcommand(name), false);
    }
    auto* cac = app.add_subcommand("cache", "inspect or clear the polynomial cache");
    cac->require_subcommand(1);
    for (const char* name : {"clear", "stats"}) {
        common(cac->add_subcommand(name), false);
    }

    std::vector<std::string> argv_store{"lambda-forge"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        // report the innermost subcommand's usage
        err << "error: " << e.what() << "\n";
        const CLI::App* cur = &app;
        while (!cur->get_subcommands().empty()) {
            cur = cur->get_subcommands().front();
        }
        err << cur->help();
        return kExitUsage;
    }

    const CLI::App* group = app.get_subcommands().front();
    const CLI::App* leaf = group->get_subcommands().front();
    cfg.command = leaf->get_name();
    if (cfg.format.empty()) {
        cfg.format = group->get_name() == "verify" ? "json" : "text";
    }
    try {
        if (group->get_name() == "univpoly") {
            return detail::cmd_univpoly(cfg, out, err);
        }
        if (group->get_name() == "verify") {
            return detail::cmd_verify(cfg, out, err);
        }
        if (group->get_name() == "model") {
            return detail::cmd_model(cfg, out, err);
        }
        return detail::cmd_cache(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

} // namespace lambda_forge
