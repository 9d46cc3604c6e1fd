#pragma once

// Corpus loading for the command-line driver and the regression suites.
// A corpus directory holds .wl programs, optional <name>.dom.json domain
// sidecars, and an optional manifest.json declaring per-program width,
// unroll bound, and expected structure. The loader cross-checks declared
// structure against the parsed tree so a stale manifest fails loudly.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qex/classical/domain.hpp"
#include "qex/hybrid/plan.hpp"
#include "qex/lang/parser.hpp"

namespace qex::cli {

struct CorpusError : std::runtime_error {
    explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CorpusEntry {
    std::string name;   // file stem, unique within the corpus
    std::string path;
    std::string source;
    lang::Program program;
    classical::InputDomain dom;  // from the sidecar, empty means full
    int m = 3;
    int k = 8;
    bool loops = false;
    bool pointers = false;
    bool exact = true;  // unrolling at k is expected to capture full behavior
};

inline bool has_loops(const lang::Program& p) {
    struct Scan {
        static bool body(const std::vector<lang::StmtPtr>& b) {
            for (const auto& s : b) {
                if (s->kind == lang::Stmt::Kind::loop) return true;
                if (body(s->body) || body(s->else_body)) return true;
            }
            return false;
        }
    };
    return Scan::body(p.body);
}

inline bool has_pointers(const lang::Program& p) {
    for (const auto& prm : p.params)
        if (prm.pointer) return true;
    for (const auto& s : p.body)
        if (hybrid::detail::touches_pointers(s)) return true;
    return false;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Loads every .wl file under dir, sorted by name. Parse failures are
// collected and reported together, one line per file.
inline std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw CorpusError("'" + dir + "' is not a directory");

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".wl") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    nlohmann::json manifest = nlohmann::json::array();
    const fs::path mpath = fs::path(dir) / "manifest.json";
    if (fs::exists(mpath)) {
        try {
            manifest = nlohmann::json::parse(slurp(mpath.string()));
        } catch (const nlohmann::json::exception& e) {
            throw CorpusError("manifest.json: " + std::string(e.what()));
        }
        if (!manifest.is_array()) throw CorpusError("manifest.json must be an array of rows");
    }
    std::map<std::string, nlohmann::json> rows;
    for (const auto& row : manifest) {
        std::string name = row.at("name").get<std::string>();
        if (!rows.emplace(name, row).second)
            throw CorpusError("duplicate program name '" + name + "' in manifest");
    }

    std::vector<CorpusEntry> out;
    std::string parse_failures;
    for (const auto& f : files) {
        CorpusEntry e;
        e.name = f.stem().string();
        e.path = f.string();
        e.source = slurp(e.path);
        try {
            e.program = lang::parse(e.source);
        } catch (const lang::ParseError& err) {
            parse_failures += e.name + ".wl: " + err.what() + "\n";
            continue;
        }

        const fs::path side = f.parent_path() / (e.name + ".dom.json");
        if (fs::exists(side)) {
            try {
                e.dom = classical::domain_from_json(nlohmann::json::parse(slurp(side.string())));
            } catch (const std::exception& err) {
                throw CorpusError(e.name + ".dom.json: " + std::string(err.what()));
            }
        }

        e.loops = has_loops(e.program);
        e.pointers = has_pointers(e.program);
        e.exact = !e.loops;
        auto it = rows.find(e.name);
        if (it != rows.end()) {
            const auto& row = it->second;
            e.m = row.value("m", e.m);
            e.k = row.value("k", e.k);
            e.exact = row.value("exact", e.exact);
            if (row.contains("loops") && row["loops"].get<bool>() != e.loops)
                throw CorpusError("manifest disagrees with '" + e.name + "' about loops");
            if (row.contains("pointers") && row["pointers"].get<bool>() != e.pointers)
                throw CorpusError("manifest disagrees with '" + e.name + "' about pointers");
            rows.erase(it);
        }
        out.push_back(std::move(e));
    }
    if (!parse_failures.empty()) throw CorpusError("parse failures:\n" + parse_failures);
    if (!rows.empty())
        throw CorpusError("manifest names unknown program '" + rows.begin()->first + "'");
    return out;
}

}  // namespace qex::cli
